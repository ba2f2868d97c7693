#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "deform/bilinear.hpp"
#include "deform/chain.hpp"

namespace deform {

// A ring presented by a total basis over k (including the unit). Degrees are homological.
struct RingData {
  std::vector<std::string> names;
  std::vector<int> degrees;
  Vector unit;
  // Products of basis pairs; absent pairs are zero, except that products with a unit
  // basis element are filled in automatically.
  std::map<std::pair<std::size_t, std::size_t>, Vector> products;
  Matrix differential;  // column j is d(e_j); empty (0x0) means d = 0
  Vector augmentation;
};

enum class RingViolationKind {
  Malformed,
  NotHomogeneous,
  NotUnital,
  NotCommutative,
  NotAssociative,
  NotSquareZeroDifferential,
  NotLeibniz,
  NotNilpotent,
  AugmentationNotMultiplicative,
  AugmentationNotDg,
};

const char* to_string(RingViolationKind kind);

struct RingViolation {
  RingViolationKind kind;
  std::vector<std::string> basis;  // offending basis elements (pair or triple)
  std::string detail;
};

class RingValidationError : public std::runtime_error {
 public:
  explicit RingValidationError(std::vector<RingViolation> v);
  const std::vector<RingViolation>& violations() const { return violations_; }
  RingViolationKind first_kind() const { return violations_.front().kind; }

 private:
  std::vector<RingViolation> violations_;
};

// Local Artinian cdga stored in an m-adic adapted basis: index 0 is the unit, then a basis
// of m/m^2, then of m^2/m^3, and so on. Hence R/m^{n+1} is spanned by a prefix of the basis.
class ArtinianCdga {
 public:
  ArtinianCdga() = default;

  std::size_t dim() const { return names_.size(); }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  const std::vector<std::string>& basis_names() const { return names_; }
  int degree(std::size_t i) const { return degrees_[i]; }
  const std::vector<int>& degrees() const { return degrees_; }
  // level(0) = 0; level(i) = k when basis element i spans part of m^k / m^{k+1}
  int level(std::size_t i) const { return levels_[i]; }
  const std::vector<int>& levels() const { return levels_; }
  int nilpotency_index() const { return nilpotency_; }  // least N with m^N = 0
  bool is_square_zero() const { return nilpotency_ <= 2; }
  bool is_nonnegatively_graded() const;

  const BilinearTable& multiplication() const { return mult_; }
  const Matrix& differential() const { return d_; }
  Vector multiply(const Vector& x, const Vector& y) const { return mult_.apply(x, y); }
  Vector d(const Vector& x) const { return d_ * x; }
  Rational augment(const Vector& x) const { return x[0]; }

  std::vector<std::size_t> indices_at_level(int k) const;
  std::size_t count_up_to_level(int k) const;
  Complex complex() const;

  // R / m^{n+1}; a prefix of the basis.
  ArtinianCdga truncate(int n) const;

  // Change of coordinates between the presentation given to validate() and the adapted basis.
  const Matrix& to_internal() const { return to_internal_; }
  const Matrix& to_user() const { return to_user_; }
  const std::vector<std::string>& user_names() const { return user_names_; }

  RingData data() const;

  friend ArtinianCdga validate(const RingData& data);

 private:
  std::string name_;
  std::vector<std::string> names_;
  std::vector<int> degrees_;
  std::vector<int> levels_;
  int nilpotency_ = 1;
  BilinearTable mult_;
  Matrix d_;
  Matrix to_internal_, to_user_;
  std::vector<std::string> user_names_;
};

// Checks every axiom exactly; throws RingValidationError listing all violations found.
ArtinianCdga validate(const RingData& data);
// All violations (empty when valid).
std::vector<RingViolation> check_ring(const RingData& data);

ArtinianCdga ground_field();
// k[t]/t^n with t in homological degree `degree` (odd degrees need n <= 2).
ArtinianCdga truncated_polynomial(int n, int degree = 0, const std::string& var = "t");
// k (+) v with v.v = 0 and optional differential on v (a degree -1 map v -> v).
ArtinianCdga square_zero(const GradedSpace& v, const std::optional<Matrix>& d = std::nullopt);
ArtinianCdga square_zero(const std::vector<int>& degrees);
// k[x_1..x_r]/(monomials of total degree >= bound), all variables in degree 0.
ArtinianCdga truncated_polynomial_ring(int variables, int bound);
// Graded tensor product (a (x) b)(c (x) e) = (-1)^{|b||c|} ac (x) be.
ArtinianCdga tensor_rings(const ArtinianCdga& r, const ArtinianCdga& s);

struct SmallExtension {
  ArtinianCdga total;
  ArtinianCdga quotient;
  Matrix projection;                // quotient.dim x total.dim
  Matrix section;                   // total.dim x quotient.dim, linear splitting of the projection
  std::vector<std::size_t> kernel;  // basis indices of I in total

  Complex kernel_complex() const;
  Vector lift(const Vector& x) const { return section * x; }
  Vector project(const Vector& x) const { return projection * x; }
};

// Throws std::logic_error naming the failed condition.
void verify_small_extension(const SmallExtension& e);
// Small extension R/m^{n+1} -> R/m^n for n >= 1.
SmallExtension tower_step(const ArtinianCdga& r, int n);
// [R/m^2 -> k, R/m^3 -> R/m^2, ..., R -> R/m^{N-1}]
std::vector<SmallExtension> madic_tower(const ArtinianCdga& r);

}  // namespace deform
