#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deform/artinian.hpp"
#include "deform/bilinear.hpp"
#include "deform/chain.hpp"

namespace deform {

class DegreeMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DglaViolationKind { Degree, Antisymmetry, Jacobi, Derivation, DifferentialSquare };
const char* to_string(DglaViolationKind kind);

struct DglaViolation {
  DglaViolationKind kind;
  std::vector<std::string> basis;
};

class InvalidDgla : public std::runtime_error {
 public:
  explicit InvalidDgla(std::vector<DglaViolation> v);
  const std::vector<DglaViolation>& violations() const { return violations_; }

 private:
  std::vector<DglaViolation> violations_;
};

// Cochain-graded dg Lie algebra on a flat basis: d raises degree by one,
// bracket structure constants stored per basis pair.
class Dgla {
 public:
  Dgla() = default;
  Dgla(std::vector<std::string> names, std::vector<int> degrees, Matrix d, BilinearTable bracket);

  std::size_t dim() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  int degree(std::size_t i) const { return degrees_[i]; }
  const std::vector<int>& degrees() const { return degrees_; }
  const Matrix& differential() const { return d_; }
  const BilinearTable& bracket_table() const { return bracket_; }

  Vector d(const Vector& x) const { return d_ * x; }
  Vector bracket(const Vector& x, const Vector& y) const { return bracket_.apply(x, y); }

  std::vector<std::size_t> indices_of_degree(int deg) const;
  // Throws DegreeMismatch unless x is supported in degree deg.
  void require_degree(const Vector& x, int deg, const char* what) const;
  Complex complex() const;  // cochain orientation

  Dgla with_differential(Matrix d) const;

 private:
  std::vector<std::string> names_;
  std::vector<int> degrees_;
  Matrix d_;
  BilinearTable bracket_;
};

// Checks degrees, antisymmetry, d^2 = 0, derivation and Jacobi on basis pairs/triples.
// `skip_triple` lets callers omit triples known to vanish (e.g. beyond an arity cutoff).
std::vector<DglaViolation> check_dgla(const Dgla& l, std::size_t max_reports = 16,
                                      const std::function<bool(std::size_t, std::size_t, std::size_t)>& skip_triple = {});
Dgla checked(Dgla l);
// Cochain complex on a subset of the basis using the corresponding block of d
// (a subcomplex or quotient complex when the subset is closed or co-closed under d).
Complex block_complex(const Dgla& l, const std::vector<std::size_t>& indices);

// Graded-commutative dg algebra used as coefficients (cochain degrees).
struct CoefficientAlgebra {
  std::vector<std::string> names;
  std::vector<int> degrees;
  BilinearTable mult;
  Matrix d;
  std::vector<int> levels;  // m-adic level, or 0 when meaningless

  std::size_t dim() const { return names.size(); }
};

// m(R) with cochain degrees (negated homological degrees); index j is ring index j+1.
CoefficientAlgebra maximal_ideal(const ArtinianCdga& r);
// Q[t, dt] with polynomial degree <= D: basis t^0..t^D then t^0 dt .. t^{D-1} dt.
CoefficientAlgebra poly_forms_line(int truncation);

// L (x) C with [x(x)r, y(x)s] = (-1)^{|r||y|} [x,y] (x) rs and d(x(x)r) = dx(x)r + (-1)^{|x|} x(x)dr.
// Basis index of x_a (x) c_j is a * C.dim() + j.
Dgla tensor(const Dgla& l, const CoefficientAlgebra& c);

// L (x) m(R), with bookkeeping for the m-adic filtration.
class NilpotentDgla {
 public:
  NilpotentDgla() = default;
  NilpotentDgla(Dgla base, ArtinianCdga ring);

  const Dgla& base() const { return base_; }
  const ArtinianCdga& ring() const { return ring_; }
  const Dgla& dgla() const { return dgla_; }
  std::size_t dim() const { return dgla_.dim(); }
  std::size_t coeff_dim() const { return ring_.dim() - 1; }
  int nilpotency_index() const { return ring_.nilpotency_index(); }

  // Flat index of base element a tensored with ring basis element j (j >= 1).
  std::size_t index(std::size_t a, std::size_t ring_index) const { return a * coeff_dim() + ring_index - 1; }
  std::size_t base_index(std::size_t idx) const { return idx / coeff_dim(); }
  std::size_t ring_index(std::size_t idx) const { return idx % coeff_dim() + 1; }
  int level(std::size_t idx) const { return ring_.level(ring_index(idx)); }
  int degree(std::size_t idx) const { return dgla_.degree(idx); }

  // sum_j x_j (x) r_j for base vectors x_j and ring basis indices r_j
  Vector element(const std::vector<std::pair<Vector, std::size_t>>& terms) const;
  // coefficient of ring basis element j as a base vector
  Vector component(const Vector& x, std::size_t ring_index) const;
  // Zero out coordinates of level > n (projection to L (x) m/m^{n+1}).
  Vector truncate(const Vector& x, int n) const;
  std::vector<std::size_t> indices(int degree, int level) const;
  // Pushes x along a ring map given on full ring coordinates (target.dim x ring.dim).
  Vector map_coefficients(const Vector& x, const NilpotentDgla& target, const Matrix& ring_map) const;

 private:
  Dgla base_;
  ArtinianCdga ring_;
  Dgla dgla_;
};

}  // namespace deform
