#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "deform/dgla.hpp"

namespace deform {

class NotMaurerCartan : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RingNotSquareZero : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// d w + 1/2 [w, w] in any dgla (w of degree 1).
Vector mc_residual(const Dgla& l, const Vector& w);
bool is_maurer_cartan(const Dgla& l, const Vector& w);

Vector mc_residual(const NilpotentDgla& n, const Vector& w);
// Same graded Lie algebra with differential d + [gamma, -]; gamma must be Maurer-Cartan.
Dgla twist(const Dgla& l, const Vector& gamma);
// exp(ad a)(w) - sum_{k>=0} ad_a^k (da) / (k+1)!, a finite sum by nilpotency.
Vector gauge_act(const NilpotentDgla& n, const Vector& a, const Vector& w);
// log(exp(a) exp(b)) by the Dynkin series, truncated at the nilpotency class.
Vector bch(const NilpotentDgla& n, const Vector& a, const Vector& b);

// Homology of the subcomplex of l spanned by `support` (closed under d) at `degree`.
struct SubcomplexHomology {
  std::vector<std::size_t> below, at, above;  // flat indices in degrees degree-1, degree, degree+1
  Homology homology;

  Vector local(const Vector& flat) const;
  Vector flat(const Vector& local, std::size_t dim) const;
};
SubcomplexHomology subcomplex_homology(const Dgla& l, const std::vector<std::size_t>& support, int degree);

struct CohomologyClass {
  int degree = 0;
  std::size_t space_dim = 0;  // dimension of the cohomology group
  Vector coordinates;         // in the representative basis of that group
  Vector representative;      // a cocycle (flat coordinates)
};

struct LiftedMc {
  Vector element;                     // MC over the total ring
  std::vector<Vector> torsor_basis;   // basis of Z^1(L (x) I), flat in L (x) m(total)
};
struct ObstructedMc {
  CohomologyClass obstruction;  // in H^2(L (x) I)
  Vector residual;              // the residual of the linear lift used
};
using LiftResult = std::variant<LiftedMc, ObstructedMc>;

// lift along e: `w_bar` lives in L (x) m(e.quotient). `linear_lift_shift` (optional, in L (x) I)
// is added to the zero-padded lift before computing the residual.
LiftResult lift_mc(const Dgla& l, const SmallExtension& e, const Vector& w_bar,
                   const std::optional<Vector>& linear_lift_shift = std::nullopt);

struct Equivalent {
  Vector gauge;
};
struct Inequivalent {
  int stage = 0;
  Vector discrepancy;  // level-`stage` discrepancy at the base point of the family
  CohomologyClass cls; // its class in H^1(L (x) m^stage/m^{stage+1})
};
struct Undecided {
  int stage = 0;
  std::string reason;
};
using EquivalenceResult = std::variant<Equivalent, Inequivalent, Undecided>;

EquivalenceResult gauge_equivalent(const NilpotentDgla& n, const Vector& w, const Vector& w2);

struct TangentSpace {
  std::size_t dim = 0;
  std::vector<Vector> basis;  // representatives in Z^1(L (x) m)
  Homology homology;
};
TangentSpace tangent_defs(const NilpotentDgla& n);

// Path in mc((L (x) Omega_{<=D}) (x) m) between w and gauge_act(a, w).
struct GaugePath {
  int truncation = 0;
  CoefficientAlgebra forms;
  Dgla dgla;         // (L (x) Omega) (x) m
  Vector element;    // w(t) + eta dt
  int flow_sign = 0; // eta = flow_sign * a
  std::size_t base_dim = 0, forms_dim = 0, coeff_dim = 0;
};
GaugePath gauge_to_path(const NilpotentDgla& n, const Vector& a, const Vector& w, int truncation);
// Restriction to the point t (dt -> 0), as an element of L (x) m.
Vector evaluate_path(const GaugePath& p, const Rational& t);
// Component along t^k dt, as an element of L (x) m.
Vector path_form_component(const GaugePath& p, std::size_t k);

}  // namespace deform
