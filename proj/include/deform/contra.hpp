#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "deform/artinian.hpp"
#include "deform/category.hpp"
#include "deform/chain.hpp"
#include "deform/mc.hpp"

namespace deform {

class InvalidModMap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Degree-0 R-linear chain map, given by the images of the generators v_q (x) 1.
struct ModMap {
  ContraModule source;
  ContraModule target;
  Vector coordinates;  // Hom_R coordinates (p * dim V + q) * dim R + j
  Matrix matrix;       // k-linear matrix
};
// Throws InvalidModMap unless the map has degree 0 and commutes with the differentials.
ModMap make_mod_map(const ContraModule& source, const ContraModule& target, const Vector& coordinates);
ModMap identity_mod_map(const ContraModule& m);
ModMap compose(const ModMap& g, const ModMap& f);

// The map modulo m between the flat bases of the reduced complexes.
Matrix reduced_matrix(const ModMap& f);
ChainMap reduce(const ModMap& f);
// reduce(f) induces isomorphisms on homology.
bool is_mod_qiso(const ModMap& f);

// Recovers w from a differential of the form d_V (x) 1 + 1 (x) d_R + w; throws std::invalid_argument otherwise.
ContraModule module_from_differential(const Complex& v, const ArtinianCdga& r, const Matrix& d);
// cone(f) = N (+) M[1] with d(n, m) = (dn + f(m), -dm).
ContraModule cone(const ModMap& f);
// Base change along a ring map given on full ring coordinates (target.dim x source.dim).
ContraModule change_ring(const ContraModule& m, const ArtinianCdga& target, const Matrix& ring_map);
ModMap change_ring(const ModMap& f, const ArtinianCdga& target, const Matrix& ring_map);

// R-linear h of degree -1 with dh + hd = id.
struct Homotopy {
  Vector coordinates;  // Hom_R(M, M) coordinates
  Matrix matrix;
};
std::optional<Homotopy> contracting_homotopy(const ContraModule& m);

// Exhaustive filtration by free submodules M(i) = R . (generators of stages 0..i).
struct Filtration {
  std::vector<Vector> generators;         // elements of M (k-coordinates)
  std::vector<std::size_t> stage_ends;    // stage i uses generators [0, stage_ends[i])
  std::vector<std::string> stage_labels;
  int n0 = 0;                             // least degree carrying reduced homology
  std::size_t stages() const { return stage_ends.size(); }
  // k-basis of M(i): generators times ring basis elements.
  std::vector<Vector> span(const ContraModule& m, std::size_t stage) const;
};
struct NotBoundedBelow {
  int degree = 0;  // homological degree of the window floor
  Vector cycle;    // a non-bounding cycle of the reduced complex (flat coordinates)
};
using ConnectivityResult = std::variant<Filtration, NotBoundedBelow>;
// Builds R.D(U) c R.(D(U) + U_{<n0}) c ... adding V_n (+) U_n for n >= n0, from a splitting
// M (x)_R k = V (+) U (+) dU. Requires homological degrees of R to be >= 0 and the base to live
// in degrees >= window_floor.
ConnectivityResult connectivity_filtration(const ContraModule& m, int window_floor);
// Violations of: subcomplexes, d(generators of stage i+1) in M(i), freeness, exhaustion, and
// (when d_R = 0) d(M(i+1)) in M(i) on all of M(i+1).
std::vector<std::string> check_filtration(const ContraModule& m, const Filtration& f);
// Greedily merges consecutive stages while the generator condition still holds.
Filtration coarsen(const ContraModule& m, const Filtration& f);

// Lifting along a small extension e: R -> R/I.
struct LiftedObject {
  ContraModule module;
  std::vector<Vector> torsor_basis;  // Z^1(End(V) (x) I), in End(V) (x) m(R) coordinates
};
struct ObstructedObject {
  CohomologyClass obstruction;  // in H^2(End(V) (x) I); representative in End(V) (x) m(R) coordinates
};
using ObjectLift = std::variant<LiftedObject, ObstructedObject>;
// Lifts the graded module freely and the differential by the section of e (plus `shift`, an
// element of End(V) (x) I of degree 1), then corrects by the class of the square of the lift.
ObjectLift lift_object(const SmallExtension& e, const ContraModule& c, const std::optional<Vector>& shift = std::nullopt);

struct LiftedMorphism {
  ModMap map;
  std::vector<Vector> kernel_basis;  // Z^0(Hom(V, W) (x) I), Hom_R coordinates
};
struct ObstructedMorphism {
  CohomologyClass obstruction;  // in H^1(Hom(V, W) (x) I); representative in Hom_R coordinates
};
using MorphismLift = std::variant<LiftedMorphism, ObstructedMorphism>;
// Lifts f_bar: M/I -> N/I to M -> N; `shift` (Hom_R coordinates, degree 0, values in I) perturbs the graded lift.
MorphismLift lift_morphism(const SmallExtension& e, const ContraModule& source, const ContraModule& target,
                           const ModMap& f_bar, const std::optional<Vector>& shift = std::nullopt);

}  // namespace deform
