#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deform/artinian.hpp"
#include "deform/category.hpp"
#include "deform/contra.hpp"
#include "deform/dgla.hpp"
#include "deform/mc.hpp"
#include "deform/operad.hpp"

namespace deform {

// A deformation problem: the dgla L governing it and a dgla map L -> End(B) into the
// endomorphisms of a complex B, so that w in mc(L (x) m) gives the free R-module (B (x) R, d + w^).
//   complex case: L = End(V), B = V, the map is the identity;
//   algebra case: L = augmented convolution dgla twisted by the structure, B = T^{1..N}(sA) with
//                 the coderivation of the structure, the map sends f to its coderivation.
struct DeformationModel {
  enum class Kind { Complex, Algebra };
  Kind kind = Kind::Complex;
  Dgla lie;
  Complex object;  // V, or A with its differential
  Complex base;    // B
  Matrix hat;      // End(B) coordinates (p * dim B + q) x dim L
  Matrix linear;   // End(object) coordinates x dim L: the part of a deformation acting on the differential
  int cutoff = 0;
  std::optional<ConvolutionDgla> convolution;
  Vector structure;                             // the structure as an MC element (algebra case)
  std::vector<std::vector<std::size_t>> words;  // algebra case: flat index of B -> word in the flat basis of A
};

DeformationModel complex_model(const Complex& v);
// Requires m_1 = d_A; throws NotMaurerCartan when the structure fails the Stasheff identities.
DeformationModel algebra_model(const Complex& a, const AInftyStructure& s, int cutoff);

// Image of w in X (x) m(R) under a linear map f: X -> Y applied to each ring coefficient
// (coordinates a * (dim R - 1) + j - 1 on both sides).
Vector map_coefficientwise(const Matrix& f, const Vector& w, const ArtinianCdga& r);

ContraModule deformed_object(const DeformationModel& model, const ArtinianCdga& r, const Vector& w);
// Reads w back from the differential of a deformed object; throws std::invalid_argument when the
// differential is not of the form produced by deformed_object.
Vector recover_element(const DeformationModel& model, const ContraModule& m);
// (object (x) R, d + linear part of w).
ContraModule underlying_module(const DeformationModel& model, const ArtinianCdga& r, const Vector& w);

// exp of a nilpotent matrix; throws std::invalid_argument if the series does not terminate.
Matrix exp_nilpotent(const Matrix& a);

// k-linear matrix of the R-linear map a^ : source -> target for a in L (x) m(R).
Matrix hat_operator(const DeformationModel& model, const ContraModule& source, const ContraModule& target,
                    const Vector& a);

// exp(a^): deformed_object(w) -> deformed_object(gauge_act(a, w)) and its inverse exp(-a^).
struct GaugeIsomorphism {
  Vector target_element;
  ModMap map;
  ModMap inverse;
};
// Throws InvalidModMap if exp(a^) fails to be a chain map.
GaugeIsomorphism gauge_isomorphism(const DeformationModel& model, const ArtinianCdga& r, const Vector& a, const Vector& w);

}  // namespace deform
