#pragma once

#include <map>
#include <stdexcept>
#include <variant>
#include <vector>

#include "deform/chain.hpp"
#include "deform/dgla.hpp"
#include "deform/mc.hpp"

namespace deform {

class CutoffTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// All degrees of a complex concatenated in increasing order.
struct FlatBasis {
  std::vector<int> degrees;  // homological
  std::vector<std::string> labels;
  Matrix d;                  // flat differential (lowers degree by one)
  std::size_t dim() const { return degrees.size(); }
};
FlatBasis flat_basis(const Complex& a);
// Inverse of flat_basis: groups a flat basis by degree, keeping the given order within each degree.
Complex complex_from_flat(const std::vector<int>& degrees, const std::vector<std::string>& labels, const Matrix& d,
                          Orientation o = Orientation::chain);

// Arity data of the (truncated) bar dual of the associative operad: the arity-n slot
// contributes Hom(A^{(x)n}, A) shifted so that f of internal degree c sits in degree n-1-c.
struct CooperadSlot {
  std::vector<int> arities;  // increasing
  int cutoff = 2;
  bool has(int n) const;
  static int suspension(int n) { return n - 1; }
};
CooperadSlot associative_slot(int cutoff);            // arities 2..N
CooperadSlot with_counit(const CooperadSlot& slot);   // adds arity 1

// Coefficients of a multilinear map A^{(x)n} -> A are indexed by out * dim^n + inputs (mixed radix).
std::size_t multilinear_index(std::size_t dim, std::size_t out, const std::vector<std::size_t>& inputs);

// Convolution dgla: maps (sA)^{(x)n} -> sA for the arities of the slot, Gerstenhaber bracket
// [f,g] = f.g - (-1)^{|f||g|} g.f with f.g = sum_i f(1..1 g 1..1), compositions above the
// cutoff discarded, differential [b_1, -] with b_1 the suspension of d_A.
struct ConvolutionDgla {
  Complex algebra;
  FlatBasis basis;
  CooperadSlot slot;
  Dgla dgla;
  std::map<int, std::size_t> offsets;  // arity -> first flat index

  bool augmented() const { return slot.has(1); }
  int cutoff() const { return slot.cutoff; }
  std::size_t index(int arity, std::size_t out, const std::vector<std::size_t>& inputs) const;
  int arity(std::size_t idx) const;
  std::pair<std::size_t, std::vector<std::size_t>> decode(std::size_t idx) const;
  std::vector<std::size_t> arity_indices(int n) const;
};
ConvolutionDgla build_convolution(const Complex& a, const CooperadSlot& slot);
ConvolutionDgla build_convolution(const Complex& a, int cutoff, bool augmented);

// A-infinity structure {m_n}; m_n has internal (homological) degree n-2. When
// m1_is_differential is set, m_1 is the differential of the underlying complex.
struct AInftyStructure {
  std::map<int, Vector> m;  // arity -> multilinear coefficients
  bool m1_is_differential = true;
};
// m_2 from a product table on the flat basis (m_1 = d_A, no higher operations).
AInftyStructure strict_structure(const Complex& a, const BilinearTable& product);
// The multilinear coefficients of m_n with m_1 resolved (d_A when flagged).
Vector structure_component(const Complex& a, const AInftyStructure& s, int n);

// A ring viewed as a strict dg algebra on the flat basis of its complex.
struct AlgebraData {
  Complex complex;
  AInftyStructure structure;
  std::vector<std::size_t> flat_of_ring;  // ring basis index -> flat index
};
AlgebraData algebra_of_ring(const ArtinianCdga& r);

struct AInftyValid {};
struct AInftyViolation {
  int arity = 0;
  Vector residual;  // multilinear coefficients of the failing Stasheff identity
};
using AInftyCheck = std::variant<AInftyValid, AInftyViolation>;
// Stasheff identities sum_{r+s+t=n} (-1)^{r+st} m_{r+1+t}(1^r (x) m_s (x) 1^t) = 0 for n <= cutoff.
AInftyCheck ainfty_check(const Complex& a, const AInftyStructure& s, int cutoff);

// b_n = (-1)^{n(n-1)/2} (-1)^{sum_k (n-1-k)(|a_k|+1)} s m_n; the MC element is sum b_n minus b_1(d_A).
Vector structure_to_mc(const ConvolutionDgla& c, const AInftyStructure& s);
AInftyStructure mc_to_structure(const ConvolutionDgla& c, const Vector& x);
Dgla twist_by_structure(const ConvolutionDgla& c, const Vector& gamma);

struct HochschildResult {
  int degree = 0;              // Hochschild degree n
  int convolution_degree = 0;  // n - 1
  std::size_t dimension = 0;
  std::vector<Vector> cocycles;  // representatives, flat in the augmented convolution dgla
  bool truncation_exact = false; // no arity above the cutoff reaches convolution degrees n-1, n
};
HochschildResult hochschild(const Complex& a, const AInftyStructure& s, int n, int cutoff);

struct ReducedAugmented {
  ConvolutionDgla reduced, augmented;
  Dgla reduced_twisted, augmented_twisted;
  Matrix inclusion;    // reduced flat -> augmented flat
  Complex complement;  // Hom(A, A) with the quotient differential (cochain reading)
};
ReducedAugmented reduced_vs_augmented(const Complex& a, const AInftyStructure& s, int cutoff);

}  // namespace deform
