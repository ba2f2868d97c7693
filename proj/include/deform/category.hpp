#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "deform/artinian.hpp"
#include "deform/chain.hpp"
#include "deform/dgla.hpp"
#include "deform/mc.hpp"

namespace deform {

// Finite cochain-graded space: d raises degree by one.
struct CochainSpace {
  std::vector<std::string> names;
  std::vector<int> degrees;
  Matrix d;
  std::size_t dim() const { return names.size(); }
};
// Cochain reading of a complex (degree = minus the homological degree), flat basis order.
CochainSpace cochain_space(const Complex& c);
Complex to_complex(const CochainSpace& s);

// Dg associative algebra on a flat basis (cochain degrees).
struct DgAssociative {
  std::vector<std::string> names;
  std::vector<int> degrees;
  Matrix d;
  BilinearTable mult;
  std::size_t dim() const { return names.size(); }
  Vector multiply(const Vector& a, const Vector& b) const { return mult.apply(a, b); }
};
// Associativity, d^2 = 0, degree and Leibniz checks on basis elements; descriptions of failures.
std::vector<std::string> check_dg_associative(const DgAssociative& a, std::size_t max_reports = 16);
// d w + w.w
Vector associative_mc_residual(const DgAssociative& a, const Vector& w);
// Graded commutator [a,b] = ab - (-1)^{|a||b|} ba.
Dgla commutator_dgla(const DgAssociative& a);
// d + [w, -] for a Maurer-Cartan element w.
DgAssociative twist_algebra(const DgAssociative& a, const Vector& w);

enum class CategoryViolationKind { Degree, DifferentialSquare, NotChainMap, NotAssociative, NotUnital, Malformed };
const char* to_string(CategoryViolationKind kind);
struct CategoryViolation {
  CategoryViolationKind kind;
  std::string detail;
};
class InvalidCategory : public std::runtime_error {
 public:
  explicit InvalidCategory(std::vector<CategoryViolation> v);
  const std::vector<CategoryViolation>& violations() const { return violations_; }

 private:
  std::vector<CategoryViolation> violations_;
};

class ColourNotMaurerCartan : public NotMaurerCartan {
 public:
  ColourNotMaurerCartan(std::string colour, const std::string& what) : NotMaurerCartan(what), colour_(std::move(colour)) {}
  const std::string& colour() const { return colour_; }

 private:
  std::string colour_;
};

class NotClosed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Small dg category: Hom spaces Q(x;y) for every ordered pair of colours, composition
// Q(y;z) x Q(x;y) -> Q(x;z) stored as a bilinear table (left factor g, right factor f), identities.
struct DgCategory {
  std::vector<std::string> colours;
  std::map<std::pair<std::size_t, std::size_t>, CochainSpace> homs;  // (source, target)
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, BilinearTable> composition;  // (x, y, z)
  std::map<std::size_t, Vector> identities;

  std::size_t size() const { return colours.size(); }
  const CochainSpace& hom(std::size_t x, std::size_t y) const { return homs.at({x, y}); }
  // g o f for f: x -> y, g: y -> z
  Vector compose(std::size_t x, std::size_t y, std::size_t z, const Vector& g, const Vector& f) const;
  Vector d(std::size_t x, std::size_t y, const Vector& a) const { return hom(x, y).d * a; }
};
std::vector<CategoryViolation> check_category(const DgCategory& q);
DgCategory checked(DgCategory q);
DgAssociative endomorphism_algebra(const DgCategory& q, std::size_t x);

// Colours are complexes; Q(x;y) = Hom(V_x, V_y) with basis E(p<-q) at index p * dim V_x + q.
DgCategory complex_category(const std::vector<std::string>& names, const std::vector<Complex>& objects);
// End(V) as a dg associative algebra (basis E(p<-q), index p * dim V + q).
DgAssociative end_algebra(const Complex& v);

// d^w(a) = da + w_y a - (-1)^{|a|} a w_x; colours missing from `omega` get w = 0.
DgCategory twist_category(const DgCategory& q, const std::map<std::size_t, Vector>& omega);

// Q (x) R: Hom spaces Q(x;y) (x) R (index a * dim R + j), (a(x)r)(b(x)s) = (-1)^{|r||b|} ab (x) rs.
DgCategory base_change(const DgCategory& q, const ArtinianCdga& r);
// From L (x) m(R) coordinates (a * (dim R - 1) + j - 1) to L (x) R coordinates (a * dim R + j).
Vector embed_ideal(const Vector& x, std::size_t base_dim, const ArtinianCdga& r);
// Inverse of embed_ideal; throws unless the unit components vanish.
Vector restrict_ideal(const Vector& x, std::size_t base_dim, const ArtinianCdga& r);

// A colour (x, w) of the contraderived deformation category: w in Q(x;x) (x) m(R).
struct CtrObject {
  std::size_t colour = 0;
  Vector omega;
};
// Full subcategory of Q^ctr(R) on the listed objects: Hom = (Q(x;y) (x) R, d^{w,v}).
DgCategory ctr_category(const DgCategory& q, const ArtinianCdga& r, const std::vector<CtrObject>& objects);
Complex q_ctr_hom(const DgCategory& q, const ArtinianCdga& r, const CtrObject& x, const CtrObject& y);

// M(V, w) = (V (x) R, d + w), basis v_i (x) r_j at index i * dim R + j.
struct ContraModule {
  Complex base;
  ArtinianCdga ring;
  Vector omega;          // in End(V) (x) m(R)
  std::vector<int> vdeg; // cochain degrees of the flat basis of V
  std::vector<int> degrees;
  Matrix d;              // k-linear differential on V (x) R
  std::size_t base_dim() const { return vdeg.size(); }
  std::size_t dim() const { return degrees.size(); }
  // Entries in R (internal basis): D(v_q (x) 1) = sum_p v_p (x) D_pq.
  std::vector<std::vector<Vector>> ring_matrix() const;
  // k-linear matrix of the right R-linear map with generator images given in the module basis.
  Matrix extend(const std::vector<Vector>& generator_images, const ContraModule& target) const;
};
ContraModule realize_module(const Complex& v, const Vector& omega, const ArtinianCdga& r);
// The k-linear matrix of d_V (x) 1 + 1 (x) d_R + w on V (x) R without any Maurer-Cartan check.
Matrix module_differential(const Complex& v, const Vector& omega, const ArtinianCdga& r);
// x . r_j for x in the module (k-coordinates).
Vector right_multiply(const ContraModule& m, const Vector& x, std::size_t ring_index);
Complex module_complex(const ContraModule& m);
// M (x)_R k, which recovers the base complex.
Complex reduce(const ContraModule& m);

// (Hom_k(V,W) (x) R, d^{w,v}) ~ Hom_R(M(V,w), M(W,v)); both indexed by (p * dim V + q) * dim R + j.
struct HomIso {
  CochainSpace twisted;  // from the twisted base-changed category
  CochainSpace hom_r;    // computed from the module differentials
  Matrix iso;            // twisted -> hom_r
  bool chain_isomorphism = false;
};
HomIso hom_iso(const Complex& v, const Vector& w, const Complex& u, const Vector& nu, const ArtinianCdga& r);
// Hom_R(M, N) coordinates (p * dim V + q) * dim R + j: phi(v_q (x) 1) = w_p (x) r_j.
Matrix hom_r_matrix(const ContraModule& m, const ContraModule& n, const Vector& f);
// Reads an R-linear k-matrix back into Hom_R coordinates (its values on generators).
Vector hom_r_coordinates(const ContraModule& m, const ContraModule& n, const Matrix& phi);
// Cochain degree of a Hom_R basis element.
int hom_r_degree(const ContraModule& m, const ContraModule& n, std::size_t index);
// Hom_R coordinates -> Hom_k(V, W) (x) R coordinates (the sign (-1)^{|r||v_q|}); an involution.
Vector hom_r_to_tensor(const ContraModule& m, const ContraModule& n, const Vector& f);
// Composition in Hom_R on generator images: (g o f) for f: M -> N, g: N -> P.
Vector hom_r_compose(const ContraModule& m, const ContraModule& n, const ContraModule& p, const Vector& g, const Vector& f);

// The dg algebra Q(y;y) (+) Q(x;y)[1] (+) Q(x;x) (theta of Q-degree q sits in degree q + 1)
// with (a,t,b)(a',t',b') = (aa', (-1)^{|a|} a t' + t b', bb') and d = (d, -d, d).
struct MorphismMc {
  std::size_t x = 0, y = 0;
  Vector f0;
  ArtinianCdga ring;
  DgAssociative triple;
  DgAssociative twisted;  // by (0, f0, 0)
  NilpotentDgla lie;      // commutator dgla of `twisted`, tensored with m(R)
  std::size_t dim_yy = 0, dim_xy = 0, dim_xx = 0;
};
MorphismMc morphism_mc(const DgCategory& q, std::size_t x, std::size_t y, const Vector& f0, const ArtinianCdga& r);

struct CtrMorphism {
  Vector alpha;  // Q(y;y) (x) m(R)
  Vector beta;   // Q(x;x) (x) m(R)
  Vector f;      // Q(x;y) (x) R
};
CtrMorphism element_to_morphism(const MorphismMc& m, const Vector& element);
Vector morphism_to_element(const MorphismMc& m, const CtrMorphism& f);
// f is a degree-0 cycle of Q^ctr(R)((x, beta), (y, alpha)) lying over f0.
bool is_ctr_morphism(const DgCategory& q, const MorphismMc& m, const CtrMorphism& f);

}  // namespace deform
