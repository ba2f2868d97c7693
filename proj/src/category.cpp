#include "deform/category.hpp"

#include <sstream>

#include "deform/operad.hpp"

namespace deform {

namespace {

Rational sgn(long e) { return (e % 2 == 0) ? Rational(1) : Rational(-1); }

bool supported_in(const std::vector<int>& degrees, const Vector& v, int deg) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0 && degrees[i] != deg) return false;
  return true;
}

Complex complex_of(const std::vector<std::string>& names, const std::vector<int>& degrees, const Matrix& d) {
  std::map<int, std::vector<std::string>> labels;
  std::map<int, std::vector<std::size_t>> idx;
  for (std::size_t i = 0; i < names.size(); ++i) {
    labels[-degrees[i]].push_back(names[i]);
    idx[-degrees[i]].push_back(i);
  }
  std::map<int, Matrix> dm;
  for (const auto& [n, cols] : idx) {
    auto it = idx.find(n - 1);
    if (it != idx.end()) dm[n] = d.submatrix(it->second, cols);
  }
  return Complex(GradedSpace(labels), dm, Orientation::cochain);
}

// Composition on basis vectors of a table.
Vector apply_table(const BilinearTable& t, const Vector& g, const Vector& f) { return t.apply(g, f); }

}  // namespace

CochainSpace cochain_space(const Complex& c) {
  FlatBasis b = flat_basis(c);
  CochainSpace s;
  s.names = b.labels;
  for (int n : b.degrees) s.degrees.push_back(-n);
  s.d = b.d;
  return s;
}

Complex to_complex(const CochainSpace& s) { return complex_of(s.names, s.degrees, s.d); }

std::vector<std::string> check_dg_associative(const DgAssociative& a, std::size_t max_reports) {
  std::vector<std::string> out;
  auto report = [&](std::string s) {
    if (out.size() < max_reports) out.push_back(std::move(s));
  };
  const std::size_t n = a.dim();
  if (a.degrees.size() != n || a.d.rows() != n || a.d.cols() != n || a.mult.left_dim() != n ||
      a.mult.right_dim() != n || a.mult.out_dim() != n) {
    report("malformed");
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, v] : a.d.row(i))
      if (a.degrees[i] != a.degrees[j] + 1) report("degree of d(" + a.names[j] + ")");
  if (!(a.d * a.d).is_zero()) report("d^2 != 0");
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, v] : a.mult.row(i))
      for (const auto& [k, c] : v)
        if (a.degrees[k] != a.degrees[i] + a.degrees[j]) report("degree of " + a.names[i] + "." + a.names[j]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Vector x = unit_vector(n, i), y = unit_vector(n, j);
      Vector xy = a.multiply(x, y);
      Vector rhs = a.multiply(a.d * x, y);
      axpy(rhs, sgn(a.degrees[i]), a.multiply(x, a.d * y));
      if (a.d * xy != rhs) report("Leibniz on " + a.names[i] + ", " + a.names[j]);
      for (std::size_t k = 0; k < n; ++k) {
        Vector z = unit_vector(n, k);
        if (a.multiply(xy, z) != a.multiply(x, a.multiply(y, z)))
          report("associativity on " + a.names[i] + ", " + a.names[j] + ", " + a.names[k]);
      }
    }
  return out;
}

Vector associative_mc_residual(const DgAssociative& a, const Vector& w) {
  Vector r = a.d * w;
  axpy(r, Rational(1), a.multiply(w, w));
  return r;
}

Dgla commutator_dgla(const DgAssociative& a) {
  const std::size_t n = a.dim();
  BilinearTable t(n, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, v] : a.mult.row(i)) {
      t.add(i, j, v);
      t.add(j, i, v, -sgn(static_cast<long>(a.degrees[i]) * a.degrees[j]));
    }
  return Dgla(a.names, a.degrees, a.d, t);
}

DgAssociative twist_algebra(const DgAssociative& a, const Vector& w) {
  if (w.size() != a.dim() || !supported_in(a.degrees, w, 1))
    throw DegreeMismatch("twist_algebra: element must have degree 1");
  if (!is_zero(associative_mc_residual(a, w))) throw NotMaurerCartan("twist_algebra: element is not Maurer-Cartan");
  DgAssociative out = a;
  const std::size_t n = a.dim();
  Matrix d = a.d;
  for (std::size_t i = 0; i < n; ++i) {
    Vector e = unit_vector(n, i);
    Vector c = a.multiply(w, e);
    axpy(c, -sgn(a.degrees[i]), a.multiply(e, w));
    for (std::size_t k = 0; k < n; ++k)
      if (c[k] != 0) d.add(k, i, c[k]);
  }
  out.d = d;
  return out;
}

const char* to_string(CategoryViolationKind kind) {
  switch (kind) {
    case CategoryViolationKind::Degree: return "degree";
    case CategoryViolationKind::DifferentialSquare: return "differential-square";
    case CategoryViolationKind::NotChainMap: return "composition-not-chain-map";
    case CategoryViolationKind::NotAssociative: return "not-associative";
    case CategoryViolationKind::NotUnital: return "not-unital";
    case CategoryViolationKind::Malformed: return "malformed";
  }
  return "?";
}

namespace {
std::string describe(const std::vector<CategoryViolation>& v) {
  std::ostringstream os;
  os << "invalid dg category:";
  for (const auto& x : v) os << " [" << to_string(x.kind) << ": " << x.detail << "]";
  return os.str();
}
}  // namespace

InvalidCategory::InvalidCategory(std::vector<CategoryViolation> v)
    : std::runtime_error(describe(v)), violations_(std::move(v)) {}

Vector DgCategory::compose(std::size_t x, std::size_t y, std::size_t z, const Vector& g, const Vector& f) const {
  return apply_table(composition.at({x, y, z}), g, f);
}

std::vector<CategoryViolation> check_category(const DgCategory& q) {
  std::vector<CategoryViolation> out;
  const std::size_t max_reports = 16;
  auto report = [&](CategoryViolationKind k, std::string d) {
    if (out.size() < max_reports) out.push_back({k, std::move(d)});
  };
  const std::size_t c = q.size();
  auto hname = [&](std::size_t x, std::size_t y, std::size_t i) {
    return q.colours[x] + "->" + q.colours[y] + ":" + q.hom(x, y).names[i];
  };
  for (std::size_t x = 0; x < c; ++x)
    for (std::size_t y = 0; y < c; ++y) {
      auto it = q.homs.find({x, y});
      if (it == q.homs.end()) {
        report(CategoryViolationKind::Malformed, "missing Hom(" + q.colours[x] + "," + q.colours[y] + ")");
        continue;
      }
      const CochainSpace& h = it->second;
      if (h.degrees.size() != h.dim() || h.d.rows() != h.dim() || h.d.cols() != h.dim())
        report(CategoryViolationKind::Malformed, "shape of Hom(" + q.colours[x] + "," + q.colours[y] + ")");
    }
  for (std::size_t x = 0; x < c; ++x)
    for (std::size_t y = 0; y < c; ++y)
      for (std::size_t z = 0; z < c; ++z) {
        auto it = q.composition.find({x, y, z});
        if (it == q.composition.end() || it->second.left_dim() != q.hom(y, z).dim() ||
            it->second.right_dim() != q.hom(x, y).dim() || it->second.out_dim() != q.hom(x, z).dim())
          report(CategoryViolationKind::Malformed,
                 "composition " + q.colours[x] + "->" + q.colours[y] + "->" + q.colours[z]);
      }
  for (std::size_t x = 0; x < c; ++x) {
    auto it = q.identities.find(x);
    if (it == q.identities.end() || it->second.size() != q.hom(x, x).dim())
      report(CategoryViolationKind::Malformed, "identity of " + q.colours[x]);
  }
  if (!out.empty()) return out;

  for (std::size_t x = 0; x < c; ++x)
    for (std::size_t y = 0; y < c; ++y) {
      const CochainSpace& h = q.hom(x, y);
      for (std::size_t i = 0; i < h.dim(); ++i)
        for (const auto& [j, v] : h.d.row(i))
          if (h.degrees[i] != h.degrees[j] + 1) report(CategoryViolationKind::Degree, "d(" + hname(x, y, j) + ")");
      if (!(h.d * h.d).is_zero())
        report(CategoryViolationKind::DifferentialSquare, "Hom(" + q.colours[x] + "," + q.colours[y] + ")");
    }

  for (std::size_t x = 0; x < c; ++x)
    for (std::size_t y = 0; y < c; ++y)
      for (std::size_t z = 0; z < c; ++z) {
        const auto& t = q.composition.at({x, y, z});
        const CochainSpace &hf = q.hom(x, y), &hg = q.hom(y, z), &hgf = q.hom(x, z);
        for (std::size_t i = 0; i < hg.dim(); ++i)
          for (const auto& [j, v] : t.row(i))
            for (const auto& [k, a] : v)
              if (hgf.degrees[k] != hg.degrees[i] + hf.degrees[j])
                report(CategoryViolationKind::Degree, hname(y, z, i) + " o " + hname(x, y, j));
        // Leibniz on basis pairs
        for (std::size_t i = 0; i < hg.dim(); ++i)
          for (std::size_t j = 0; j < hf.dim(); ++j) {
            Vector g = unit_vector(hg.dim(), i), f = unit_vector(hf.dim(), j);
            Vector lhs = hgf.d * t.apply(g, f);
            Vector rhs = t.apply(hg.d * g, f);
            axpy(rhs, sgn(hg.degrees[i]), t.apply(g, hf.d * f));
            if (lhs != rhs) report(CategoryViolationKind::NotChainMap, hname(y, z, i) + " o " + hname(x, y, j));
          }
      }

  for (std::size_t x = 0; x < c; ++x)
    for (std::size_t y = 0; y < c; ++y)
      for (std::size_t z = 0; z < c; ++z)
        for (std::size_t w = 0; w < c; ++w) {
          // h o (g o f) = (h o g) o f for f: x->y, g: y->z, h: z->w
          const auto &fy = q.hom(x, y), &gz = q.hom(y, z), &hw = q.hom(z, w);
          for (std::size_t a = 0; a < hw.dim(); ++a)
            for (std::size_t b = 0; b < gz.dim(); ++b) {
              Vector h = unit_vector(hw.dim(), a), g = unit_vector(gz.dim(), b);
              Vector hg = q.compose(y, z, w, h, g);
              for (std::size_t e = 0; e < fy.dim(); ++e) {
                Vector f = unit_vector(fy.dim(), e);
                Vector l = q.compose(x, z, w, h, q.compose(x, y, z, g, f));
                Vector r = q.compose(x, y, w, hg, f);
                if (l != r)
                  report(CategoryViolationKind::NotAssociative,
                         hname(z, w, a) + ", " + hname(y, z, b) + ", " + hname(x, y, e));
              }
            }
        }

  for (std::size_t x = 0; x < c; ++x) {
    const Vector& id = q.identities.at(x);
    if (!supported_in(q.hom(x, x).degrees, id, 0) || !is_zero(q.d(x, x, id)))
      report(CategoryViolationKind::NotUnital, "identity of " + q.colours[x] + " is not a degree-0 cycle");
    for (std::size_t y = 0; y < c; ++y) {
      const auto& h = q.hom(x, y);
      for (std::size_t i = 0; i < h.dim(); ++i) {
        Vector f = unit_vector(h.dim(), i);
        if (q.compose(x, y, y, q.identities.at(y), f) != f || q.compose(x, x, y, f, id) != f)
          report(CategoryViolationKind::NotUnital, hname(x, y, i));
      }
    }
  }
  return out;
}

DgCategory checked(DgCategory q) {
  auto v = check_category(q);
  if (!v.empty()) throw InvalidCategory(std::move(v));
  return q;
}

DgAssociative endomorphism_algebra(const DgCategory& q, std::size_t x) {
  const CochainSpace& h = q.hom(x, x);
  return DgAssociative{h.names, h.degrees, h.d, q.composition.at({x, x, x})};
}

DgCategory complex_category(const std::vector<std::string>& names, const std::vector<Complex>& objects) {
  if (names.size() != objects.size()) throw std::invalid_argument("complex_category: names and objects differ in length");
  DgCategory q;
  q.colours = names;
  std::vector<FlatBasis> fb;
  for (const auto& v : objects) fb.push_back(flat_basis(v));
  const std::size_t c = objects.size();
  for (std::size_t x = 0; x < c; ++x)
    for (std::size_t y = 0; y < c; ++y) {
      const FlatBasis &bx = fb[x], &by = fb[y];
      const std::size_t nx = bx.dim(), ny = by.dim(), n = nx * ny;
      CochainSpace h;
      h.names.resize(n);
      h.degrees.resize(n);
      for (std::size_t p = 0; p < ny; ++p)
        for (std::size_t s = 0; s < nx; ++s) {
          h.names[p * nx + s] = by.labels[p] + "<-" + bx.labels[s];
          h.degrees[p * nx + s] = bx.degrees[s] - by.degrees[p];
        }
      const Matrix dyt = by.d.transpose();  // row p: entries (p', coefficient of p' in d p)
      h.d = Matrix(n, n);
      for (std::size_t p = 0; p < ny; ++p)
        for (std::size_t s = 0; s < nx; ++s) {
          const std::size_t col = p * nx + s;
          for (const auto& [pp, v] : dyt.row(p)) h.d.add(pp * nx + s, col, v);
          const Rational e = -sgn(h.degrees[col]);
          for (const auto& [ss, v] : bx.d.row(s)) h.d.add(p * nx + ss, col, e * v);
        }
      q.homs[{x, y}] = std::move(h);
    }
  for (std::size_t x = 0; x < c; ++x)
    for (std::size_t y = 0; y < c; ++y)
      for (std::size_t z = 0; z < c; ++z) {
        const std::size_t nx = fb[x].dim(), ny = fb[y].dim(), nz = fb[z].dim();
        BilinearTable t(nz * ny, ny * nx, nz * nx);
        for (std::size_t p = 0; p < nz; ++p)
          for (std::size_t m = 0; m < ny; ++m)
            for (std::size_t s = 0; s < nx; ++s) t.add(p * ny + m, m * nx + s, p * nx + s, 1);
        q.composition[{x, y, z}] = std::move(t);
      }
  for (std::size_t x = 0; x < c; ++x) {
    const std::size_t n = fb[x].dim();
    Vector id(n * n);
    for (std::size_t p = 0; p < n; ++p) id[p * n + p] = 1;
    q.identities[x] = id;
  }
  return q;
}

DgAssociative end_algebra(const Complex& v) { return endomorphism_algebra(complex_category({"V"}, {v}), 0); }

DgCategory twist_category(const DgCategory& q, const std::map<std::size_t, Vector>& omega) {
  std::map<std::size_t, Vector> w;
  for (std::size_t x = 0; x < q.size(); ++x) {
    auto it = omega.find(x);
    w[x] = it == omega.end() ? Vector(q.hom(x, x).dim()) : it->second;
  }
  for (const auto& [x, wx] : omega) {
    if (x >= q.size()) throw std::invalid_argument("twist_category: unknown colour");
    const DgAssociative e = endomorphism_algebra(q, x);
    if (wx.size() != e.dim() || !supported_in(e.degrees, wx, 1))
      throw DegreeMismatch("twist_category: twisting element of " + q.colours[x] + " must have degree 1");
    if (!is_zero(associative_mc_residual(e, wx)))
      throw ColourNotMaurerCartan(q.colours[x], "twist_category: element at colour " + q.colours[x] +
                                                    " is not Maurer-Cartan");
  }
  DgCategory out = q;
  for (auto& [key, h] : out.homs) {
    const auto [x, y] = key;
    const std::size_t n = h.dim();
    Matrix d = h.d;
    for (std::size_t i = 0; i < n; ++i) {
      Vector a = unit_vector(n, i);
      Vector c = q.compose(x, y, y, w[y], a);
      axpy(c, -sgn(h.degrees[i]), q.compose(x, x, y, a, w[x]));
      for (std::size_t k = 0; k < n; ++k)
        if (c[k] != 0) d.add(k, i, c[k]);
    }
    h.d = d;
  }
  return out;
}

DgCategory base_change(const DgCategory& q, const ArtinianCdga& r) {
  const std::size_t rd = r.dim();
  auto rdeg = [&](std::size_t j) { return -r.degree(j); };
  const Matrix drt = r.differential().transpose();
  DgCategory out;
  out.colours = q.colours;
  for (const auto& [key, h] : q.homs) {
    CochainSpace b;
    const std::size_t n = h.dim();
    b.names.resize(n * rd);
    b.degrees.resize(n * rd);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t j = 0; j < rd; ++j) {
        b.names[a * rd + j] = j == 0 ? h.names[a] : h.names[a] + "*" + r.basis_names()[j];
        b.degrees[a * rd + j] = h.degrees[a] + rdeg(j);
      }
    b.d = Matrix(n * rd, n * rd);
    const Matrix hdt = h.d.transpose();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t j = 0; j < rd; ++j) {
        const std::size_t col = a * rd + j;
        for (const auto& [aa, v] : hdt.row(a)) b.d.add(aa * rd + j, col, v);
        const Rational e = sgn(h.degrees[a]);
        for (const auto& [jj, v] : drt.row(j)) b.d.add(a * rd + jj, col, e * v);
      }
    out.homs[key] = std::move(b);
  }
  const BilinearTable& rm = r.multiplication();
  for (const auto& [key, t] : q.composition) {
    const auto [x, y, z] = key;
    const auto& hf = q.hom(x, y);
    BilinearTable b(t.left_dim() * rd, t.right_dim() * rd, t.out_dim() * rd);
    for (std::size_t i = 0; i < t.left_dim(); ++i)
      for (const auto& [k, v] : t.row(i))
        for (std::size_t ri = 0; ri < rd; ++ri)
          for (const auto& [rk, rv] : rm.row(ri)) {
            const Rational e = sgn(static_cast<long>(rdeg(ri)) * hf.degrees[k]);
            for (const auto& [o, c] : v)
              for (const auto& [ro, rc] : rv) b.add(i * rd + ri, k * rd + rk, o * rd + ro, e * c * rc);
          }
    out.composition[key] = std::move(b);
  }
  for (const auto& [x, id] : q.identities) {
    Vector v(id.size() * rd);
    for (std::size_t a = 0; a < id.size(); ++a) v[a * rd] = id[a];
    out.identities[x] = v;
  }
  return out;
}

Vector embed_ideal(const Vector& x, std::size_t base_dim, const ArtinianCdga& r) {
  const std::size_t rd = r.dim();
  if (rd == 0 || x.size() != base_dim * (rd - 1)) throw std::invalid_argument("embed_ideal: wrong vector length");
  Vector out(base_dim * rd);
  for (std::size_t a = 0; a < base_dim; ++a)
    for (std::size_t j = 1; j < rd; ++j) out[a * rd + j] = x[a * (rd - 1) + j - 1];
  return out;
}

Vector restrict_ideal(const Vector& x, std::size_t base_dim, const ArtinianCdga& r) {
  const std::size_t rd = r.dim();
  if (x.size() != base_dim * rd) throw std::invalid_argument("restrict_ideal: wrong vector length");
  Vector out(base_dim * (rd - 1));
  for (std::size_t a = 0; a < base_dim; ++a) {
    if (x[a * rd] != 0) throw std::invalid_argument("restrict_ideal: element does not lie in the maximal ideal");
    for (std::size_t j = 1; j < rd; ++j) out[a * (rd - 1) + j - 1] = x[a * rd + j];
  }
  return out;
}

DgCategory ctr_category(const DgCategory& q, const ArtinianCdga& r, const std::vector<CtrObject>& objects) {
  const DgCategory b = base_change(q, r);
  DgCategory sub;
  const std::size_t c = objects.size();
  for (std::size_t i = 0; i < c; ++i) {
    if (objects[i].colour >= q.size()) throw std::invalid_argument("ctr_category: unknown colour");
    std::string name = q.colours[objects[i].colour];
    if (!is_zero(objects[i].omega)) name += "~" + std::to_string(i);
    sub.colours.push_back(name);
  }
  for (std::size_t i = 0; i < c; ++i) {
    sub.identities[i] = b.identities.at(objects[i].colour);
    for (std::size_t j = 0; j < c; ++j) {
      sub.homs[{i, j}] = b.hom(objects[i].colour, objects[j].colour);
      for (std::size_t k = 0; k < c; ++k)
        sub.composition[{i, j, k}] = b.composition.at({objects[i].colour, objects[j].colour, objects[k].colour});
    }
  }
  std::map<std::size_t, Vector> w;
  for (std::size_t i = 0; i < c; ++i) {
    const std::size_t dx = q.hom(objects[i].colour, objects[i].colour).dim();
    if (objects[i].omega.size() != dx * (r.dim() - 1))
      throw std::invalid_argument("ctr_category: twisting element has the wrong length");
    w[i] = embed_ideal(objects[i].omega, dx, r);
  }
  return twist_category(sub, w);
}

Complex q_ctr_hom(const DgCategory& q, const ArtinianCdga& r, const CtrObject& x, const CtrObject& y) {
  return to_complex(ctr_category(q, r, {x, y}).hom(0, 1));
}

// ---- modules

std::vector<std::vector<Vector>> ContraModule::ring_matrix() const {
  const std::size_t n = base_dim(), rd = ring.dim();
  std::vector<std::vector<Vector>> out(n, std::vector<Vector>(n, Vector(rd)));
  const Matrix dt = d.transpose();
  for (std::size_t q = 0; q < n; ++q)
    for (const auto& [i, v] : dt.row(q * rd)) out[i / rd][q][i % rd] = v;
  return out;
}

Matrix ContraModule::extend(const std::vector<Vector>& images, const ContraModule& target) const {
  const std::size_t rd = ring.dim();
  if (images.size() != base_dim()) throw std::invalid_argument("extend: one image per generator expected");
  Matrix out(target.dim(), dim());
  const BilinearTable& rm = ring.multiplication();
  for (std::size_t q = 0; q < base_dim(); ++q) {
    const Vector& im = images[q];
    for (std::size_t idx = 0; idx < im.size(); ++idx) {
      if (im[idx] == 0) continue;
      const std::size_t p = idx / rd, k = idx % rd;
      for (const auto& [j, prod] : rm.row(k))
        for (const auto& [o, c] : prod) out.add(p * rd + o, q * rd + j, im[idx] * c);
    }
  }
  return out;
}

Matrix module_differential(const Complex& v, const Vector& omega, const ArtinianCdga& r) {
  const FlatBasis b = flat_basis(v);
  const std::size_t nv = b.dim(), rd = r.dim();
  if (omega.size() != nv * nv * (rd - 1)) throw std::invalid_argument("module_differential: element has the wrong length");
  std::vector<int> vdeg;
  for (int deg : b.degrees) vdeg.push_back(-deg);
  Matrix d(nv * rd, nv * rd);
  const Matrix bdt = b.d.transpose();
  const Matrix drt = r.differential().transpose();
  const BilinearTable& rm = r.multiplication();
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = 0; j < rd; ++j) {
      const std::size_t col = i * rd + j;
      for (const auto& [p, c] : bdt.row(i)) d.add(p * rd + j, col, c);
      for (const auto& [k, c] : drt.row(j)) d.add(i * rd + k, col, sgn(vdeg[i]) * c);
    }
  const std::size_t cd = rd - 1;
  for (std::size_t idx = 0; idx < omega.size(); ++idx) {
    if (omega[idx] == 0) continue;
    const std::size_t a = idx / cd, s = idx % cd + 1;
    const std::size_t p = a / nv, q = a % nv;
    for (const auto& [j, prod] : rm.row(s)) {
      const Rational e = sgn(static_cast<long>(r.degree(s)) * vdeg[q]) * omega[idx];
      for (const auto& [k, c] : prod) d.add(p * rd + k, q * rd + j, e * c);
    }
  }
  return d;
}

ContraModule realize_module(const Complex& v, const Vector& omega, const ArtinianCdga& r) {
  const NilpotentDgla n(commutator_dgla(end_algebra(v)), r);
  if (omega.size() != n.dim()) throw std::invalid_argument("realize_module: element has the wrong length");
  n.dgla().require_degree(omega, 1, "realize_module");
  if (!is_zero(mc_residual(n, omega))) throw NotMaurerCartan("realize_module: element is not Maurer-Cartan");
  ContraModule m;
  m.base = v;
  m.ring = r;
  m.omega = omega;
  for (int deg : flat_basis(v).degrees) m.vdeg.push_back(-deg);
  const std::size_t nv = m.vdeg.size(), rd = r.dim();
  m.degrees.resize(nv * rd);
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = 0; j < rd; ++j) m.degrees[i * rd + j] = m.vdeg[i] - r.degree(j);
  m.d = module_differential(v, omega, r);
  if (!(m.d * m.d).is_zero()) throw std::logic_error("realize_module: differential does not square to zero");
  return m;
}

Vector right_multiply(const ContraModule& m, const Vector& x, std::size_t ring_index) {
  const std::size_t rd = m.ring.dim();
  Vector out(m.dim());
  const BilinearTable& rm = m.ring.multiplication();
  for (std::size_t idx = 0; idx < x.size(); ++idx) {
    if (x[idx] == 0) continue;
    const std::size_t p = idx / rd, k = idx % rd;
    for (const auto& [o, c] : rm.entry(k, ring_index)) out[p * rd + o] += x[idx] * c;
  }
  return out;
}

Complex module_complex(const ContraModule& m) {
  std::vector<std::string> names;
  const FlatBasis b = flat_basis(m.base);
  for (const auto& l : b.labels)
    for (std::size_t j = 0; j < m.ring.dim(); ++j)
      names.push_back(j == 0 ? l : l + "*" + m.ring.basis_names()[j]);
  return complex_of(names, m.degrees, m.d);
}

Complex reduce(const ContraModule& m) {
  const FlatBasis b = flat_basis(m.base);
  const std::size_t rd = m.ring.dim();
  std::map<int, std::vector<std::string>> labels;
  std::map<int, std::vector<std::size_t>> idx;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    labels[b.degrees[i]].push_back(b.labels[i]);
    idx[b.degrees[i]].push_back(i * rd);
  }
  std::map<int, Matrix> d;
  for (const auto& [n, cols] : idx) {
    auto it = idx.find(n - 1);
    if (it != idx.end()) {
      Matrix block = m.d.submatrix(it->second, cols);
      if (!block.is_zero()) d[n] = block;
    }
  }
  return Complex(GradedSpace(labels), d, m.base.orientation());
}

namespace {

std::vector<Vector> generator_images(const Vector& f, const ContraModule& m, const ContraModule& n) {
  const std::size_t nv = m.base_dim(), nw = n.base_dim(), rd = m.ring.dim();
  if (f.size() != nw * nv * rd) throw std::invalid_argument("Hom_R element has the wrong length");
  std::vector<Vector> im(nv, Vector(n.dim()));
  for (std::size_t p = 0; p < nw; ++p)
    for (std::size_t q = 0; q < nv; ++q)
      for (std::size_t j = 0; j < rd; ++j) im[q][p * rd + j] = f[(p * nv + q) * rd + j];
  return im;
}

}  // namespace

Matrix hom_r_matrix(const ContraModule& m, const ContraModule& n, const Vector& f) {
  return m.extend(generator_images(f, m, n), n);
}

Vector hom_r_coordinates(const ContraModule& m, const ContraModule& n, const Matrix& phi) {
  const std::size_t nv = m.base_dim(), nw = n.base_dim(), rd = m.ring.dim();
  Vector out(nw * nv * rd);
  const Matrix t = phi.transpose();
  for (std::size_t q = 0; q < nv; ++q)
    for (const auto& [idx, c] : t.row(q * rd)) out[((idx / rd) * nv + q) * rd + idx % rd] = c;
  return out;
}

int hom_r_degree(const ContraModule& m, const ContraModule& n, std::size_t index) {
  const std::size_t nv = m.base_dim(), rd = m.ring.dim();
  const std::size_t j = index % rd, q = (index / rd) % nv, p = index / rd / nv;
  return n.vdeg[p] - m.ring.degree(j) - m.vdeg[q];
}

Vector hom_r_to_tensor(const ContraModule& m, const ContraModule&, const Vector& f) {
  const std::size_t nv = m.base_dim(), rd = m.ring.dim();
  Vector out = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::size_t j = i % rd, q = (i / rd) % nv;
    if (static_cast<long>(m.ring.degree(j)) * m.vdeg[q] % 2 != 0) out[i] = -out[i];
  }
  return out;
}

Vector hom_r_compose(const ContraModule& m, const ContraModule& n, const ContraModule& p, const Vector& g,
                     const Vector& f) {
  return hom_r_coordinates(m, p, hom_r_matrix(n, p, g) * hom_r_matrix(m, n, f));
}

HomIso hom_iso(const Complex& v, const Vector& w, const Complex& u, const Vector& nu, const ArtinianCdga& r) {
  const ContraModule m = realize_module(v, w, r);
  const ContraModule n = realize_module(u, nu, r);
  HomIso out;
  const DgCategory q = complex_category({"V", "W"}, {v, u});
  out.twisted = ctr_category(q, r, {{0, w}, {1, nu}}).hom(0, 1);

  const std::size_t nv = m.base_dim(), nw = n.base_dim(), rd = r.dim(), dim = nv * nw * rd;
  CochainSpace& h = out.hom_r;
  h.names.resize(dim);
  h.degrees.resize(dim);
  const FlatBasis bv = flat_basis(v), bw = flat_basis(u);
  for (std::size_t p = 0; p < nw; ++p)
    for (std::size_t q = 0; q < nv; ++q)
      for (std::size_t j = 0; j < rd; ++j) {
        const std::size_t i = (p * nv + q) * rd + j;
        h.names[i] = "F(" + bw.labels[p] + "*" + r.basis_names()[j] + "<-" + bv.labels[q] + ")";
        h.degrees[i] = n.vdeg[p] - r.degree(j) - m.vdeg[q];
      }
  h.d = Matrix(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    Matrix phi = hom_r_matrix(m, n, unit_vector(dim, i));
    Matrix dphi = n.d * phi - (phi * m.d).scaled(sgn(h.degrees[i]));
    Vector c = hom_r_coordinates(m, n, dphi);
    for (std::size_t k = 0; k < dim; ++k)
      if (c[k] != 0) h.d.set(k, i, c[k]);
  }
  out.iso = Matrix(dim, dim);
  for (std::size_t p = 0; p < nw; ++p)
    for (std::size_t q = 0; q < nv; ++q)
      for (std::size_t j = 0; j < rd; ++j) {
        const std::size_t i = (p * nv + q) * rd + j;
        out.iso.set(i, i, sgn(static_cast<long>(r.degree(j)) * m.vdeg[q]));
      }
  out.chain_isomorphism = out.iso * out.twisted.d == h.d * out.iso && out.twisted.degrees == h.degrees;
  return out;
}

// ---- morphisms via the triple algebra

MorphismMc morphism_mc(const DgCategory& q, std::size_t x, std::size_t y, const Vector& f0, const ArtinianCdga& r) {
  if (x >= q.size() || y >= q.size()) throw std::invalid_argument("morphism_mc: unknown colour");
  const CochainSpace &hyy = q.hom(y, y), &hxy = q.hom(x, y), &hxx = q.hom(x, x);
  if (f0.size() != hxy.dim()) throw std::invalid_argument("morphism_mc: f0 has the wrong length");
  if (!supported_in(hxy.degrees, f0, 0) || !is_zero(hxy.d * f0))
    throw NotClosed("morphism_mc: f0 is not a closed degree-0 morphism");
  MorphismMc m;
  m.x = x;
  m.y = y;
  m.f0 = f0;
  m.ring = r;
  m.dim_yy = hyy.dim();
  m.dim_xy = hxy.dim();
  m.dim_xx = hxx.dim();
  const std::size_t oa = 0, ot = m.dim_yy, ob = m.dim_yy + m.dim_xy, n = ob + m.dim_xx;
  DgAssociative& t = m.triple;
  for (std::size_t i = 0; i < m.dim_yy; ++i) {
    t.names.push_back("a:" + hyy.names[i]);
    t.degrees.push_back(hyy.degrees[i]);
  }
  for (std::size_t i = 0; i < m.dim_xy; ++i) {
    t.names.push_back("t:" + hxy.names[i]);
    t.degrees.push_back(hxy.degrees[i] + 1);
  }
  for (std::size_t i = 0; i < m.dim_xx; ++i) {
    t.names.push_back("b:" + hxx.names[i]);
    t.degrees.push_back(hxx.degrees[i]);
  }
  t.d = Matrix(n, n);
  auto place = [&](const Matrix& src, std::size_t off, const Rational& s) {
    for (std::size_t i = 0; i < src.rows(); ++i)
      for (const auto& [j, v] : src.row(i)) t.d.add(off + i, off + j, s * v);
  };
  place(hyy.d, oa, 1);
  place(hxy.d, ot, -1);
  place(hxx.d, ob, 1);
  t.mult = BilinearTable(n, n, n);
  auto block = [&](const BilinearTable& src, std::size_t lo, std::size_t ro, std::size_t oo, bool sign_by_left,
                   const std::vector<int>& ldeg) {
    for (std::size_t i = 0; i < src.left_dim(); ++i)
      for (const auto& [j, v] : src.row(i)) {
        const Rational s = sign_by_left ? sgn(ldeg[i]) : Rational(1);
        for (const auto& [k, c] : v) t.mult.add(lo + i, ro + j, oo + k, s * c);
      }
  };
  block(q.composition.at({y, y, y}), oa, oa, oa, false, hyy.degrees);
  block(q.composition.at({x, y, y}), oa, ot, ot, true, hyy.degrees);
  block(q.composition.at({x, x, y}), ot, ob, ot, false, hxy.degrees);
  block(q.composition.at({x, x, x}), ob, ob, ob, false, hxx.degrees);
  Vector big(n);
  for (std::size_t i = 0; i < m.dim_xy; ++i) big[ot + i] = f0[i];
  m.twisted = twist_algebra(t, big);
  m.lie = NilpotentDgla(commutator_dgla(m.twisted), r);
  return m;
}

CtrMorphism element_to_morphism(const MorphismMc& m, const Vector& element) {
  if (element.size() != m.lie.dim()) throw std::invalid_argument("element_to_morphism: wrong vector length");
  const std::size_t rd = m.ring.dim(), cd = rd - 1;
  CtrMorphism f;
  f.alpha = Vector(m.dim_yy * cd);
  Vector theta(m.dim_xy * cd);
  f.beta = Vector(m.dim_xx * cd);
  for (std::size_t idx = 0; idx < element.size(); ++idx) {
    if (element[idx] == 0) continue;
    const std::size_t a = m.lie.base_index(idx), j = m.lie.ring_index(idx);
    if (a < m.dim_yy) f.alpha[a * cd + j - 1] = element[idx];
    else if (a < m.dim_yy + m.dim_xy) theta[(a - m.dim_yy) * cd + j - 1] = element[idx];
    else f.beta[(a - m.dim_yy - m.dim_xy) * cd + j - 1] = element[idx];
  }
  f.f = embed_ideal(theta, m.dim_xy, m.ring);
  for (std::size_t a = 0; a < m.dim_xy; ++a) f.f[a * rd] = m.f0[a];
  return f;
}

Vector morphism_to_element(const MorphismMc& m, const CtrMorphism& f) {
  const std::size_t rd = m.ring.dim();
  if (f.f.size() != m.dim_xy * rd) throw std::invalid_argument("morphism_to_element: wrong morphism length");
  Vector g = f.f;
  for (std::size_t a = 0; a < m.dim_xy; ++a) {
    if (g[a * rd] != m.f0[a]) throw std::invalid_argument("morphism_to_element: morphism does not lie over f0");
    g[a * rd] = 0;
  }
  const Vector theta = restrict_ideal(g, m.dim_xy, m.ring);
  const std::size_t cd = rd - 1;
  Vector out(m.lie.dim());
  for (std::size_t a = 0; a < m.dim_yy; ++a)
    for (std::size_t j = 1; j < rd; ++j) out[m.lie.index(a, j)] = f.alpha.at(a * cd + j - 1);
  for (std::size_t a = 0; a < m.dim_xy; ++a)
    for (std::size_t j = 1; j < rd; ++j) out[m.lie.index(m.dim_yy + a, j)] = theta[a * cd + j - 1];
  for (std::size_t a = 0; a < m.dim_xx; ++a)
    for (std::size_t j = 1; j < rd; ++j) out[m.lie.index(m.dim_yy + m.dim_xy + a, j)] = f.beta.at(a * cd + j - 1);
  return out;
}

bool is_ctr_morphism(const DgCategory& q, const MorphismMc& m, const CtrMorphism& f) {
  DgCategory c;
  try {
    c = ctr_category(q, m.ring, {{m.x, f.beta}, {m.y, f.alpha}});
  } catch (const NotMaurerCartan&) {
    return false;
  }
  const CochainSpace& h = c.hom(0, 1);
  const std::size_t rd = m.ring.dim();
  for (std::size_t a = 0; a < m.dim_xy; ++a)
    if (f.f[a * rd] != m.f0[a]) return false;
  return supported_in(h.degrees, f.f, 0) && is_zero(h.d * f.f);
}

}  // namespace deform
