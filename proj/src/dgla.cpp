#include "deform/dgla.hpp"

#include <map>
#include <sstream>

namespace deform {

const char* to_string(DglaViolationKind kind) {
  switch (kind) {
    case DglaViolationKind::Degree: return "Degree";
    case DglaViolationKind::Antisymmetry: return "Antisymmetry";
    case DglaViolationKind::Jacobi: return "Jacobi";
    case DglaViolationKind::Derivation: return "Derivation";
    case DglaViolationKind::DifferentialSquare: return "DifferentialSquare";
  }
  return "?";
}

namespace {

std::string describe(const std::vector<DglaViolation>& v) {
  std::ostringstream out;
  out << "invalid dgla";
  for (std::size_t i = 0; i < v.size() && i < 4; ++i) {
    out << (i ? "; " : ": ") << to_string(v[i].kind) << "(";
    for (std::size_t k = 0; k < v[i].basis.size(); ++k) out << (k ? "," : "") << v[i].basis[k];
    out << ")";
  }
  return out.str();
}

using SparseAcc = std::map<std::size_t, Rational>;

void add_to(SparseAcc& acc, const Rational& s, const SparseVec& v) {
  if (s == 0) return;
  for (const auto& [k, x] : v) {
    auto& slot = acc[k];
    slot += s * x;
  }
}

bool acc_zero(const SparseAcc& acc) {
  for (const auto& [k, x] : acc)
    if (x != 0) return false;
  return true;
}

// [u, e_j] for sparse u
void bracket_left(SparseAcc& acc, const Rational& s, const BilinearTable& t, const SparseVec& u, std::size_t j) {
  for (const auto& [i, x] : u) {
    const auto& row = t.row(i);
    auto it = row.find(j);
    if (it != row.end()) add_to(acc, s * x, it->second);
  }
}

// [e_i, u] for sparse u
void bracket_right(SparseAcc& acc, const Rational& s, const BilinearTable& t, std::size_t i, const SparseVec& u) {
  const auto& row = t.row(i);
  for (const auto& [j, x] : u) {
    auto it = row.find(j);
    if (it != row.end()) add_to(acc, s * x, it->second);
  }
}

}  // namespace

InvalidDgla::InvalidDgla(std::vector<DglaViolation> v) : std::runtime_error(describe(v)), violations_(std::move(v)) {}

Dgla::Dgla(std::vector<std::string> names, std::vector<int> degrees, Matrix d, BilinearTable bracket)
    : names_(std::move(names)), degrees_(std::move(degrees)), d_(std::move(d)), bracket_(std::move(bracket)) {
  const std::size_t n = names_.size();
  if (degrees_.size() != n || d_.rows() != n || d_.cols() != n || bracket_.left_dim() != n ||
      bracket_.right_dim() != n || bracket_.out_dim() != n)
    throw std::invalid_argument("Dgla: inconsistent dimensions");
}

std::vector<std::size_t> Dgla::indices_of_degree(int deg) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim(); ++i)
    if (degrees_[i] == deg) out.push_back(i);
  return out;
}

void Dgla::require_degree(const Vector& x, int deg, const char* what) const {
  if (x.size() != dim()) throw DegreeMismatch(std::string(what) + ": wrong vector length");
  for (std::size_t i = 0; i < dim(); ++i)
    if (x[i] != 0 && degrees_[i] != deg)
      throw DegreeMismatch(std::string(what) + ": component " + names_[i] + " has degree " +
                           std::to_string(degrees_[i]) + ", expected " + std::to_string(deg));
}

Complex Dgla::complex() const {
  std::vector<std::size_t> all(dim());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return block_complex(*this, all);
}

Complex block_complex(const Dgla& l, const std::vector<std::size_t>& indices) {
  std::map<int, std::vector<std::string>> labels;
  std::map<int, std::vector<std::size_t>> idx;
  for (std::size_t i : indices) {
    labels[-l.degree(i)].push_back(l.names()[i]);
    idx[-l.degree(i)].push_back(i);
  }
  std::map<int, Matrix> d;
  for (const auto& [n, cols] : idx) {
    auto it = idx.find(n - 1);
    if (it != idx.end()) d[n] = l.differential().submatrix(it->second, cols);
  }
  return Complex(GradedSpace(labels), d, Orientation::cochain);
}

Dgla Dgla::with_differential(Matrix d) const { return Dgla(names_, degrees_, std::move(d), bracket_); }

std::vector<DglaViolation> check_dgla(const Dgla& l, std::size_t max_reports,
                                      const std::function<bool(std::size_t, std::size_t, std::size_t)>& skip_triple) {
  std::vector<DglaViolation> out;
  const std::size_t n = l.dim();
  const auto& t = l.bracket_table();
  const auto& nm = l.names();
  auto report = [&](DglaViolationKind k, std::vector<std::string> b) {
    if (out.size() < max_reports) out.push_back({k, std::move(b)});
  };
  const Matrix dt = l.differential().transpose();
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& [i, x] : dt.row(j))
      if (l.degree(i) != l.degree(j) + 1) report(DglaViolationKind::Degree, {nm[j]});
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, v] : t.row(i))
      for (const auto& [k, x] : v)
        if (l.degree(k) != l.degree(i) + l.degree(j)) report(DglaViolationKind::Degree, {nm[i], nm[j]});
  if (!out.empty()) return out;

  if (!(l.differential() * l.differential()).is_zero()) report(DglaViolationKind::DifferentialSquare, {});

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      SparseAcc acc;
      add_to(acc, 1, t.entry(i, j));
      int sign = (l.degree(i) % 2 != 0 && l.degree(j) % 2 != 0) ? -1 : 1;
      add_to(acc, sign, t.entry(j, i));
      if (!acc_zero(acc)) report(DglaViolationKind::Antisymmetry, {nm[i], nm[j]});
    }

  // derivation: d[x,y] - [dx,y] - (-1)^{|x|}[x,dy]
  std::vector<SparseVec> dcol(n);
  for (std::size_t j = 0; j < n; ++j) dcol[j] = dt.row(j);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      SparseAcc acc;
      for (const auto& [k, x] : t.entry(i, j)) add_to(acc, x, dcol[k]);
      bracket_left(acc, -1, t, dcol[i], j);
      bracket_right(acc, l.degree(i) % 2 == 0 ? -1 : 1, t, i, dcol[j]);
      if (!acc_zero(acc)) report(DglaViolationKind::Derivation, {nm[i], nm[j]});
    }

  // Jacobi: [x,[y,z]] - [[x,y],z] - (-1)^{|x||y|}[y,[x,z]]
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      SparseVec xy = t.entry(x, y);
      int sxy = (l.degree(x) % 2 != 0 && l.degree(y) % 2 != 0) ? -1 : 1;
      for (std::size_t z = 0; z < n; ++z) {
        if (skip_triple && skip_triple(x, y, z)) continue;
        SparseVec yz = t.entry(y, z), xz = t.entry(x, z);
        if (xy.empty() && yz.empty() && xz.empty()) continue;
        SparseAcc acc;
        bracket_right(acc, 1, t, x, yz);
        bracket_left(acc, -1, t, xy, z);
        bracket_right(acc, -sxy, t, y, xz);
        if (!acc_zero(acc)) report(DglaViolationKind::Jacobi, {nm[x], nm[y], nm[z]});
      }
    }
  return out;
}

Dgla checked(Dgla l) {
  auto v = check_dgla(l);
  if (!v.empty()) throw InvalidDgla(std::move(v));
  return l;
}

CoefficientAlgebra maximal_ideal(const ArtinianCdga& r) {
  CoefficientAlgebra c;
  const std::size_t n = r.dim() - 1;
  for (std::size_t j = 1; j < r.dim(); ++j) {
    c.names.push_back(r.basis_names()[j]);
    c.degrees.push_back(-r.degree(j));
    c.levels.push_back(r.level(j));
  }
  c.mult = BilinearTable(n, n, n);
  for (std::size_t i = 1; i < r.dim(); ++i)
    for (const auto& [j, v] : r.multiplication().row(i)) {
      if (j == 0) continue;
      for (const auto& [k, x] : v) {
        if (k == 0) throw std::logic_error("maximal ideal is not closed under multiplication");
        c.mult.add(i - 1, j - 1, k - 1, x);
      }
    }
  // cochain differential on m: d^{coch} = d^{chain} (degree -1 homological = +1 cochain)
  std::vector<std::size_t> idx;
  for (std::size_t j = 1; j < r.dim(); ++j) idx.push_back(j);
  c.d = r.differential().submatrix(idx, idx);
  return c;
}

CoefficientAlgebra poly_forms_line(int truncation) {
  if (truncation < 0) throw std::invalid_argument("poly_forms_line: negative truncation");
  const std::size_t D = static_cast<std::size_t>(truncation);
  CoefficientAlgebra c;
  for (std::size_t k = 0; k <= D; ++k) {
    c.names.push_back(k == 0 ? "1" : (k == 1 ? "t" : "t^" + std::to_string(k)));
    c.degrees.push_back(0);
    c.levels.push_back(0);
  }
  for (std::size_t k = 0; k < D; ++k) {
    c.names.push_back(k == 0 ? "dt" : (k == 1 ? "t dt" : "t^" + std::to_string(k) + " dt"));
    c.degrees.push_back(1);
    c.levels.push_back(0);
  }
  const std::size_t n = c.names.size();
  auto poly = [](std::size_t k) { return k; };
  auto form = [&](std::size_t k) { return D + 1 + k; };
  c.mult = BilinearTable(n, n, n);
  for (std::size_t a = 0; a <= D; ++a)
    for (std::size_t b = 0; b <= D; ++b) {
      if (a + b <= D)
        c.mult.add(poly(a), poly(b), poly(a + b), 1);
      else
        c.mult.mark_overflow(poly(a), poly(b));
      if (b < D) {
        if (a + b < D) {
          c.mult.add(poly(a), form(b), form(a + b), 1);
          c.mult.add(form(b), poly(a), form(a + b), 1);
        } else {
          c.mult.mark_overflow(poly(a), form(b));
          c.mult.mark_overflow(form(b), poly(a));
        }
      }
    }
  c.d = Matrix(n, n);
  for (std::size_t k = 1; k <= D; ++k) c.d.set(form(k - 1), poly(k), Rational(static_cast<long>(k)));
  return c;
}

Dgla tensor(const Dgla& l, const CoefficientAlgebra& c) {
  const std::size_t nl = l.dim(), nc = c.dim(), n = nl * nc;
  std::vector<std::string> names;
  std::vector<int> degrees;
  for (std::size_t a = 0; a < nl; ++a)
    for (std::size_t j = 0; j < nc; ++j) {
      names.push_back(l.names()[a] + "⊗" + c.names[j]);
      degrees.push_back(l.degree(a) + c.degrees[j]);
    }
  Matrix d(n, n);
  const Matrix& dl = l.differential();
  for (std::size_t a = 0; a < nl; ++a)
    for (const auto& [b, x] : dl.row(a))
      for (std::size_t j = 0; j < nc; ++j) d.add(a * nc + j, b * nc + j, x);
  for (std::size_t a = 0; a < nl; ++a) {
    int sign = l.degree(a) % 2 == 0 ? 1 : -1;
    for (std::size_t i = 0; i < nc; ++i)
      for (const auto& [j, x] : c.d.row(i)) d.add(a * nc + i, a * nc + j, sign * x);
  }
  BilinearTable br(n, n, n);
  const auto& lt = l.bracket_table();
  for (std::size_t a = 0; a < nl; ++a)
    for (const auto& [b, v] : lt.row(a))
      for (std::size_t r = 0; r < nc; ++r)
        for (std::size_t s = 0; s < nc; ++s) {
          if (c.mult.overflows(r, s)) {
            br.mark_overflow(a * nc + r, b * nc + s);
            continue;
          }
          SparseVec rs = c.mult.entry(r, s);
          if (rs.empty()) continue;
          int sign = (c.degrees[r] % 2 != 0 && l.degree(b) % 2 != 0) ? -1 : 1;
          for (const auto& [k, x] : v)
            for (const auto& [q, y] : rs) br.add(a * nc + r, b * nc + s, k * nc + q, sign * x * y);
        }
  for (const auto& [p, flag] : lt.overflow_pairs())
    for (std::size_t r = 0; r < nc; ++r)
      for (std::size_t s = 0; s < nc; ++s)
        if (c.mult.overflows(r, s) || !c.mult.entry(r, s).empty()) br.mark_overflow(p.first * nc + r, p.second * nc + s);
  return Dgla(std::move(names), std::move(degrees), std::move(d), std::move(br));
}

NilpotentDgla::NilpotentDgla(Dgla base, ArtinianCdga ring)
    : base_(std::move(base)), ring_(std::move(ring)) {
  dgla_ = tensor(base_, maximal_ideal(ring_));
}

Vector NilpotentDgla::element(const std::vector<std::pair<Vector, std::size_t>>& terms) const {
  Vector out(dim());
  for (const auto& [x, j] : terms)
    for (std::size_t a = 0; a < x.size(); ++a)
      if (x[a] != 0) out[index(a, j)] += x[a];
  return out;
}

Vector NilpotentDgla::component(const Vector& x, std::size_t ring_index) const {
  Vector out(base_.dim());
  for (std::size_t a = 0; a < base_.dim(); ++a) out[a] = x[index(a, ring_index)];
  return out;
}

Vector NilpotentDgla::truncate(const Vector& x, int n) const {
  Vector out(x);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (level(i) > n) out[i] = 0;
  return out;
}

std::vector<std::size_t> NilpotentDgla::indices(int degree, int level_) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim(); ++i)
    if (dgla_.degree(i) == degree && level(i) == level_) out.push_back(i);
  return out;
}

Vector NilpotentDgla::map_coefficients(const Vector& x, const NilpotentDgla& target, const Matrix& ring_map) const {
  Vector out(target.dim());
  for (std::size_t a = 0; a < base_.dim(); ++a) {
    Vector r(ring_.dim());
    bool any = false;
    for (std::size_t j = 1; j < ring_.dim(); ++j) {
      r[j] = x[index(a, j)];
      if (r[j] != 0) any = true;
    }
    if (!any) continue;
    Vector s = ring_map * r;
    if (s[0] != 0) throw std::logic_error("ring map does not preserve the maximal ideal");
    for (std::size_t j = 1; j < target.ring().dim(); ++j)
      if (s[j] != 0) out[target.index(a, j)] += s[j];
  }
  return out;
}

}  // namespace deform
