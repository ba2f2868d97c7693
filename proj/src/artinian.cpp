#include "deform/artinian.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace deform {

const char* to_string(RingViolationKind kind) {
  switch (kind) {
    case RingViolationKind::Malformed: return "Malformed";
    case RingViolationKind::NotHomogeneous: return "NotHomogeneous";
    case RingViolationKind::NotUnital: return "NotUnital";
    case RingViolationKind::NotCommutative: return "NotCommutative";
    case RingViolationKind::NotAssociative: return "NotAssociative";
    case RingViolationKind::NotSquareZeroDifferential: return "NotSquareZeroDifferential";
    case RingViolationKind::NotLeibniz: return "NotLeibniz";
    case RingViolationKind::NotNilpotent: return "NotNilpotent";
    case RingViolationKind::AugmentationNotMultiplicative: return "AugmentationNotMultiplicative";
    case RingViolationKind::AugmentationNotDg: return "AugmentationNotDg";
  }
  return "?";
}

namespace {

std::string describe_violations(const std::vector<RingViolation>& v) {
  std::ostringstream out;
  out << "ring validation failed";
  for (std::size_t i = 0; i < v.size() && i < 5; ++i) {
    out << (i == 0 ? ": " : "; ") << to_string(v[i].kind);
    if (!v[i].basis.empty()) {
      out << "(";
      for (std::size_t k = 0; k < v[i].basis.size(); ++k) out << (k ? "," : "") << v[i].basis[k];
      out << ")";
    }
    if (!v[i].detail.empty()) out << " " << v[i].detail;
  }
  if (v.size() > 5) out << "; ... (" << v.size() << " violations)";
  return out.str();
}

constexpr std::size_t kMaxViolations = 64;

// Products in the presentation given by the user, with unit products filled in.
struct UserRing {
  const RingData& data;
  std::size_t n;
  std::map<std::pair<std::size_t, std::size_t>, Vector> products;
  Matrix d;

  explicit UserRing(const RingData& r) : data(r), n(r.names.size()), products(r.products) {
    d = r.differential.rows() == 0 ? Matrix(n, n) : r.differential;
    std::optional<std::size_t> unit_index;
    for (std::size_t i = 0; i < n; ++i)
      if (r.unit == unit_vector(n, i)) unit_index = i;
    if (unit_index) {
      for (std::size_t j = 0; j < n; ++j) {
        products.try_emplace({*unit_index, j}, unit_vector(n, j));
        products.try_emplace({j, *unit_index}, unit_vector(n, j));
      }
    }
  }

  Vector prod(std::size_t i, std::size_t j) const {
    auto it = products.find({i, j});
    return it == products.end() ? Vector(n) : it->second;
  }

  Vector mul(const Vector& x, const Vector& y) const {
    Vector out(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (y[j] == 0) continue;
        auto it = products.find({i, j});
        if (it != products.end()) axpy(out, x[i] * y[j], it->second);
      }
    }
    return out;
  }

  Rational eps(const Vector& x) const {
    Rational s = 0;
    for (std::size_t i = 0; i < n; ++i) s += data.augmentation[i] * x[i];
    return s;
  }
};

std::vector<Vector> independent_subset(const std::vector<Vector>& vs, std::size_t ambient) {
  std::vector<Vector> out;
  Span span(ambient, {});
  for (const auto& v : vs) {
    if (is_zero(v) || span.contains(v)) continue;
    out.push_back(v);
    span = Span(ambient, out);
  }
  return out;
}

int homogeneous_degree(const Vector& v, const std::vector<int>& degrees) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return degrees[i];
  return 0;
}

std::string combination_name(const Vector& v, const std::vector<std::string>& names) {
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) support.push_back(i);
  if (support.size() == 1 && v[support[0]] == 1) return names[support[0]];
  std::string s = "(";
  bool first = true;
  for (std::size_t i : support) {
    Rational c = v[i];
    if (!first) s += c < 0 ? "-" : "+";
    else if (c < 0) s += "-";
    Rational a = abs(c);
    if (a != 1) s += format_rational(a) + "*";
    s += names[i];
    first = false;
  }
  return s + ")";
}

}  // namespace

RingValidationError::RingValidationError(std::vector<RingViolation> v)
    : std::runtime_error(describe_violations(v)), violations_(std::move(v)) {}

std::vector<RingViolation> check_ring(const RingData& r) {
  std::vector<RingViolation> out;
  const std::size_t n = r.names.size();
  auto malformed = [&](std::string what) {
    out.push_back({RingViolationKind::Malformed, {}, std::move(what)});
    return out;
  };
  if (n == 0) return malformed("empty basis");
  if (r.degrees.size() != n) return malformed("degree list has wrong length");
  if (r.unit.size() != n) return malformed("unit vector has wrong length");
  if (r.augmentation.size() != n) return malformed("augmentation has wrong length");
  if (r.differential.rows() != 0 && (r.differential.rows() != n || r.differential.cols() != n))
    return malformed("differential has wrong shape");
  {
    std::set<std::string> seen(r.names.begin(), r.names.end());
    if (seen.size() != n) return malformed("duplicate basis names");
  }
  for (const auto& [p, v] : r.products)
    if (p.first >= n || p.second >= n || v.size() != n) return malformed("product table entry out of range");

  UserRing u(r);
  const auto& deg = r.degrees;
  const auto& nm = r.names;
  auto add = [&](RingViolationKind k, std::vector<std::string> b, std::string detail = {}) {
    if (out.size() < kMaxViolations) out.push_back({k, std::move(b), std::move(detail)});
  };

  // homogeneity
  for (std::size_t i = 0; i < n; ++i)
    if (r.unit[i] != 0 && deg[i] != 0) add(RingViolationKind::NotHomogeneous, {nm[i]}, "unit has a component outside degree 0");
  for (const auto& [p, v] : u.products)
    for (std::size_t k = 0; k < n; ++k)
      if (v[k] != 0 && deg[k] != deg[p.first] + deg[p.second])
        add(RingViolationKind::NotHomogeneous, {nm[p.first], nm[p.second]}, "product leaves degree");
  const Matrix dt = u.d.transpose();
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& [i, x] : dt.row(j))
      if (deg[i] != deg[j] - 1) add(RingViolationKind::NotHomogeneous, {nm[j]}, "differential is not of degree -1");
  for (std::size_t i = 0; i < n; ++i)
    if (r.augmentation[i] != 0 && deg[i] != 0)
      add(RingViolationKind::NotHomogeneous, {nm[i]}, "augmentation nonzero outside degree 0");
  if (!out.empty()) return out;

  // unit
  for (std::size_t i = 0; i < n; ++i) {
    Vector e = unit_vector(n, i);
    if (u.mul(r.unit, e) != e || u.mul(e, r.unit) != e) add(RingViolationKind::NotUnital, {nm[i]});
  }
  // graded commutativity
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Vector a = u.prod(i, j), b = u.prod(j, i);
      if (deg[i] % 2 != 0 && deg[j] % 2 != 0) b = -b;
      if (a != b) add(RingViolationKind::NotCommutative, {nm[i], nm[j]});
    }
  // associativity
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Vector ij = u.prod(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        Vector lhs = u.mul(ij, unit_vector(n, k));
        Vector rhs = u.mul(unit_vector(n, i), u.prod(j, k));
        if (lhs != rhs) add(RingViolationKind::NotAssociative, {nm[i], nm[j], nm[k]});
      }
    }
  // differential
  Matrix dd = u.d * u.d;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_zero(dd.column(j))) add(RingViolationKind::NotSquareZeroDifferential, {nm[j]});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Vector lhs = u.d * u.prod(i, j);
      Vector rhs = u.mul(u.d * unit_vector(n, i), unit_vector(n, j));
      Vector second = u.mul(unit_vector(n, i), u.d * unit_vector(n, j));
      axpy(rhs, deg[i] % 2 == 0 ? 1 : -1, second);
      if (lhs != rhs) add(RingViolationKind::NotLeibniz, {nm[i], nm[j]});
    }
  // augmentation
  if (u.eps(r.unit) != 1) add(RingViolationKind::AugmentationNotMultiplicative, {}, "augmentation of the unit is not 1");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (u.eps(u.prod(i, j)) != r.augmentation[i] * r.augmentation[j])
        add(RingViolationKind::AugmentationNotMultiplicative, {nm[i], nm[j]});
  for (std::size_t j = 0; j < n; ++j)
    if (u.eps(u.d * unit_vector(n, j)) != 0) add(RingViolationKind::AugmentationNotDg, {nm[j]});
  if (!out.empty()) return out;

  // nilpotency of m = ker(augmentation)
  std::vector<Vector> m_gens;
  for (std::size_t i = 0; i < n; ++i) m_gens.push_back(unit_vector(n, i) - r.augmentation[i] * r.unit);
  std::vector<Vector> m_basis = independent_subset(m_gens, n);
  std::vector<Vector> power = m_basis;
  for (std::size_t step = 0; step <= n && !power.empty(); ++step) {
    std::vector<Vector> next;
    for (const auto& x : power)
      for (const auto& y : m_basis) next.push_back(u.mul(x, y));
    next = independent_subset(next, n);
    if (next.size() == power.size()) {
      std::set<std::string> involved;
      for (const auto& v : power)
        for (std::size_t k = 0; k < n; ++k)
          if (v[k] != 0) involved.insert(nm[k]);
      add(RingViolationKind::NotNilpotent, std::vector<std::string>(involved.begin(), involved.end()),
          "a nonzero power of the maximal ideal is idempotent");
      break;
    }
    power = std::move(next);
  }
  return out;
}

bool ArtinianCdga::is_nonnegatively_graded() const {
  return std::all_of(degrees_.begin(), degrees_.end(), [](int d) { return d >= 0; });
}

std::vector<std::size_t> ArtinianCdga::indices_at_level(int k) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim(); ++i)
    if (levels_[i] == k) out.push_back(i);
  return out;
}

std::size_t ArtinianCdga::count_up_to_level(int k) const {
  std::size_t c = 0;
  for (int l : levels_)
    if (l <= k) ++c;
  return c;
}

Complex ArtinianCdga::complex() const {
  std::map<int, std::vector<std::string>> labels;
  std::map<int, std::vector<std::size_t>> idx;
  for (std::size_t i = 0; i < dim(); ++i) {
    labels[degrees_[i]].push_back(names_[i]);
    idx[degrees_[i]].push_back(i);
  }
  std::map<int, Matrix> d;
  for (const auto& [n, cols] : idx) {
    auto it = idx.find(n - 1);
    if (it == idx.end()) continue;
    d[n] = d_.submatrix(it->second, cols);
  }
  return Complex(GradedSpace(labels), d);
}

ArtinianCdga ArtinianCdga::truncate(int n) const {
  if (n < 0) throw std::invalid_argument("truncate: negative level");
  std::size_t c = count_up_to_level(n);
  ArtinianCdga r;
  r.name_ = name_ + "/m^" + std::to_string(n + 1);
  r.names_.assign(names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(c));
  r.degrees_.assign(degrees_.begin(), degrees_.begin() + static_cast<std::ptrdiff_t>(c));
  r.levels_.assign(levels_.begin(), levels_.begin() + static_cast<std::ptrdiff_t>(c));
  r.nilpotency_ = *std::max_element(r.levels_.begin(), r.levels_.end()) + 1;
  r.mult_ = BilinearTable(c, c, c);
  for (std::size_t i = 0; i < c; ++i)
    for (const auto& [j, v] : mult_.row(i)) {
      if (j >= c) continue;
      for (const auto& [k, x] : v)
        if (k < c) r.mult_.add(i, j, k, x);
    }
  std::vector<std::size_t> prefix(c);
  for (std::size_t i = 0; i < c; ++i) prefix[i] = i;
  r.d_ = d_.submatrix(prefix, prefix);
  r.to_internal_ = Matrix::identity(c);
  r.to_user_ = Matrix::identity(c);
  r.user_names_ = r.names_;
  return r;
}

RingData ArtinianCdga::data() const {
  RingData out;
  out.names = names_;
  out.degrees = degrees_;
  out.unit = unit_vector(dim(), 0);
  for (std::size_t i = 0; i < dim(); ++i)
    for (const auto& [j, v] : mult_.row(i)) {
      Vector dense(dim());
      accumulate(dense, 1, v);
      out.products[{i, j}] = dense;
    }
  out.differential = d_;
  out.augmentation = unit_vector(dim(), 0);
  return out;
}

ArtinianCdga validate(const RingData& data) {
  auto violations = check_ring(data);
  if (!violations.empty()) throw RingValidationError(std::move(violations));
  UserRing u(data);
  const std::size_t n = u.n;
  const auto& deg = data.degrees;

  std::vector<Vector> user_m;  // e_i - eps(e_i) 1, the preferred candidates
  for (std::size_t i = 0; i < n; ++i) {
    Vector v = unit_vector(n, i) - data.augmentation[i] * data.unit;
    if (!is_zero(v)) user_m.push_back(v);
  }
  std::vector<std::vector<Vector>> powers;  // powers[k-1] = independent homogeneous basis of m^k
  powers.push_back(independent_subset(user_m, n));
  while (!powers.back().empty()) {
    std::vector<Vector> next;
    for (const auto& x : powers.back())
      for (const auto& y : powers.front()) next.push_back(u.mul(x, y));
    powers.push_back(independent_subset(next, n));
  }
  std::set<int> degree_set(deg.begin(), deg.end());

  std::vector<Vector> adapted{data.unit};
  std::vector<int> levels{0};
  for (std::size_t k = 0; k + 1 < powers.size(); ++k) {
    Span current(n, powers[k]);
    for (int g : degree_set) {
      std::vector<Vector> candidates;
      for (const auto& v : user_m)
        if (homogeneous_degree(v, deg) == g) candidates.push_back(v);
      for (const auto& v : powers[k])
        if (homogeneous_degree(v, deg) == g) candidates.push_back(v);
      std::vector<Vector> chosen = powers[k + 1];
      Span span(n, chosen);
      for (const auto& c : candidates) {
        if (!current.contains(c) || span.contains(c)) continue;
        chosen.push_back(c);
        span = Span(n, chosen);
        adapted.push_back(c);
        levels.push_back(static_cast<int>(k) + 1);
      }
    }
  }
  if (adapted.size() != n) throw std::logic_error("adapted basis construction lost dimensions");

  ArtinianCdga r;
  r.user_names_ = data.names;
  Matrix t = Matrix::from_columns(adapted, n);
  std::vector<Vector> inv_cols;
  for (std::size_t i = 0; i < n; ++i) inv_cols.push_back(*solve(t, unit_vector(n, i)));
  Matrix tinv = Matrix::from_columns(inv_cols, n);
  r.to_user_ = t;
  r.to_internal_ = tinv;
  for (const auto& v : adapted) {
    r.names_.push_back(combination_name(v, data.names));
    r.degrees_.push_back(homogeneous_degree(v, deg));
  }
  r.names_[0] = combination_name(data.unit, data.names);
  r.degrees_[0] = 0;
  r.levels_ = levels;
  r.nilpotency_ = *std::max_element(levels.begin(), levels.end()) + 1;
  r.mult_ = BilinearTable(n, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Vector p = tinv * u.mul(adapted[i], adapted[j]);
      for (std::size_t k = 0; k < n; ++k) r.mult_.add(i, j, k, p[k]);
    }
  r.d_ = tinv * u.d * t;
  return r;
}

ArtinianCdga ground_field() {
  RingData d;
  d.names = {"1"};
  d.degrees = {0};
  d.unit = {1};
  d.augmentation = {1};
  ArtinianCdga r = validate(d);
  r.set_name("k");
  return r;
}

ArtinianCdga truncated_polynomial(int n, int degree, const std::string& var) {
  if (n < 1) throw std::invalid_argument("truncated_polynomial: n must be positive");
  RingData d;
  for (int a = 0; a < n; ++a) {
    d.names.push_back(a == 0 ? "1" : (a == 1 ? var : var + "^" + std::to_string(a)));
    d.degrees.push_back(a * degree);
  }
  std::size_t sz = static_cast<std::size_t>(n);
  d.unit = unit_vector(sz, 0);
  d.augmentation = unit_vector(sz, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a + b < n) {
        Vector v(sz);
        v[static_cast<std::size_t>(a + b)] = 1;
        d.products[{static_cast<std::size_t>(a), static_cast<std::size_t>(b)}] = v;
      }
  ArtinianCdga r = validate(d);
  r.set_name("k[" + var + "]/" + var + "^" + std::to_string(n) + (degree != 0 ? " (|" + var + "|=" + std::to_string(degree) + ")" : ""));
  return r;
}

ArtinianCdga square_zero(const GradedSpace& v, const std::optional<Matrix>& dv) {
  RingData d;
  d.names.push_back("1");
  d.degrees.push_back(0);
  for (int g : v.degrees())
    for (const auto& l : v.labels(g)) {
      d.names.push_back(l);
      d.degrees.push_back(g);
    }
  const std::size_t n = d.names.size();
  d.unit = unit_vector(n, 0);
  d.augmentation = unit_vector(n, 0);
  if (dv) {
    if (dv->rows() != n - 1 || dv->cols() != n - 1) throw std::invalid_argument("square_zero: differential shape");
    Matrix full(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (const auto& [j, x] : dv->row(i)) full.set(i + 1, j + 1, x);
    d.differential = full;
  }
  ArtinianCdga r = validate(d);
  r.set_name("square-zero");
  return r;
}

ArtinianCdga square_zero(const std::vector<int>& degrees) {
  std::map<int, std::vector<std::string>> labels;
  for (std::size_t i = 0; i < degrees.size(); ++i) labels[degrees[i]].push_back("e" + std::to_string(i + 1));
  ArtinianCdga r = square_zero(GradedSpace(labels));
  std::string name = "square-zero(";
  for (std::size_t i = 0; i < degrees.size(); ++i) name += (i ? "," : "") + std::to_string(degrees[i]);
  r.set_name(name + ")");
  return r;
}

ArtinianCdga truncated_polynomial_ring(int variables, int bound) {
  static const char* var_names[] = {"x", "y", "z", "w", "u", "v"};
  if (variables < 1 || variables > 6 || bound < 1) throw std::invalid_argument("truncated_polynomial_ring: bad size");
  std::vector<std::vector<int>> monomials;
  std::vector<int> e(static_cast<std::size_t>(variables), 0);
  for (int total = 0; total < bound; ++total) {
    // all exponent vectors with the given total, in lexicographically decreasing order
    std::vector<std::vector<int>> layer;
    std::function<void(int, int, std::vector<int>&)> rec = [&](int pos, int left, std::vector<int>& cur) {
      if (pos == variables - 1) {
        cur[static_cast<std::size_t>(pos)] = left;
        layer.push_back(cur);
        return;
      }
      for (int a = left; a >= 0; --a) {
        cur[static_cast<std::size_t>(pos)] = a;
        rec(pos + 1, left - a, cur);
      }
    };
    rec(0, total, e);
    monomials.insert(monomials.end(), layer.begin(), layer.end());
  }
  RingData d;
  for (const auto& m : monomials) {
    std::string s;
    for (int v = 0; v < variables; ++v) {
      int a = m[static_cast<std::size_t>(v)];
      if (a == 0) continue;
      s += var_names[v];
      if (a > 1) s += "^" + std::to_string(a);
    }
    d.names.push_back(s.empty() ? "1" : s);
    d.degrees.push_back(0);
  }
  const std::size_t n = monomials.size();
  d.unit = unit_vector(n, 0);
  d.augmentation = unit_vector(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<int> s(monomials[i]);
      for (std::size_t k = 0; k < s.size(); ++k) s[k] += monomials[j][k];
      auto it = std::find(monomials.begin(), monomials.end(), s);
      if (it != monomials.end()) d.products[{i, j}] = unit_vector(n, static_cast<std::size_t>(it - monomials.begin()));
    }
  ArtinianCdga r = validate(d);
  r.set_name("k[" + std::to_string(variables) + " vars]/(deg>=" + std::to_string(bound) + ")");
  return r;
}

ArtinianCdga tensor_rings(const ArtinianCdga& r, const ArtinianCdga& s) {
  RingData d;
  const std::size_t a = r.dim(), b = s.dim(), n = a * b;
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      std::string name = i == 0 ? s.basis_names()[j] : (j == 0 ? r.basis_names()[i] : r.basis_names()[i] + s.basis_names()[j]);
      d.names.push_back(name);
      d.degrees.push_back(r.degree(i) + s.degree(j));
    }
  d.unit = unit_vector(n, 0);
  d.augmentation = unit_vector(n, 0);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j)
      for (std::size_t k = 0; k < a; ++k)
        for (std::size_t l = 0; l < b; ++l) {
          SparseVec ik = r.multiplication().entry(i, k), jl = s.multiplication().entry(j, l);
          if (ik.empty() || jl.empty()) continue;
          int sign = (s.degree(j) % 2 != 0 && r.degree(k) % 2 != 0) ? -1 : 1;
          Vector v(n);
          for (const auto& [p, x] : ik)
            for (const auto& [q, y] : jl) v[p * b + q] += sign * x * y;
          d.products[{i * b + j, k * b + l}] = v;
        }
  Matrix dm(n, n);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      std::size_t col = i * b + j;
      for (std::size_t p = 0; p < a; ++p) {
        Rational x = r.differential().at(p, i);
        if (x != 0) dm.add(p * b + j, col, x);
      }
      int sign = r.degree(i) % 2 == 0 ? 1 : -1;
      for (std::size_t q = 0; q < b; ++q) {
        Rational y = s.differential().at(q, j);
        if (y != 0) dm.add(i * b + q, col, sign * y);
      }
    }
  d.differential = dm;
  ArtinianCdga t = validate(d);
  t.set_name(r.name() + " (x) " + s.name());
  return t;
}

Complex SmallExtension::kernel_complex() const {
  std::map<int, std::vector<std::string>> labels;
  std::map<int, std::vector<std::size_t>> idx;
  for (std::size_t i : kernel) {
    labels[total.degree(i)].push_back(total.basis_names()[i]);
    idx[total.degree(i)].push_back(i);
  }
  std::map<int, Matrix> d;
  for (const auto& [n, cols] : idx) {
    auto it = idx.find(n - 1);
    if (it != idx.end()) d[n] = total.differential().submatrix(it->second, cols);
  }
  return Complex(GradedSpace(labels), d);
}

void verify_small_extension(const SmallExtension& e) {
  const auto& r = e.total;
  const auto& q = e.quotient;
  if (e.projection.rows() != q.dim() || e.projection.cols() != r.dim()) throw std::logic_error("projection shape");
  if (rank(e.projection) != q.dim()) throw std::logic_error("projection is not surjective");
  if (e.projection * e.section != Matrix::identity(q.dim())) throw std::logic_error("section does not split projection");
  for (std::size_t i = 0; i < r.dim(); ++i) {
    Vector ei = unit_vector(r.dim(), i);
    if (e.projection * r.d(ei) != q.d(e.projection * ei)) throw std::logic_error("projection does not commute with d");
    for (std::size_t j = 0; j < r.dim(); ++j) {
      Vector ej = unit_vector(r.dim(), j);
      if (e.projection * r.multiply(ei, ej) != q.multiply(e.projection * ei, e.projection * ej))
        throw std::logic_error("projection is not multiplicative");
    }
  }
  if (e.projection * unit_vector(r.dim(), 0) != unit_vector(q.dim(), 0)) throw std::logic_error("projection is not unital");
  std::vector<Vector> kernel_vectors;
  for (std::size_t i : e.kernel) kernel_vectors.push_back(unit_vector(r.dim(), i));
  auto ker = kernel_basis(e.projection);
  if (ker.size() != kernel_vectors.size()) throw std::logic_error("kernel dimension mismatch");
  Span ks(r.dim(), kernel_vectors);
  for (const auto& v : ker)
    if (!ks.contains(v)) throw std::logic_error("kernel of projection differs from I");
  for (std::size_t i : e.kernel)
    for (std::size_t j = 1; j < r.dim(); ++j)
      if (!r.multiplication().entry(i, j).empty() || !r.multiplication().entry(j, i).empty())
        throw std::logic_error("I.m(R) != 0 at " + r.basis_names()[i] + "*" + r.basis_names()[j]);
}

SmallExtension tower_step(const ArtinianCdga& r, int n) {
  if (n < 1 || n >= r.nilpotency_index()) throw std::invalid_argument("tower_step: level out of range");
  SmallExtension e;
  e.total = r.truncate(n);
  e.quotient = r.truncate(n - 1);
  if (n + 1 == r.nilpotency_index()) {
    std::string name = r.name();
    e.total.set_name(name);
  }
  e.projection = Matrix(e.quotient.dim(), e.total.dim());
  for (std::size_t i = 0; i < e.quotient.dim(); ++i) e.projection.set(i, i, 1);
  e.section = e.projection.transpose();
  e.kernel = e.total.indices_at_level(n);
  return e;
}

std::vector<SmallExtension> madic_tower(const ArtinianCdga& r) {
  std::vector<SmallExtension> out;
  for (int n = 1; n < r.nilpotency_index(); ++n) out.push_back(tower_step(r, n));
  return out;
}

}  // namespace deform
