#include "deform/io.hpp"

#include <algorithm>
#include <regex>

#include "deform/mc.hpp"

namespace deform {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw ValidationFailed("Malformed", what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) malformed(where + ": missing \"" + key + "\"");
  return j.at(key);
}

std::size_t lookup(const std::map<std::string, std::size_t>& index, const Json& name, const std::string& where) {
  if (!name.is_string()) malformed(where + ": basis names must be strings");
  auto it = index.find(name.get<std::string>());
  if (it == index.end()) malformed(where + ": unknown basis element \"" + name.get<std::string>() + "\"");
  return it->second;
}

std::map<std::string, std::size_t> name_index(const std::vector<std::string>& names, const std::string& where) {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!out.emplace(names[i], i).second) malformed(where + ": duplicate basis name \"" + names[i] + "\"");
  return out;
}

// [[name, "p/q"], ...] as a dense vector
Vector combination(const Json& j, const std::map<std::string, std::size_t>& index, std::size_t dim,
                   const std::string& where) {
  Vector out(dim);
  if (!j.is_array()) malformed(where + ": expected a list of [basis, coefficient] pairs");
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2) malformed(where + ": expected [basis, coefficient]");
    out[lookup(index, term[0], where)] += rational_from_json(term[1]);
  }
  return out;
}

Json combination_to_json(const Vector& v, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) out.push_back(Json::array({names[i], format_rational(v[i])}));
  return out;
}

int parse_int(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    malformed(where + ": \"" + s + "\" is not an integer");
  }
}

ArtinianCdga builtin_ring(const std::string& name, int degree) {
  std::smatch m;
  if (name == "k") return ground_field();
  if (std::regex_match(name, m, std::regex(R"(k\[(\w+)\]/\1\^(\d+))"))) {
    int n = std::stoi(m[2]);
    if (n < 1) malformed("ring \"" + name + "\": exponent must be positive");
    if (degree % 2 != 0 && n > 2) malformed("ring \"" + name + "\": odd generators need exponent at most 2");
    return truncated_polynomial(n, degree, m[1]);
  }
  if (std::regex_match(name, m, std::regex(R"(square-zero\(([-\d,\s]*)\))"))) {
    std::vector<int> degs;
    std::string body = m[1];
    std::regex item(R"(-?\d+)");
    for (auto it = std::sregex_iterator(body.begin(), body.end(), item); it != std::sregex_iterator(); ++it)
      degs.push_back(std::stoi(it->str()));
    return square_zero(degs);
  }
  if (std::regex_match(name, m, std::regex(R"(truncated\((\d+),\s*(\d+)\))")))
    return truncated_polynomial_ring(std::stoi(m[1]), std::stoi(m[2]));
  malformed("unknown builtin ring \"" + name + "\"");
}

std::string ainfty_kind(int arity, bool strict) {
  if (arity == 1) return "DifferentialSquare";
  if (arity == 2) return "NotLeibniz";
  if (arity == 3 && strict) return "NotAssociative";
  return "NotAInfinity";
}

}  // namespace

Rational rational_from_json(const Json& j) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    malformed(std::string("bad rational: ") + e.what());
  }
  malformed("rationals must be integers or \"p/q\" strings, got " + j.dump());
}

Json to_json(const Rational& x) { return format_rational(x); }

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(format_rational(x));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) malformed("expected a vector");
  Vector out;
  for (const auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

Json dense_to_json(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(format_rational(m.at(i, j)));
    out.push_back(row);
  }
  return out;
}

Json sparse_to_json(const Matrix& m) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto& [j, x] : m.row(i)) entries.push_back(Json::array({i, j, format_rational(x)}));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Matrix matrix_from_json(const Json& j, std::optional<std::size_t> rows, std::optional<std::size_t> cols) {
  if (j.is_object()) {
    const std::size_t r = field(j, "rows", "matrix").get<std::size_t>(), c = field(j, "cols", "matrix").get<std::size_t>();
    if ((rows && *rows != r) || (cols && *cols != c)) malformed("matrix has the wrong shape");
    Matrix m(r, c);
    for (const auto& e : field(j, "entries", "matrix")) {
      if (!e.is_array() || e.size() != 3) malformed("sparse entries are [row, col, value]");
      const std::size_t i = e[0].get<std::size_t>(), k = e[1].get<std::size_t>();
      if (i >= r || k >= c) malformed("sparse entry out of range");
      m.add(i, k, rational_from_json(e[2]));
    }
    return m;
  }
  if (!j.is_array()) malformed("expected a matrix");
  const std::size_t r = j.size();
  std::size_t c = r == 0 ? cols.value_or(0) : j[0].size();
  if ((rows && *rows != r) || (cols && *cols != c)) malformed("matrix has the wrong shape");
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (!j[i].is_array() || j[i].size() != c) malformed("matrix rows have different lengths");
    for (std::size_t k = 0; k < c; ++k) m.set(i, k, rational_from_json(j[i][k]));
  }
  return m;
}

Complex complex_from_json(const Json& j) {
  const Json& degs = field(j, "degrees", "complex");
  const bool cochain = j.value("grading", std::string("homological")) == "cochain";
  if (!degs.is_object()) malformed("complex: \"degrees\" must map degrees to basis names");
  std::map<int, std::vector<std::string>> labels;
  for (const auto& [key, names] : degs.items()) {
    const int deg = parse_int(key, "complex degrees");
    auto& out = labels[cochain ? -deg : deg];
    for (const auto& n : names) {
      if (!n.is_string()) malformed("complex: basis names must be strings");
      out.push_back(n.get<std::string>());
    }
  }
  GradedSpace space(labels);
  std::map<int, Matrix> d;
  if (j.contains("differential")) {
    for (const auto& [key, mat] : j.at("differential").items()) {
      const int deg = parse_int(key, "complex differential");
      const int n = cochain ? -deg : deg;  // homological source degree
      d[n] = matrix_from_json(mat, space.dim(n - 1), space.dim(n));
    }
  }
  try {
    return Complex(space, d, cochain ? Orientation::cochain : Orientation::chain);
  } catch (const InvalidComplex& e) {
    throw ValidationFailed("DifferentialSquare", e.what());
  }
}

Json complex_to_json(const Complex& c) {
  Json degs = Json::object(), d = Json::object();
  for (int n : c.degrees()) {
    degs[std::to_string(n)] = c.space().labels(n);
    Matrix m = c.d(n);
    if (!m.is_zero()) d[std::to_string(n)] = dense_to_json(m);
  }
  return Json{{"grading", "homological"}, {"degrees", degs}, {"differential", d}};
}

ArtinianCdga ring_from_json(const Json& j) {
  if (j.is_string()) return builtin_ring(j.get<std::string>(), 0);
  if (j.contains("builtin")) {
    ArtinianCdga r = builtin_ring(j.at("builtin").get<std::string>(), j.value("degree", 0));
    return r;
  }
  RingData data;
  const Json& basis = field(j, "basis", "ring");
  for (const auto& b : basis) {
    data.names.push_back(field(b, "name", "ring basis").get<std::string>());
    data.degrees.push_back(field(b, "degree", "ring basis").get<int>());
  }
  const auto index = name_index(data.names, "ring");
  const std::size_t n = data.names.size();
  const Json& unit = field(j, "unit", "ring");
  data.unit = unit.is_string() ? unit_vector(n, lookup(index, unit, "ring unit")) : combination(unit, index, n, "ring unit");
  if (j.contains("products"))
    for (const auto& p : j.at("products")) {
      const std::size_t a = lookup(index, field(p, "left", "ring product"), "ring product");
      const std::size_t b = lookup(index, field(p, "right", "ring product"), "ring product");
      data.products[{a, b}] = combination(field(p, "result", "ring product"), index, n, "ring product");
    }
  if (j.contains("differential")) {
    data.differential = Matrix(n, n);
    for (const auto& e : j.at("differential")) {
      const std::size_t s = lookup(index, field(e, "source", "ring differential"), "ring differential");
      const Vector img = combination(field(e, "result", "ring differential"), index, n, "ring differential");
      for (std::size_t i = 0; i < n; ++i)
        if (img[i] != 0) data.differential.set(i, s, img[i]);
    }
  }
  data.augmentation = Vector(n);
  if (j.contains("augmentation")) {
    for (const auto& [name, v] : j.at("augmentation").items())
      data.augmentation[lookup(index, Json(name), "ring augmentation")] = rational_from_json(v);
  } else {
    data.augmentation = data.unit;  // the unit is the only element not in m
  }
  try {
    ArtinianCdga r = validate(data);
    r.set_name(j.value("name", std::string("R")));
    return r;
  } catch (const RingValidationError& e) {
    throw ValidationFailed(to_string(e.first_kind()), e.what());
  }
}

Json ring_to_json(const ArtinianCdga& r) {
  const RingData d = r.data();
  Json basis = Json::array(), products = Json::array(), diff = Json::array();
  for (std::size_t i = 0; i < d.names.size(); ++i) basis.push_back({{"name", d.names[i]}, {"degree", d.degrees[i]}});
  for (const auto& [pair, v] : d.products) {
    if (pair.first == 0 || pair.second == 0 || is_zero(v)) continue;
    products.push_back({{"left", d.names[pair.first]}, {"right", d.names[pair.second]},
                        {"result", combination_to_json(v, d.names)}});
  }
  for (std::size_t s = 0; s < d.names.size(); ++s) {
    Vector img = d.differential.column(s);
    if (!is_zero(img)) diff.push_back({{"source", d.names[s]}, {"result", combination_to_json(img, d.names)}});
  }
  return Json{{"name", r.name()}, {"basis", basis}, {"unit", d.names[0]}, {"products", products},
              {"differential", diff}, {"augmentation", Json{{d.names[0], "1"}}}};
}

Dgla dgla_from_json(const Json& j) {
  std::vector<std::string> names;
  std::vector<int> degrees;
  for (const auto& b : field(j, "basis", "dgla")) {
    names.push_back(field(b, "name", "dgla basis").get<std::string>());
    degrees.push_back(field(b, "degree", "dgla basis").get<int>());
  }
  const auto index = name_index(names, "dgla");
  const std::size_t n = names.size();
  Matrix d(n, n);
  if (j.contains("differential"))
    for (const auto& e : j.at("differential")) {
      const std::size_t s = lookup(index, field(e, "source", "dgla differential"), "dgla differential");
      const Vector img = combination(field(e, "result", "dgla differential"), index, n, "dgla differential");
      for (std::size_t i = 0; i < n; ++i)
        if (img[i] != 0) d.set(i, s, img[i]);
    }
  std::map<std::pair<std::size_t, std::size_t>, Vector> given;
  if (j.contains("brackets"))
    for (const auto& e : j.at("brackets")) {
      const std::size_t a = lookup(index, field(e, "left", "dgla bracket"), "dgla bracket");
      const std::size_t b = lookup(index, field(e, "right", "dgla bracket"), "dgla bracket");
      given[{a, b}] = combination(field(e, "result", "dgla bracket"), index, n, "dgla bracket");
    }
  BilinearTable br(n, n, n);
  for (const auto& [pair, v] : given) {
    for (std::size_t k = 0; k < n; ++k)
      if (v[k] != 0) br.add(pair.first, pair.second, k, v[k]);
    const std::pair<std::size_t, std::size_t> rev{pair.second, pair.first};
    if (rev != pair && !given.count(rev)) {
      const int s = -sign_of_parity(static_cast<long long>(degrees[pair.first]) * degrees[pair.second]);
      for (std::size_t k = 0; k < n; ++k)
        if (v[k] != 0) br.add(rev.first, rev.second, k, s * v[k]);
    }
  }
  Dgla l(names, degrees, d, br);
  auto violations = check_dgla(l);
  if (!violations.empty()) {
    std::string detail;
    for (const auto& b : violations.front().basis) detail += (detail.empty() ? "" : ", ") + b;
    throw ValidationFailed(to_string(violations.front().kind), "dgla axiom fails on " + detail);
  }
  return l;
}

Json dgla_to_json(const Dgla& l) {
  Json basis = Json::array(), diff = Json::array(), brackets = Json::array();
  for (std::size_t i = 0; i < l.dim(); ++i) basis.push_back({{"name", l.names()[i]}, {"degree", l.degree(i)}});
  for (std::size_t s = 0; s < l.dim(); ++s) {
    Vector img = l.differential().column(s);
    if (!is_zero(img)) diff.push_back({{"source", l.names()[s]}, {"result", combination_to_json(img, l.names())}});
  }
  for (std::size_t a = 0; a < l.dim(); ++a)
    for (const auto& [b, v] : l.bracket_table().row(a)) {
      if (v.empty()) continue;
      Json res = Json::array();
      for (const auto& [k, x] : v) res.push_back(Json::array({l.names()[k], format_rational(x)}));
      brackets.push_back({{"left", l.names()[a]}, {"right", l.names()[b]}, {"result", res}});
    }
  return Json{{"basis", basis}, {"differential", diff}, {"brackets", brackets}};
}

AlgebraDecl algebra_from_json(const Json& j, const std::map<std::string, Complex>& complexes) {
  AlgebraDecl a;
  const Json& c = field(j, "complex", "algebra");
  if (c.is_string()) {
    auto it = complexes.find(c.get<std::string>());
    if (it == complexes.end()) malformed("algebra: unknown complex \"" + c.get<std::string>() + "\"");
    a.complex = it->second;
  } else {
    a.complex = complex_from_json(c);
  }
  const FlatBasis b = flat_basis(a.complex);
  const std::size_t dim = b.dim();
  const auto index = name_index(b.labels, "algebra");
  BilinearTable mu(dim, dim, dim);
  if (j.contains("products"))
    for (const auto& p : j.at("products")) {
      const std::size_t x = lookup(index, field(p, "left", "algebra product"), "algebra product");
      const std::size_t y = lookup(index, field(p, "right", "algebra product"), "algebra product");
      const Vector v = combination(field(p, "result", "algebra product"), index, dim, "algebra product");
      for (std::size_t k = 0; k < dim; ++k) {
        if (v[k] == 0) continue;
        if (b.degrees[k] != b.degrees[x] + b.degrees[y])
          throw ValidationFailed("Degree", "product " + b.labels[x] + "." + b.labels[y] + " has the wrong degree");
        mu.add(x, y, k, v[k]);
      }
    }
  a.structure = strict_structure(a.complex, mu);
  if (j.contains("higher"))
    for (const auto& h : j.at("higher")) {
      const Json& ins = field(h, "inputs", "higher operation");
      const int n = static_cast<int>(ins.size());
      if (n < 3) malformed("higher operations need arity at least 3");
      std::vector<std::size_t> in;
      int deg = n - 2;
      for (const auto& x : ins) {
        in.push_back(lookup(index, x, "higher operation"));
        deg += b.degrees[in.back()];
      }
      const Vector v = combination(field(h, "result", "higher operation"), index, dim, "higher operation");
      auto& slot = a.structure.m[n];
      std::size_t size = 1;
      for (int k = 0; k <= n; ++k) size *= dim;
      if (slot.size() != size) slot = Vector(size);
      for (std::size_t o = 0; o < dim; ++o) {
        if (v[o] == 0) continue;
        if (b.degrees[o] != deg) throw ValidationFailed("Degree", "higher operation has the wrong degree");
        slot[multilinear_index(dim, o, in)] += v[o];
      }
      a.strict = false;
    }
  return a;
}

Vector element_from_json(const Json& j, const Dgla& l, const ArtinianCdga& r) {
  const auto lindex = name_index(l.names(), "dgla");
  const auto rindex = name_index(r.user_names(), "ring");
  const std::size_t rm = r.dim() - 1;
  Vector out(l.dim() * rm);
  if (!j.is_array()) malformed("elements are lists of {basis, ring, value}");
  for (const auto& t : j) {
    const std::size_t a = lookup(lindex, field(t, "basis", "element"), "element");
    const std::size_t u = lookup(rindex, field(t, "ring", "element"), "element");
    const Rational x = rational_from_json(field(t, "value", "element"));
    const Vector internal = r.to_internal() * unit_vector(r.dim(), u);
    if (internal[0] != 0) malformed("element coefficients must lie in the maximal ideal");
    for (std::size_t k = 1; k < r.dim(); ++k)
      if (internal[k] != 0) out[a * rm + k - 1] += x * internal[k];
  }
  return out;
}

Json element_to_json(const Vector& w, const Dgla& l, const ArtinianCdga& r) {
  Json out = Json::array();
  const std::size_t rm = r.dim() - 1;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] != 0)
      out.push_back({{"basis", l.names()[i / rm]}, {"ring", r.basis_names()[i % rm + 1]}, {"value", format_rational(w[i])}});
  return out;
}

Problem load_problem(const Json& j, int cutoff_for_checks) {
  if (!j.is_object()) malformed("problem file must be a JSON object");
  Problem p;
  if (j.contains("rings"))
    for (const auto& [name, r] : j.at("rings").items()) {
      p.rings[name] = ring_from_json(r);
      p.rings[name].set_name(name);
    }
  if (j.contains("complexes"))
    for (const auto& [name, c] : j.at("complexes").items()) p.complexes[name] = complex_from_json(c);
  if (j.contains("dglas"))
    for (const auto& [name, l] : j.at("dglas").items()) p.dglas[name] = dgla_from_json(l);
  if (j.contains("algebras"))
    for (const auto& [name, a] : j.at("algebras").items()) {
      AlgebraDecl decl = algebra_from_json(a, p.complexes);
      const int cutoff = std::max(3, cutoff_for_checks);
      auto check = ainfty_check(decl.complex, decl.structure, cutoff);
      if (auto* v = std::get_if<AInftyViolation>(&check))
        throw ValidationFailed(ainfty_kind(v->arity, decl.strict),
                               "algebra \"" + name + "\" fails the Stasheff identity in arity " + std::to_string(v->arity));
      p.algebras[name] = decl;
    }
  if (j.contains("contramodules"))
    for (const auto& [name, m] : j.at("contramodules").items()) {
      ModuleDecl decl;
      decl.complex = field(m, "complex", "contramodule").get<std::string>();
      decl.ring = field(m, "ring", "contramodule").get<std::string>();
      if (!p.complexes.count(decl.complex)) malformed("contramodule: unknown complex \"" + decl.complex + "\"");
      if (!p.rings.count(decl.ring)) malformed("contramodule: unknown ring \"" + decl.ring + "\"");
      decl.base = p.complexes.at(decl.complex);
      decl.r = p.rings.at(decl.ring);
      const FlatBasis b = flat_basis(decl.base);
      const auto index = name_index(b.labels, "contramodule");
      const auto rindex = name_index(decl.r.user_names(), "ring");
      const std::size_t nv = b.dim(), rm = decl.r.dim() - 1;
      decl.omega = Vector(nv * nv * rm);
      if (m.contains("omega"))
        for (const auto& t : m.at("omega")) {
          const std::size_t out = lookup(index, field(t, "out", "omega"), "omega");
          const std::size_t in = lookup(index, field(t, "in", "omega"), "omega");
          const std::size_t u = lookup(rindex, field(t, "ring", "omega"), "omega");
          const Rational x = rational_from_json(field(t, "value", "omega"));
          const Vector internal = decl.r.to_internal() * unit_vector(decl.r.dim(), u);
          if (internal[0] != 0) malformed("omega coefficients must lie in the maximal ideal");
          for (std::size_t k = 1; k < decl.r.dim(); ++k)
            if (internal[k] != 0) decl.omega[(out * nv + in) * rm + k - 1] += x * internal[k];
        }
      try {
        realize_module(decl.base, decl.omega, decl.r);
      } catch (const NotMaurerCartan& e) {
        throw ValidationFailed("NotMaurerCartan", "contramodule \"" + name + "\": " + e.what());
      } catch (const DegreeMismatch& e) {
        throw ValidationFailed("Degree", "contramodule \"" + name + "\": " + e.what());
      }
      p.contramodules[name] = decl;
    }
  if (j.contains("pipeline")) p.pipeline = j.at("pipeline");
  return p;
}

}  // namespace deform
