#include "deform/pipeline.hpp"

#include <algorithm>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "deform/category.hpp"
#include "deform/contra.hpp"
#include "deform/dictionary.hpp"
#include "deform/mc.hpp"
#include "deform/operad.hpp"

namespace deform {

namespace {

Rational dot(const Vector& a, const Vector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Matrix column_matrix(const Vector& v) { return Matrix::from_columns({v}, v.size()); }

Matrix columns_matrix(const std::vector<Vector>& cols, std::size_t rows) { return Matrix::from_columns(cols, rows); }

// Row-major vectorization of a matrix.
Vector vec(const Matrix& m) {
  Vector out(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto& [j, x] : m.row(i)) out[i * m.cols() + j] = x;
  return out;
}

Json mat(const Matrix& m) { return sparse_to_json(m); }

Matrix claim_matrix(const Json& j) {
  if (j.is_array() && (j.empty() || !j[0].is_array())) return column_matrix(vector_from_json(j));
  return matrix_from_json(j);
}

std::optional<Matrix> product(const Json& factors, std::string& err) {
  if (!factors.is_array() || factors.empty()) {
    err = "empty product";
    return std::nullopt;
  }
  Matrix p = claim_matrix(factors[0]);
  for (std::size_t i = 1; i < factors.size(); ++i) {
    Matrix f = claim_matrix(factors[i]);
    if (p.cols() != f.rows()) {
      err = "factor shapes do not compose";
      return std::nullopt;
    }
    p = p * f;
  }
  return p;
}

// y with y^T A = 0 and y.b = 1, when A x = b has no solution.
std::optional<Vector> infeasibility_witness(const Matrix& a, const Vector& b) {
  Matrix sys = Matrix::vstack(a.transpose(), Matrix::from_dense({b}, b.size()));
  Vector rhs(sys.rows());
  rhs.back() = 1;
  return solve(sys, rhs);
}

Json infeasible_claim(const Matrix& a, const Vector& b, const Vector& y) {
  return Json{{"kind", "infeasible"}, {"A", mat(a)}, {"b", to_json(b)}, {"y", to_json(y)}};
}

Json solution_claim(const Matrix& a, const Matrix& x, const Matrix& b) {
  return Json{{"kind", "solution"}, {"A", mat(a)}, {"X", mat(x)}, {"B", mat(b)}};
}

Json products_equal(const std::vector<Matrix>& left, const std::vector<Matrix>& right) {
  Json l = Json::array(), r = Json::array();
  for (const auto& m : left) l.push_back(mat(m));
  for (const auto& m : right) r.push_back(mat(m));
  return Json{{"kind", "products_equal"}, {"left", l}, {"right", r}};
}

Json product_zero(const std::vector<Matrix>& factors) {
  Json f = Json::array();
  for (const auto& m : factors) f.push_back(mat(m));
  return Json{{"kind", "product_zero"}, {"factors", f}};
}

// Block of the differential of l from degree k to degree k + 1.
Matrix degree_block(const Dgla& l, int k) {
  return l.differential().submatrix(l.indices_of_degree(k + 1), l.indices_of_degree(k));
}

Json homology_claim(const Dgla& l, int k, std::size_t dim) {
  return Json{{"kind", "homology_dimension"},
              {"in", mat(degree_block(l, k - 1))},
              {"out", mat(degree_block(l, k))},
              {"middle", l.indices_of_degree(k).size()},
              {"dim", dim}};
}

std::size_t homology_dim(const Dgla& l, int k) {
  return homology_at(degree_block(l, k - 1), degree_block(l, k), l.indices_of_degree(k).size()).dim;
}

// Enumerates 0, the basis vectors, then distinct combinations with coefficients in [-h, h].
std::vector<Vector> structured_family(const std::vector<Vector>& basis, std::size_t dim, std::size_t want, int height,
                                      std::mt19937& rng) {
  std::vector<Vector> out{Vector(dim)};
  std::set<Vector> seen{Vector(dim)};
  for (const auto& b : basis) {
    if (out.size() >= want) return out;
    if (seen.insert(b).second) out.push_back(b);
  }
  if (basis.empty() || height < 1) return out;
  const int span = 2 * height + 1;
  for (std::size_t attempt = 0; out.size() < want && attempt < 64 * want; ++attempt) {
    Vector v(dim);
    for (const auto& b : basis) axpy(v, Rational(static_cast<long>(rng() % span) - height), b);
    if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

std::vector<Vector> first_order_cocycles(const Dgla& l, const ArtinianCdga& r) {
  if (r.dim() <= 1) return {};
  const auto tower = madic_tower(r);
  auto res = lift_mc(l, tower.front(), Vector(0));
  return std::get<LiftedMc>(res).torsor_basis;
}

struct Target {
  std::string kind, name;
};

Target target_of(const Problem& problem) {
  const Json& req = problem.pipeline;
  if (!req.is_object() || !req.contains("object") || !req.at("object").is_object() || req.at("object").size() != 1)
    throw ValidationFailed("Malformed", "pipeline.object must name exactly one declared object");
  const auto& [kind, name] = *req.at("object").items().begin();
  Target t{kind, name.get<std::string>()};
  const bool found = (t.kind == "complex" && problem.complexes.count(t.name)) ||
                     (t.kind == "algebra" && problem.algebras.count(t.name)) ||
                     (t.kind == "dgla" && problem.dglas.count(t.name)) ||
                     (t.kind == "contramodule" && problem.contramodules.count(t.name));
  if (!found) throw ValidationFailed("Malformed", "pipeline.object: no " + t.kind + " named \"" + t.name + "\"");
  return t;
}

ArtinianCdga ring_of(const Problem& problem, const Target& t) {
  const Json& req = problem.pipeline;
  if (req.contains("ring")) {
    const std::string name = req.at("ring").get<std::string>();
    if (!problem.rings.count(name)) throw ValidationFailed("Malformed", "pipeline.ring: unknown ring \"" + name + "\"");
    return problem.rings.at(name);
  }
  if (t.kind == "contramodule") return problem.contramodules.at(t.name).r;
  throw ValidationFailed("Malformed", "pipeline.ring is required");
}

DeformationModel model_of(const Problem& problem, const Target& t, int cutoff) {
  if (t.kind == "complex") return complex_model(problem.complexes.at(t.name));
  if (t.kind == "contramodule") return complex_model(problem.contramodules.at(t.name).base);
  if (t.kind == "algebra") {
    const AlgebraDecl& a = problem.algebras.at(t.name);
    return algebra_model(a.complex, a.structure, cutoff);
  }
  throw ValidationFailed("Malformed", "this pipeline needs a complex, algebra or contramodule object");
}

Dgla lie_of(const Problem& problem, const Target& t, int cutoff) {
  if (t.kind == "dgla") return problem.dglas.at(t.name);
  if (t.kind == "algebra") {
    const AlgebraDecl& a = problem.algebras.at(t.name);
    ConvolutionDgla c = build_convolution(a.complex, cutoff, true);
    return twist(c.dgla, structure_to_mc(c, a.structure));
  }
  return model_of(problem, t, cutoff).lie;
}

Json ring_json(const ArtinianCdga& r) { return ring_to_json(r); }

Matrix projection_to_base(const ContraModule& m) {
  const std::size_t rd = m.ring.dim(), n = m.base_dim();
  Matrix p(n, n * rd);
  for (std::size_t i = 0; i < n; ++i) p.set(i, i * rd, 1);
  return p;
}

std::string format_vector(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_rational(v[i]);
  return s + ")";
}

}  // namespace

std::pair<int, int> parse_window(const std::string& s) {
  std::smatch m;
  if (!std::regex_match(s, m, std::regex(R"(\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*)")))
    throw ValidationFailed("Malformed", "window must look like LO..HI, got \"" + s + "\"");
  const int lo = std::stoi(m[1]), hi = std::stoi(m[2]);
  if (lo > hi) throw ValidationFailed("Malformed", "window " + s + " is empty");
  return {lo, hi};
}

PipelineParams params_from_json(const Json& request, PipelineParams p) {
  if (!request.is_object()) return p;
  try {
    if (request.contains("cutoff")) p.cutoff = request.at("cutoff").get<int>();
    if (request.contains("samples")) p.samples = request.at("samples").get<int>();
    if (request.contains("seed")) p.seed = request.at("seed").get<unsigned>();
    if (request.contains("height")) p.height = request.at("height").get<int>();
    if (request.contains("window")) {
      const Json& w = request.at("window");
      if (w.is_string())
        p.window = parse_window(w.get<std::string>());
      else
        p.window = std::make_pair(w.at(0).get<int>(), w.at(1).get<int>());
    }
  } catch (const Json::exception& e) {
    throw ValidationFailed("Malformed", std::string("pipeline parameters: ") + e.what());
  }
  if (p.cutoff < 2) throw ValidationFailed("Malformed", "cutoff must be at least 2");
  if (p.samples < 1) throw ValidationFailed("Malformed", "samples must be positive");
  return p;
}

std::optional<std::string> verify_claim(const Json& c) {
  try {
    const std::string kind = c.at("kind").get<std::string>();
    std::string err;
    if (kind == "product_zero") {
      auto p = product(c.at("factors"), err);
      if (!p) return err;
      if (!p->is_zero()) return std::string("product is nonzero");
      return std::nullopt;
    }
    if (kind == "products_equal") {
      auto l = product(c.at("left"), err);
      auto r = l ? product(c.at("right"), err) : std::nullopt;
      if (!l || !r) return err;
      if (l->rows() != r->rows() || l->cols() != r->cols() || *l != *r) return std::string("products differ");
      return std::nullopt;
    }
    if (kind == "solution") {
      Matrix a = claim_matrix(c.at("A")), x = claim_matrix(c.at("X")), b = claim_matrix(c.at("B"));
      if (a.cols() != x.rows() || a.rows() != b.rows() || x.cols() != b.cols()) return std::string("shape mismatch");
      if (a * x != b) return std::string("A X != B");
      return std::nullopt;
    }
    if (kind == "infeasible") {
      Matrix a = claim_matrix(c.at("A"));
      Vector b = vector_from_json(c.at("b")), y = vector_from_json(c.at("y"));
      if (b.size() != a.rows() || y.size() != a.rows()) return std::string("shape mismatch");
      if (!is_zero(a.transpose() * y)) return std::string("y^T A != 0");
      if (dot(y, b) == 0) return std::string("y . b == 0");
      return std::nullopt;
    }
    if (kind == "rank") {
      if (rank(claim_matrix(c.at("matrix"))) != c.at("rank").get<std::size_t>()) return std::string("rank differs");
      return std::nullopt;
    }
    if (kind == "homology_dimension") {
      const std::size_t mid = c.at("middle").get<std::size_t>();
      Matrix in = matrix_from_json(c.at("in")), out = matrix_from_json(c.at("out"));
      if (in.rows() != mid || out.cols() != mid) return std::string("shape mismatch");
      if (mid - rank(out) - rank(in) != c.at("dim").get<std::size_t>()) return std::string("homology dimension differs");
      return std::nullopt;
    }
    if (kind == "realization") {
      ContraModule m = realize_module(complex_from_json(c.at("complex")), vector_from_json(c.at("omega")),
                                      ring_from_json(c.at("ring")));
      if (m.d != claim_matrix(c.at("d"))) return std::string("differential differs");
      return std::nullopt;
    }
    if (kind == "gauge_act" || kind == "maurer_cartan") {
      NilpotentDgla n(dgla_from_json(c.at("dgla")), ring_from_json(c.at("ring")));
      if (kind == "gauge_act") {
        if (gauge_act(n, vector_from_json(c.at("a")), vector_from_json(c.at("w"))) != vector_from_json(c.at("result")))
          return std::string("gauge action differs");
      } else if (!is_zero(mc_residual(n, vector_from_json(c.at("element"))))) {
        return std::string("not Maurer-Cartan");
      }
      return std::nullopt;
    }
    return "unknown claim kind \"" + kind + "\"";
  } catch (const std::exception& e) {
    return std::string("claim could not be evaluated: ") + e.what();
  }
}

Json Report::to_json() const {
  return Json{{"pipeline", pipeline},
              {"passed", passed},
              {"results", results},
              {"transcript", transcript},
              {"counterexample", counterexample}};
}

bool Transcript::claim(Json c, const std::string& label) {
  c["label"] = label;
  const auto err = verify_claim(c);
  c["holds"] = !err.has_value();
  if (err && report_.passed) {
    report_.passed = false;
    report_.counterexample = Json{{"label", label}, {"kind", c["kind"]}, {"reason", *err}};
  }
  report_.transcript.push_back(std::move(c));
  return !err;
}

bool Transcript::check(bool ok, const std::string& label, Json detail) {
  if (!report_.results.contains("checks")) report_.results["checks"] = Json::array();
  report_.results["checks"].push_back({{"label", label}, {"holds", ok}});
  if (!ok && report_.passed) {
    report_.passed = false;
    detail["label"] = label;
    report_.counterexample = detail;
  }
  return ok;
}

McSamples sample_mc(const Dgla& l, const ArtinianCdga& r, const PipelineParams& p) {
  McSamples out;
  if (r.dim() <= 1) {
    out.elements.push_back(Vector(0));
    return out;
  }
  std::mt19937 rng(p.seed);
  const auto tower = madic_tower(r);
  const std::vector<Vector> z1 = first_order_cocycles(l, r);
  const NilpotentDgla first(l, tower.front().total);
  const auto family = structured_family(z1, first.dim(), static_cast<std::size_t>(p.samples), p.height, rng);
  for (std::size_t k = 0; k < family.size(); ++k) {
    Vector w = family[k];
    bool ok = true;
    for (std::size_t s = 1; s < tower.size() && ok; ++s) {
      auto res = lift_mc(l, tower[s], w);
      if (auto* lifted = std::get_if<LiftedMc>(&res)) {
        w = lifted->element;
        // later samples also move within the torsor of lifts
        if (k > z1.size())
          for (const auto& t : lifted->torsor_basis)
            axpy(w, Rational(static_cast<long>(rng() % (2 * p.height + 1)) - p.height), t);
      } else {
        ok = false;
      }
    }
    if (ok)
      out.elements.push_back(w);
    else
      ++out.obstructed;
  }
  return out;
}

std::vector<Vector> sample_gauges(const Dgla& l, const ArtinianCdga& r, const PipelineParams& p) {
  if (r.dim() <= 1) return {Vector(0)};
  std::mt19937 rng(p.seed + 7919);
  NilpotentDgla n(l, r);
  std::vector<Vector> basis;
  for (std::size_t i : n.dgla().indices_of_degree(0)) basis.push_back(unit_vector(n.dim(), i));
  return structured_family(basis, n.dim(), static_cast<std::size_t>(p.samples), p.height, rng);
}

Report pipeline_validate(const Problem& problem, const PipelineParams&) {
  Report rep;
  rep.pipeline = "validate";
  Transcript t(rep);
  Json objects = Json::object();
  for (const auto& [name, c] : problem.complexes) {
    const FlatBasis b = flat_basis(c);
    objects["complexes"][name] = {{"dimension", b.dim()}};
    t.claim(product_zero({b.d, b.d}), "complex " + name + ": d^2 = 0");
  }
  for (const auto& [name, r] : problem.rings)
    objects["rings"][name] = {{"dimension", r.dim()}, {"nilpotency_index", r.nilpotency_index()}};
  for (const auto& [name, l] : problem.dglas) {
    objects["dglas"][name] = {{"dimension", l.dim()}};
    t.claim(product_zero({l.differential(), l.differential()}), "dgla " + name + ": d^2 = 0");
  }
  for (const auto& [name, a] : problem.algebras)
    objects["algebras"][name] = {{"dimension", flat_basis(a.complex).dim()}, {"strict", a.strict}};
  for (const auto& [name, m] : problem.contramodules) {
    ContraModule mod = realize_module(m.base, m.omega, m.r);
    objects["contramodules"][name] = {{"dimension", mod.dim()}};
    t.claim(product_zero({mod.d, mod.d}), "contramodule " + name + ": D^2 = 0");
  }
  rep.results["objects"] = objects;
  return rep;
}

Report pipeline_tangent(const Problem& problem, const PipelineParams& p) {
  Report rep;
  rep.pipeline = "tangent-report";
  Transcript t(rep);
  const Target target = target_of(problem);
  const ArtinianCdga r = ring_of(problem, target);
  const Dgla l = lie_of(problem, target, p.cutoff);
  rep.results["object"] = {{target.kind, target.name}};
  rep.results["ring"] = r.name();
  rep.results["cutoff"] = p.cutoff;
  if (r.dim() <= 1) {
    rep.results["dimension"] = 0;
    rep.results["representatives"] = Json::array();
    rep.results["summary"] = "the ring is k: only the trivial deformation";
    return rep;
  }
  const NilpotentDgla n(l, r);
  const TangentSpace ts = tangent_defs(n);
  rep.results["dimension"] = ts.dim;
  Json reps = Json::array();
  for (const auto& v : ts.basis) reps.push_back(element_to_json(v, l, r));
  rep.results["representatives"] = reps;
  t.claim(homology_claim(n.dgla(), 1, ts.dim), "H^1(L (x) m) has the reported dimension");
  for (const auto& v : ts.basis)
    t.claim(product_zero({n.dgla().differential(), column_matrix(v)}), "tangent representative is a cocycle");

  // with m^2 = 0 and d_R = 0, H^1(L (x) m) is a sum of shifted copies of the cohomology of L
  if (r.is_square_zero() && r.differential().is_zero()) {
    std::size_t expected = 0;
    for (std::size_t j = 1; j < r.dim(); ++j) {
      const int k = 1 + r.degree(j);
      const std::size_t h = homology_dim(l, k);
      t.claim(homology_claim(l, k, h), "H^" + std::to_string(k) + "(L)");
      expected += h;
    }
    rep.results["expected_from_cohomology_of_L"] = expected;
    t.check(expected == ts.dim, "tangent dimension equals the sum of shifted cohomology of L",
            {{"expected", expected}, {"computed", ts.dim}});
  }
  if (target.kind == "algebra") {
    const AlgebraDecl& a = problem.algebras.at(target.name);
    Json hh = Json::array();
    for (int deg = 1; deg <= p.cutoff - 1; ++deg) {
      HochschildResult h = hochschild(a.complex, a.structure, deg, p.cutoff);
      hh.push_back({{"degree", deg}, {"dimension", h.dimension}, {"truncation_exact", h.truncation_exact}});
    }
    rep.results["hochschild"] = hh;
  }
  std::ostringstream s;
  s << "tangent space of " << target.name << " over " << r.name() << " has dimension " << ts.dim;
  rep.results["summary"] = s.str();
  return rep;
}

Report pipeline_roundtrip(const Problem& problem, const PipelineParams& p) {
  Report rep;
  rep.pipeline = "roundtrip";
  Transcript t(rep);
  const Target target = target_of(problem);
  const ArtinianCdga r = ring_of(problem, target);
  const DeformationModel model = model_of(problem, target, p.cutoff);
  const McSamples samples = sample_mc(model.lie, r, p);
  const std::vector<Vector> gauges = sample_gauges(model.lie, r, p);
  const std::size_t rd = r.dim(), rm = rd - 1, dl = model.lie.dim();
  const Json lie_json = dgla_to_json(model.lie), ring_js = ring_json(r), base_json = complex_to_json(model.base);
  const Matrix d_base = flat_basis(model.base).d;

  rep.results["object"] = {{target.kind, target.name}};
  rep.results["ring"] = r.name();
  rep.results["base_dimension"] = d_base.rows();
  rep.results["obstructed_candidates"] = samples.obstructed;
  t.claim(Json{{"kind", "rank"}, {"matrix", mat(model.hat)}, {"rank", dl}}, "the dictionary map is injective");

  Json objects = Json::array();
  std::vector<ContraModule> modules;
  for (std::size_t i = 0; i < samples.elements.size(); ++i) {
    const Vector& w = samples.elements[i];
    const std::string tag = "sample " + std::to_string(i);
    const ContraModule m = deformed_object(model, r, w);
    modules.push_back(m);
    t.claim(Json{{"kind", "maurer_cartan"}, {"dgla", lie_json}, {"ring", ring_js}, {"element", to_json(w)}},
            tag + ": MC element");
    t.claim(Json{{"kind", "realization"}, {"complex", base_json}, {"ring", ring_js},
                 {"omega", to_json(map_coefficientwise(model.hat, w, r))}, {"d", mat(m.d)}},
            tag + ": deformed object");
    t.claim(product_zero({m.d, m.d}), tag + ": D^2 = 0");
    const Matrix pr = projection_to_base(m);
    t.claim(products_equal({pr, m.d, pr.transpose()}, {d_base}), tag + ": reduces to the base modulo m");
    const Vector back = recover_element(model, m);
    // the recovered element, one column per ring basis element of m
    std::vector<Vector> wcols(rm, Vector(dl)), hcols(rm, Vector(model.hat.rows()));
    const Vector hw = map_coefficientwise(model.hat, w, r);
    for (std::size_t j = 0; j < rm; ++j) {
      for (std::size_t a = 0; a < dl; ++a) wcols[j][a] = back[a * rm + j];
      for (std::size_t e = 0; e < model.hat.rows(); ++e) hcols[j][e] = hw[e * rm + j];
    }
    if (rm > 0)
      t.claim(solution_claim(model.hat, columns_matrix(wcols, dl), columns_matrix(hcols, model.hat.rows())),
              tag + ": recovered element maps to the perturbation");
    t.check(back == w, tag + ": recovered element equals the sample",
            {{"sample", element_to_json(w, model.lie, r)}, {"recovered", element_to_json(back, model.lie, r)}});
    objects.push_back({{"element", element_to_json(w, model.lie, r)}, {"dimension", m.dim()}});
  }
  rep.results["samples"] = objects;

  // gauges act by isomorphisms reducing to the identity
  const bool small = d_base.rows() <= 16;
  const DgCategory q = complex_category({"B"}, {model.base});
  std::optional<MorphismMc> mm;
  if (small) mm = morphism_mc(q, 0, 0, q.identities.at(0), r);
  std::size_t isos = 0;
  for (std::size_t i = 0; i < samples.elements.size(); ++i)
    for (std::size_t g = 0; g < gauges.size(); ++g) {
      if (i >= 2 && g != i % gauges.size()) continue;
      const Vector& w = samples.elements[i];
      const std::string tag = "sample " + std::to_string(i) + ", gauge " + std::to_string(g);
      const GaugeIsomorphism gi = gauge_isomorphism(model, r, gauges[g], w);
      const Matrix& f = gi.map.matrix;
      const Matrix id = Matrix::identity(f.rows());
      const Matrix pr = projection_to_base(gi.map.source);
      t.claim(Json{{"kind", "gauge_act"}, {"dgla", lie_json}, {"ring", ring_js}, {"a", to_json(gauges[g])},
                   {"w", to_json(w)}, {"result", to_json(gi.target_element)}},
              tag + ": gauge action");
      t.claim(products_equal({gi.map.target.d, f}, {f, gi.map.source.d}), tag + ": chain map");
      t.claim(products_equal({gi.inverse.matrix, f}, {id}), tag + ": left inverse");
      t.claim(products_equal({f, gi.inverse.matrix}, {id}), tag + ": right inverse");
      t.claim(products_equal({pr, f, pr.transpose()}, {Matrix::identity(pr.rows())}), tag + ": identity modulo m");
      if (mm) {
        CtrMorphism cm{map_coefficientwise(model.hat, gi.target_element, r),
                       map_coefficientwise(model.hat, w, r),
                       hom_r_to_tensor(gi.map.source, gi.map.target, gi.map.coordinates)};
        t.check(is_ctr_morphism(q, *mm, cm), tag + ": a morphism of the contraderived deformation category");
      }
      if (g == 0) t.check(f == id, tag + ": the zero gauge gives the identity");
      ++isos;
    }
  rep.results["isomorphisms"] = isos;
  rep.results["morphism_mc_checked"] = small;

  // inequivalence certified at R/m^2 excludes every isomorphism reducing to the identity
  std::size_t certified = 0;
  if (rd > 1) {
    const auto tower = madic_tower(r);
    const ArtinianCdga r2 = tower.front().total;
    const NilpotentDgla full(model.lie, r), n2(model.lie, r2);
    Matrix to_r2(r2.dim(), rd);
    for (std::size_t j = 0; j < r2.dim(); ++j) to_r2.set(j, j, 1);  // R/m^2 is a prefix of the basis
    std::vector<Vector> reduced;
    for (const auto& w : samples.elements) reduced.push_back(full.map_coefficients(w, n2, to_r2));
    std::vector<Vector> deg0;
    for (std::size_t k : n2.dgla().indices_of_degree(0)) deg0.push_back(unit_vector(n2.dim(), k));
    Json certs = Json::array();
    for (std::size_t i = 0; i < reduced.size(); ++i)
      for (std::size_t j = i + 1; j < reduced.size(); ++j) {
        auto eq = gauge_equivalent(n2, reduced[i], reduced[j]);
        auto* ineq = std::get_if<Inequivalent>(&eq);
        if (!ineq || ineq->stage != 1) continue;
        const ContraModule mi = deformed_object(model, r2, reduced[i]), mj = deformed_object(model, r2, reduced[j]);
        // F = 1 + a^ with D_j F = F D_i is affine in a: (D_j a^ - a^ D_i) = D_i - D_j
        std::vector<Vector> cols;
        for (const auto& e : deg0) {
          const Matrix phi = hat_operator(model, mi, mj, e);
          cols.push_back(vec(mj.d * phi - phi * mi.d));
        }
        const Vector b = vec(mi.d - mj.d);
        const Matrix a = columns_matrix(cols, b.size());
        const std::string tag = "samples " + std::to_string(i) + ", " + std::to_string(j);
        auto y = infeasibility_witness(a, b);
        if (!t.check(y.has_value(), tag + ": no isomorphism reducing to the identity at m^2 = 0")) continue;
        t.claim(infeasible_claim(a, b, *y), tag + ": isomorphism equations at m^2 = 0 are infeasible");
        t.claim(Json{{"kind", "realization"}, {"complex", base_json}, {"ring", ring_json(r2)},
                     {"omega", to_json(map_coefficientwise(model.hat, reduced[i], r2))}, {"d", mat(mi.d)}},
                tag + ": first object at m^2 = 0");
        t.claim(Json{{"kind", "realization"}, {"complex", base_json}, {"ring", ring_json(r2)},
                     {"omega", to_json(map_coefficientwise(model.hat, reduced[j], r2))}, {"d", mat(mj.d)}},
                tag + ": second object at m^2 = 0");
        certs.push_back({{"pair", {i, j}}, {"class", to_json(ineq->cls.coordinates)}});
        ++certified;
      }
    rep.results["inequivalent_pairs"] = certs;
  }
  std::ostringstream s;
  s << samples.elements.size() << " deformations round-tripped, " << isos << " gauge isomorphisms verified, "
    << certified << " inequivalent pairs certified";
  rep.results["summary"] = s.str();
  return rep;
}

Report pipeline_compare(const Problem& problem, const PipelineParams& p) {
  Report rep;
  rep.pipeline = "compare";
  Transcript t(rep);
  const Target target = target_of(problem);
  const ArtinianCdga r = ring_of(problem, target);
  if (!r.is_nonnegatively_graded())
    throw ValidationFailed("NotNonnegativelyGraded", "compare needs a ring concentrated in homological degrees >= 0");
  const DeformationModel model = model_of(problem, target, p.cutoff);
  const GradedSpace& space = model.object.space();
  std::pair<int, int> window = p.window.value_or(
      space.empty() ? std::make_pair(0, 0) : std::make_pair(space.min_degree() - 1, space.max_degree()));
  if (!space.empty() && (space.min_degree() < window.first || space.max_degree() > window.second))
    throw ValidationFailed("Window", "the object is not contained in the window");

  std::vector<ContraModule> modules;
  if (target.kind == "contramodule") {
    const ModuleDecl& m = problem.contramodules.at(target.name);
    modules.push_back(realize_module(m.base, m.omega, m.r));
  } else {
    for (const auto& w : sample_mc(model.lie, r, p).elements) modules.push_back(underlying_module(model, r, w));
  }
  rep.results["object"] = {{target.kind, target.name}};
  rep.results["ring"] = r.name();
  rep.results["window"] = {window.first, window.second};
  Json out = Json::array();
  std::ostringstream text;
  std::size_t derived = 0, unbounded = 0;
  for (std::size_t i = 0; i < modules.size(); ++i) {
    const ContraModule& m = modules[i];
    const std::string tag = "deformation " + std::to_string(i);
    t.claim(product_zero({m.d, m.d}), tag + ": D^2 = 0");
    const ConnectivityResult res = connectivity_filtration(m, window.first);
    if (const auto* nb = std::get_if<NotBoundedBelow>(&res)) {
      const Matrix dr = flat_basis(reduce(m)).d;
      t.claim(product_zero({dr, column_matrix(nb->cycle)}), tag + ": certificate is a cycle of the reduction");
      auto y = infeasibility_witness(dr, nb->cycle);
      if (t.check(y.has_value(), tag + ": certificate cycle is not a boundary"))
        t.claim(infeasible_claim(dr, nb->cycle, *y), tag + ": certificate cycle is not a boundary");
      out.push_back({{"status", "NotBoundedBelow"}, {"degree", nb->degree}, {"cycle", to_json(nb->cycle)}});
      text << tag << ": NotBoundedBelow, reduced homology reaches the window floor " << nb->degree << "\n";
      ++unbounded;
      continue;
    }
    const Filtration& f = std::get<Filtration>(res);
    const auto violations = check_filtration(m, f);
    t.check(violations.empty(), tag + ": filtration conditions",
            {{"violations", violations}});
    const bool flat_ring = r.differential().is_zero();
    std::vector<Matrix> spans;
    for (std::size_t s = 0; s < f.stages(); ++s) {
      spans.push_back(columns_matrix(f.span(m, s), m.dim()));
      const std::size_t lo = s == 0 ? 0 : f.stage_ends[s - 1];
      std::vector<Vector> gens(f.generators.begin() + static_cast<long>(lo),
                               f.generators.begin() + static_cast<long>(f.stage_ends[s]));
      const Matrix g = columns_matrix(gens, m.dim());
      const std::string st = tag + ", stage " + std::to_string(s);
      auto sub = [&](const Matrix& span, const Matrix& image, const std::string& label) {
        std::vector<Vector> xs;
        for (std::size_t c = 0; c < image.cols(); ++c) {
          auto x = solve(span, image.column(c));
          if (!t.check(x.has_value(), label)) return;
          xs.push_back(*x);
        }
        t.claim(solution_claim(span, columns_matrix(xs, span.cols()), image), label);
      };
      sub(spans[s], m.d * spans[s], st + ": subcomplex");
      if (s == 0) {
        t.claim(product_zero({m.d, g}), st + ": generators are cycles");
        if (flat_ring) t.claim(product_zero({m.d, spans[0]}), st + ": d(M(0)) = 0");
      } else {
        sub(spans[s - 1], m.d * g, st + ": d(generators) lies in the previous stage");
        if (flat_ring) sub(spans[s - 1], m.d * spans[s], st + ": d(M(i+1)) lies in M(i)");
      }
    }
    if (!spans.empty())
      t.claim(Json{{"kind", "rank"}, {"matrix", mat(spans.back())}, {"rank", m.dim()}}, tag + ": exhaustive");
    const Filtration c = coarsen(m, f);
    out.push_back({{"status", "Derived"}, {"stages", f.stages()}, {"labels", f.stage_labels}, {"n0", f.n0},
                   {"coarsened_stages", c.stages()}});
    text << tag << ": Derived, filtration with " << f.stages() << " stages (" << c.stages() << " after coarsening)\n";
    ++derived;
  }
  rep.results["deformations"] = out;
  rep.results["derived"] = derived;
  rep.results["not_bounded_below"] = unbounded;
  rep.results["summary"] = text.str();
  return rep;
}

Report pipeline_obstruction(const Problem& problem, const PipelineParams& p) {
  Report rep;
  rep.pipeline = "obstruction";
  Transcript t(rep);
  const Target target = target_of(problem);
  const ArtinianCdga r = ring_of(problem, target);
  std::optional<DeformationModel> model;
  if (target.kind != "dgla") model = model_of(problem, target, p.cutoff);
  const Dgla l = model ? model->lie : problem.dglas.at(target.name);
  rep.results["object"] = {{target.kind, target.name}};
  rep.results["ring"] = r.name();
  if (r.dim() <= 1) {
    rep.results["walks"] = Json::array({{{"status", "Lifted"}, {"stages", 0}}});
    rep.results["summary"] = "the ring is k: the only deformation is trivial";
    return rep;
  }
  const auto tower = madic_tower(r);
  const Json lie_json = dgla_to_json(l);
  const NilpotentDgla first(l, tower.front().total);

  std::vector<Vector> starts;
  if (problem.pipeline.contains("initial")) {
    const NilpotentDgla full(l, r);
    Matrix to_first(tower.front().total.dim(), r.dim());
    for (std::size_t j = 0; j < to_first.rows(); ++j) to_first.set(j, j, 1);
    starts.push_back(full.map_coefficients(element_from_json(problem.pipeline.at("initial"), l, r), first, to_first));
    t.check(is_maurer_cartan(first.dgla(), starts.back()), "initial element is Maurer-Cartan to first order");
  } else {
    std::mt19937 rng(p.seed);
    starts = structured_family(first_order_cocycles(l, r), first.dim(), static_cast<std::size_t>(p.samples),
                               p.height, rng);
  }

  Json walks = Json::array();
  std::ostringstream text;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const std::string tag = "walk " + std::to_string(k);
    Vector w = starts[k];
    Json walk{{"initial", element_to_json(w, l, tower.front().total)}};
    bool obstructed = false;
    for (std::size_t s = 1; s < tower.size() && !obstructed; ++s) {
      const SmallExtension& e = tower[s];
      const std::string st = tag + ", stage " + std::to_string(s + 1);
      const LiftResult res = lift_mc(l, e, w);
      std::optional<ObjectLift> obj;
      if (model) obj = lift_object(e, deformed_object(*model, e.quotient, w));
      if (const auto* lifted = std::get_if<LiftedMc>(&res)) {
        if (obj) t.check(std::holds_alternative<LiftedObject>(*obj), st + ": the deformed object lifts as well");
        w = lifted->element;
        continue;
      }
      const ObstructedMc& ob = std::get<ObstructedMc>(res);
      obstructed = true;
      const NilpotentDgla total(l, e.total);
      std::vector<std::size_t> ideal_cols;
      for (std::size_t idx = 0; idx < total.dim(); ++idx)
        if (std::find(e.kernel.begin(), e.kernel.end(), total.ring_index(idx)) != e.kernel.end())
          ideal_cols.push_back(idx);
      std::vector<std::size_t> all_rows(total.dim());
      for (std::size_t idx = 0; idx < total.dim(); ++idx) all_rows[idx] = idx;
      const Matrix d_ideal = total.dgla().differential().submatrix(all_rows, ideal_cols);
      t.claim(product_zero({total.dgla().differential(), column_matrix(ob.residual)}), st + ": obstruction is a cocycle");
      auto y = infeasibility_witness(d_ideal, ob.residual);
      if (t.check(y.has_value(), st + ": obstruction class is nonzero"))
        t.claim(infeasible_claim(d_ideal, ob.residual, *y), st + ": obstruction is not a coboundary in L (x) I");
      // another linear lift changes the residual by a coboundary
      for (std::size_t idx : ideal_cols) {
        if (total.degree(idx) != 1) continue;
        const auto res2 = lift_mc(l, e, w, unit_vector(total.dim(), idx));
        const auto* ob2 = std::get_if<ObstructedMc>(&res2);
        if (!t.check(ob2 != nullptr, st + ": a shifted lift is obstructed too")) break;
        Vector diff = ob2->residual;
        axpy(diff, -1, ob.residual);
        auto x = solve(d_ideal, diff);
        if (t.check(x.has_value(), st + ": the class does not depend on the lift"))
          t.claim(solution_claim(d_ideal, column_matrix(*x), column_matrix(diff)), st + ": residuals differ by a coboundary");
        break;
      }
      if (obj) {
        if (model->kind == DeformationModel::Kind::Complex) {
          const auto* oo = std::get_if<ObstructedObject>(&*obj);
          t.check(oo != nullptr && oo->obstruction.representative == ob.residual,
                  st + ": lifting the module meets the same obstruction");
        } else if (const auto* oo = std::get_if<ObstructedObject>(&*obj)) {
          t.check(oo->obstruction.representative == map_coefficientwise(model->hat, ob.residual, e.total),
                  st + ": the bar module obstruction is the image of the dgla obstruction");
        }
        walk["module_obstructed"] = std::holds_alternative<ObstructedObject>(*obj);
      }
      walk["status"] = "Obstructed";
      walk["stage"] = s + 1;
      walk["class"] = to_json(ob.obstruction.coordinates);
      walk["class_space_dimension"] = ob.obstruction.space_dim;
      walk["representative"] = element_to_json(ob.residual, l, e.total);
      walk["partial"] = element_to_json(w, l, e.quotient);
      text << tag << ": obstructed at stage " << s + 1 << " (lifting to R/m^" << s + 2 << "), class "
           << format_vector(ob.obstruction.coordinates) << "\n";
    }
    if (!obstructed) {
      t.claim(Json{{"kind", "maurer_cartan"}, {"dgla", lie_json}, {"ring", ring_json(r)}, {"element", to_json(w)}},
              tag + ": lifted element is Maurer-Cartan");
      walk["status"] = "Lifted";
      walk["element"] = element_to_json(w, l, r);
      text << tag << ": lifts to a Maurer-Cartan element over " << r.name() << "\n";
    }
    walks.push_back(walk);
  }
  rep.results["walks"] = walks;
  rep.results["summary"] = text.str();
  return rep;
}

const std::vector<std::string>& pipeline_names() {
  static const std::vector<std::string> names{"validate", "tangent-report", "roundtrip", "compare", "obstruction"};
  return names;
}

Report run_pipeline(const std::string& name, const Problem& problem, const PipelineParams& p) {
  if (name == "validate") return pipeline_validate(problem, p);
  if (name == "tangent-report") return pipeline_tangent(problem, p);
  if (name == "roundtrip") return pipeline_roundtrip(problem, p);
  if (name == "compare") return pipeline_compare(problem, p);
  if (name == "obstruction") return pipeline_obstruction(problem, p);
  throw ValidationFailed("Malformed", "unknown pipeline \"" + name + "\"");
}

Report replay(const Json& report) {
  Report rep;
  rep.pipeline = "replay";
  if (!report.is_object() || !report.contains("transcript") || !report.at("transcript").is_array())
    throw ValidationFailed("Malformed", "not a report: missing transcript");
  std::size_t checked = 0, failed = 0;
  Json failures = Json::array();
  for (const auto& c : report.at("transcript")) {
    ++checked;
    if (auto err = verify_claim(c)) {
      ++failed;
      const Json entry{{"label", c.value("label", std::string())}, {"kind", c.value("kind", std::string())}, {"reason", *err}};
      failures.push_back(entry);
      if (rep.passed) {
        rep.passed = false;
        rep.counterexample = entry;
      }
    }
  }
  rep.results["replayed_pipeline"] = report.value("pipeline", std::string());
  rep.results["claims"] = checked;
  rep.results["failed"] = failed;
  rep.results["failures"] = failures;
  rep.results["summary"] = std::to_string(checked - failed) + " of " + std::to_string(checked) + " claims re-verified";
  return rep;
}

}  // namespace deform
