#include <doctest.h>

#include "deform/dictionary.hpp"
#include "deform/io.hpp"
#include "deform/pipeline.hpp"
#include "dgla_support.hpp"
#include "operad_support.hpp"
#include "support.hpp"

using namespace deform;
using namespace deform::testing;

namespace {

std::string failure_kind(const Json& j) {
  try {
    load_problem(j);
  } catch (const ValidationFailed& e) {
    return e.kind();
  }
  return "";
}

Json dual_numbers_problem(const std::string& ring) {
  return Json::parse(R"({
    "complexes": {"A": {"degrees": {"0": ["1", "x"]}}},
    "rings": {"R": ")" + ring + R"("},
    "algebras": {"dual": {"complex": "A", "products": [
      {"left": "1", "right": "1", "result": [["1", 1]]},
      {"left": "1", "right": "x", "result": [["x", 1]]},
      {"left": "x", "right": "1", "result": [["x", 1]]}]}},
    "pipeline": {"object": {"algebra": "dual"}, "ring": "R"}
  })");
}

Json quadratic_cone_problem() {
  return Json::parse(R"({
    "rings": {"R": "k[t]/t^3"},
    "dglas": {"cone": {"basis": [{"name": "x", "degree": 1}, {"name": "y", "degree": 2}],
                       "brackets": [{"left": "x", "right": "x", "result": [["y", 2]]}]}},
    "pipeline": {"object": {"dgla": "cone"}, "ring": "R", "initial": [{"basis": "x", "ring": "t", "value": 1}]}
  })");
}

Complex small_complex(Rng& rng) {
  std::vector<std::size_t> dims;
  std::size_t total = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t d = static_cast<std::size_t>(uniform(rng, i == 0 ? 1 : 0, 2));
    if (total + d > 3) d = 0;
    total += d;
    dims.push_back(d);
  }
  return random_complex(rng, uniform(rng, -2, 0), dims);
}

}  // namespace

TEST_CASE("problem files round trip through JSON") {
  Rng rng(911);
  SUBCASE("rationals") {
    CHECK(rational_from_json(Json("-3/6")) == Rational(-1, 2));
    CHECK(rational_from_json(Json(4)) == 4);
    CHECK_THROWS_AS(rational_from_json(Json("1/0")), ValidationFailed);
    CHECK_THROWS_AS(rational_from_json(Json(0.5)), ValidationFailed);
  }
  SUBCASE("complexes") {
    for (int trial = 0; trial < 40; ++trial) {
      Complex c = small_complex(rng);
      CHECK(complex_from_json(complex_to_json(c)) == c);
    }
    // the cochain reading negates degrees and keeps the direction of d
    Json j = Json::parse(R"({"grading": "cochain", "degrees": {"0": ["a"], "1": ["b"]}, "differential": {"0": [["2"]]}})");
    Complex c = complex_from_json(j);
    CHECK(c.dim(0) == 1);
    CHECK(c.dim(-1) == 1);
    CHECK(c.d(0).at(0, 0) == 2);
  }
  SUBCASE("rings keep their adapted basis") {
    for (const ArtinianCdga& r : ring_family()) {
      ArtinianCdga back = ring_from_json(ring_to_json(r));
      CHECK(back.basis_names() == r.basis_names());
      CHECK(back.degrees() == r.degrees());
      CHECK(back.differential() == r.differential());
      CHECK(back.to_internal() == Matrix::identity(r.dim()));
      for (std::size_t i = 0; i < r.dim(); ++i)
        for (std::size_t j = 0; j < r.dim(); ++j)
          CHECK(back.multiply(unit_vector(r.dim(), i), unit_vector(r.dim(), j)) ==
                r.multiply(unit_vector(r.dim(), i), unit_vector(r.dim(), j)));
    }
    CHECK(ring_from_json(Json("k[s]/s^3")).nilpotency_index() == 3);
    CHECK(ring_from_json(Json::parse(R"({"builtin": "k[e]/e^2", "degree": 1})")).degree(1) == 1);
    CHECK(ring_from_json(Json("square-zero(0, 1)")).dim() == 3);
    CHECK(ring_from_json(Json("truncated(2, 3)")).dim() == 6);
  }
  SUBCASE("dglas") {
    for (int trial = 0; trial < 20; ++trial) {
      EndData e = random_end_data(rng);
      Dgla l = end_dgla(e.vdeg, e.dv);
      Dgla back = dgla_from_json(dgla_to_json(l));
      CHECK(back.names() == l.names());
      CHECK(back.degrees() == l.degrees());
      CHECK(back.differential() == l.differential());
      for (std::size_t a = 0; a < l.dim(); ++a)
        for (std::size_t b = 0; b < l.dim(); ++b)
          CHECK(back.bracket(unit_vector(l.dim(), a), unit_vector(l.dim(), b)) ==
                l.bracket(unit_vector(l.dim(), a), unit_vector(l.dim(), b)));
    }
    // the reversed bracket follows from antisymmetry
    Dgla cone = dgla_from_json(quadratic_cone_problem()["dglas"]["cone"]);
    CHECK(cone.bracket(unit_vector(2, 0), unit_vector(2, 0)) == Vector{0, 2});
  }
  SUBCASE("elements use the user presentation of the ring") {
    Json j = Json::parse(R"({"basis": [{"name": "1", "degree": 0}, {"name": "u", "degree": 0}, {"name": "v", "degree": 0}],
      "unit": "1", "products": [{"left": "u", "right": "u", "result": [["v", 1]]}]})");
    ArtinianCdga r = ring_from_json(j);
    Dgla cone = dgla_from_json(quadratic_cone_problem()["dglas"]["cone"]);
    Vector w = element_from_json(Json::parse(R"([{"basis": "x", "ring": "u", "value": "1/2"}])"), cone, r);
    NilpotentDgla n(cone, r);
    Vector expected(n.dim());
    const Vector u = r.to_internal() * unit_vector(3, 1);
    for (std::size_t k = 1; k < 3; ++k) expected[n.index(0, k)] = Rational(1, 2) * u[k];
    CHECK(w == expected);
  }
}

TEST_CASE("problem validation reports the violated condition") {
  Json ok = dual_numbers_problem("k[t]/t^2");
  CHECK(failure_kind(ok) == "");

  Json nonassoc = ok;
  nonassoc["algebras"]["dual"]["products"] = Json::parse(R"([
    {"left": "1", "right": "1", "result": [["x", 1]]}, {"left": "1", "right": "x", "result": [["1", 1]]}])");
  CHECK(failure_kind(nonassoc) == "NotAssociative");

  Json unknown = ok;
  unknown["algebras"]["dual"]["products"][0]["left"] = "z";
  CHECK(failure_kind(unknown) == "Malformed");

  Json graded = Json::parse(R"({"complexes": {"A": {"degrees": {"0": ["a"], "1": ["b"]}}},
    "algebras": {"g": {"complex": "A", "products": [{"left": "a", "right": "a", "result": [["b", 1]]}]}}})");
  CHECK(failure_kind(graded) == "Degree");

  Json leibniz = Json::parse(R"({"complexes": {"A": {"degrees": {"0": ["a"], "-1": ["b"]}, "differential": {"0": [["1"]]}}},
    "algebras": {"g": {"complex": "A", "products": [{"left": "a", "right": "a", "result": [["a", 1]]}]}}})");
  CHECK(failure_kind(leibniz) == "NotLeibniz");

  Json square = Json::parse(R"({"complexes": {"A": {"degrees": {"0": ["a"], "-1": ["b"], "-2": ["c"]},
    "differential": {"0": [["1"]], "-1": [["1"]]}}}})");
  CHECK(failure_kind(square) == "DifferentialSquare");

  Json ring = Json::parse(R"({"rings": {"R": {"basis": [{"name": "1", "degree": 0}, {"name": "u", "degree": 0}],
    "unit": "1", "products": [{"left": "u", "right": "u", "result": [["u", 1]]}]}}})");
  CHECK(failure_kind(ring) == "NotNilpotent");

  Json jacobi = quadratic_cone_problem();
  jacobi["dglas"]["cone"]["basis"][1]["degree"] = 3;
  CHECK(failure_kind(jacobi) == "Degree");

  Json module = Json::parse(R"({"complexes": {"V": {"grading": "cochain", "degrees": {"0": ["a"], "1": ["b"], "2": ["c"]}}},
    "rings": {"R": "k[t]/t^3"},
    "contramodules": {"M": {"complex": "V", "ring": "R", "omega": [
      {"out": "b", "in": "a", "ring": "t", "value": 1}, {"out": "c", "in": "b", "ring": "t", "value": 1}]}}})");
  CHECK(failure_kind(module) == "NotMaurerCartan");
  module["rings"]["R"] = "k[t]/t^2";
  CHECK(failure_kind(module) == "");
}

TEST_CASE("claims re-verify and reject false equalities") {
  Matrix a = Matrix::from_dense({{1, 0}, {0, 0}}, 2), b = Matrix::from_dense({{0, 0}, {0, 1}}, 2);
  Json zero{{"kind", "product_zero"}, {"factors", {sparse_to_json(a), sparse_to_json(b)}}};
  CHECK(!verify_claim(zero));
  zero["factors"] = {sparse_to_json(a), sparse_to_json(a)};
  CHECK(verify_claim(zero));

  Json sol{{"kind", "solution"}, {"A", dense_to_json(a)}, {"X", Json::array({"3", "5"})}, {"B", Json::array({"3", "0"})}};
  CHECK(!verify_claim(sol));
  sol["B"] = Json::array({"3", "1"});
  CHECK(verify_claim(sol));

  // a x = (0, 1) is infeasible, witnessed by y = (0, 1)
  Json inf{{"kind", "infeasible"}, {"A", dense_to_json(a)}, {"b", Json::array({"0", "1"})}, {"y", Json::array({"0", "1"})}};
  CHECK(!verify_claim(inf));
  inf["y"] = Json::array({"1", "1"});
  CHECK(verify_claim(inf));

  Json rk{{"kind", "rank"}, {"matrix", dense_to_json(a + b)}, {"rank", 2}};
  CHECK(!verify_claim(rk));
  rk["rank"] = 1;
  CHECK(verify_claim(rk));

  Json hd{{"kind", "homology_dimension"}, {"in", dense_to_json(Matrix(2, 0))}, {"out", dense_to_json(a)}, {"middle", 2}, {"dim", 1}};
  CHECK(!verify_claim(hd));
  hd["dim"] = 2;
  CHECK(verify_claim(hd));

  Json weird{{"kind", "not_a_claim"}};
  CHECK(verify_claim(weird));
}

TEST_CASE("pipelines") {
  PipelineParams p;
  SUBCASE("tangent space of the dual numbers matches the bar complex oracle") {
    p.cutoff = 4;
    Report r = run_pipeline("tangent-report", load_problem(dual_numbers_problem("k[t]/t^2")), p);
    CHECK(r.passed);
    CHECK(r.results["dimension"] == 1);
    const Algebra0 a = dual_numbers();
    CHECK(bar_hochschild_dim(a.product, 2, 2) == 1);
    CHECK(replay(r.to_json()).passed);
  }
  SUBCASE("the ground field admits only the trivial deformation") {
    const Problem prob = load_problem(dual_numbers_problem("k"));
    for (const auto& name : pipeline_names()) {
      Report r = run_pipeline(name, prob, p);
      CHECK(r.passed);
    }
    CHECK(run_pipeline("tangent-report", prob, p).results["dimension"] == 0);
    Report rt = run_pipeline("roundtrip", prob, p);
    CHECK(rt.results["samples"].size() == 1);
  }
  SUBCASE("obstruction on the quadratic cone appears at the second stage") {
    Report r = run_pipeline("obstruction", load_problem(quadratic_cone_problem()), p);
    CHECK(r.passed);
    REQUIRE(r.results["walks"].size() == 1);
    CHECK(r.results["walks"][0]["status"] == "Obstructed");
    CHECK(r.results["walks"][0]["stage"] == 2);
    CHECK(r.results["walks"][0]["class_space_dimension"] == 1);
    CHECK(replay(r.to_json()).passed);
  }
  SUBCASE("roundtrip is deterministic, replayable and certifies inequivalence") {
    Json j = dual_numbers_problem("k[t]/t^3");
    p.samples = 3;
    Report r1 = run_pipeline("roundtrip", load_problem(j), p), r2 = run_pipeline("roundtrip", load_problem(j), p);
    CHECK(r1.passed);
    CHECK(r1.to_json() == r2.to_json());
    CHECK(r1.results["inequivalent_pairs"].size() >= 1);
    CHECK(replay(r1.to_json()).passed);
    // tampering with any recorded differential breaks replay
    Json tampered = r1.to_json();
    for (auto& c : tampered["transcript"])
      if (c["kind"] == "realization") {
        c["d"]["entries"].push_back({0, 0, "1"});
        break;
      }
    Report bad = replay(tampered);
    CHECK(!bad.passed);
    CHECK(bad.results["failed"] == 1);
  }
  SUBCASE("compare rejects rings with negative degrees and windows missing the object") {
    Json j = dual_numbers_problem("k[t]/t^2");
    j["rings"]["R"] = Json::parse(R"({"builtin": "k[e]/e^2", "degree": -1})");
    CHECK_THROWS_AS(run_pipeline("compare", load_problem(j), p), ValidationFailed);
    Json w = dual_numbers_problem("k[t]/t^2");
    p.window = std::make_pair(1, 3);
    CHECK_THROWS_AS(run_pipeline("compare", load_problem(w), p), ValidationFailed);
  }
  SUBCASE("compare finds the window floor") {
    Json j = Json::parse(R"({"complexes": {"V": {"degrees": {"0": ["a"], "-1": ["b"]}}},
      "rings": {"R": "k[t]/t^2"}, "pipeline": {"object": {"complex": "V"}, "ring": "R"}})");
    Report bounded = run_pipeline("compare", load_problem(j), p);
    CHECK(bounded.passed);
    for (const auto& d : bounded.results["deformations"]) CHECK(d["status"] == "Derived");
    p.window = std::make_pair(-1, 0);
    Report floor = run_pipeline("compare", load_problem(j), p);
    CHECK(floor.passed);
    for (const auto& d : floor.results["deformations"]) CHECK(d["status"] == "NotBoundedBelow");
  }
}

TEST_CASE("staged lifting agrees with solving the Maurer-Cartan equation at once") {
  // over k[t]/t^3, w = w1 t + w2 t^2 is Maurer-Cartan iff d w1 = 0 and d w2 = -1/2 [w1, w1]
  Rng rng(4242);
  int obstructed = 0, lifted = 0;
  PipelineParams p;
  for (int trial = 0; trial < 40; ++trial) {
    EndData e = random_end_data(rng);
    if (trial % 4 == 0) e = EndData{{0, 1, 2}, Matrix(3, 3)};  // a -> b -> c, where squares can obstruct
    Dgla l = end_dgla(e.vdeg, e.dv);
    const auto ones = l.indices_of_degree(1), twos = l.indices_of_degree(2);
    // w1 from the cocycles in degree 1
    const Matrix d1 = l.differential().submatrix(twos, ones);
    std::vector<Vector> z = kernel_basis(d1);
    if (z.empty()) continue;
    Vector w1(l.dim());
    for (const auto& v : z) {
      const Rational c = small_rational(rng, 1);
      for (std::size_t i = 0; i < ones.size(); ++i) w1[ones[i]] += c * v[i];
    }
    Vector rhs = l.bracket(w1, w1);
    for (auto& x : rhs) x *= Rational(-1, 2);
    Vector target(twos.size());
    for (std::size_t i = 0; i < twos.size(); ++i) target[i] = rhs[twos[i]];
    const bool solvable = solve(d1, target).has_value();

    ArtinianCdga r = truncated_polynomial(3);
    NilpotentDgla n(l, r);
    Json problem{{"complexes", Json::object()},
                 {"rings", {{"R", "k[t]/t^3"}}},
                 {"dglas", {{"L", dgla_to_json(l)}}},
                 {"pipeline", {{"object", {{"dgla", "L"}}}, {"ring", "R"},
                               {"initial", element_to_json(n.element({{w1, 1}}), l, r)}}}};
    Report rep = run_pipeline("obstruction", load_problem(problem), p);
    CHECK(rep.passed);
    const bool walk_lifted = rep.results["walks"][0]["status"] == "Lifted";
    CHECK(walk_lifted == solvable);
    (walk_lifted ? lifted : obstructed)++;
  }
  CHECK(lifted > 0);
  CHECK(obstructed > 0);
}
