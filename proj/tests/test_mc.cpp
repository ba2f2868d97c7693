#include <doctest.h>

#include "dgla_support.hpp"

using namespace deform;
using namespace deform::testing;

namespace {

Dgla sl2() {
  BilinearTable br(3, 3, 3);
  auto set = [&](std::size_t a, std::size_t b, std::size_t c, int v) {
    br.add(a, b, c, v);
    br.add(b, a, c, -v);
  };
  set(0, 1, 2, 1);
  set(2, 0, 0, 2);
  set(2, 1, 1, -2);
  return Dgla({"e", "f", "h"}, {0, 0, 0}, Matrix(3, 3), br);
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

std::size_t cohomology_dim(const Dgla& l, int degree) {
  return subcomplex_homology(l, all_indices(l.dim()), degree).homology.dim;
}

struct Sample {
  EndData e;
  Dgla l;
  ArtinianCdga r;
};

Sample random_sample(Rng& rng, const std::vector<ArtinianCdga>& rings) {
  Sample s;
  s.e = random_end_data(rng);
  s.l = end_dgla(s.e.vdeg, s.e.dv);
  s.r = rings[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(rings.size()) - 1))];
  return s;
}

}  // namespace

TEST_CASE("mc residual examples") {
  Dgla l = quadratic_cone_dgla();
  NilpotentDgla n3(l, truncated_polynomial(3));
  Vector w = n3.element({{unit_vector(2, 0), 1}});  // t x
  Vector expected = n3.element({{unit_vector(2, 1), 2}});  // t^2 y
  CHECK(mc_residual(n3, w) == expected);
  CHECK(!is_maurer_cartan(n3.dgla(), w));
  NilpotentDgla n2(l, truncated_polynomial(2));
  CHECK(is_maurer_cartan(n2.dgla(), n2.element({{unit_vector(2, 0), 1}})));
  CHECK(is_zero(mc_residual(n3, Vector(n3.dim()))));
  // abelian: closed elements are MC
  Matrix d(3, 3);
  d.set(1, 0, 1);  // d a0 = a1
  Dgla ab = abelian_dgla({1, 2, 1}, d);
  NilpotentDgla na(ab, truncated_polynomial(4));
  Vector z = na.element({{unit_vector(3, 2), 1}, {unit_vector(3, 2), 3}});
  CHECK(is_maurer_cartan(na.dgla(), z));
}

TEST_CASE("gauge action examples") {
  Rng rng(3);
  // square-zero: w - d a
  for (const auto& r : {truncated_polynomial(2), square_zero(std::vector<int>{0, 1}), dg_square_zero_ring()}) {
    for (int trial = 0; trial < 5; ++trial) {
      EndData e = random_end_data(rng);
      NilpotentDgla n(end_dgla(e.vdeg, e.dv), r);
      Vector w = random_mc(rng, n);
      Vector a = random_of_degree(rng, n.dgla(), 0);
      CHECK(gauge_act(n, a, w) == w - n.dgla().d(a));
      CHECK(gauge_act(n, Vector(n.dim()), w) == w);
    }
  }
  // abelian: w - d a for any ring
  Matrix d(2, 2);
  d.set(1, 0, 1);
  NilpotentDgla na(abelian_dgla({0, 1}, d), truncated_polynomial(4));
  Vector a = na.element({{unit_vector(2, 0), 1}, {unit_vector(2, 0), 3}});
  Vector w = na.element({{unit_vector(2, 1), 2}});
  CHECK(gauge_act(na, a, w) == w - na.dgla().d(a));
  CHECK_THROWS_AS(gauge_act(na, w, w), DegreeMismatch);
}

TEST_CASE("bch examples") {
  Rng rng(8);
  NilpotentDgla n(sl2(), truncated_polynomial(3));
  for (int trial = 0; trial < 10; ++trial) {
    Vector a = random_of_degree(rng, n.dgla(), 0), b = random_of_degree(rng, n.dgla(), 0);
    CHECK(bch(n, a, Vector(n.dim())) == a);
    Vector expected = a + b;
    axpy(expected, Rational(1, 2), n.dgla().bracket(a, b));
    CHECK(bch(n, a, b) == expected);
  }
  Matrix d(2, 2);
  NilpotentDgla na(abelian_dgla({0, 0}, d), truncated_polynomial(4));
  Vector a = random_of_degree(rng, na.dgla(), 0), b = random_of_degree(rng, na.dgla(), 0);
  CHECK(bch(na, a, b) == a + b);
  // fourth-order check in sl2 (x) t k[t]/t^5 against the known expansion
  NilpotentDgla n5(sl2(), truncated_polynomial(5));
  for (int trial = 0; trial < 5; ++trial) {
    Vector x = random_of_degree(rng, n5.dgla(), 0), y = random_of_degree(rng, n5.dgla(), 0);
    auto br = [&](const Vector& u, const Vector& v) { return n5.dgla().bracket(u, v); };
    Vector e = x + y;
    axpy(e, Rational(1, 2), br(x, y));
    axpy(e, Rational(1, 12), br(x, br(x, y)));
    axpy(e, Rational(-1, 12), br(y, br(x, y)));
    axpy(e, Rational(-1, 24), br(y, br(x, br(x, y))));
    CHECK(bch(n5, x, y) == e);
  }
}

TEST_CASE("gauge action properties on random samples") {
  Rng rng(2024);
  auto rings = ring_family();
  int cases = 0, nontrivial = 0;
  for (int trial = 0; trial < 120; ++trial) {
    Sample s = random_sample(rng, rings);
    NilpotentDgla n(s.l, s.r);
    Vector w = random_mc(rng, n);
    REQUIRE(is_maurer_cartan(n.dgla(), w));
    Vector a = random_of_degree(rng, n.dgla(), 0), b = random_of_degree(rng, n.dgla(), 0),
           c = random_of_degree(rng, n.dgla(), 0);
    Vector aw = gauge_act(n, a, w);
    CHECK(is_maurer_cartan(n.dgla(), aw));
    CHECK(gauge_act(n, bch(n, a, b), w) == gauge_act(n, a, gauge_act(n, b, w)));
    CHECK(bch(n, bch(n, a, b), c) == bch(n, a, bch(n, b, c)));
    CHECK(is_zero(bch(n, a, Rational(-1) * a)));
    CHECK(bch(n, Vector(n.dim()), a) == a);
    CHECK(gauge_act(n, Rational(-1) * a, aw) == w);
    EndOracle oracle(s.e.vdeg, s.e.dv, n);
    CHECK(aw == oracle.gauge(a, w));
    ++cases;
    if (aw != w - n.dgla().d(a)) ++nontrivial;
  }
  CHECK(cases >= 100);
  CHECK(nontrivial >= 5);
}

TEST_CASE("lifting along small extensions") {
  SUBCASE("quadratic cone is obstructed at the second stage") {
    Dgla l = quadratic_cone_dgla();
    ArtinianCdga r = truncated_polynomial(3);
    SmallExtension e = tower_step(r, 2);
    NilpotentDgla nq(l, e.quotient);
    Vector w = nq.element({{unit_vector(2, 0), 1}});
    LiftResult res = lift_mc(l, e, w);
    REQUIRE(std::holds_alternative<ObstructedMc>(res));
    const auto& ob = std::get<ObstructedMc>(res);
    NilpotentDgla nt(l, r);
    CHECK(ob.residual == nt.element({{unit_vector(2, 1), 2}}));
    CHECK(ob.obstruction.degree == 2);
    CHECK(ob.obstruction.space_dim == 1);
    CHECK(!is_zero(ob.obstruction.coordinates));
    // any other lift has the same class
    Vector shift(nt.dim());
    shift[nt.index(0, 2)] = 5;
    auto res2 = lift_mc(l, e, w, shift);
    REQUIRE(std::holds_alternative<ObstructedMc>(res2));
    CHECK(std::get<ObstructedMc>(res2).obstruction.coordinates == ob.obstruction.coordinates);
  }
  SUBCASE("zero lifts to zero") {
    NilpotentDgla n(quadratic_cone_dgla(), truncated_polynomial(3));
    SmallExtension e = tower_step(n.ring(), 2);
    auto res = lift_mc(n.base(), e, Vector(2));
    REQUIRE(std::holds_alternative<LiftedMc>(res));
    CHECK(is_zero(std::get<LiftedMc>(res).element));
  }
  SUBCASE("non-MC input is rejected") {
    NilpotentDgla n(quadratic_cone_dgla(), truncated_polynomial(4));
    SmallExtension e = tower_step(n.ring(), 3);
    NilpotentDgla nq(n.base(), e.quotient);
    CHECK_THROWS_AS(lift_mc(n.base(), e, nq.element({{unit_vector(2, 0), 1}})), NotMaurerCartan);
  }
  SUBCASE("random lifts: class independence, torsor, projection") {
    Rng rng(77);
    auto rings = ring_family();
    int obstructed = 0, lifted = 0;
    for (int trial = 0; trial < 80; ++trial) {
      Sample s = random_sample(rng, rings);
      if (trial % 3 == 0) s.l = quadratic_cone_dgla();
      if (s.r.nilpotency_index() < 2) continue;
      auto tower = madic_tower(s.r);
      const SmallExtension& e = tower[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(tower.size()) - 1))];
      NilpotentDgla nq(s.l, e.quotient), nt(s.l, e.total);
      Vector wq = random_mc(rng, nq);
      // a second linear lift: add a random degree-1 element of L (x) I
      Vector shift(nt.dim());
      for (std::size_t i : nt.dgla().indices_of_degree(1))
        for (std::size_t k : e.kernel)
          if (nt.ring_index(i) == k) shift[i] = small_rational(rng, 2);
      auto r1 = lift_mc(s.l, e, wq), r2 = lift_mc(s.l, e, wq, shift);
      REQUIRE(r1.index() == r2.index());
      if (auto* o1 = std::get_if<ObstructedMc>(&r1)) {
        ++obstructed;
        const auto& o2 = std::get<ObstructedMc>(r2);
        CHECK(o1->obstruction.coordinates == o2.obstruction.coordinates);
        // independent membership check: the residual difference is a boundary in L (x) I
        std::vector<std::size_t> support;
        for (std::size_t i = 0; i < nt.dim(); ++i)
          for (std::size_t k : e.kernel)
            if (nt.ring_index(i) == k) support.push_back(i);
        SubcomplexHomology h = subcomplex_homology(nt.dgla(), support, 2);
        CHECK(h.homology.boundaries.contains(h.local(o1->residual - o2.residual)));
        CHECK(!h.homology.boundaries.contains(h.local(o1->residual)));
      } else {
        ++lifted;
        const auto& l1 = std::get<LiftedMc>(r1);
        CHECK(is_maurer_cartan(nt.dgla(), l1.element));
        CHECK(nt.map_coefficients(l1.element, nq, e.projection) == wq);
        Vector moved = l1.element;
        for (const auto& z : l1.torsor_basis) axpy(moved, small_rational(rng, 3), z);
        CHECK(is_maurer_cartan(nt.dgla(), moved));
        CHECK(nt.map_coefficients(moved, nq, e.projection) == wq);
      }
    }
    CHECK(obstructed > 0);
    CHECK(lifted > 0);
  }
}

TEST_CASE("gauge equivalence") {
  Rng rng(99);
  SUBCASE("identical elements") {
    NilpotentDgla n(sl2(), truncated_polynomial(3));
    auto res = gauge_equivalent(n, Vector(n.dim()), Vector(n.dim()));
    REQUIRE(std::holds_alternative<Equivalent>(res));
    CHECK(is_zero(std::get<Equivalent>(res).gauge));
  }
  SUBCASE("square-zero agrees with the coset test") {
    std::vector<ArtinianCdga> rings = {truncated_polynomial(2), square_zero(std::vector<int>{0, 0}),
                                       square_zero(std::vector<int>{0, 1}), dg_square_zero_ring()};
    int equivalent = 0, inequivalent = 0;
    for (const auto& r : rings)
      for (int trial = 0; trial < 15; ++trial) {
        EndData e = random_end_data(rng);
        NilpotentDgla n(end_dgla(e.vdeg, e.dv), r);
        Vector w = random_mc(rng, n);
        Vector w2 = trial % 2 == 0 ? w - n.dgla().d(random_of_degree(rng, n.dgla(), 0)) : random_mc(rng, n);
        // MC set is exactly Z^1
        CHECK(is_maurer_cartan(n.dgla(), w));
        CHECK(is_zero(n.dgla().d(w2)));
        auto e1 = n.dgla().indices_of_degree(0);
        auto d1 = n.dgla().indices_of_degree(1);
        bool coset = solve(n.dgla().differential().submatrix(d1, e1), [&] {
                       Vector v(d1.size());
                       for (std::size_t i = 0; i < d1.size(); ++i) v[i] = w[d1[i]] - w2[d1[i]];
                       return v;
                     }()).has_value();
        auto res = gauge_equivalent(n, w, w2);
        if (coset) {
          REQUIRE(std::holds_alternative<Equivalent>(res));
          CHECK(gauge_act(n, std::get<Equivalent>(res).gauge, w) == w2);
          ++equivalent;
        } else {
          REQUIRE(std::holds_alternative<Inequivalent>(res));
          CHECK(std::get<Inequivalent>(res).stage == 1);
          CHECK(!is_zero(std::get<Inequivalent>(res).cls.coordinates));
          ++inequivalent;
        }
      }
    CHECK(equivalent > 0);
    CHECK(inequivalent > 0);
  }
  SUBCASE("gauge orbits are recognised over deeper rings") {
    auto rings = ring_family();
    int decided = 0;
    for (int trial = 0; trial < 60; ++trial) {
      Sample s = random_sample(rng, rings);
      NilpotentDgla n(s.l, s.r);
      Vector w = random_mc(rng, n);
      Vector w2 = gauge_act(n, random_of_degree(rng, n.dgla(), 0), w);
      auto res = gauge_equivalent(n, w, w2);
      CHECK(!std::holds_alternative<Inequivalent>(res));
      if (auto* eq = std::get_if<Equivalent>(&res)) {
        CHECK(gauge_act(n, eq->gauge, w) == w2);
        ++decided;
      }
    }
    CHECK(decided >= 50);
  }
  SUBCASE("inequivalence detected at stage 2") {
    NilpotentDgla n(abelian_dgla({1}, Matrix(1, 1)), truncated_polynomial(3));
    Vector w2 = n.element({{unit_vector(1, 0), 2}});
    auto res = gauge_equivalent(n, Vector(n.dim()), w2);
    REQUIRE(std::holds_alternative<Inequivalent>(res));
    CHECK(std::get<Inequivalent>(res).stage == 2);
  }
  SUBCASE("non-MC input") {
    NilpotentDgla n(quadratic_cone_dgla(), truncated_polynomial(3));
    Vector w = n.element({{unit_vector(2, 0), 1}});
    CHECK_THROWS_AS(gauge_equivalent(n, w, w), NotMaurerCartan);
  }
}

TEST_CASE("tangent space") {
  Rng rng(4);
  CHECK_THROWS_AS(tangent_defs(NilpotentDgla(sl2(), truncated_polynomial(3))), RingNotSquareZero);
  // H^1 = 0, m in degree 0
  CHECK(tangent_defs(NilpotentDgla(sl2(), truncated_polynomial(2))).dim == 0);
  Matrix d(3, 3);
  d.set(1, 0, 1);
  Dgla ab = abelian_dgla({0, 1, 1}, d);
  CHECK(tangent_defs(NilpotentDgla(ab, truncated_polynomial(2))).dim == 1);
  // dimension is sum over m-basis of H^{1+j}(L), j the homological degree
  for (const auto& r : {truncated_polynomial(2), square_zero(std::vector<int>{0, 1}),
                        square_zero(std::vector<int>{1, 1, 2}), square_zero(std::vector<int>{0, -1})}) {
    for (int trial = 0; trial < 6; ++trial) {
      EndData e = random_end_data(rng);
      Dgla l = end_dgla(e.vdeg, e.dv);
      TangentSpace t = tangent_defs(NilpotentDgla(l, r));
      std::size_t expected = 0;
      for (std::size_t j = 1; j < r.dim(); ++j) expected += cohomology_dim(l, 1 + r.degree(j));
      CHECK(t.dim == expected);
      for (const auto& b : t.basis) CHECK(is_zero(NilpotentDgla(l, r).dgla().d(b)));
    }
  }
  // acyclic coefficients kill everything
  EndData e = random_end_data(rng);
  CHECK(tangent_defs(NilpotentDgla(end_dgla(e.vdeg, e.dv), dg_square_zero_ring())).dim == 0);
}

TEST_CASE("gauges as paths") {
  Rng rng(12);
  SUBCASE("constant path") {
    NilpotentDgla n(sl2(), truncated_polynomial(3));
    Vector w(n.dim());
    GaugePath p = gauge_to_path(n, Vector(n.dim()), w, 3);
    CHECK(evaluate_path(p, 0) == w);
    CHECK(evaluate_path(p, 1) == w);
    CHECK(is_zero(path_form_component(p, 0)));
  }
  SUBCASE("abelian path is linear") {
    Matrix d(2, 2);
    d.set(1, 0, 1);
    NilpotentDgla n(abelian_dgla({0, 1}, d), truncated_polynomial(3));
    Vector a = n.element({{unit_vector(2, 0), 1}, {unit_vector(2, 0), 2}});
    Vector w = n.element({{unit_vector(2, 1), 1}});
    GaugePath p = gauge_to_path(n, a, w, 3);
    CHECK(evaluate_path(p, Rational(1, 3)) == w - Rational(1, 3) * n.dgla().d(a));
    CHECK(path_form_component(p, 0) == Rational(p.flow_sign) * a);
    CHECK(p.flow_sign == -1);
  }
  SUBCASE("random endpoints are exact") {
    auto rings = ring_family();
    for (int trial = 0; trial < 40; ++trial) {
      Sample s = random_sample(rng, rings);
      NilpotentDgla n(s.l, s.r);
      Vector w = random_mc(rng, n);
      Vector a = random_of_degree(rng, n.dgla(), 0);
      GaugePath p = gauge_to_path(n, a, w, std::max(1, n.nilpotency_index()));
      CHECK(is_maurer_cartan(p.dgla, p.element));
      CHECK(evaluate_path(p, 0) == w);
      CHECK(evaluate_path(p, 1) == gauge_act(n, a, w));
      CHECK(p.flow_sign == -1);
    }
  }
  SUBCASE("truncation too small") {
    // V = k in degrees 0 and 1; a = E(0<-0) t, w = E(1<-0) t: the path has degree 3 in t
    NilpotentDgla n(end_dgla({0, 1}, Matrix(2, 2)), truncated_polynomial(4));
    Vector a = n.element({{unit_vector(4, 0), 1}});
    Vector w = n.element({{unit_vector(4, 2), 1}});
    REQUIRE(is_maurer_cartan(n.dgla(), w));
    CHECK_THROWS_AS(gauge_to_path(n, a, w, 1), TruncationTooSmall);
    CHECK_NOTHROW(gauge_to_path(n, a, w, 4));
  }
}
