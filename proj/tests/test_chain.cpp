#include <doctest.h>

#include "deform/chain.hpp"
#include "support.hpp"

using namespace deform;
using namespace deform::testing;

namespace {

Complex two_term(const Rational& x) {
  Matrix d(1, 1);
  d.set(0, 0, x);
  return Complex(GradedSpace({{0, {"a"}}, {1, {"b"}}}), {{1, d}});
}

Complex point(int deg = 0) { return Complex(GradedSpace({{deg, {"1"}}}), {}); }

std::size_t total_betti(const Complex& c) {
  std::size_t t = 0;
  for (int n : c.degrees()) t += homology(c, n).dim;
  return t;
}

}  // namespace

TEST_CASE("homology of small complexes") {
  CHECK(homology(zero_complex(), 3).dim == 0);
  CHECK(homology(two_term(1), 0).dim == 0);
  CHECK(homology(two_term(1), 1).dim == 0);
  CHECK(homology(two_term(0), 0).dim == 1);
  Homology h = homology(two_term(0), 0);
  CHECK(h.is_cycle(Vector{3}));
  CHECK(h.class_of(Vector{3}) == Vector{3});
}

TEST_CASE("d squared must vanish") {
  Matrix d1(1, 1), d2(1, 1);
  d1.set(0, 0, 1);
  d2.set(0, 0, 1);
  CHECK_THROWS_AS(Complex(GradedSpace({{0, {"a"}}, {1, {"b"}}, {2, {"c"}}}), {{1, d1}, {2, d2}}), InvalidComplex);
  CHECK_THROWS_AS(Complex(GradedSpace({{0, {"a"}}, {1, {"b"}}}), {{1, Matrix(2, 1)}}), InvalidComplex);
}

TEST_CASE("hom complex of the identity two-term complex") {
  Complex h = hom_complex(two_term(1), two_term(1));
  CHECK(h.orientation() == Orientation::cochain);
  CHECK(h.cochain_dim(-1) == 1);
  CHECK(h.cochain_dim(0) == 2);
  CHECK(h.cochain_dim(1) == 1);
  // d on Hom^{-1}: E(b<-a) |-> E(a<-a) + E(b<-b); d on Hom^0: (E(a<-a), E(b<-b)) |-> (-1, 1) E(a<-b)
  Matrix dm1 = h.cochain_d(-1), d0 = h.cochain_d(0);
  CHECK(dm1.column(0) == Vector{1, 1});
  CHECK(d0.dense_row(0) == Vector{-1, 1});
  CHECK(total_betti(h) == 0);
}

TEST_CASE("hom from the ground field is the cochain reading") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Complex n = random_complex(rng, -1, {2, 3, 1});
    Complex h = hom_complex(point(), n);
    Complex un = u_convert(n);
    for (int i = -3; i <= 3; ++i) {
      CHECK(h.cochain_dim(i) == un.cochain_dim(i));
      CHECK(h.cochain_d(i) == un.cochain_d(i));
    }
  }
  Complex h = hom_complex(point(), point());
  CHECK(h.cochain_dim(0) == 1);
  CHECK(h.cochain_d(0).is_zero());
}

TEST_CASE("tensor product") {
  Complex k = point();
  Complex t = two_term(0);
  Complex tk = tensor(t, k);
  CHECK(tk.dim(0) == 1);
  CHECK(tk.dim(1) == 1);
  Complex tt = tensor(t, t);
  CHECK(tt.dim(0) == 1);
  CHECK(tt.dim(1) == 2);
  CHECK(tt.dim(2) == 1);
  CHECK(total_betti(tensor(two_term(1), t)) == 0);
}

TEST_CASE("kunneth formula on random complexes") {
  Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    Complex u = random_complex(rng, uniform(rng, -2, 1),
                               {static_cast<std::size_t>(uniform(rng, 0, 2)), static_cast<std::size_t>(uniform(rng, 1, 2)),
                                static_cast<std::size_t>(uniform(rng, 0, 2))});
    Complex v = random_complex(rng, uniform(rng, -1, 1),
                               {static_cast<std::size_t>(uniform(rng, 1, 2)), static_cast<std::size_t>(uniform(rng, 0, 2))});
    Complex uv = tensor(u, v);
    for (int n = -5; n <= 5; ++n) {
      std::size_t expected = 0;
      for (int i = -5; i <= 5; ++i) expected += homology(u, i).dim * homology(v, n - i).dim;
      CHECK(homology(uv, n).dim == expected);
    }
  }
}

TEST_CASE("homology is additive under direct sums") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    Complex a = random_complex(rng, 0, {2, 2, 1});
    Complex b = random_complex(rng, -1, {1, 3});
    Complex s = direct_sum(a, b);
    for (int n = -2; n <= 3; ++n) CHECK(homology(s, n).dim == homology(a, n).dim + homology(b, n).dim);
  }
}

TEST_CASE("shifts, cones and u-conversion") {
  Rng rng(29);
  Complex m = random_complex(rng, 0, {2, 2, 1});
  CHECK(shift(m, 0) == m);
  Complex s1 = shift(m, 1);
  CHECK(s1.dim(-1) == m.dim(0));
  CHECK(s1.d(0) == m.d(1).scaled(-1));
  CHECK(u_convert(u_convert(m)) == m);
  for (int n = -2; n <= 2; ++n) CHECK(u_convert(shift(m, n)) == cochain_shift(u_convert(m), -n));

  // cone(M -> 0) is M shifted so that M_{n-1} sits in degree n
  ChainMap to_zero{m, zero_complex(), 0, {}};
  Complex c0 = cone(to_zero);
  Complex expected = shift(m, -1);
  for (int n = -1; n <= 4; ++n) {
    CHECK(c0.dim(n) == expected.dim(n));
    CHECK(c0.d(n) == expected.d(n));
  }
  CHECK(total_betti(cone(m)) == 0);

  // cone of M = (Q -0-> Q): identity map gives acyclic cone, zero map gives H(M) + H(M) spread
  Complex z = two_term(0);
  CHECK(total_betti(cone(z)) == 0);
  ChainMap zero_map{z, z, 0, {{0, Matrix(1, 1)}, {1, Matrix(1, 1)}}};
  Complex cz = cone(zero_map);
  CHECK(homology(cz, 0).dim == 1);
  CHECK(homology(cz, 1).dim == 2);
  CHECK(homology(cz, 2).dim == 1);
}

TEST_CASE("chain map check") {
  Complex m = two_term(1);
  ChainMap id = identity_map(m);
  CHECK(id.commutes());
  ChainMap bad{m, m, 0, {{0, Matrix::identity(1)}}};
  CHECK_FALSE(bad.commutes());
}
