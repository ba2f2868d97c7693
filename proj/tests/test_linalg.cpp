#include <doctest.h>

#include "deform/linalg.hpp"
#include "support.hpp"

using namespace deform;
using namespace deform::testing;

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-4") == Rational(-4));
  CHECK(format_rational(Rational(-2, 4)) == "-1/2");
  CHECK(format_rational(Rational(5)) == "5");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("x"));
  CHECK_THROWS(parse_rational("1.5"));
}

TEST_CASE("dense and sparse elimination agree") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t r = static_cast<std::size_t>(uniform(rng, 1, 40));
    std::size_t c = static_cast<std::size_t>(uniform(rng, 1, 40));
    Matrix m = random_matrix(rng, r, c, 1);
    // make some rank deficiency
    if (r > 2) m.set_row(r - 1, (m * Matrix::identity(c)).row(0));
    Echelon a = row_reduce_dense(m), b = row_reduce_sparse(m);
    CHECK(a.pivots == b.pivots);
    CHECK(a.rows == b.rows);
  }
}

TEST_CASE("kernel and solve") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t r = static_cast<std::size_t>(uniform(rng, 1, 8));
    std::size_t c = static_cast<std::size_t>(uniform(rng, 1, 8));
    Matrix m = random_matrix(rng, r, c, 2);
    auto ker = kernel_basis(m);
    CHECK(ker.size() + rank(m) == c);
    for (const auto& v : ker) CHECK(is_zero(m * v));
    Vector x = random_vector(rng, c);
    Vector b = m * x;
    auto sol = solve(m, b);
    REQUIRE(sol.has_value());
    CHECK(m * *sol == b);
  }
  Matrix z(2, 2);
  z.set(0, 0, 1);
  CHECK_FALSE(solve(z, Vector{0, 1}).has_value());
}

TEST_CASE("span coordinates") {
  Span s(3, {Vector{1, 0, 1}, Vector{0, 1, 1}});
  CHECK(s.contains(Vector{2, 3, 5}));
  CHECK_FALSE(s.contains(Vector{0, 0, 1}));
  auto c = s.coordinates(Vector{2, 3, 5});
  REQUIRE(c);
  CHECK(*c == Vector{2, 3});
}

TEST_CASE("matrix product and transpose") {
  Rng rng(3);
  Matrix a = random_matrix(rng, 3, 4), b = random_matrix(rng, 4, 2);
  Matrix ab = a * b;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < 4; ++k) s += a.at(i, k) * b.at(k, j);
      CHECK(ab.at(i, j) == s);
    }
  CHECK((a * b).transpose() == b.transpose() * a.transpose());
}
