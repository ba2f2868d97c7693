#include <doctest.h>

#include "deform/artinian.hpp"
#include "support.hpp"

using namespace deform;
using namespace deform::testing;

namespace {

RingViolationKind first_violation(const RingData& d) {
  try {
    validate(d);
  } catch (const RingValidationError& e) {
    return e.first_kind();
  }
  FAIL("expected a validation error");
  return RingViolationKind::Malformed;
}

RingData two_generator_data() {
  RingData d;
  d.names = {"1", "x", "y"};
  d.degrees = {0, 0, 0};
  d.unit = {1, 0, 0};
  d.augmentation = {1, 0, 0};
  return d;
}

}  // namespace

TEST_CASE("named rings") {
  ArtinianCdga k = ground_field();
  CHECK(k.dim() == 1);
  CHECK(k.nilpotency_index() == 1);
  CHECK(madic_tower(k).empty());

  ArtinianCdga t3 = truncated_polynomial(3);
  CHECK(t3.nilpotency_index() == 3);
  CHECK(t3.basis_names() == std::vector<std::string>{"1", "t", "t^2"});

  ArtinianCdga eps = truncated_polynomial(2, 1, "e");
  CHECK(eps.nilpotency_index() == 2);
  CHECK(eps.is_nonnegatively_graded());
  CHECK_THROWS_AS(truncated_polynomial(3, 1), RingValidationError);
}

TEST_CASE("square-zero constructor") {
  ArtinianCdga a = square_zero(std::vector<int>{0});
  ArtinianCdga t2 = truncated_polynomial(2);
  CHECK(a.dim() == 2);
  CHECK(a.multiplication() == t2.multiplication());
  CHECK(a.differential() == t2.differential());
  ArtinianCdga e = square_zero(std::vector<int>{1});
  CHECK(e.degree(1) == 1);
  CHECK(e.nilpotency_index() == 2);
  ArtinianCdga z = square_zero(std::vector<int>{});
  CHECK(z.dim() == 1);
  CHECK(z.nilpotency_index() == 1);
}

TEST_CASE("validation violations are named") {
  {
    RingData d = two_generator_data();
    d.products[{1, 2}] = {0, 0, 0};
    d.products[{2, 1}] = {0, 1, 0};  // y x = x  but  x y = 0
    d.products[{1, 1}] = {0, 0, 0};
    RingViolationKind k = first_violation(d);
    CHECK((k == RingViolationKind::NotCommutative || k == RingViolationKind::NotHomogeneous));
  }
  {
    RingData d = two_generator_data();
    d.products[{1, 2}] = {0, 0, 1};
    d.products[{2, 1}] = {0, 1, 0};
    try {
      validate(d);
      FAIL("expected failure");
    } catch (const RingValidationError& e) {
      CHECK(e.first_kind() == RingViolationKind::NotCommutative);
      CHECK(e.violations().front().basis == std::vector<std::string>{"x", "y"});
    }
  }
  {
    // x^2 = y, x y = 0 (not associative: (x x) x = y x = y ... set y x = y)
    RingData d = two_generator_data();
    d.products[{1, 1}] = {0, 0, 1};
    d.products[{1, 2}] = {0, 0, 1};
    d.products[{2, 1}] = {0, 0, 1};
    d.products[{2, 2}] = {0, 0, 0};
    CHECK(first_violation(d) == RingViolationKind::NotAssociative);
  }
  {
    // e^2 = e inside the maximal ideal
    RingData d;
    d.names = {"1", "e"};
    d.degrees = {0, 0};
    d.unit = {1, 0};
    d.augmentation = {1, 0};
    d.products[{1, 1}] = {0, 1};
    CHECK(first_violation(d) == RingViolationKind::NotNilpotent);
  }
  {
    // ds = 1 violates the dg condition on the augmentation
    RingData d;
    d.names = {"1", "s"};
    d.degrees = {0, 1};
    d.unit = {1, 0};
    d.augmentation = {1, 0};
    Matrix dm(2, 2);
    dm.set(0, 1, 1);
    d.differential = dm;
    CHECK(first_violation(d) == RingViolationKind::AugmentationNotDg);
  }
  {
    // k[t]/t^3 with a degree-1 generator s, ds = t, s t = 0 fails Leibniz on d(s t^?)
    RingData d;
    d.names = {"1", "t", "t2", "s"};
    d.degrees = {0, 0, 0, 1};
    d.unit = {1, 0, 0, 0};
    d.augmentation = {1, 0, 0, 0};
    d.products[{1, 1}] = {0, 0, 1, 0};
    Matrix dm(4, 4);
    dm.set(1, 3, 1);
    d.differential = dm;
    // d(s s) = 0 but ds s - s ds = t s - s t = 0; d(t s)=0 vs t ds = t^2 != 0
    CHECK(first_violation(d) == RingViolationKind::NotLeibniz);
  }
}

TEST_CASE("m-adic tower") {
  ArtinianCdga t3 = truncated_polynomial(3);
  auto tower = madic_tower(t3);
  REQUIRE(tower.size() == 2);
  CHECK(tower[0].quotient.dim() == 1);
  CHECK(tower[0].total.dim() == 2);
  CHECK(tower[0].total.basis_names()[tower[0].kernel[0]] == "t");
  CHECK(tower[1].total.dim() == 3);
  CHECK(tower[1].kernel.size() == 1);
  CHECK(tower[1].total.basis_names()[tower[1].kernel[0]] == "t^2");
  for (const auto& e : tower) CHECK_NOTHROW(verify_small_extension(e));

  CHECK(madic_tower(truncated_polynomial_ring(2, 2)).size() == 1);
}

TEST_CASE("random presentations of the ring family") {
  Rng rng(41);
  int checked = 0;
  for (const auto& base : ring_family()) {
    for (int trial = 0; trial < 6; ++trial) {
      RingData presented = change_basis(base.data(), rng);
      ArtinianCdga r = validate(presented);
      CHECK(r.nilpotency_index() == base.nilpotency_index());
      CHECK(r.dim() == base.dim());
      // the adapted presentation is itself a valid ring
      CHECK(check_ring(r.data()).empty());
      // adapted basis: level-k elements lie in m^k, products raise levels
      for (std::size_t i = 1; i < r.dim(); ++i)
        for (std::size_t j = 1; j < r.dim(); ++j)
          for (const auto& [k, x] : r.multiplication().entry(i, j)) CHECK(r.level(k) >= r.level(i) + r.level(j));
      for (std::size_t j = 0; j < r.dim(); ++j)
        for (std::size_t i = 0; i < r.dim(); ++i)
          if (r.differential().at(i, j) != 0) CHECK(r.level(i) >= r.level(j));
      // coordinates convert back to the given presentation
      CHECK(r.to_user() * r.to_internal() == Matrix::identity(r.dim()));
      auto tower = madic_tower(r);
      CHECK(static_cast<int>(tower.size()) == r.nilpotency_index() - 1);
      if (!tower.empty()) CHECK(tower.front().total.is_square_zero());
      for (const auto& e : tower) CHECK_NOTHROW(verify_small_extension(e));
      ++checked;
    }
  }
  CHECK(checked >= 60);
}

TEST_CASE("tensor of rings") {
  ArtinianCdga r = tensor_rings(truncated_polynomial(2, 0, "x"), truncated_polynomial(2, 0, "y"));
  CHECK(r.dim() == 4);
  CHECK(r.nilpotency_index() == 3);
  ArtinianCdga c = dg_cubic_ring();
  CHECK(c.nilpotency_index() == 3);
  CHECK(!c.differential().is_zero());
}
