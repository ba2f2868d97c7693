#pragma once

#include <random>
#include <string>

#include "deform/chain.hpp"

namespace deform::testing {

using Rng = std::mt19937_64;

inline Rational small_rational(Rng& rng, int height = 2) {
  std::uniform_int_distribution<int> dist(-height, height);
  return Rational(dist(rng));
}

inline int uniform(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  return dist(rng);
}

inline Vector random_vector(Rng& rng, std::size_t n, int height = 2) {
  Vector v(n);
  for (auto& x : v) x = small_rational(rng, height);
  return v;
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, int height = 2) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, small_rational(rng, height));
  return m;
}

// Random chain complex with the given dimensions in consecutive degrees starting at lo.
inline Complex random_complex(Rng& rng, int lo, const std::vector<std::size_t>& dims) {
  std::map<int, std::vector<std::string>> labels;
  for (std::size_t k = 0; k < dims.size(); ++k)
    for (std::size_t i = 0; i < dims[k]; ++i)
      labels[lo + static_cast<int>(k)].push_back("c" + std::to_string(lo + static_cast<int>(k)) + "_" +
                                                 std::to_string(i));
  std::map<int, Matrix> d;
  Matrix prev;  // d_{n-1}
  for (std::size_t k = 1; k < dims.size(); ++k) {
    int n = lo + static_cast<int>(k);
    std::vector<Vector> ker;
    if (k == 1) {
      for (std::size_t i = 0; i < dims[0]; ++i) ker.push_back(unit_vector(dims[0], i));
    } else {
      ker = kernel_basis(prev);
    }
    Matrix dn(dims[k - 1], dims[k]);
    for (std::size_t j = 0; j < dims[k]; ++j) {
      if (uniform(rng, 0, 3) == 0) continue;
      Vector col(dims[k - 1]);
      for (const auto& z : ker) axpy(col, small_rational(rng, 1), z);
      for (std::size_t i = 0; i < col.size(); ++i) dn.set(i, j, col[i]);
    }
    d[n] = dn;
    prev = dn;
  }
  return Complex(GradedSpace(labels), d);
}

}  // namespace deform::testing

#include "deform/artinian.hpp"

namespace deform::testing {

// Re-present a ring in a random homogeneous basis (degree-0 elements may absorb multiples of 1).
inline RingData change_basis(const RingData& r, Rng& rng) {
  const std::size_t n = r.names.size();
  std::size_t unit_index = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (r.unit == unit_vector(n, i)) unit_index = i;
  std::vector<Vector> cols;
  for (std::size_t i = 0; i < n; ++i) {
    Vector c = unit_vector(n, i);
    if (i != unit_index) {
      // unitriangular mixing inside the degree
      for (std::size_t j = 0; j < i; ++j)
        if (j != unit_index && r.degrees[j] == r.degrees[i]) c[j] = small_rational(rng, 1);
      if (r.degrees[i] == 0) c[unit_index] = small_rational(rng, 1);
    }
    cols.push_back(c);
  }
  Matrix p = Matrix::from_columns(cols, n);
  std::vector<Vector> inv;
  for (std::size_t i = 0; i < n; ++i) inv.push_back(*solve(p, unit_vector(n, i)));
  Matrix pinv = Matrix::from_columns(inv, n);
  auto mul = [&](const Vector& x, const Vector& y) {
    Vector out(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (x[i] == 0 || y[j] == 0) continue;
        Vector e;
        auto it = r.products.find({i, j});
        if (it != r.products.end()) e = it->second;
        else if (i == unit_index) e = unit_vector(n, j);
        else if (j == unit_index) e = unit_vector(n, i);
        else continue;
        axpy(out, x[i] * y[j], e);
      }
    return out;
  };
  RingData s;
  for (std::size_t i = 0; i < n; ++i) s.names.push_back("f" + std::to_string(i));
  s.degrees = r.degrees;
  s.unit = pinv * r.unit;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Vector v = pinv * mul(cols[i], cols[j]);
      if (!is_zero(v)) s.products[{i, j}] = v;
    }
  Matrix d = r.differential.rows() == 0 ? Matrix(n, n) : r.differential;
  s.differential = pinv * d * p;
  s.augmentation = Vector(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) s.augmentation[i] += r.augmentation[k] * cols[i][k];
  return s;
}

// dg ring 1, t, e with |t| = 0, |e| = 1, de = t and m^2 = 0.
inline ArtinianCdga dg_square_zero_ring() {
  RingData d;
  d.names = {"1", "t", "e"};
  d.degrees = {0, 0, 1};
  d.unit = {1, 0, 0};
  d.augmentation = {1, 0, 0};
  Matrix dm(3, 3);
  dm.set(1, 2, 1);
  d.differential = dm;
  ArtinianCdga r = validate(d);
  r.set_name("k<t,e | de=t>");
  return r;
}

// dg ring 1, t, e, te with |e| = 1, de = t, t^2 = 0: nilpotency 3.
inline ArtinianCdga dg_cubic_ring() {
  RingData d;
  d.names = {"1", "t", "e", "te"};
  d.degrees = {0, 0, 1, 1};
  d.unit = {1, 0, 0, 0};
  d.augmentation = {1, 0, 0, 0};
  d.products[{1, 2}] = {0, 0, 0, 1};
  d.products[{2, 1}] = {0, 0, 0, 1};
  Matrix dm(4, 4);
  dm.set(1, 2, 1);
  d.differential = dm;
  ArtinianCdga r = validate(d);
  r.set_name("k<t,e | de=t, t^2=0>");
  return r;
}

// Structured family of small rings (dim <= 4, nilpotency <= 4).
inline std::vector<ArtinianCdga> ring_family() {
  std::vector<ArtinianCdga> out;
  out.push_back(ground_field());
  out.push_back(truncated_polynomial(2));
  out.push_back(truncated_polynomial(3));
  out.push_back(truncated_polynomial(4));
  out.push_back(truncated_polynomial(2, 1));
  out.push_back(square_zero(std::vector<int>{0, 0}));
  out.push_back(square_zero(std::vector<int>{0, 1}));
  out.push_back(truncated_polynomial_ring(2, 2));
  out.push_back(tensor_rings(truncated_polynomial(2, 0, "x"), truncated_polynomial(2, 0, "y")));
  out.push_back(tensor_rings(truncated_polynomial(2, 0, "x"), truncated_polynomial(2, 1, "e")));
  out.push_back(dg_square_zero_ring());
  out.push_back(dg_cubic_ring());
  return out;
}

}  // namespace deform::testing
