#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "deform/rational.hpp"

namespace deform {

using SparseVec = std::vector<std::pair<std::size_t, Rational>>;  // sorted by index, no zeros

SparseVec to_sparse(const Vector& v);
void accumulate(Vector& out, const Rational& scale, const SparseVec& v);

// Raised when a product leaves a truncated range (e.g. polynomial degree above D).
class TruncationTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structure constants of a bilinear map  left x right -> out  on basis pairs.
// Pairs may be marked as overflowing: evaluating them with nonzero coefficients throws.
class BilinearTable {
 public:
  BilinearTable() = default;
  BilinearTable(std::size_t left, std::size_t right, std::size_t out) : left_(left), right_(right), out_(out), rows_(left) {}

  std::size_t left_dim() const { return left_; }
  std::size_t right_dim() const { return right_; }
  std::size_t out_dim() const { return out_; }

  void add(std::size_t i, std::size_t j, std::size_t k, const Rational& value);
  void add(std::size_t i, std::size_t j, const SparseVec& value, const Rational& scale = 1);
  void mark_overflow(std::size_t i, std::size_t j);

  const std::map<std::size_t, SparseVec>& row(std::size_t i) const { return rows_[i]; }
  SparseVec entry(std::size_t i, std::size_t j) const;
  Vector entry_dense(std::size_t i, std::size_t j) const;
  bool overflows(std::size_t i, std::size_t j) const;
  const std::map<std::pair<std::size_t, std::size_t>, bool>& overflow_pairs() const { return overflow_; }
  std::size_t nonzeros() const;

  Vector apply(const Vector& x, const Vector& y) const;
  bool operator==(const BilinearTable& other) const;

 private:
  std::size_t left_ = 0, right_ = 0, out_ = 0;
  std::vector<std::map<std::size_t, SparseVec>> rows_;
  std::map<std::pair<std::size_t, std::size_t>, bool> overflow_;
};

}  // namespace deform
