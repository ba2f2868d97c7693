#include "deform/bilinear.hpp"

#include <algorithm>
#include <string>

namespace deform {

SparseVec to_sparse(const Vector& v) {
  SparseVec s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) s.emplace_back(i, v[i]);
  return s;
}

void accumulate(Vector& out, const Rational& scale, const SparseVec& v) {
  for (const auto& [k, x] : v) out[k] += scale * x;
}

void BilinearTable::add(std::size_t i, std::size_t j, std::size_t k, const Rational& value) {
  if (value == 0) return;
  SparseVec& e = rows_.at(i)[j];
  auto it = std::lower_bound(e.begin(), e.end(), k, [](const auto& p, std::size_t c) { return p.first < c; });
  if (it != e.end() && it->first == k) {
    it->second += value;
    if (it->second == 0) e.erase(it);
  } else {
    e.insert(it, {k, value});
  }
  if (e.empty()) rows_[i].erase(j);
}

void BilinearTable::add(std::size_t i, std::size_t j, const SparseVec& value, const Rational& scale) {
  for (const auto& [k, x] : value) add(i, j, k, scale * x);
}

void BilinearTable::mark_overflow(std::size_t i, std::size_t j) { overflow_[{i, j}] = true; }

SparseVec BilinearTable::entry(std::size_t i, std::size_t j) const {
  auto it = rows_.at(i).find(j);
  return it == rows_[i].end() ? SparseVec{} : it->second;
}

Vector BilinearTable::entry_dense(std::size_t i, std::size_t j) const {
  Vector v(out_);
  accumulate(v, 1, entry(i, j));
  return v;
}

bool BilinearTable::overflows(std::size_t i, std::size_t j) const { return overflow_.count({i, j}) > 0; }

std::size_t BilinearTable::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows_)
    for (const auto& [j, v] : r) n += v.size();
  return n;
}

Vector BilinearTable::apply(const Vector& x, const Vector& y) const {
  Vector out(out_);
  for (std::size_t i = 0; i < left_; ++i) {
    if (x[i] == 0) continue;
    for (const auto& [j, v] : rows_[i]) {
      if (y[j] == 0) continue;
      accumulate(out, x[i] * y[j], v);
    }
  }
  for (const auto& [p, flag] : overflow_)
    if (x[p.first] != 0 && y[p.second] != 0)
      throw TruncationTooSmall("product of basis elements " + std::to_string(p.first) + " and " +
                               std::to_string(p.second) + " exceeds the truncation");
  return out;
}

bool BilinearTable::operator==(const BilinearTable& other) const {
  return left_ == other.left_ && right_ == other.right_ && out_ == other.out_ && rows_ == other.rows_ &&
         overflow_ == other.overflow_;
}

}  // namespace deform
