#include "deform/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>

namespace deform {

std::size_t max_elimination_entries() {
  static const std::size_t cap = [] {
    const char* env = std::getenv("DEFORM_MAX_MATRIX_ENTRIES");
    if (env == nullptr || *env == '\0') return static_cast<std::size_t>(40000000);
    return static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
  }();
  return cap;
}

namespace {

void check_budget(std::size_t rows, std::size_t cols) {
  if (rows != 0 && cols != 0 && rows * cols > max_elimination_entries())
    throw ResourceLimitError("linear system " + std::to_string(rows) + "x" + std::to_string(cols) +
                             " exceeds DEFORM_MAX_MATRIX_ENTRIES");
}

// r := r + a*s for sparse rows
Matrix::Row row_axpy(const Matrix::Row& r, const Rational& a, const Matrix::Row& s) {
  Matrix::Row out;
  out.reserve(r.size() + s.size());
  std::size_t i = 0, j = 0;
  while (i < r.size() || j < s.size()) {
    if (j == s.size() || (i < r.size() && r[i].first < s[j].first)) {
      out.push_back(r[i++]);
    } else if (i == r.size() || s[j].first < r[i].first) {
      out.emplace_back(s[j].first, a * s[j].second);
      ++j;
    } else {
      Rational v = r[i].second + a * s[j].second;
      if (v != 0) out.emplace_back(r[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace_back(i, Rational(1));
  return m;
}

Matrix Matrix::from_dense(const std::vector<Vector>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (rows[i][j] != 0) m.data_[i].emplace_back(j, rows[i][j]);
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& columns, std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i)
      if (columns[j][i] != 0) m.data_[i].emplace_back(j, columns[j][i]);
  return m;
}

Rational Matrix::at(std::size_t i, std::size_t j) const {
  const Row& r = data_.at(i);
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.first < c; });
  if (it != r.end() && it->first == j) return it->second;
  return 0;
}

void Matrix::set(std::size_t i, std::size_t j, const Rational& v) {
  Row& r = data_.at(i);
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.first < c; });
  if (it != r.end() && it->first == j) {
    if (v == 0)
      r.erase(it);
    else
      it->second = v;
  } else if (v != 0) {
    r.insert(it, Entry(j, v));
  }
}

void Matrix::add(std::size_t i, std::size_t j, const Rational& v) {
  if (v == 0) return;
  Row& r = data_.at(i);
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.first < c; });
  if (it != r.end() && it->first == j) {
    it->second += v;
    if (it->second == 0) r.erase(it);
  } else {
    r.insert(it, Entry(j, v));
  }
}

void Matrix::set_row(std::size_t i, Row r) { data_.at(i) = std::move(r); }

bool Matrix::is_zero() const {
  for (const auto& r : data_)
    if (!r.empty()) return false;
  return true;
}

std::size_t Matrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
  return v;
}

Vector Matrix::dense_row(std::size_t i) const {
  Vector v(cols_);
  for (const auto& [c, x] : data_[i]) v[c] = x;
  return v;
}

std::vector<Vector> Matrix::to_dense() const {
  std::vector<Vector> out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back(dense_row(i));
  return out;
}

Vector Matrix::operator*(const Vector& v) const {
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [c, x] : data_[i])
      if (v[c] != 0) out[i] += x * v[c];
  return out;
}

Matrix Matrix::operator*(const Matrix& other) const {
  Matrix out(rows_, other.cols_);
  std::vector<Rational> acc(other.cols_);
  std::vector<char> touched(other.cols_, 0);
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < rows_; ++i) {
    cols.clear();
    for (const auto& [k, a] : data_[i]) {
      for (const auto& [j, b] : other.data_[k]) {
        if (!touched[j]) {
          touched[j] = 1;
          cols.push_back(j);
        }
        acc[j] += a * b;
      }
    }
    std::sort(cols.begin(), cols.end());
    Row r;
    for (std::size_t j : cols) {
      if (acc[j] != 0) r.emplace_back(j, acc[j]);
      acc[j] = 0;
      touched[j] = 0;
    }
    out.data_[i] = std::move(r);
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& other) const {
  Matrix out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) out.data_[i] = row_axpy(data_[i], 1, other.data_[i]);
  return out;
}

Matrix Matrix::operator-(const Matrix& other) const {
  Matrix out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) out.data_[i] = row_axpy(data_[i], -1, other.data_[i]);
  return out;
}

Matrix Matrix::scaled(const Rational& s) const {
  Matrix out(rows_, cols_);
  if (s == 0) return out;
  for (std::size_t i = 0; i < rows_; ++i) {
    out.data_[i] = data_[i];
    for (auto& e : out.data_[i]) e.second *= s;
  }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto& [j, x] : data_[i]) out.data_[j].emplace_back(i, x);
  return out;
}

bool Matrix::operator==(const Matrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

Matrix Matrix::submatrix(const std::vector<std::size_t>& row_idx, const std::vector<std::size_t>& col_idx) const {
  std::map<std::size_t, std::size_t> col_pos;
  for (std::size_t k = 0; k < col_idx.size(); ++k) col_pos[col_idx[k]] = k;
  Matrix out(row_idx.size(), col_idx.size());
  for (std::size_t a = 0; a < row_idx.size(); ++a) {
    Row r;
    for (const auto& [c, x] : data_.at(row_idx[a])) {
      auto it = col_pos.find(c);
      if (it != col_pos.end()) r.emplace_back(it->second, x);
    }
    std::sort(r.begin(), r.end(), [](const Entry& l, const Entry& q) { return l.first < q.first; });
    out.data_[a] = std::move(r);
  }
  return out;
}

Matrix Matrix::hstack(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows_, a.cols_ + b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    Row r = a.data_[i];
    for (const auto& [c, x] : b.data_[i]) r.emplace_back(c + a.cols_, x);
    out.data_[i] = std::move(r);
  }
  return out;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows_ + b.rows_, a.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) out.data_[i] = a.data_[i];
  for (std::size_t i = 0; i < b.rows_; ++i) out.data_[a.rows_ + i] = b.data_[i];
  return out;
}

Echelon row_reduce_dense(const Matrix& m) {
  check_budget(m.rows(), m.cols());
  std::vector<Vector> a = m.to_dense();
  const std::size_t rows = m.rows(), cols = m.cols();
  Echelon e;
  e.cols = cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    Rational inv = 1 / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (a[r][j] != 0) a[i][j] -= f * a[r][j];
    }
    e.pivots.push_back(c);
    ++r;
  }
  for (std::size_t i = 0; i < r; ++i) {
    Matrix::Row row;
    for (std::size_t j = 0; j < cols; ++j)
      if (a[i][j] != 0) row.emplace_back(j, a[i][j]);
    e.rows.push_back(std::move(row));
  }
  return e;
}

Echelon row_reduce_sparse(const Matrix& m) {
  check_budget(m.rows(), m.cols());
  // pivot column -> reduced row; every stored row is zero on all other pivot columns.
  std::map<std::size_t, Matrix::Row> reduced;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Matrix::Row r = m.row(i);
    if (r.empty()) continue;
    std::vector<std::pair<std::size_t, Rational>> hits;
    for (const auto& [c, x] : r)
      if (reduced.count(c)) hits.emplace_back(c, x);
    for (const auto& [c, x] : hits) r = row_axpy(r, -x, reduced[c]);
    if (r.empty()) continue;
    std::size_t pc = r.front().first;
    Rational inv = 1 / r.front().second;
    for (auto& e : r) e.second *= inv;
    for (auto& [c, other] : reduced) {
      auto it = std::lower_bound(other.begin(), other.end(), pc,
                                 [](const Matrix::Entry& e, std::size_t col) { return e.first < col; });
      if (it != other.end() && it->first == pc) {
        Rational f = it->second;
        other = row_axpy(other, -f, r);
      }
    }
    reduced.emplace(pc, std::move(r));
  }
  Echelon e;
  e.cols = m.cols();
  for (auto& [c, r] : reduced) {
    e.pivots.push_back(c);
    e.rows.push_back(std::move(r));
  }
  return e;
}

Echelon row_reduce(const Matrix& m) {
  if (m.rows() < 32 && m.cols() < 32) return row_reduce_dense(m);
  return row_reduce_sparse(m);
}

std::size_t rank(const Matrix& m) { return row_reduce(m).rank(); }

std::vector<Vector> kernel_basis(const Matrix& m) {
  Echelon e = row_reduce(m);
  std::vector<char> is_pivot(m.cols(), 0);
  for (std::size_t p : e.pivots) is_pivot[p] = 1;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < e.rows.size(); ++i) {
      const auto& row = e.rows[i];
      auto it = std::lower_bound(row.begin(), row.end(), f,
                                 [](const Matrix::Entry& x, std::size_t c) { return x.first < c; });
      if (it != row.end() && it->first == f) v[e.pivots[i]] = -it->second;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
  Matrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Matrix::Row r = a.row(i);
    if (b[i] != 0) r.emplace_back(a.cols(), b[i]);
    aug.set_row(i, std::move(r));
  }
  Echelon e = row_reduce(aug);
  Vector x(a.cols());
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    if (e.pivots[i] == a.cols()) return std::nullopt;
    const auto& row = e.rows[i];
    if (!row.empty() && row.back().first == a.cols()) x[e.pivots[i]] = row.back().second;
  }
  return x;
}

std::vector<Vector> column_space_basis(const Matrix& m) {
  Echelon e = row_reduce(m);
  std::vector<Vector> out;
  for (std::size_t p : e.pivots) out.push_back(m.column(p));
  return out;
}

Span::Span(std::size_t ambient, std::vector<Vector> generators)
    : ambient_(ambient), generators_(std::move(generators)) {
  echelon_ = row_reduce(Matrix::from_dense(generators_, ambient_));
}

Vector Span::residue(const Vector& v) const {
  Vector r(v);
  for (std::size_t i = 0; i < echelon_.rows.size(); ++i) {
    Rational f = r[echelon_.pivots[i]];
    if (f == 0) continue;
    for (const auto& [c, x] : echelon_.rows[i]) r[c] -= f * x;
  }
  return r;
}

bool Span::contains(const Vector& v) const { return is_zero(residue(v)); }

std::optional<Vector> Span::coordinates(const Vector& v) const {
  if (generators_.empty()) {
    if (is_zero(v)) return Vector{};
    return std::nullopt;
  }
  return solve(Matrix::from_columns(generators_, ambient_), v);
}

Vector Homology::class_of(const Vector& cycle) const {
  auto c = reps_and_boundaries.coordinates(cycle);
  if (!c) throw std::invalid_argument("class_of: vector is not a cycle");
  return Vector(c->begin(), c->begin() + static_cast<std::ptrdiff_t>(representatives.size()));
}

Homology homology_at(const Matrix& incoming, const Matrix& outgoing, std::size_t dim_middle) {
  Homology h;
  std::vector<Vector> z = outgoing.rows() == 0 ? std::vector<Vector>{} : kernel_basis(outgoing);
  if (outgoing.rows() == 0)
    for (std::size_t i = 0; i < dim_middle; ++i) z.push_back(unit_vector(dim_middle, i));
  std::vector<Vector> b = incoming.cols() == 0 ? std::vector<Vector>{} : column_space_basis(incoming);
  h.cycles = Span(dim_middle, z);
  h.boundaries = Span(dim_middle, b);
  // extend a basis of the boundaries to one of the cycles
  std::vector<Vector> acc = b;
  Span current(dim_middle, acc);
  for (const auto& v : z) {
    if (current.contains(v)) continue;
    h.representatives.push_back(v);
    acc.push_back(v);
    current = Span(dim_middle, acc);
  }
  h.dim = h.representatives.size();
  std::vector<Vector> rb = h.representatives;
  rb.insert(rb.end(), b.begin(), b.end());
  h.reps_and_boundaries = Span(dim_middle, rb);
  return h;
}

}  // namespace deform
