#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "deform/rational.hpp"

namespace deform {

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Upper bound on rows*cols for any matrix entering elimination.
// Read once from DEFORM_MAX_MATRIX_ENTRIES (default 4e7).
std::size_t max_elimination_entries();

// Sparse row-major matrix over Q. Rows are sorted (column, value) lists without zeros.
class Matrix {
 public:
  using Entry = std::pair<std::size_t, Rational>;
  using Row = std::vector<Entry>;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

  static Matrix identity(std::size_t n);
  static Matrix from_dense(const std::vector<Vector>& rows, std::size_t cols);
  static Matrix from_columns(const std::vector<Vector>& columns, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Rational& v);
  void add(std::size_t i, std::size_t j, const Rational& v);
  const Row& row(std::size_t i) const { return data_[i]; }
  void set_row(std::size_t i, Row r);

  bool is_zero() const;
  std::size_t nonzeros() const;
  Vector column(std::size_t j) const;
  Vector dense_row(std::size_t i) const;
  std::vector<Vector> to_dense() const;

  Vector operator*(const Vector& v) const;
  Matrix operator*(const Matrix& other) const;
  Matrix operator+(const Matrix& other) const;
  Matrix operator-(const Matrix& other) const;
  Matrix scaled(const Rational& s) const;
  Matrix transpose() const;
  bool operator==(const Matrix& other) const;
  bool operator!=(const Matrix& other) const { return !(*this == other); }

  Matrix submatrix(const std::vector<std::size_t>& row_idx, const std::vector<std::size_t>& col_idx) const;
  static Matrix hstack(const Matrix& a, const Matrix& b);
  static Matrix vstack(const Matrix& a, const Matrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Row> data_;
};

// Reduced row echelon form: rows normalized to pivot 1, pivot columns cleared elsewhere.
struct Echelon {
  std::size_t cols = 0;
  std::vector<Matrix::Row> rows;
  std::vector<std::size_t> pivots;  // pivots[i] is the pivot column of rows[i], increasing

  std::size_t rank() const { return rows.size(); }
};

// Dense Gauss-Jordan below 32x32, sparse incremental elimination otherwise.
// Both pick the first nonzero pivot and produce the (unique) reduced form.
Echelon row_reduce(const Matrix& m);
Echelon row_reduce_dense(const Matrix& m);
Echelon row_reduce_sparse(const Matrix& m);

std::size_t rank(const Matrix& m);
std::vector<Vector> kernel_basis(const Matrix& m);
std::optional<Vector> solve(const Matrix& a, const Vector& b);
// Basis of the column space, chosen among the columns of m (pivot columns).
std::vector<Vector> column_space_basis(const Matrix& m);

// Linear span of a family of vectors with membership and coordinate queries.
class Span {
 public:
  Span() = default;
  Span(std::size_t ambient, std::vector<Vector> generators);

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return echelon_.rank(); }
  const std::vector<Vector>& generators() const { return generators_; }

  bool contains(const Vector& v) const;
  // Coefficients c with v = sum c_i generators_i, if v lies in the span.
  std::optional<Vector> coordinates(const Vector& v) const;
  // v minus its reduction against the echelon rows (zero iff v is in the span).
  Vector residue(const Vector& v) const;

 private:
  std::size_t ambient_ = 0;
  std::vector<Vector> generators_;
  Echelon echelon_;
};

// Homology of  X --in--> Y --out--> Z  at Y.
struct Homology {
  std::size_t dim = 0;
  std::vector<Vector> representatives;  // cycles whose classes form a basis
  Span cycles;
  Span boundaries;

  bool is_cycle(const Vector& v) const { return cycles.contains(v); }
  bool is_boundary(const Vector& v) const { return boundaries.contains(v); }
  // Coordinates of the class of a cycle in the representative basis.
  Vector class_of(const Vector& cycle) const;

  Span reps_and_boundaries;
};

Homology homology_at(const Matrix& incoming, const Matrix& outgoing, std::size_t dim_middle);

}  // namespace deform
