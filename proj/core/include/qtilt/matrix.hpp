#pragma once

#include <optional>
#include <vector>

#include "qtilt/field.hpp"

namespace qtilt {

// Dense matrix over an exact field. Entries are owned Scalars; every
// operation dispatches through the stored field so GF(p) and rational
// matrices share one code path.
class Matrix {
 public:
  Matrix() : F_{0}, rows_(0), cols_(0) {}
  Matrix(Field F, int rows, int cols);

  static Matrix identity(Field F, int n);
  static Matrix from_columns(Field F, int rows, const std::vector<std::vector<Scalar>>& cols);

  Field field() const { return F_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Scalar& at(int r, int c) { return e_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Scalar& at(int r, int c) const { return e_[static_cast<std::size_t>(r) * cols_ + c]; }

  bool is_zero() const;
  bool operator==(const Matrix& other) const;

  Matrix transpose() const;
  std::vector<Scalar> column(int c) const;
  std::vector<Scalar> row(int r) const;

 private:
  Field F_;
  int rows_, cols_;
  std::vector<Scalar> e_;
};

Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix mul(const Matrix& a, const Matrix& b);
Matrix scale(const Scalar& c, const Matrix& a);
Matrix neg(const Matrix& a);

Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
// Block-diagonal sum.
Matrix dsum(const Matrix& a, const Matrix& b);

// Columns selected by index, in the given order.
Matrix select_columns(const Matrix& a, const std::vector<int>& idx);

struct Echelon {
  Matrix reduced;           // reduced row echelon form
  std::vector<int> pivots;  // pivot column per nonzero row
};

// Gauss-Jordan with deterministic pivoting: first row with a nonzero entry.
Echelon rref(const Matrix& a);

int rank(const Matrix& a);

// Columns form a basis of the right null space, echelonized so equal
// kernels produce identical matrices.
Matrix kernel(const Matrix& a);

// Solves a X = b for all columns of b at once; free variables are set to
// zero. Empty result means some column is outside the column space.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

std::optional<Matrix> inverse(const Matrix& a);

// Canonical basis of the column space: columns in reduced echelon form.
Matrix column_echelon(const Matrix& a);

// Basis of colspace(u) ∩ colspace(w), echelonized.
// Grows a column span one vector at a time; a dependent vector is returned
// as its coordinates over the previously inserted vectors, in insertion
// order. Used wherever relations between generators must be recovered.
struct IncrementalSpan {
  explicit IncrementalSpan(Field F, int dim) : F_(F), dim_(dim) {}

  std::optional<std::vector<Scalar>> insert_or_express(const std::vector<Scalar>& v);
  int size() const { return inserted_; }
  int dim() const { return dim_; }
  bool contains(const std::vector<Scalar>& v);

 private:
  Field F_;
  int dim_;
  std::vector<std::vector<Scalar>> rows_;
  std::vector<std::vector<Scalar>> expr_;
  std::vector<int> pivots_;
  int inserted_ = 0;
};

Matrix intersect_columns(const Matrix& u, const Matrix& w);

/// Basis of { v : a·v ∈ colspace(s) }, echelonized.
Matrix preimage_columns(const Matrix& a, const Matrix& s);

// True if colspace(sub) contains colspace(vecs).
bool columns_contained(const Matrix& vecs, const Matrix& sub);

}  // namespace qtilt
