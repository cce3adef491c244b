#include "qtilt/matrix.hpp"

#include <cassert>
#include <stdexcept>

namespace qtilt {

Matrix::Matrix(Field F, int rows, int cols)
    : F_(F), rows_(rows), cols_(cols),
      e_(static_cast<std::size_t>(rows) * cols, F.zero()) {
  assert(rows >= 0 && cols >= 0);
}

Matrix Matrix::identity(Field F, int n) {
  Matrix m(F, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = F.one();
  return m;
}

Matrix Matrix::from_columns(Field F, int rows,
                            const std::vector<std::vector<Scalar>>& cols) {
  Matrix m(F, rows, static_cast<int>(cols.size()));
  for (int c = 0; c < m.cols(); ++c) {
    assert(static_cast<int>(cols[c].size()) == rows);
    for (int r = 0; r < rows; ++r) m.at(r, c) = cols[c][r];
  }
  return m;
}

bool Matrix::is_zero() const {
  for (const Scalar& x : e_)
    if (!F_.is_zero(x)) return false;
  return true;
}

bool Matrix::operator==(const Matrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_ || !(F_ == other.F_)) return false;
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (!F_.eq(e_[i], other.e_[i])) return false;
  return true;
}

Matrix Matrix::transpose() const {
  Matrix t(F_, cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

std::vector<Scalar> Matrix::column(int c) const {
  std::vector<Scalar> v;
  v.reserve(rows_);
  for (int r = 0; r < rows_; ++r) v.push_back(at(r, c));
  return v;
}

std::vector<Scalar> Matrix::row(int r) const {
  std::vector<Scalar> v;
  v.reserve(cols_);
  for (int c = 0; c < cols_; ++c) v.push_back(at(r, c));
  return v;
}

Matrix add(const Matrix& a, const Matrix& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  Field F = a.field();
  Matrix r(F, a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = F.add(a.at(i, j), b.at(i, j));
  return r;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  Field F = a.field();
  Matrix r(F, a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = F.sub(a.at(i, j), b.at(i, j));
  return r;
}

Matrix mul(const Matrix& a, const Matrix& b) {
  assert(a.cols() == b.rows());
  Field F = a.field();
  Matrix r(F, a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const Scalar& aik = a.at(i, k);
      if (F.is_zero(aik)) continue;
      for (int j = 0; j < b.cols(); ++j) {
        if (F.is_zero(b.at(k, j))) continue;
        r.at(i, j) = F.add(r.at(i, j), F.mul(aik, b.at(k, j)));
      }
    }
  return r;
}

Matrix scale(const Scalar& c, const Matrix& a) {
  Field F = a.field();
  Matrix r(F, a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = F.mul(c, a.at(i, j));
  return r;
}

Matrix neg(const Matrix& a) {
  Field F = a.field();
  Matrix r(F, a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = F.neg(a.at(i, j));
  return r;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  assert(a.rows() == b.rows());
  Matrix r(a.field(), a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols(); ++j) r.at(i, a.cols() + j) = b.at(i, j);
  }
  return r;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  assert(a.cols() == b.cols());
  Matrix r(a.field(), a.rows() + b.rows(), a.cols());
  for (int j = 0; j < a.cols(); ++j) {
    for (int i = 0; i < a.rows(); ++i) r.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows(); ++i) r.at(a.rows() + i, j) = b.at(i, j);
  }
  return r;
}

Matrix dsum(const Matrix& a, const Matrix& b) {
  Matrix r(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) r.at(a.rows() + i, a.cols() + j) = b.at(i, j);
  return r;
}

Matrix select_columns(const Matrix& a, const std::vector<int>& idx) {
  Matrix r(a.field(), a.rows(), static_cast<int>(idx.size()));
  for (int j = 0; j < r.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) r.at(i, j) = a.at(i, idx[j]);
  return r;
}

Echelon rref(const Matrix& a) {
  Field F = a.field();
  Matrix m = a;
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int sel = -1;
    for (int r = row; r < m.rows(); ++r) {
      if (!F.is_zero(m.at(r, col))) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    if (sel != row)
      for (int c = 0; c < m.cols(); ++c) std::swap(m.at(sel, c), m.at(row, c));
    Scalar piv_inv = F.inv(m.at(row, col));
    for (int c = col; c < m.cols(); ++c) m.at(row, c) = F.mul(piv_inv, m.at(row, c));
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row || F.is_zero(m.at(r, col))) continue;
      Scalar f = m.at(r, col);
      for (int c = col; c < m.cols(); ++c)
        m.at(r, c) = F.sub(m.at(r, c), F.mul(f, m.at(row, c)));
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

int rank(const Matrix& a) { return static_cast<int>(rref(a).pivots.size()); }

Matrix kernel(const Matrix& a) {
  Field F = a.field();
  Echelon e = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (int p : e.pivots) is_pivot[p] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < a.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);

  Matrix k(F, a.cols(), static_cast<int>(free_cols.size()));
  for (int j = 0; j < k.cols(); ++j) {
    int fc = free_cols[j];
    k.at(fc, j) = F.one();
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
      k.at(e.pivots[r], j) = F.neg(e.reduced.at(static_cast<int>(r), fc));
  }
  return k;
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  assert(a.rows() == b.rows());
  Field F = a.field();
  Echelon e = rref(hstack(a, b));
  // A pivot in the right block certifies inconsistency.
  for (int p : e.pivots)
    if (p >= a.cols()) return std::nullopt;
  Matrix x(F, a.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r)
    for (int j = 0; j < b.cols(); ++j)
      x.at(e.pivots[r], j) = e.reduced.at(static_cast<int>(r), a.cols() + j);
  return x;
}

std::optional<Matrix> inverse(const Matrix& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  Echelon e = rref(hstack(a, Matrix::identity(a.field(), a.rows())));
  if (static_cast<int>(e.pivots.size()) != a.rows()) return std::nullopt;
  for (int r = 0; r < a.rows(); ++r)
    if (e.pivots[r] != r) return std::nullopt;
  Matrix inv(a.field(), a.rows(), a.rows());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.rows(); ++c) inv.at(r, c) = e.reduced.at(r, a.cols() + c);
  return inv;
}

Matrix column_echelon(const Matrix& a) {
  Echelon e = rref(a.transpose());
  Matrix rows_kept(a.field(), static_cast<int>(e.pivots.size()), a.rows());
  for (int r = 0; r < rows_kept.rows(); ++r)
    for (int c = 0; c < a.rows(); ++c) rows_kept.at(r, c) = e.reduced.at(r, c);
  return rows_kept.transpose();
}

Matrix intersect_columns(const Matrix& u, const Matrix& w) {
  assert(u.rows() == w.rows());
  // Null vectors (x, y) of [u | -w] satisfy u·x = w·y.
  Matrix k = kernel(hstack(u, neg(w)));
  Matrix x_part(u.field(), u.cols(), k.cols());
  for (int r = 0; r < u.cols(); ++r)
    for (int c = 0; c < k.cols(); ++c) x_part.at(r, c) = k.at(r, c);
  return column_echelon(mul(u, x_part));
}

Matrix preimage_columns(const Matrix& a, const Matrix& s) {
  assert(a.rows() == s.rows());
  Matrix k = kernel(hstack(a, neg(s)));
  Matrix v_part(a.field(), a.cols(), k.cols());
  for (int r = 0; r < a.cols(); ++r)
    for (int c = 0; c < k.cols(); ++c) v_part.at(r, c) = k.at(r, c);
  return column_echelon(v_part);
}

bool columns_contained(const Matrix& vecs, const Matrix& sub) {
  return solve(sub, vecs).has_value();
}

std::optional<std::vector<Scalar>> IncrementalSpan::insert_or_express(
    const std::vector<Scalar>& v) {
  std::vector<Scalar> r = v;
  std::vector<Scalar> e(static_cast<std::size_t>(inserted_), F_.zero());
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    Scalar c = r[pivots_[k]];
    if (F_.is_zero(c)) continue;
    for (int i = 0; i < dim_; ++i) r[i] = F_.sub(r[i], F_.mul(c, rows_[k][i]));
    for (std::size_t i = 0; i < expr_[k].size(); ++i)
      e[i] = F_.add(e[i], F_.mul(c, expr_[k][i]));
  }
  int p = -1;
  for (int i = 0; i < dim_; ++i)
    if (!F_.is_zero(r[i])) {
      p = i;
      break;
    }
  if (p < 0) return e;
  Scalar inv = F_.inv(r[p]);
  for (int i = 0; i < dim_; ++i) r[i] = F_.mul(inv, r[i]);
  std::vector<Scalar> ex(static_cast<std::size_t>(inserted_) + 1, F_.zero());
  for (std::size_t i = 0; i < e.size(); ++i) ex[i] = F_.neg(F_.mul(inv, e[i]));
  ex[static_cast<std::size_t>(inserted_)] = inv;
  rows_.push_back(std::move(r));
  expr_.push_back(std::move(ex));
  pivots_.push_back(p);
  ++inserted_;
  return std::nullopt;
}

bool IncrementalSpan::contains(const std::vector<Scalar>& v) {
  std::vector<Scalar> r = v;
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    Scalar c = r[pivots_[k]];
    if (F_.is_zero(c)) continue;
    for (int i = 0; i < dim_; ++i) r[i] = F_.sub(r[i], F_.mul(c, rows_[k][i]));
  }
  for (int i = 0; i < dim_; ++i)
    if (!F_.is_zero(r[i])) return false;
  return true;
}

}  // namespace qtilt
