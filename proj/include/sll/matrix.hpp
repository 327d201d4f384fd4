#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "sll/errors.hpp"
#include "sll/witt.hpp"

namespace sll {

/// Dense matrix over a Witt ring W_n(F_q). Row-major; sized at construction.
class Matrix {
 public:
  Matrix(WittRing ring, std::size_t rows, std::size_t cols)
      : ring_(std::move(ring)), rows_(rows), cols_(cols), a_(rows * cols, ring_.zero()) {}

  static Matrix identity(const WittRing& ring, std::size_t n) {
    Matrix m(ring, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ring.one();
    return m;
  }

  static Matrix from_ints(const WittRing& ring, std::initializer_list<std::initializer_list<int_t>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(ring, r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw precondition_error("Matrix::from_ints: ragged rows");
      std::size_t j = 0;
      for (int_t v : row) m(i, j++) = ring.from_int(v);
      ++i;
    }
    return m;
  }

  // Matrix whose columns are the given vectors.
  static Matrix from_columns(const WittRing& ring, const std::vector<std::vector<WittElement>>& cols) {
    const std::size_t c = cols.size();
    const std::size_t r = c == 0 ? 0 : cols.front().size();
    Matrix m(ring, r, c);
    for (std::size_t j = 0; j < c; ++j)
      for (std::size_t i = 0; i < r; ++i) m(i, j) = cols[j].at(i);
    return m;
  }

  const WittRing& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  WittElement& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const WittElement& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::vector<WittElement> column(std::size_t j) const {
    std::vector<WittElement> v;
    for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
    return v;
  }

  Matrix transpose() const {
    Matrix t(ring_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.check_shape(b);
    Matrix r = a;
    for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] += b.a_[k];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.check_shape(b);
    Matrix r = a;
    for (std::size_t k = 0; k < r.a_.size(); ++k) r.a_[k] -= b.a_[k];
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw precondition_error("Matrix product: inner dimensions differ");
    Matrix r(a.ring_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const WittElement& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }
  friend Matrix operator*(const WittElement& s, const Matrix& a) {
    Matrix r = a;
    for (auto& x : r.a_) x = s * x;
    return r;
  }
  std::vector<WittElement> operator*(const std::vector<WittElement>& v) const {
    if (v.size() != cols_) throw precondition_error("Matrix-vector product: dimension mismatch");
    std::vector<WittElement> r(rows_, ring_.zero());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  bool is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const WittElement& x) { return x.is_zero(); });
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? ", [" : "[";
      for (std::size_t j = 0; j < cols_; ++j) s += (j ? "," : "") + (*this)(i, j).to_string();
      s += "]";
    }
    return s + "]";
  }

 private:
  void check_shape(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw precondition_error("Matrix: shape mismatch");
  }

  WittRing ring_;
  std::size_t rows_, cols_;
  std::vector<WittElement> a_;
};

/// Entrywise sigma^k.
inline Matrix frobenius(const Matrix& a, int k = 1) {
  Matrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = frobenius(a(i, j), k);
  return r;
}

/// Entrywise reduction to the residue field.
inline Matrix reduce(const Matrix& a) {
  Matrix r(a.ring().residue_field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = reduce(a(i, j));
  return r;
}

inline Matrix lift(const WittRing& ring, const Matrix& a) {
  Matrix r(ring, a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = lift(ring, a(i, j));
  return r;
}

/// Division-free determinant by expansion over column subsets (O(2^n n^2)).
inline WittElement determinant(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw precondition_error("determinant: matrix is not square");
  if (n == 0) return a.ring().one();
  if (n > 16) throw precondition_error("determinant: dimension too large");
  // minor[mask] = determinant of rows [0, popcount(mask)) against the columns in mask.
  std::vector<std::optional<WittElement>> minor(std::size_t{1} << n);
  minor[0] = a.ring().one();
  for (std::size_t mask = 1; mask < minor.size(); ++mask) {
    const std::size_t row = static_cast<std::size_t>(__builtin_popcountll(mask)) - 1;
    WittElement acc = a.ring().zero();
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask >> j & 1U)) continue;
      // Sign from the position of column j among the chosen columns.
      const int bits_after = __builtin_popcountll(mask >> (j + 1));
      const WittElement term = a(row, j) * *minor[mask & ~(std::size_t{1} << j)];
      if (bits_after % 2 == 0)
        acc += term;
      else
        acc -= term;
    }
    minor[mask] = acc;
  }
  return *minor.back();
}

/// Inverse of a matrix with unit determinant, by Gauss-Jordan with unit pivots.
inline Matrix inverse(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw precondition_error("inverse: matrix is not square");
  Matrix m = a;
  Matrix inv = Matrix::identity(a.ring(), n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && !m(piv, col).is_unit()) ++piv;
    if (piv == n) throw domain_error("inverse: matrix is not invertible (determinant is not a unit)");
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    const WittElement s = sll::inverse(m(col, col));
    for (std::size_t j = 0; j < n; ++j) {
      m(col, j) = s * m(col, j);
      inv(col, j) = s * inv(col, j);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m(r, col).is_zero()) continue;
      const WittElement f = m(r, col);
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) -= f * m(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

/// Reduced row echelon form of the reduction mod p, over F_q; returns the rank.
inline std::size_t row_reduce_mod_p(const Matrix& a, Matrix* out = nullptr) {
  Matrix m = reduce(a);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t piv = rank;
    while (piv < m.rows() && m(piv, col).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(rank, j));
    const WittElement s = sll::inverse(m(rank, col));
    for (std::size_t j = 0; j < m.cols(); ++j) m(rank, j) = s * m(rank, j);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == rank || m(r, col).is_zero()) continue;
      const WittElement f = m(r, col);
      for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) -= f * m(rank, j);
    }
    ++rank;
  }
  if (out != nullptr) *out = m;
  return rank;
}

/// Rank of the reduction mod p over F_q.
inline std::size_t rank_mod_p(const Matrix& a) { return row_reduce_mod_p(a); }

/// Canonical basis (columns, over F_q) of the column space of a mod p.
inline Matrix column_space_mod_p(const Matrix& a) {
  Matrix r(a.ring().residue_field(), 0, 0);
  const std::size_t rank = row_reduce_mod_p(a.transpose(), &r);
  Matrix basis(r.ring(), a.rows(), rank);
  for (std::size_t j = 0; j < rank; ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) basis(i, j) = r(j, i);
  return basis;
}

/// Horizontal concatenation [a | b].
inline Matrix hconcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw precondition_error("hconcat: row counts differ");
  Matrix r(a.ring(), a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
  }
  return r;
}

/// Smith form over W_n: left * a * right = diag(p^v_0, p^v_1, ...) with
/// v_0 <= v_1 <= ... and left, right invertible. A valuation equal to n
/// stands for a zero elementary divisor.
struct SmithForm {
  Matrix left;
  Matrix right;
  std::vector<int> valuations;
};

namespace detail {

// x = p^v * w; returns w with top digits zero (determined mod p^(n-v)).
inline WittElement strip_p_power(const WittElement& x, int v) {
  WittElement w = x;
  for (int i = 0; i < v; ++i) w = divide_by_p(w);
  return w;
}

}  // namespace detail

inline SmithForm smith_form(const Matrix& a) {
  const WittRing& ring = a.ring();
  const std::size_t rows = a.rows(), cols = a.cols();
  Matrix m = a;
  Matrix left = Matrix::identity(ring, rows);
  Matrix right = Matrix::identity(ring, cols);
  std::vector<int> vals;
  const std::size_t steps = std::min(rows, cols);
  for (std::size_t k = 0; k < steps; ++k) {
    std::size_t pi = k, pj = k;
    int best = ring.n() + 1;
    for (std::size_t i = k; i < rows; ++i)
      for (std::size_t j = k; j < cols; ++j) {
        const int v = valuation(m(i, j));
        if (v < best) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (best >= ring.n()) {
      for (std::size_t r = k; r < steps; ++r) vals.push_back(ring.n());
      break;
    }
    if (pi != k)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(pi, j), m(k, j));
    if (pi != k)
      for (std::size_t j = 0; j < rows; ++j) std::swap(left(pi, j), left(k, j));
    if (pj != k)
      for (std::size_t i = 0; i < rows; ++i) std::swap(m(i, pj), m(i, k));
    if (pj != k)
      for (std::size_t i = 0; i < cols; ++i) std::swap(right(i, pj), right(i, k));
    const WittElement unit_inv = sll::inverse(detail::strip_p_power(m(k, k), best));
    for (std::size_t j = 0; j < cols; ++j) m(k, j) = unit_inv * m(k, j);
    for (std::size_t j = 0; j < rows; ++j) left(k, j) = unit_inv * left(k, j);
    for (std::size_t i = k + 1; i < rows; ++i) {
      if (m(i, k).is_zero()) continue;
      const WittElement f = detail::strip_p_power(m(i, k), best);
      for (std::size_t j = 0; j < cols; ++j) m(i, j) -= f * m(k, j);
      for (std::size_t j = 0; j < rows; ++j) left(i, j) -= f * left(k, j);
    }
    for (std::size_t j = k + 1; j < cols; ++j) {
      if (m(k, j).is_zero()) continue;
      const WittElement f = detail::strip_p_power(m(k, j), best);
      for (std::size_t i = 0; i < rows; ++i) m(i, j) -= f * m(i, k);
      for (std::size_t i = 0; i < cols; ++i) right(i, j) -= f * right(i, k);
    }
    vals.push_back(best);
  }
  return {left, right, vals};
}

/// Whether v lies in the column span of b, working modulo p^precision.
inline bool in_column_span(const Matrix& b, const std::vector<WittElement>& v, int precision) {
  const SmithForm s = smith_form(b);
  const auto w = s.left * v;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const int allowed = i < s.valuations.size() ? std::min(s.valuations[i], precision) : precision;
    if (std::min(valuation(w[i]), precision) < allowed) return false;
  }
  return true;
}

/// Column span inclusion span(a) <= span(b), modulo p^precision.
inline bool span_contains(const Matrix& b, const Matrix& a, int precision) {
  for (std::size_t j = 0; j < a.cols(); ++j)
    if (!in_column_span(b, a.column(j), precision)) return false;
  return true;
}

}  // namespace sll
