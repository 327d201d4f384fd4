#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sll/errors.hpp"
#include "sll/matrix.hpp"
#include "sll/series.hpp"
#include "sll/witt.hpp"

namespace sll {

/// Q(x) = sum_{i <= j} q_ij x_i x_j over W_n(F_q). Coefficients are kept in
/// graded-lex order: q_11, q_12, ..., q_1n, q_22, ..., q_nn.
class QuadraticForm {
 public:
  QuadraticForm(WittRing ring, int nvars) : ring_(std::move(ring)), nvars_(nvars) {
    if (nvars_ < 1) throw precondition_error("QuadraticForm: need at least one variable");
    coeffs_.assign(static_cast<std::size_t>(nvars_ * (nvars_ + 1) / 2), ring_.zero());
  }

  QuadraticForm(WittRing ring, int nvars, std::vector<WittElement> upper) : QuadraticForm(std::move(ring), nvars) {
    if (upper.size() != coeffs_.size()) throw precondition_error("QuadraticForm: wrong number of coefficients");
    for (const auto& c : upper)
      if (!(c.ring() == ring_)) throw domain_error("QuadraticForm: coefficient ring mismatch");
    coeffs_ = std::move(upper);
  }

  /// The degree-2 part of a series.
  static QuadraticForm from_series(const TruncatedSeries& f) {
    const SeriesRing& r = f.ring();
    QuadraticForm q(r.coeff_ring(), r.nvars());
    const TruncatedSeries part = f.graded_part(2);
    for (const auto& [e, c] : part.terms()) {
      int i = -1, j = -1;
      for (int k = 0; k < r.nvars(); ++k) {
        for (int t = 0; t < e[static_cast<std::size_t>(k)]; ++t) (i < 0 ? i : j) = k;
      }
      q.at(i, j) = c;
    }
    return q;
  }

  TruncatedSeries to_series(const SeriesRing& ring) const {
    if (ring.nvars() != nvars_ || !(ring.coeff_ring() == ring_)) throw domain_error("to_series: ring mismatch");
    TruncatedSeries s(ring);
    for (int i = 0; i < nvars_; ++i)
      for (int j = i; j < nvars_; ++j) {
        Exponent e(static_cast<std::size_t>(nvars_), 0);
        ++e[static_cast<std::size_t>(i)];
        ++e[static_cast<std::size_t>(j)];
        s.add_term(e, coefficient(i, j));
      }
    return s;
  }

  const WittRing& ring() const { return ring_; }
  int nvars() const { return nvars_; }
  const std::vector<WittElement>& upper_coefficients() const { return coeffs_; }

  // q_ij for i <= j (arguments are swapped if needed).
  const WittElement& coefficient(int i, int j) const { return coeffs_[index(i, j)]; }
  WittElement& at(int i, int j) { return coeffs_[index(i, j)]; }

  WittElement operator()(const std::vector<WittElement>& x) const {
    WittElement acc = ring_.zero();
    for (int i = 0; i < nvars_; ++i)
      for (int j = i; j < nvars_; ++j) acc += coefficient(i, j) * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
    return acc;
  }

  friend QuadraticForm operator+(const QuadraticForm& a, const QuadraticForm& b) {
    if (a.nvars_ != b.nvars_) throw precondition_error("QuadraticForm: variable count mismatch");
    QuadraticForm r = a;
    for (std::size_t k = 0; k < r.coeffs_.size(); ++k) r.coeffs_[k] += b.coeffs_[k];
    return r;
  }

  friend bool operator==(const QuadraticForm& a, const QuadraticForm& b) {
    return a.nvars_ == b.nvars_ && a.coeffs_ == b.coeffs_;
  }

 private:
  std::size_t index(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= nvars_) throw precondition_error("QuadraticForm: index out of range");
    // Row i of the upper triangle starts after rows 0..i-1.
    return static_cast<std::size_t>(i * nvars_ - i * (i - 1) / 2 + (j - i));
  }

  WittRing ring_;
  int nvars_;
  std::vector<WittElement> coeffs_;
};

/// Gram matrix of B(x, y) = Q(x + y) - Q(x) - Q(y): G_ii = 2 q_ii, G_ij = q_ij.
inline Matrix bilinear_gram(const QuadraticForm& q) {
  const auto n = static_cast<std::size_t>(q.nvars());
  Matrix g(q.ring(), n, n);
  for (int i = 0; i < q.nvars(); ++i)
    for (int j = i; j < q.nvars(); ++j) {
      const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
      if (i == j)
        g(a, a) = q.coefficient(i, i) + q.coefficient(i, i);
      else
        g(a, b) = g(b, a) = q.coefficient(i, j);
    }
  return g;
}

inline bool is_nondegenerate(const QuadraticForm& q) { return determinant(bilinear_gram(q)).is_unit(); }

/// Q(Cy) as a form in y; division-free, valid in every characteristic.
inline QuadraticForm apply_linear_change(const QuadraticForm& q, const Matrix& c) {
  const int n = q.nvars();
  if (c.rows() != static_cast<std::size_t>(n)) throw precondition_error("apply_linear_change: dimension mismatch");
  const int k = static_cast<int>(c.cols());
  QuadraticForm out(q.ring(), k);
  auto C = [&](int i, int j) -> const WittElement& { return c(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const WittElement& qij = q.coefficient(i, j);
      if (qij.is_zero()) continue;
      for (int a = 0; a < k; ++a) {
        out.at(a, a) += qij * C(i, a) * C(j, a);
        for (int b = a + 1; b < k; ++b) out.at(a, b) += qij * (C(i, a) * C(j, b) + C(i, b) * C(j, a));
      }
    }
  return out;
}

/// y_1 y_2 + y_3 y_4 + ... in `nvars` (even) variables.
inline QuadraticForm split_form(const WittRing& ring, int nvars) {
  if (nvars % 2 != 0) throw precondition_error("split_form: number of variables must be even");
  QuadraticForm q(ring, nvars);
  for (int i = 0; i < nvars; i += 2) q.at(i, i + 1) = ring.one();
  return q;
}

struct SplitStandardization {
  Matrix change_of_basis;  // Q(C y) = y1 y2 + y3 y4 + ... over `ring`
  WittRing ring;           // the ring the identity holds in
  bool extended = false;   // true when the residue field had to be enlarged to F_{q^2}
  std::optional<RingEmbedding> embedding;
  std::vector<WittElement> diagonal;  // units of the intermediate diagonal form (empty on the relabeling path)
};

namespace detail {

// Forms in which every variable occurs in exactly one monomial u x_i x_j with
// u = +-1 split by relabeling and sign changes.
inline std::optional<Matrix> signed_pairing_split(const QuadraticForm& q) {
  const int n = q.nvars();
  const WittRing& r = q.ring();
  std::vector<int> partner(static_cast<std::size_t>(n), -1);
  std::vector<int> sign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const WittElement& c = q.coefficient(i, j);
      if (c.is_zero()) continue;
      const int s = c == r.one() ? 1 : (c == -r.one() ? -1 : 0);
      if (i == j || s == 0 || partner[static_cast<std::size_t>(i)] >= 0 || partner[static_cast<std::size_t>(j)] >= 0)
        return std::nullopt;
      partner[static_cast<std::size_t>(i)] = j;
      partner[static_cast<std::size_t>(j)] = i;
      sign[static_cast<std::size_t>(i)] = s;
    }
  for (int v : partner)
    if (v < 0) return std::nullopt;
  Matrix c(r, static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int j = partner[static_cast<std::size_t>(i)];
    if (j < i) continue;
    c(static_cast<std::size_t>(i), static_cast<std::size_t>(next)) = r.one();
    c(static_cast<std::size_t>(j), static_cast<std::size_t>(next + 1)) = sign[static_cast<std::size_t>(i)] > 0 ? r.one() : -r.one();
    next += 2;
  }
  return c;
}

// Elementary change y = T y' built from the identity.
inline Matrix identity_like(const WittRing& r, int n) { return Matrix::identity(r, static_cast<std::size_t>(n)); }

// Diagonalizes a form with unit Gram determinant (p odd): returns C with Q(Cy) diagonal.
inline Matrix diagonalize(const QuadraticForm& q) {
  const int n = q.nvars();
  const WittRing& r = q.ring();
  Matrix c = identity_like(r, n);
  const WittElement two_inv = inverse(r.from_int(2));
  for (int k = 0; k < n; ++k) {
    QuadraticForm cur = apply_linear_change(q, c);
    int pivot = -1;
    for (int i = k; i < n && pivot < 0; ++i)
      if (cur.coefficient(i, i).is_unit()) pivot = i;
    if (pivot < 0) {
      for (int i = k; i < n && pivot < 0; ++i)
        for (int j = i + 1; j < n && pivot < 0; ++j)
          if (cur.coefficient(i, j).is_unit()) {
            Matrix t = identity_like(r, n);
            t(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = r.one();  // y_i <- y_i + y_j
            c = c * t;
            pivot = i;
          }
      if (pivot < 0) throw precondition_error("standardize_split: form is degenerate");
      cur = apply_linear_change(q, c);
    }
    if (pivot != k) {
      Matrix t(r, static_cast<std::size_t>(n), static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        const int src = i == k ? pivot : (i == pivot ? k : i);
        t(static_cast<std::size_t>(src), static_cast<std::size_t>(i)) = r.one();
      }
      c = c * t;
      cur = apply_linear_change(q, c);
    }
    const WittElement scale = inverse(cur.coefficient(k, k)) * two_inv;
    Matrix t = identity_like(r, n);
    for (int j = k + 1; j < n; ++j)
      t(static_cast<std::size_t>(k), static_cast<std::size_t>(j)) = -(cur.coefficient(k, j) * scale);
    c = c * t;
  }
  return c;
}

}  // namespace detail

/// Finds C with Q(Cy) = y1 y2 + y3 y4 + ... exactly, for odd residue
/// characteristic and non-degenerate Q in an even number of variables. When
/// F_q lacks a needed square root the computation moves to W_n(F_{q^2}).
inline SplitStandardization standardize_split(const QuadraticForm& q) {
  const WittRing& r = q.ring();
  if (r.p() == 2) throw unsupported_characteristic("standardize_split: residue characteristic 2 is not supported");
  if (q.nvars() % 2 != 0) throw precondition_error("standardize_split: number of variables must be even");
  if (!is_nondegenerate(q)) throw precondition_error("standardize_split: form is degenerate");

  if (auto c = detail::signed_pairing_split(q))
    return {*c, r, false, std::nullopt, {}};

  auto attempt = [](const QuadraticForm& form) -> std::optional<SplitStandardization> {
    const WittRing& ring = form.ring();
    const int n = form.nvars();
    Matrix c = detail::diagonalize(form);
    const QuadraticForm diag = apply_linear_change(form, c);
    std::vector<WittElement> d;
    for (int i = 0; i < n; ++i) d.push_back(diag.coefficient(i, i));
    Matrix t(ring, static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    const WittElement half = inverse(ring.from_int(2));
    for (int a = 0; a < n; a += 2) {
      const auto s = unit_sqrt(d[static_cast<std::size_t>(a)]);
      const auto rt = unit_sqrt(-d[static_cast<std::size_t>(a + 1)]);
      if (!s || !rt) return std::nullopt;
      const WittElement is = inverse(*s) * half;
      const WittElement ir = inverse(*rt) * half;
      const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(a + 1);
      // y_a = (u + v) / (2s), y_b = (v - u) / (2r).
      t(ua, ua) = is;
      t(ua, ub) = is;
      t(ub, ua) = -ir;
      t(ub, ub) = ir;
    }
    return SplitStandardization{c * t, ring, false, std::nullopt, d};
  };

  std::optional<SplitStandardization> result = attempt(q);
  if (!result) {
    RingEmbedding emb = quadratic_extension(r);
    std::vector<WittElement> lifted;
    for (const auto& x : q.upper_coefficients()) lifted.push_back(emb(x));
    result = attempt(QuadraticForm(emb.target, q.nvars(), lifted));
    if (!result) throw invariant_violation("standardize_split: square roots missing after quadratic extension");
    result->extended = true;
    result->embedding = emb;
  }
  return *result;
}

}  // namespace sll
