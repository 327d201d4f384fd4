#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sll/errors.hpp"
#include "sll/matrix.hpp"
#include "sll/quadform.hpp"
#include "sll/series.hpp"

namespace sll {

/// Truncation degree used by the reduction pipeline at residue characteristic p.
inline int default_truncation_degree(int_t p) { return std::max<int>(6, static_cast<int>(p) + 1); }

/// Returned instead of a reduction when some linear coefficient is a unit:
/// the hypersurface is smooth there (implicit function theorem).
struct SmoothPoint {
  int variable;  // index of a variable with unit linear coefficient
};

struct LinearShift {
  std::vector<WittElement> shift;  // b, with f(x + b) free of linear terms
  TruncatedSeries shifted;         // f(x + b)
  int iterations = 0;
};

struct HigherTermReduction {
  std::vector<TruncatedSeries> phi;  // coordinate change with f o phi = unit * (a + q_prime)
  TruncatedSeries unit;
  QuadraticForm q_prime;
};

/// Certificate: substitute(f, phi) == unit * (a_prime + q_prime) up to the truncation degree.
struct NormalFormResult {
  WittElement a_prime;
  QuadraticForm q_prime;
  std::vector<TruncatedSeries> phi;
  TruncatedSeries unit;
  std::vector<WittElement> linear_shift;  // the constant part b of phi
};

using NormalFormOutcome = std::variant<SmoothPoint, NormalFormResult>;

enum class LocalRingTag { Smooth, OrdinaryDoublePoint, Undetermined };

inline std::string to_string(LocalRingTag t) {
  switch (t) {
    case LocalRingTag::Smooth:
      return "Smooth";
    case LocalRingTag::OrdinaryDoublePoint:
      return "OrdinaryDoublePoint";
    case LocalRingTag::Undetermined:
      return "Undetermined";
  }
  return "?";
}

struct LocalRingClass {
  LocalRingTag tag = LocalRingTag::Undetermined;
  std::optional<WittElement> a_prime;  // set for OrdinaryDoublePoint
  int a_prime_valuation = -1;
  bool unit_ideal = false;             // constant term is a unit: R/(f) = 0
  std::optional<int> smooth_variable;  // variable with unit linear coefficient
  std::string reason;
};

namespace detail {

inline void require_nondegenerate(const QuadraticForm& q, const char* who) {
  if (!is_nondegenerate(q)) throw precondition_error(std::string(who) + ": quadratic part is degenerate");
}

inline std::optional<int> unit_linear_coefficient(const TruncatedSeries& f) {
  const auto lin = f.linear_coefficients();
  for (std::size_t i = 0; i < lin.size(); ++i)
    if (lin[i].is_unit()) return static_cast<int>(i);
  return std::nullopt;
}

inline std::vector<TruncatedSeries> translation(const SeriesRing& ring, const std::vector<WittElement>& b) {
  auto phi = identity_substitution(ring);
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] += TruncatedSeries::constant(ring, b[i]);
  return phi;
}

}  // namespace detail

/// Translates x -> x + b with b in m_A so that the linear term vanishes.
/// b is found by the fixed-point iteration b <- b - G^-1 grad f(b), where G is
/// the Gram matrix of the quadratic part; each step gains one p-adic digit.
inline std::variant<SmoothPoint, LinearShift> kill_linear_term(const TruncatedSeries& f) {
  const SeriesRing& ring = f.ring();
  const WittRing& A = ring.coeff_ring();
  if (auto i = detail::unit_linear_coefficient(f)) return SmoothPoint{*i};
  if (f.constant_term().is_unit()) throw precondition_error("kill_linear_term: constant term must lie in m_A");
  const QuadraticForm q = QuadraticForm::from_series(f);
  detail::require_nondegenerate(q, "kill_linear_term");
  const Matrix g_inv = inverse(bilinear_gram(q));

  std::vector<WittElement> b(static_cast<std::size_t>(ring.nvars()), A.zero());
  const int max_iterations = A.n() + 2;
  for (int it = 0; it <= max_iterations; ++it) {
    TruncatedSeries shifted = substitute(f, detail::translation(ring, b));
    const auto grad = shifted.linear_coefficients();
    if (std::all_of(grad.begin(), grad.end(), [](const WittElement& c) { return c.is_zero(); }))
      return LinearShift{b, shifted, it};
    const auto step = g_inv * grad;
    for (std::size_t i = 0; i < b.size(); ++i) b[i] -= step[i];
  }
  throw invariant_violation("kill_linear_term: fixed-point iteration did not converge");
}

/// Removes all terms of degree 3..D-1 from f = a + Q + (higher), Q
/// non-degenerate and no linear term, by successive substitutions
/// x -> x + c(x) with c homogeneous of degree d-1 solving G c = -h where the
/// degree-d part is sum_i x_i h_i (each monomial charged to its first variable).
inline HigherTermReduction strip_higher_terms(const TruncatedSeries& f) {
  const SeriesRing& ring = f.ring();
  for (const auto& c : f.linear_coefficients())
    if (!c.is_zero()) throw precondition_error("strip_higher_terms: linear part must vanish");
  const QuadraticForm q = QuadraticForm::from_series(f);
  detail::require_nondegenerate(q, "strip_higher_terms");
  const Matrix g_inv = inverse(bilinear_gram(q));
  const auto n = static_cast<std::size_t>(ring.nvars());

  std::vector<TruncatedSeries> phi = identity_substitution(ring);
  TruncatedSeries cur = f;
  for (int d = 3; d < ring.degree(); ++d) {
    const TruncatedSeries part = cur.graded_part(d);
    if (part.is_zero()) continue;
    std::vector<TruncatedSeries> h(n, TruncatedSeries(ring));
    for (const auto& [e, c] : part.terms()) {
      std::size_t i = 0;
      while (e[i] == 0) ++i;
      Exponent rest = e;
      --rest[i];
      h[i].add_term(rest, c);
    }
    std::vector<TruncatedSeries> psi = identity_substitution(ring);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!g_inv(j, k).is_zero()) psi[j] -= g_inv(j, k) * h[k];
    cur = substitute(cur, psi);
    phi = compose(phi, psi);
  }
  const QuadraticForm q_prime = QuadraticForm::from_series(cur);
  const TruncatedSeries expected = TruncatedSeries::constant(ring, cur.constant_term()) + q_prime.to_series(ring);
  if (!(cur == expected)) throw invariant_violation("strip_higher_terms: residual terms after reduction");
  return {phi, TruncatedSeries::one(ring), q_prime};
}

/// Relaxed reduction: kill the linear term (coefficients in m_A), then
/// strip higher terms. No refinement on a' beyond what the input gives.
inline NormalFormOutcome reduce_to_normal_form(const TruncatedSeries& f) {
  auto shifted = kill_linear_term(f);
  if (auto* s = std::get_if<SmoothPoint>(&shifted)) return *s;
  const auto& ls = std::get<LinearShift>(shifted);
  HigherTermReduction red = strip_higher_terms(ls.shifted);
  const SeriesRing& ring = f.ring();
  auto phi = compose(detail::translation(ring, ls.shift), red.phi);
  return NormalFormResult{ls.shifted.constant_term(), red.q_prime, std::move(phi), red.unit, ls.shift};
}

/// Full normal form for f = a + sum a_i x_i + Q(x) + (higher) with a in m_A,
/// a_i in m_A^2 and Q non-degenerate; then a' = a mod m_A^3. A unit linear
/// coefficient short-circuits to SmoothPoint.
inline NormalFormOutcome normal_form(const TruncatedSeries& f) {
  if (auto i = detail::unit_linear_coefficient(f)) return SmoothPoint{*i};
  if (f.constant_term().is_unit()) throw precondition_error("normal_form: degree-0 part must lie in m_A");
  const auto lin = f.linear_coefficients();
  for (std::size_t i = 0; i < lin.size(); ++i)
    if (valuation(lin[i]) < 2)
      throw precondition_error("normal_form: degree-1 part: coefficient of " + f.ring().names()[i] +
                               " must lie in m_A^2");
  if (!is_nondegenerate(QuadraticForm::from_series(f)))
    throw precondition_error("normal_form: degree-2 part is degenerate mod m_A");
  return reduce_to_normal_form(f);
}

/// Re-substitutes phi into f and compares with unit * (a' + Q').
inline bool verify_certificate(const TruncatedSeries& f, const NormalFormResult& r) {
  const SeriesRing& ring = f.ring();
  const TruncatedSeries lhs = substitute(f, r.phi);
  const TruncatedSeries rhs = r.unit * (TruncatedSeries::constant(ring, r.a_prime) + r.q_prime.to_series(ring));
  return lhs == rhs;
}

/// Smooth / ordinary double point / undetermined for the local ring R/(f).
/// Never reports an ordinary double point unless a reduction certificate exists.
inline LocalRingClass classify_local_ring(const TruncatedSeries& f) {
  LocalRingClass out;
  if (f.constant_term().is_unit()) {
    out.tag = LocalRingTag::Smooth;
    out.unit_ideal = true;
    out.reason = "constant term is a unit; R/(f) is the zero ring";
    return out;
  }
  if (auto i = detail::unit_linear_coefficient(f)) {
    out.tag = LocalRingTag::Smooth;
    out.smooth_variable = *i;
    out.reason = "unit linear coefficient in " + f.ring().names()[static_cast<std::size_t>(*i)];
    return out;
  }
  if (!is_nondegenerate(QuadraticForm::from_series(f))) {
    out.tag = LocalRingTag::Undetermined;
    out.reason = "quadratic part is degenerate";
    return out;
  }
  const auto res = reduce_to_normal_form(f);
  const auto& nf = std::get<NormalFormResult>(res);
  if (!verify_certificate(f, nf) || !is_nondegenerate(nf.q_prime))
    throw invariant_violation("classify_local_ring: reduction certificate failed");
  out.tag = LocalRingTag::OrdinaryDoublePoint;
  out.a_prime = nf.a_prime;
  out.a_prime_valuation = valuation(nf.a_prime);
  out.reason = "non-degenerate quadratic part; reduced to a' + Q'";
  return out;
}

}  // namespace sll
