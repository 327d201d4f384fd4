#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "sll/matrix.hpp"
#include "sll/quadform.hpp"
#include "sll/series.hpp"
#include "sll/witt.hpp"

namespace sll {

/// p^v * (random element), i.e. a random element of m_A^v.
template <class Rng>
WittElement random_in_ideal(const WittRing& r, int v, Rng& rng) {
  if (v >= r.n()) return r.zero();
  return pow(r.from_int(r.p()), static_cast<std::uint64_t>(v)) * r.random(rng);
}

template <class Rng>
WittElement random_unit(const WittRing& r, Rng& rng) {
  for (;;) {
    WittElement u = r.random(rng);
    if (u.is_unit()) return u;
  }
}

template <class Rng>
Matrix random_invertible(const WittRing& r, std::size_t n, Rng& rng) {
  for (;;) {
    Matrix m(r, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = r.random(rng);
    if (determinant(m).is_unit()) return m;
  }
}

template <class Rng>
QuadraticForm random_nondegenerate_form(const WittRing& r, int nvars, Rng& rng) {
  for (;;) {
    QuadraticForm q(r, nvars);
    for (int i = 0; i < nvars; ++i)
      for (int j = i; j < nvars; ++j) q.at(i, j) = r.random(rng);
    if (is_nondegenerate(q)) return q;
  }
}

struct RandomSeriesShape {
  int constant_valuation = 1;  // constant term in m_A^this
  int linear_valuation = 1;    // linear coefficients in m_A^this
  double tail_density = 0.3;   // chance that a monomial of degree >= 3 is present
};

/// a + sum a_i x_i + Q(x) + (random tail) with Q non-degenerate.
template <class Rng>
TruncatedSeries random_series(const SeriesRing& ring, const RandomSeriesShape& shape, Rng& rng) {
  const WittRing& r = ring.coeff_ring();
  TruncatedSeries f = TruncatedSeries::constant(ring, random_in_ideal(r, shape.constant_valuation, rng));
  for (int i = 0; i < ring.nvars(); ++i)
    f += random_in_ideal(r, shape.linear_valuation, rng) * TruncatedSeries::variable(ring, i);
  f += random_nondegenerate_form(r, ring.nvars(), rng).to_series(ring);
  std::bernoulli_distribution keep(shape.tail_density);
  // Enumerate monomials of degree 3..D-1.
  Exponent e(static_cast<std::size_t>(ring.nvars()), 0);
  auto visit = [&](auto&& self, std::size_t var, int left) -> void {
    if (var + 1 == e.size()) {
      e[var] = left;
      if (keep(rng)) f.add_term(e, r.random(rng));
      return;
    }
    for (int k = 0; k <= left; ++k) {
      e[var] = k;
      self(self, var + 1, left - k);
    }
  };
  for (int d = 3; d < ring.degree(); ++d) visit(visit, 0, d);
  return f;
}

}  // namespace sll
