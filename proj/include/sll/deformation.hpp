#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sll/dieudonne.hpp"
#include "sll/errors.hpp"
#include "sll/series.hpp"
#include "sll/singularity.hpp"

namespace sll {

/// Deformation variables in the order t11, t12, t21, t22.
inline std::vector<std::string> deformation_variable_names() { return {"t11", "t12", "t21", "t22"}; }

inline SeriesRing deformation_ring(const WittRing& r, int degree) {
  return SeriesRing(r, 4, degree, deformation_variable_names());
}

/// A basis of M split as Y (lifting the Hodge filtration VM/pM) and X.
struct HodgeFrame {
  DieudonneModule module;
  std::array<std::size_t, 2> y;
  std::array<std::size_t, 2> x;
};

namespace detail {

inline bool frame_spans_filtration(const DieudonneModule& m, std::array<std::size_t, 2> y) {
  const WittRing& r = m.ring();
  if (y[0] >= 4 || y[1] >= 4 || y[0] == y[1]) return false;
  Matrix e(r, 4, 2);
  e(y[0], 0) = r.one();
  e(y[1], 1) = r.one();
  const Matrix fil = lift(r, hodge_filtration(m));
  return fil.cols() == 2 && rank_mod_p(hconcat(fil, e)) == 2;
}

inline std::array<std::size_t, 2> complement(std::array<std::size_t, 2> y) {
  std::array<std::size_t, 2> x{};
  std::size_t k = 0;
  for (std::size_t i = 0; i < 4; ++i)
    if (i != y[0] && i != y[1]) x[k++] = i;
  return x;
}

}  // namespace detail

/// Frame with the given Y indices, or the first index pair (lexicographic)
/// whose basis vectors span the Hodge filtration mod p.
inline HodgeFrame make_frame(const DieudonneModule& m, std::optional<std::array<std::size_t, 2>> y = std::nullopt) {
  if (y) {
    if (!detail::frame_spans_filtration(m, *y))
      throw precondition_error("make_frame: the chosen Y vectors do not reduce to a basis of VM/pM");
    return {m, *y, detail::complement(*y)};
  }
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b)
      if (detail::frame_spans_filtration(m, {a, b})) return {m, {a, b}, detail::complement({a, b})};
  throw precondition_error("make_frame: no pair of basis vectors spans VM/pM");
}

/// <Y_a + sum_i t_{a,i} X_i, Y_b + sum_j t_{b,j} X_j> as a polynomial in the
/// deformation variables (row a of t for the first argument, row b for the second).
inline TruncatedSeries deformed_pairing(const HodgeFrame& fr, int a, int b, int degree) {
  const DieudonneModule& m = fr.module;
  const WittRing& r = m.ring();
  const SeriesRing ring = deformation_ring(r, degree);
  auto pair = [&](std::size_t i, std::size_t j) { return m.J()(i, j); };
  auto var = [&](int row, int col) { return TruncatedSeries::variable(ring, 2 * row + col); };
  const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
  TruncatedSeries f = TruncatedSeries::constant(ring, pair(fr.y[ua], fr.y[ub]));
  for (int j = 0; j < 2; ++j) f += pair(fr.y[ua], fr.x[static_cast<std::size_t>(j)]) * var(b, j);
  for (int i = 0; i < 2; ++i) f -= pair(fr.y[ub], fr.x[static_cast<std::size_t>(i)]) * var(a, i);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      f += pair(fr.x[static_cast<std::size_t>(i)], fr.x[static_cast<std::size_t>(j)]) * (var(a, i) * var(b, j));
  return f;
}

/// The relation <Y1~, Y2~> cutting out the deformation space.
inline TruncatedSeries deformation_equation(const HodgeFrame& fr, std::optional<int> degree = std::nullopt) {
  return deformed_pairing(fr, 0, 1, degree.value_or(default_truncation_degree(fr.module.ring().p())));
}

inline LocalRingClass classify_point(const HodgeFrame& fr) { return classify_local_ring(deformation_equation(fr)); }

/// Equicharacteristic display of the shape F e_i = e_{i+2} + sum_j T_ij e_j,
/// e_{i+2} = V e_i, with T_ij power series over F_q in t11, t12, t21, t22.
struct Display {
  std::array<std::array<TruncatedSeries, 2>, 2> T;
};

/// The universal display, T_ij = [t_ij].
inline Display universal_display(const WittRing& k, int degree = 3) {
  const WittRing field = k.residue_field();
  const SeriesRing ring = deformation_ring(field, degree);
  return {{{{TruncatedSeries::variable(ring, 0), TruncatedSeries::variable(ring, 1)},
            {TruncatedSeries::variable(ring, 2), TruncatedSeries::variable(ring, 3)}}}};
}

using TangentFrobenius = std::array<std::array<TruncatedSeries, 2>, 2>;

/// Frobenius on M~/VM~: row i holds the coordinates of F e_i in (e_1, e_2).
inline TangentFrobenius display_tangent_frobenius(const Display& d) {
  const SeriesRing& ring = d.T[0][0].ring();
  if (ring.nvars() != 4) throw precondition_error("display_tangent_frobenius: display needs 4 variables");
  if (ring.coeff_ring().n() != 1) throw precondition_error("display_tangent_frobenius: display must be over F_q");
  for (const auto& row : d.T)
    for (const auto& t : row)
      if (!(t.ring() == ring)) throw domain_error("display_tangent_frobenius: entries over different rings");
  return d.T;
}

/// det of the tangent Frobenius; its zero set is the non-ordinary locus.
inline TruncatedSeries nonordinary_locus(const Display& d) {
  const TangentFrobenius t = display_tangent_frobenius(d);
  return t[0][0] * t[1][1] - t[0][1] * t[1][0];
}

}  // namespace sll
