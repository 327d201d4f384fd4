#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sll/errors.hpp"
#include "sll/matrix.hpp"
#include "sll/modular.hpp"
#include "sll/series.hpp"

namespace sll {

/// The paramodular pairing psi = [[0, I'], [-I'^T, 0]], I' = [[0, p], [1, 0]]:
/// psi(e1, e4) = p, psi(e2, e3) = 1.
inline Matrix paramodular_pairing(const WittRing& r) {
  Matrix j(r, 4, 4);
  const WittElement p = r.from_int(r.p());
  j(0, 3) = p;
  j(3, 0) = -p;
  j(1, 2) = r.one();
  j(2, 1) = -r.one();
  return j;
}

/// Residue field of order q = p^m (q a prime power).
inline WittRing field_of_order(int_t q) {
  if (q < 2) throw precondition_error("field_of_order: q must be a prime power");
  int_t p = 2;
  while (q % p != 0) ++p;
  int m = 0;
  int_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++m;
  }
  if (rest != 1) throw precondition_error("field_of_order: q must be a prime power");
  return WittRing::make(p, m, 1);
}

/// A 2-plane in F_q^4 given by its 2x4 reduced row echelon basis.
struct IsotropicPlane {
  Matrix basis;

  std::array<std::size_t, 2> pivots() const {
    std::array<std::size_t, 2> piv{};
    for (std::size_t r = 0; r < 2; ++r) {
      std::size_t c = 0;
      while (basis(r, c).is_zero()) ++c;
      piv[r] = c;
    }
    return piv;
  }

  std::vector<WittElement> row(std::size_t i) const {
    std::vector<WittElement> v;
    for (std::size_t c = 0; c < 4; ++c) v.push_back(basis(i, c));
    return v;
  }

  std::string to_string() const { return basis.to_string(); }

  friend bool operator==(const IsotropicPlane& a, const IsotropicPlane& b) { return a.basis == b.basis; }
};

namespace detail {

inline WittElement bilinear(const Matrix& j, const std::vector<WittElement>& x, const std::vector<WittElement>& y) {
  WittElement s = j.ring().zero();
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      if (!j(a, b).is_zero()) s += x[a] * j(a, b) * y[b];
  return s;
}

}  // namespace detail

/// The span of the rows of a rank-2 matrix over F_q, in echelon form.
inline IsotropicPlane plane_from_rows(const Matrix& rows) {
  Matrix rref(rows.ring().residue_field(), 0, 0);
  if (row_reduce_mod_p(rows, &rref) != 2 || rows.rows() != 2 || rows.cols() != 4)
    throw precondition_error("plane_from_rows: rows must span a 2-plane in F_q^4");
  return {rref};
}

/// span(e_i, e_j) over F_q.
inline IsotropicPlane coordinate_plane(const WittRing& k, std::size_t i, std::size_t j) {
  Matrix m(k.residue_field(), 2, 4);
  m(0, i) = m.ring().one();
  m(1, j) = m.ring().one();
  return plane_from_rows(m);
}

/// The distinguished point z = span(e1, e4), the radical of psi mod p.
inline IsotropicPlane distinguished_point(const WittRing& k) { return coordinate_plane(k, 0, 3); }

inline bool is_isotropic(const IsotropicPlane& pl) {
  const Matrix psi = paramodular_pairing(pl.basis.ring());
  return detail::bilinear(psi, pl.row(0), pl.row(1)).is_zero();
}

/// All psi-isotropic 2-planes in F_q^4, ordered by pivot columns and then by
/// the free entries (row-major, element index order).
inline std::vector<IsotropicPlane> enumerate_special_fiber(int_t q) {
  const WittRing k = field_of_order(q);
  const Matrix psi = paramodular_pairing(k);
  std::vector<IsotropicPlane> out;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b) {
      // Free positions: row 0 at columns > a except b; row 1 at columns > b.
      std::vector<std::pair<std::size_t, std::size_t>> free;
      for (std::size_t c = a + 1; c < 4; ++c)
        if (c != b) free.emplace_back(0, c);
      for (std::size_t c = b + 1; c < 4; ++c) free.emplace_back(1, c);
      const int_t count = ipow(q, static_cast<int>(free.size()));
      for (int_t idx = 0; idx < count; ++idx) {
        Matrix m(k, 2, 4);
        m(0, a) = k.one();
        m(1, b) = k.one();
        int_t rest = idx;
        for (auto it = free.rbegin(); it != free.rend(); ++it) {
          m(it->first, it->second) = k.element_at(rest % q);
          rest /= q;
        }
        IsotropicPlane pl{m};
        if (detail::bilinear(psi, pl.row(0), pl.row(1)).is_zero()) out.push_back(std::move(pl));
      }
    }
  return out;
}

/// dim of { phi in Hom(P, F_q^4 / P) : psi(phi v, w) + psi(v, phi w) = 0 }.
/// For a plane the constraint is the single functional on Hom(P, F_q^4/P).
inline int tangent_dimension(const IsotropicPlane& pl) {
  const WittRing& k = pl.basis.ring();
  const Matrix psi = paramodular_pairing(k);
  if (!detail::bilinear(psi, pl.row(0), pl.row(1)).is_zero())
    throw precondition_error("tangent_dimension: plane is not isotropic");
  const auto piv = pl.pivots();
  std::vector<std::vector<WittElement>> comp;
  for (std::size_t c = 0; c < 4; ++c)
    if (c != piv[0] && c != piv[1]) {
      std::vector<WittElement> e(4, k.zero());
      e[c] = k.one();
      comp.push_back(e);
    }
  // phi(v_i) = sum_l c_il u_l; coefficient of c_0l is psi(u_l, v_1), of c_1l is psi(v_0, u_l).
  bool nonzero = false;
  for (const auto& u : comp) {
    nonzero = nonzero || !detail::bilinear(psi, u, pl.row(1)).is_zero();
    nonzero = nonzero || !detail::bilinear(psi, pl.row(0), u).is_zero();
  }
  return nonzero ? 3 : 4;
}

inline std::vector<IsotropicPlane> singular_points(int_t q) {
  std::vector<IsotropicPlane> out;
  for (auto& pl : enumerate_special_fiber(q))
    if (tangent_dimension(pl) == 4) out.push_back(std::move(pl));
  return out;
}

/// Isotropy of the rows [[1, t11, t12, 0], [0, t21, t22, 1]] near z, as a
/// polynomial over W_n in t11, t12, t21, t22.
inline TruncatedSeries chart_equation(const WittRing& r, std::optional<IsotropicPlane> center = std::nullopt,
                                      int degree = 3) {
  if (center && !(*center == distinguished_point(r)))
    throw precondition_error("chart_equation: center must be span(e1, e4)");
  const SeriesRing ring(r, 4, degree, {"t11", "t12", "t21", "t22"});
  const Matrix psi = paramodular_pairing(r);
  const TruncatedSeries one = TruncatedSeries::one(ring), zero(ring);
  auto t = [&](int i) { return TruncatedSeries::variable(ring, i); };
  const std::array<TruncatedSeries, 4> row1{one, t(0), t(1), zero};
  const std::array<TruncatedSeries, 4> row2{zero, t(2), t(3), one};
  TruncatedSeries f(ring);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      if (!psi(a, b).is_zero()) f += psi(a, b) * (row1[a] * row2[b]);
  return f;
}

}  // namespace sll
