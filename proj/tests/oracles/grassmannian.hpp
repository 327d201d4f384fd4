#pragma once

// Brute-force enumeration of 2-planes in F_q^4: every pair of vectors is
// spanned, normalized by its own echelon routine, and deduplicated.

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "sll/witt.hpp"

namespace oracle {

using Vec = std::vector<long long>;  // element indices (WittRing::element_at order)

struct PlaneKey {
  std::vector<std::vector<long long>> rows;  // echelon rows as coefficient lists
  auto operator<=>(const PlaneKey&) const = default;
};

class Grassmannian {
 public:
  explicit Grassmannian(const sll::WittRing& k) : k_(k) {
    for (long long i = 0; i < k.q(); ++i) elts_.push_back(k.element_at(i));
  }

  std::size_t q() const { return elts_.size(); }

  // All planes (or only the psi-isotropic ones), keyed canonically.
  std::set<PlaneKey> planes(bool isotropic_only) const;

  std::vector<sll::WittElement> vec(std::size_t idx) const {
    std::vector<sll::WittElement> v;
    for (int i = 0; i < 4; ++i) {
      v.push_back(elts_[idx % q()]);
      idx /= q();
    }
    return v;
  }

  // Echelon form of span(v, w), or nothing if dependent.
  std::optional<PlaneKey> span(std::vector<sll::WittElement> v, std::vector<sll::WittElement> w) const {
    std::vector<std::vector<sll::WittElement>> m{std::move(v), std::move(w)};
    std::size_t row = 0;
    for (std::size_t col = 0; col < 4 && row < 2; ++col) {
      std::size_t piv = row;
      while (piv < 2 && m[piv][col].is_zero()) ++piv;
      if (piv == 2) continue;
      std::swap(m[piv], m[row]);
      const auto inv = sll::inverse(m[row][col]);
      for (auto& x : m[row]) x = x * inv;
      for (std::size_t r = 0; r < 2; ++r) {
        if (r == row) continue;
        const auto f = m[r][col];
        for (std::size_t c = 0; c < 4; ++c) m[r][c] = m[r][c] - f * m[row][c];
      }
      ++row;
    }
    if (row < 2) return std::nullopt;
    PlaneKey key;
    for (const auto& r : m) {
      std::vector<long long> flat;
      for (const auto& x : r)
        for (int j = 0; j < k_.m(); ++j) flat.push_back(x.coeff(j));
      key.rows.push_back(flat);
    }
    return key;
  }

  const sll::WittRing& field() const { return k_; }

 private:
  sll::WittRing k_;
  std::vector<sll::WittElement> elts_;
};

// psi(v, w) mod p for the paramodular pairing: p v1 w4 - p v4 w1 + v2 w3 - v3 w2.
inline sll::WittElement psi_bar(const std::vector<sll::WittElement>& v, const std::vector<sll::WittElement>& w) {
  return v[1] * w[2] - v[2] * w[1];
}

inline std::set<PlaneKey> Grassmannian::planes(bool isotropic_only) const {
  std::set<PlaneKey> out;
  const std::size_t total = q() * q() * q() * q();
  for (std::size_t a = 1; a < total; ++a) {
    const auto v = vec(a);
    for (std::size_t b = a + 1; b < total; ++b) {
      const auto w = vec(b);
      if (isotropic_only && !psi_bar(v, w).is_zero()) continue;
      auto key = span(v, w);
      if (key) out.insert(*key);
    }
  }
  return out;
}

}  // namespace oracle
