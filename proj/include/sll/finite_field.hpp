#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sll/errors.hpp"
#include "sll/modular.hpp"

namespace sll {

/// Dense univariate polynomials with coefficients modulo a fixed integer,
/// stored low degree first. The zero polynomial is the empty vector.
namespace upoly {

using Poly = std::vector<int_t>;

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

inline Poly normalized(Poly f, int_t m) {
  for (auto& c : f) c = mod(c, m);
  trim(f);
  return f;
}

inline Poly add(const Poly& a, const Poly& b, int_t m) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = mod(r[i] + b[i], m);
  trim(r);
  return r;
}

inline Poly sub(const Poly& a, const Poly& b, int_t m) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = mod(r[i] - b[i], m);
  trim(r);
  return r;
}

inline Poly mul(const Poly& a, const Poly& b, int_t m) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = mod(r[i + j] + mulmod(a[i], b[j], m), m);
  trim(r);
  return r;
}

// Quotient and remainder; the leading coefficient of b must be a unit mod m.
inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b, int_t m) {
  if (b.empty()) throw domain_error("upoly::divmod: division by zero polynomial");
  trim(a);
  const int db = degree(b);
  const int_t lead_inv = invmod(b.back(), m);
  if (degree(a) < db) return {{}, a};
  Poly q(a.size() - b.size() + 1, 0);
  for (int k = degree(a); k >= db; --k) {
    const int_t c = mulmod(a[k], lead_inv, m);
    q[k - db] = c;
    if (c == 0) continue;
    for (int i = 0; i <= db; ++i) a[k - db + i] = mod(a[k - db + i] - mulmod(c, b[i], m), m);
  }
  trim(a);
  trim(q);
  return {q, a};
}

inline Poly rem(const Poly& a, const Poly& b, int_t m) { return divmod(a, b, m).second; }

// gcd over a prime field, made monic.
inline Poly gcd(Poly a, Poly b, int_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const int_t inv = invmod(a.back(), p);
    for (auto& c : a) c = mulmod(c, inv, p);
  }
  return a;
}

inline Poly powmod(Poly base, std::uint64_t e, const Poly& f, int_t m) {
  Poly result = rem(Poly{1}, f, m);
  base = rem(base, f, m);
  while (e != 0) {
    if (e & 1U) result = rem(mul(result, base, m), f, m);
    base = rem(mul(base, base, m), f, m);
    e >>= 1U;
  }
  return result;
}

// x^(p^k) mod f by k successive p-th powers.
inline Poly frobenius_power_of_x(std::uint64_t k, const Poly& f, int_t p) {
  Poly r{0, 1};
  for (std::uint64_t i = 0; i < k; ++i) r = powmod(r, static_cast<std::uint64_t>(p), f, p);
  return rem(r, f, p);
}

// Rabin's test for a monic polynomial over F_p.
inline bool is_irreducible(const Poly& f, int_t p) {
  const int d = degree(f);
  if (d < 1 || f.back() != 1) return false;
  if (d == 1) return true;
  const Poly x{0, 1};
  if (sub(frobenius_power_of_x(d, f, p), rem(x, f, p), p) != Poly{}) return false;
  for (int r = 2; r <= d; ++r) {
    if (d % r != 0 || !is_prime(r)) continue;
    const Poly h = sub(frobenius_power_of_x(d / r, f, p), rem(x, f, p), p);
    if (degree(gcd(h, f, p)) != 0) return false;
  }
  return true;
}

}  // namespace upoly

/// Conway polynomials for the small fields used as fixtures.
inline const std::vector<std::pair<std::pair<int_t, int>, upoly::Poly>>& builtin_moduli() {
  static const std::vector<std::pair<std::pair<int_t, int>, upoly::Poly>> table = {
      {{2, 2}, {1, 1, 1}},       {{2, 3}, {1, 1, 0, 1}},    {{2, 4}, {1, 1, 0, 0, 1}},
      {{3, 2}, {2, 2, 1}},       {{3, 3}, {1, 2, 0, 1}},    {{3, 4}, {2, 0, 0, 2, 1}},
      {{5, 2}, {2, 4, 1}},       {{5, 4}, {2, 4, 4, 0, 1}}, {{7, 2}, {3, 6, 1}},
  };
  return table;
}

// Lexicographically first monic irreducible of degree m over F_p.
inline upoly::Poly find_irreducible(int_t p, int m) {
  const int_t count = ipow(p, m);
  for (int_t idx = 0; idx < count; ++idx) {
    upoly::Poly f(static_cast<std::size_t>(m) + 1, 0);
    f[m] = 1;
    int_t t = idx;
    for (int i = 0; i < m; ++i) {
      f[i] = t % p;
      t /= p;
    }
    if (upoly::is_irreducible(f, p)) return f;
  }
  throw invariant_violation("no irreducible polynomial found");
}

/// The field F_q = F_p[x]/(modulus), q = p^m.
class FiniteField {
 public:
  static constexpr int kMaxDegree = 8;

  FiniteField(int_t p, int m) : p_(p), m_(m) {
    check_parameters();
    if (m == 1) {
      modulus_ = {0, 1};
      return;
    }
    for (const auto& [key, poly] : builtin_moduli()) {
      if (key.first == p && key.second == m) {
        modulus_ = poly;
        return;
      }
    }
    modulus_ = find_irreducible(p, m);
  }

  FiniteField(int_t p, upoly::Poly modulus) : p_(p), m_(upoly::degree(upoly::normalized(modulus, p))) {
    modulus_ = upoly::normalized(std::move(modulus), p);
    check_parameters();
    if (!upoly::is_irreducible(modulus_, p_))
      throw precondition_error("FiniteField: modulus is not a monic irreducible polynomial over F_p");
  }

  int_t p() const { return p_; }
  int m() const { return m_; }
  int_t q() const { return ipow(p_, m_); }
  const upoly::Poly& modulus() const { return modulus_; }

  friend bool operator==(const FiniteField&, const FiniteField&) = default;

 private:
  void check_parameters() const {
    if (!is_prime(p_)) throw precondition_error("FiniteField: p = " + std::to_string(p_) + " is not prime");
    if (m_ < 1 || m_ > kMaxDegree)
      throw precondition_error("FiniteField: extension degree must be in [1, " + std::to_string(kMaxDegree) + "]");
  }

  int_t p_;
  int m_;
  upoly::Poly modulus_;
};

}  // namespace sll
