#pragma once

#include <cstdint>

#include "sll/errors.hpp"

namespace sll {

using int_t = std::int64_t;

// Canonical representative of a mod m in [0, m).
constexpr int_t mod(int_t a, int_t m) {
  int_t r = a % m;
  return r < 0 ? r + m : r;
}

constexpr int_t mulmod(int_t a, int_t b, int_t m) {
  return static_cast<int_t>((static_cast<__int128>(a) * b) % m);
}

constexpr int_t powmod(int_t base, std::uint64_t e, int_t m) {
  int_t result = 1 % m;
  base = mod(base, m);
  while (e != 0) {
    if (e & 1U) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    e >>= 1U;
  }
  return result;
}

// Inverse of a modulo m; throws if gcd(a, m) != 1.
constexpr int_t invmod(int_t a, int_t m) {
  int_t old_r = mod(a, m), r = m;
  int_t old_s = 1, s = 0;
  while (r != 0) {
    const int_t q = old_r / r;
    int_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw domain_error("invmod: element is not invertible");
  return mod(old_s, m);
}

constexpr bool is_prime(int_t n) {
  if (n < 2) return false;
  for (int_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

constexpr int_t ipow(int_t base, int e) {
  int_t r = 1;
  while (e-- > 0) r *= base;
  return r;
}

// p-adic valuation of a nonzero residue modulo p^n, capped at n (0 maps to n).
constexpr int valuation_mod(int_t a, int_t p, int n) {
  if (a == 0) return n;
  int v = 0;
  while (v < n && a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

}  // namespace sll
