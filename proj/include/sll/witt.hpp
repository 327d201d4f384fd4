#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sll/errors.hpp"
#include "sll/finite_field.hpp"
#include "sll/modular.hpp"

namespace sll {

class WittElement;

/// The truncated Witt ring W_n(F_q), realized as the Galois ring
/// (Z/p^n)[x]/(g~) where g~ is the lift of the residue modulus whose roots
/// are Teichmüller representatives. With that choice Frobenius sends x to
/// x^p, and F_q itself is the case n = 1.
///
/// A WittRing is a cheap handle to immutable shared data; copies compare
/// equal when (p, modulus, n) agree.
class WittRing {
 public:
  using Coeffs = std::array<int_t, FiniteField::kMaxDegree>;

  WittRing(const FiniteField& base, int n);

  static WittRing make(int_t p, int m, int n) { return WittRing(FiniteField(p, m), n); }

  const FiniteField& base() const { return d_->base; }
  int_t p() const { return d_->base.p(); }
  int m() const { return d_->base.m(); }
  int n() const { return d_->n; }
  int_t pn() const { return d_->pn; }
  int_t q() const { return d_->base.q(); }
  // Number of elements, q^n.
  int_t size() const { return ipow(q(), n()); }
  const upoly::Poly& lifted_modulus() const { return d_->modulus; }

  WittRing residue_field() const { return n() == 1 ? *this : WittRing(base(), 1); }
  WittRing with_precision(int n) const { return n == this->n() ? *this : WittRing(base(), n); }

  WittElement zero() const;
  WittElement one() const;
  WittElement from_int(int_t v) const;
  // Class of x, the Teichmüller lift of the chosen generator of F_q.
  WittElement generator() const;
  WittElement from_coeffs(std::span<const int_t> coeffs) const;
  // Bijection [0, q^n) -> ring, reading the index in base p^n, low coefficient first.
  WittElement element_at(int_t index) const;
  template <class Rng>
  WittElement random(Rng& rng) const;

  friend bool operator==(const WittRing& a, const WittRing& b) {
    return a.d_ == b.d_ || (a.d_->n == b.d_->n && a.d_->base == b.d_->base);
  }

  // Reductions of x^k for k in [m, 2m-2].
  const std::vector<Coeffs>& high_powers() const { return d_->high_powers; }
  // sigma(x^i) for i < m.
  const std::vector<Coeffs>& frobenius_powers() const { return d_->frobenius_powers; }

 private:

  struct Data {
    FiniteField base;
    int n;
    int_t pn;
    upoly::Poly modulus;
    std::vector<Coeffs> high_powers;
    std::vector<Coeffs> frobenius_powers;
  };

  static upoly::Poly teichmuller_modulus(const FiniteField& base, int n, int_t pn);

  std::shared_ptr<const Data> d_;
};

/// An element of W_n(F_q) in the polynomial basis 1, x, ..., x^(m-1) with
/// coefficients reduced modulo p^n.
class WittElement {
 public:
  using Coeffs = WittRing::Coeffs;

  WittElement(WittRing ring, const Coeffs& c) : ring_(std::move(ring)), c_(c) {}

  const WittRing& ring() const { return ring_; }
  int_t coeff(int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::vector<int_t> coeffs() const { return {c_.begin(), c_.begin() + ring_.m()}; }
  const Coeffs& raw() const { return c_; }

  bool is_zero() const {
    for (int i = 0; i < ring_.m(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }
  bool is_one() const { return *this == ring_.one(); }
  // Units are exactly the elements with nonzero reduction mod p.
  bool is_unit() const {
    for (int i = 0; i < ring_.m(); ++i)
      if (c_[i] % ring_.p() != 0) return true;
    return false;
  }
  // True when the element lies in the prime subring Z/p^n.
  bool is_rational() const {
    for (int i = 1; i < ring_.m(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }

  WittElement operator-() const {
    Coeffs r{};
    for (int i = 0; i < ring_.m(); ++i) r[i] = c_[i] == 0 ? 0 : ring_.pn() - c_[i];
    return {ring_, r};
  }

  friend WittElement operator+(const WittElement& a, const WittElement& b) {
    a.check_same(b);
    Coeffs r{};
    const int_t pn = a.ring_.pn();
    for (int i = 0; i < a.ring_.m(); ++i) {
      r[i] = a.c_[i] + b.c_[i];
      if (r[i] >= pn) r[i] -= pn;
    }
    return {a.ring_, r};
  }

  friend WittElement operator-(const WittElement& a, const WittElement& b) {
    a.check_same(b);
    Coeffs r{};
    const int_t pn = a.ring_.pn();
    for (int i = 0; i < a.ring_.m(); ++i) {
      r[i] = a.c_[i] - b.c_[i];
      if (r[i] < 0) r[i] += pn;
    }
    return {a.ring_, r};
  }

  friend WittElement operator*(const WittElement& a, const WittElement& b) {
    a.check_same(b);
    const int m = a.ring_.m();
    const int_t pn = a.ring_.pn();
    if (m == 1) return {a.ring_, Coeffs{mulmod(a.c_[0], b.c_[0], pn)}};
    std::array<int_t, 2 * FiniteField::kMaxDegree> prod{};
    for (int i = 0; i < m; ++i) {
      if (a.c_[i] == 0) continue;
      for (int j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + mulmod(a.c_[i], b.c_[j], pn)) % pn;
    }
    Coeffs r{};
    for (int i = 0; i < m; ++i) r[i] = prod[i];
    const auto& high = a.ring_.high_powers();
    for (int k = m; k <= 2 * m - 2; ++k) {
      if (prod[k] == 0) continue;
      const Coeffs& red = high[static_cast<std::size_t>(k - m)];
      for (int i = 0; i < m; ++i) r[i] = (r[i] + mulmod(prod[k], red[i], pn)) % pn;
    }
    return {a.ring_, r};
  }

  WittElement& operator+=(const WittElement& o) { return *this = *this + o; }
  WittElement& operator-=(const WittElement& o) { return *this = *this - o; }
  WittElement& operator*=(const WittElement& o) { return *this = *this * o; }

  friend bool operator==(const WittElement& a, const WittElement& b) {
    if (!(a.ring_ == b.ring_)) return false;
    for (int i = 0; i < a.ring_.m(); ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

  // Lexicographic on coefficients; only meaningful within one ring.
  friend bool operator<(const WittElement& a, const WittElement& b) {
    for (int i = 0; i < a.ring_.m(); ++i)
      if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    return false;
  }

  std::string to_string() const;

 private:
  void check_same(const WittElement& o) const {
    if (!(ring_ == o.ring_)) throw domain_error("Witt ring mismatch between operands");
  }

  WittRing ring_;
  Coeffs c_{};
};

// ---------------------------------------------------------------------------
// WittRing implementation

namespace detail {

// Solves A y = b over Z/p^n for A invertible mod p (columns given as coefficient vectors).
inline std::vector<int_t> solve_unit_system(std::vector<std::vector<int_t>> a, std::vector<int_t> b, int_t p,
                                            int_t pn) {
  const std::size_t k = b.size();
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    while (piv < k && a[piv][col] % p == 0) ++piv;
    if (piv == k) throw domain_error("solve_unit_system: matrix is singular mod p");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    const int_t inv = invmod(a[col][col], pn);
    for (std::size_t j = 0; j < k; ++j) a[col][j] = mulmod(a[col][j], inv, pn);
    b[col] = mulmod(b[col], inv, pn);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const int_t f = a[r][col];
      for (std::size_t j = 0; j < k; ++j) a[r][j] = mod(a[r][j] - mulmod(f, a[col][j], pn), pn);
      b[r] = mod(b[r] - mulmod(f, b[col], pn), pn);
    }
  }
  return b;
}

}  // namespace detail

inline upoly::Poly WittRing::teichmuller_modulus(const FiniteField& base, int n, int_t pn) {
  const int m = base.m();
  upoly::Poly naive = base.modulus();
  if (n == 1 || m == 1) return naive;
  // tau = y^(q^(n-1)) in (Z/p^n)[y]/(naive) is the Teichmüller lift of y mod p;
  // its minimal polynomial is the Teichmüller modulus.
  upoly::Poly tau{0, 1};
  for (int i = 0; i + 1 < n; ++i) tau = upoly::powmod(tau, static_cast<std::uint64_t>(base.q()), naive, pn);
  std::vector<upoly::Poly> powers{{1}};
  for (int i = 1; i <= m; ++i) powers.push_back(upoly::rem(upoly::mul(powers.back(), tau, pn), naive, pn));
  auto coeff = [](const upoly::Poly& f, int i) { return i < static_cast<int>(f.size()) ? f[i] : int_t{0}; };
  std::vector<std::vector<int_t>> a(static_cast<std::size_t>(m), std::vector<int_t>(static_cast<std::size_t>(m)));
  std::vector<int_t> b(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) a[r][c] = coeff(powers[c], r);
    b[r] = coeff(powers[m], r);
  }
  const auto rel = detail::solve_unit_system(a, b, base.p(), pn);
  upoly::Poly g(static_cast<std::size_t>(m) + 1, 0);
  for (int i = 0; i < m; ++i) g[i] = mod(-rel[i], pn);
  g[m] = 1;
  return g;
}

inline WittRing::WittRing(const FiniteField& base, int n) {
  if (n < 1) throw precondition_error("WittRing: truncation length must be >= 1");
  const int_t pn = ipow(base.p(), n);
  if (pn > (int_t{1} << 31) || ipow(base.q(), n) > (int_t{1} << 40))
    throw precondition_error("WittRing: p^n too large for this implementation");
  auto d = std::make_shared<Data>(Data{base, n, pn, teichmuller_modulus(base, n, pn), {}, {}});
  const int m = base.m();
  auto to_coeffs = [m](const upoly::Poly& f) {
    Coeffs c{};
    for (int i = 0; i < m && i < static_cast<int>(f.size()); ++i) c[i] = f[i];
    return c;
  };
  for (int k = m; k <= 2 * m - 2; ++k) {
    upoly::Poly xk(static_cast<std::size_t>(k) + 1, 0);
    xk[k] = 1;
    d->high_powers.push_back(to_coeffs(upoly::rem(xk, d->modulus, pn)));
  }
  upoly::Poly frob_x = upoly::powmod(upoly::Poly{0, 1}, static_cast<std::uint64_t>(base.p()), d->modulus, pn);
  if (m == 1) frob_x = {0, 1};
  upoly::Poly acc{1};
  for (int i = 0; i < m; ++i) {
    d->frobenius_powers.push_back(to_coeffs(acc));
    acc = upoly::rem(upoly::mul(acc, frob_x, pn), d->modulus, pn);
  }
  d_ = std::move(d);
}

inline WittElement WittRing::zero() const { return {*this, Coeffs{}}; }
inline WittElement WittRing::one() const { return from_int(1); }
inline WittElement WittRing::from_int(int_t v) const {
  Coeffs c{};
  c[0] = mod(v, pn());
  return {*this, c};
}
inline WittElement WittRing::generator() const {
  if (m() == 1) throw domain_error("generator: F_p has no polynomial generator");
  Coeffs c{};
  c[1] = 1;
  return {*this, c};
}
inline WittElement WittRing::from_coeffs(std::span<const int_t> coeffs) const {
  if (static_cast<int>(coeffs.size()) > m()) throw precondition_error("from_coeffs: more than m coefficients");
  Coeffs c{};
  for (std::size_t i = 0; i < coeffs.size(); ++i) c[i] = mod(coeffs[i], pn());
  return {*this, c};
}
inline WittElement WittRing::element_at(int_t index) const {
  Coeffs c{};
  for (int i = 0; i < m(); ++i) {
    c[i] = index % pn();
    index /= pn();
  }
  return {*this, c};
}
template <class Rng>
WittElement WittRing::random(Rng& rng) const {
  std::uniform_int_distribution<int_t> dist(0, pn() - 1);
  Coeffs c{};
  for (int i = 0; i < m(); ++i) c[i] = dist(rng);
  return {*this, c};
}

inline std::string WittElement::to_string() const {
  if (ring_.m() == 1) return std::to_string(c_[0]);
  std::string s = "[";
  for (int i = 0; i < ring_.m(); ++i) s += (i ? "," : "") + std::to_string(c_[i]);
  return s + "]";
}

// ---------------------------------------------------------------------------
// Free operations

inline WittElement pow(const WittElement& x, std::uint64_t e) {
  WittElement result = x.ring().one();
  WittElement base = x;
  while (e != 0) {
    if (e & 1U) result *= base;
    base *= base;
    e >>= 1U;
  }
  return result;
}

/// The Frobenius automorphism sigma, lifting x -> x^p on the residue field.
inline WittElement frobenius(const WittElement& a) {
  const WittRing& r = a.ring();
  if (r.m() == 1) return a;
  WittRing::Coeffs out{};
  const int_t pn = r.pn();
  for (int i = 0; i < r.m(); ++i) {
    if (a.coeff(i) == 0) continue;
    const auto& img = r.frobenius_powers()[static_cast<std::size_t>(i)];
    for (int j = 0; j < r.m(); ++j) out[j] = (out[j] + mulmod(a.coeff(i), img[j], pn)) % pn;
  }
  return {r, out};
}

/// sigma^k for any integer k (negative values give powers of sigma^-1).
inline WittElement frobenius(const WittElement& a, int k) {
  const int m = a.ring().m();
  const int steps = static_cast<int>(mod(k, m));
  WittElement r = a;
  for (int i = 0; i < steps; ++i) r = frobenius(r);
  return r;
}

inline WittElement inverse_frobenius(const WittElement& a) { return frobenius(a, -1); }

/// Reduction W_n(F_q) -> F_q.
inline WittElement reduce(const WittElement& x) {
  const WittRing k = x.ring().residue_field();
  WittRing::Coeffs c{};
  for (int i = 0; i < k.m(); ++i) c[i] = x.coeff(i) % k.p();
  return {k, c};
}

/// Coefficient-wise lift of an element of a ring with the same residue field
/// (any precision) into `ring`. Not a ring map unless the precisions agree
/// or the target precision is lower.
inline WittElement lift(const WittRing& ring, const WittElement& a) {
  if (!(ring.base() == a.ring().base())) throw domain_error("lift: residue fields differ");
  WittRing::Coeffs c{};
  for (int i = 0; i < ring.m(); ++i) c[i] = mod(a.coeff(i), ring.pn());
  return {ring, c};
}

/// Change of precision: reduction when n' < n, coefficient lift otherwise.
inline WittElement change_precision(const WittElement& a, int n) { return lift(a.ring().with_precision(n), a); }

inline int valuation(const WittElement& x) {
  const WittRing& r = x.ring();
  int v = r.n();
  for (int i = 0; i < r.m(); ++i) v = std::min(v, valuation_mod(x.coeff(i), r.p(), r.n()));
  return v;
}

inline WittElement inverse(const WittElement& x) {
  if (!x.is_unit()) throw domain_error("inverse: element " + x.to_string() + " is not a unit");
  const WittRing& r = x.ring();
  const WittElement xbar = reduce(x);
  WittElement y = lift(r, pow(xbar, static_cast<std::uint64_t>(r.q() - 2)));
  const WittElement two = r.from_int(2);
  for (int precision = 1; precision < r.n(); precision *= 2) y = y * (two - x * y);
  return y;
}

/// Divides an element of p W_n by p. The result is determined modulo p^(n-1);
/// the returned representative has top digit zero.
inline WittElement divide_by_p(const WittElement& x) {
  const WittRing& r = x.ring();
  WittRing::Coeffs c{};
  for (int i = 0; i < r.m(); ++i) {
    if (x.coeff(i) % r.p() != 0) throw domain_error("divide_by_p: element is not divisible by p");
    c[i] = x.coeff(i) / r.p();
  }
  return {r, c};
}

/// Multiplicative representative [a] of a in F_q.
inline WittElement teichmuller(const WittRing& ring, const WittElement& a) {
  if (a.ring().n() != 1 || !(a.ring().base() == ring.base()))
    throw domain_error("teichmuller: argument must lie in the residue field of the target ring");
  WittElement t = lift(ring, a);
  for (int i = 0; i + 1 < ring.n(); ++i) t = pow(t, static_cast<std::uint64_t>(ring.q()));
  return t;
}

/// Teichmüller digits (a_0, ..., a_{n-1}) with x = sum [a_i] p^i.
inline std::vector<WittElement> digits(const WittElement& x) {
  const WittRing& r = x.ring();
  const WittRing k = r.residue_field();
  std::vector<WittElement> out;
  out.reserve(static_cast<std::size_t>(r.n()));
  WittElement rest = x;
  int_t pi = 1;
  for (int i = 0; i < r.n(); ++i) {
    WittRing::Coeffs c{};
    for (int j = 0; j < r.m(); ++j) c[j] = (rest.coeff(j) / pi) % r.p();
    WittElement a(k, c);
    out.push_back(a);
    rest -= teichmuller(r, a) * r.from_int(pi);
    pi *= r.p();
  }
  return out;
}

inline WittElement from_digits(const WittRing& ring, std::span<const WittElement> ds) {
  if (static_cast<int>(ds.size()) > ring.n()) throw precondition_error("from_digits: more digits than precision");
  WittElement acc = ring.zero();
  int_t pi = 1;
  for (const auto& a : ds) {
    acc += teichmuller(ring, a) * ring.from_int(pi);
    pi *= ring.p();
  }
  return acc;
}

/// A ring embedding W_n(F_q) -> W_n(F_q'), determined by the image of x.
struct RingEmbedding {
  WittRing source;
  WittRing target;
  std::optional<WittElement> image_of_generator;  // empty when source is prime

  WittElement operator()(const WittElement& a) const {
    if (!(a.ring() == source)) throw domain_error("RingEmbedding: element not in the source ring");
    if (!image_of_generator) return target.from_int(a.coeff(0));
    WittElement acc = target.zero();
    WittElement xp = target.one();
    for (int i = 0; i < source.m(); ++i) {
      acc += target.from_int(a.coeff(i)) * xp;
      xp *= *image_of_generator;
    }
    return acc;
  }
};

/// W_n(F_q) -> W_n(F_{q^2}), sending x to the Teichmüller lift of a root of
/// the residue modulus (found by exhaustive search in F_{q^2}).
inline RingEmbedding quadratic_extension(const WittRing& ring) {
  const WittRing target(FiniteField(ring.p(), 2 * ring.m()), ring.n());
  if (ring.m() == 1) return {ring, target, std::nullopt};
  const WittRing k = target.residue_field();
  const auto& g = ring.base().modulus();
  for (int_t idx = 0; idx < k.size(); ++idx) {
    const WittElement t = k.element_at(idx);
    WittElement val = k.zero();
    for (auto it = g.rbegin(); it != g.rend(); ++it) val = val * t + k.from_int(*it);
    if (val.is_zero()) return {ring, target, teichmuller(target, t)};
  }
  throw invariant_violation("quadratic_extension: residue modulus has no root in F_{q^2}");
}

/// Square root in F_q by exhaustive search; empty if a is a non-square.
inline std::optional<WittElement> field_sqrt(const WittElement& a) {
  const WittRing& k = a.ring();
  if (k.n() != 1) throw precondition_error("field_sqrt: argument must lie in F_q");
  for (int_t idx = 0; idx < k.size(); ++idx) {
    const WittElement s = k.element_at(idx);
    if (s * s == a) return s;
  }
  return std::nullopt;
}

/// Square root of a unit in W_n(F_q), p odd, Hensel-lifted from F_q.
inline std::optional<WittElement> unit_sqrt(const WittElement& u) {
  const WittRing& r = u.ring();
  if (r.p() == 2) throw unsupported_characteristic("unit_sqrt: Hensel lifting of square roots needs odd p");
  if (!u.is_unit()) throw domain_error("unit_sqrt: argument is not a unit");
  const auto s0 = field_sqrt(reduce(u));
  if (!s0) return std::nullopt;
  WittElement s = lift(r, *s0);
  const WittElement two = r.from_int(2);
  for (int i = 0; i < r.n(); ++i) s = s - (s * s - u) * inverse(two * s);
  return s;
}

}  // namespace sll
