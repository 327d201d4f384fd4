#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sll/errors.hpp"
#include "sll/witt.hpp"

namespace sll {

using Exponent = std::vector<int>;

inline int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

/// Graded-lex order: lower total degree first, then x1 > x2 > ... lexicographically.
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a > b;
  }
};

/// A[[x_1..x_nvars]] modulo monomials of total degree >= degree().
class SeriesRing {
 public:
  SeriesRing(WittRing coeffs, int nvars, int degree, std::vector<std::string> names = {})
      : coeffs_(std::move(coeffs)), nvars_(nvars), degree_(degree), names_(std::move(names)) {
    if (nvars_ < 1) throw precondition_error("SeriesRing: need at least one variable");
    if (degree_ < 3) throw precondition_error("SeriesRing: truncation degree must be >= 3");
    if (names_.empty())
      for (int i = 1; i <= nvars_; ++i) names_.push_back("x" + std::to_string(i));
    if (static_cast<int>(names_.size()) != nvars_) throw precondition_error("SeriesRing: wrong number of names");
  }

  const WittRing& coeff_ring() const { return coeffs_; }
  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  const std::vector<std::string>& names() const { return names_; }

  SeriesRing with_degree(int degree) const { return {coeffs_, nvars_, degree, names_}; }
  SeriesRing with_coeff_ring(WittRing r) const { return {std::move(r), nvars_, degree_, names_}; }

  // Variable names are labels only and do not take part in equality.
  friend bool operator==(const SeriesRing& a, const SeriesRing& b) {
    return a.nvars_ == b.nvars_ && a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
  }

 private:
  WittRing coeffs_;
  int nvars_;
  int degree_;
  std::vector<std::string> names_;
};

/// A truncated power series: a sparse map from exponents of total degree
/// below the ring's truncation degree to nonzero coefficients.
class TruncatedSeries {
 public:
  using Terms = std::map<Exponent, WittElement, GradedLex>;

  explicit TruncatedSeries(SeriesRing ring) : ring_(std::move(ring)) {}

  static TruncatedSeries zero(const SeriesRing& ring) { return TruncatedSeries(ring); }
  static TruncatedSeries constant(const SeriesRing& ring, const WittElement& c) {
    TruncatedSeries s(ring);
    s.add_term(Exponent(static_cast<std::size_t>(ring.nvars()), 0), c);
    return s;
  }
  static TruncatedSeries one(const SeriesRing& ring) { return constant(ring, ring.coeff_ring().one()); }
  static TruncatedSeries variable(const SeriesRing& ring, int i) {
    Exponent e(static_cast<std::size_t>(ring.nvars()), 0);
    e.at(static_cast<std::size_t>(i)) = 1;
    return monomial(ring, e, ring.coeff_ring().one());
  }
  static TruncatedSeries monomial(const SeriesRing& ring, const Exponent& e, const WittElement& c) {
    TruncatedSeries s(ring);
    s.add_term(e, c);
    return s;
  }

  const SeriesRing& ring() const { return ring_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Adds c * x^e, dropping the term if deg e is at or beyond the truncation.
  void add_term(const Exponent& e, const WittElement& c) {
    if (static_cast<int>(e.size()) != ring_.nvars()) throw precondition_error("add_term: exponent length mismatch");
    if (!(c.ring() == ring_.coeff_ring())) throw domain_error("add_term: coefficient ring mismatch");
    if (total_degree(e) >= ring_.degree() || c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  WittElement coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? ring_.coeff_ring().zero() : it->second;
  }

  WittElement constant_term() const { return coefficient(Exponent(static_cast<std::size_t>(ring_.nvars()), 0)); }

  std::vector<WittElement> linear_coefficients() const {
    std::vector<WittElement> out;
    for (int i = 0; i < ring_.nvars(); ++i) {
      Exponent e(static_cast<std::size_t>(ring_.nvars()), 0);
      e[static_cast<std::size_t>(i)] = 1;
      out.push_back(coefficient(e));
    }
    return out;
  }

  TruncatedSeries graded_part(int d) const {
    if (d < 0 || d >= ring_.degree()) throw precondition_error("graded_part: degree outside [0, D)");
    TruncatedSeries s(ring_);
    for (const auto& [e, c] : terms_)
      if (total_degree(e) == d) s.terms_.emplace(e, c);
    return s;
  }

  // Highest total degree present, or -1 for zero.
  int max_degree() const { return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first); }
  // Lowest total degree present, or -1 for zero.
  int min_degree() const { return terms_.empty() ? -1 : total_degree(terms_.begin()->first); }

  // Same terms viewed in a ring with smaller truncation degree.
  TruncatedSeries truncate(int degree) const {
    if (degree > ring_.degree()) throw precondition_error("truncate: cannot raise the truncation degree");
    TruncatedSeries s(ring_.with_degree(degree));
    for (const auto& [e, c] : terms_)
      if (total_degree(e) < degree) s.terms_.emplace(e, c);
    return s;
  }

  TruncatedSeries operator-() const {
    TruncatedSeries s(ring_);
    for (const auto& [e, c] : terms_) s.terms_.emplace(e, -c);
    return s;
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check_same(b);
    TruncatedSeries s = a;
    for (const auto& [e, c] : b.terms_) s.add_term(e, c);
    return s;
  }
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.check_same(b);
    TruncatedSeries s(a.ring_);
    const int D = a.ring_.degree();
    const std::size_t nv = static_cast<std::size_t>(a.ring_.nvars());
    Exponent e(nv);
    for (const auto& [ea, ca] : a.terms_) {
      const int da = total_degree(ea);
      for (const auto& [eb, cb] : b.terms_) {
        if (da + total_degree(eb) >= D) break;  // b's terms are ordered by degree
        for (std::size_t i = 0; i < nv; ++i) e[i] = ea[i] + eb[i];
        s.add_term(e, ca * cb);
      }
    }
    return s;
  }

  friend TruncatedSeries operator*(const WittElement& c, const TruncatedSeries& a) {
    TruncatedSeries s(a.ring_);
    for (const auto& [e, x] : a.terms_) s.add_term(e, c * x);
    return s;
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) { return *this = *this + o; }
  TruncatedSeries& operator-=(const TruncatedSeries& o) { return *this = *this - o; }
  TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.ring_ == b.ring_ && a.terms_ == b.terms_;
  }

  std::string to_string() const;

 private:
  void check_same(const TruncatedSeries& o) const {
    if (!(ring_ == o.ring_)) throw domain_error("series ring mismatch between operands");
  }

  SeriesRing ring_;
  Terms terms_;
};

inline TruncatedSeries add(const TruncatedSeries& f, const TruncatedSeries& g) { return f + g; }
inline TruncatedSeries mul(const TruncatedSeries& f, const TruncatedSeries& g) { return f * g; }
inline TruncatedSeries scalar_mul(const WittElement& c, const TruncatedSeries& f) { return c * f; }

inline TruncatedSeries pow(const TruncatedSeries& f, int e) {
  TruncatedSeries r = TruncatedSeries::one(f.ring());
  for (int i = 0; i < e; ++i) r *= f;
  return r;
}

/// f(phi_1, ..., phi_n) truncated at the ring degree. Each phi_i must have
/// its constant term in the maximal ideal so that the truncation of the
/// composite depends only on the truncation of f.
inline TruncatedSeries substitute(const TruncatedSeries& f, const std::vector<TruncatedSeries>& phi) {
  const SeriesRing& src = f.ring();
  if (static_cast<int>(phi.size()) != src.nvars())
    throw precondition_error("substitute: need one series per variable");
  const SeriesRing& dst = phi.front().ring();
  for (const auto& s : phi) {
    if (!(s.ring() == dst)) throw domain_error("substitute: substituted series live in different rings");
    if (s.constant_term().is_unit())
      throw precondition_error("substitute: substituted series has a unit constant term");
  }
  if (!(dst.coeff_ring() == src.coeff_ring())) throw domain_error("substitute: coefficient rings differ");

  // Powers products x^e -> phi^e, built from x^(e - e_i) * phi_i.
  std::map<Exponent, TruncatedSeries, GradedLex> cache;
  const Exponent zero_exp(static_cast<std::size_t>(src.nvars()), 0);
  cache.emplace(zero_exp, TruncatedSeries::one(dst));
  auto value = [&](auto&& self, const Exponent& e) -> const TruncatedSeries& {
    if (auto it = cache.find(e); it != cache.end()) return it->second;
    std::size_t i = 0;
    while (e[i] == 0) ++i;
    Exponent prev = e;
    --prev[i];
    TruncatedSeries v = self(self, prev) * phi[i];
    return cache.emplace(e, std::move(v)).first->second;
  };

  TruncatedSeries out(dst);
  for (const auto& [e, c] : f.terms()) out += c * value(value, e);
  return out;
}

/// Multiplicative inverse of a series with unit constant term.
inline TruncatedSeries invert_unit(const TruncatedSeries& f) {
  const WittElement c = f.constant_term();
  if (!c.is_unit()) throw domain_error("invert_unit: constant term is not a unit");
  const WittElement c_inv = inverse(c);
  // f = c (1 + h), h in the ideal (x); f^-1 = c^-1 sum_k (-h)^k.
  const TruncatedSeries neg_h = -(c_inv * (f - TruncatedSeries::constant(f.ring(), c)));
  TruncatedSeries acc = TruncatedSeries::one(f.ring());
  TruncatedSeries power = TruncatedSeries::one(f.ring());
  for (int k = 1; k < f.ring().degree(); ++k) {
    power *= neg_h;
    if (power.is_zero()) break;
    acc += power;
  }
  return c_inv * acc;
}

/// Evaluate at a point with coordinates in the maximal ideal (or any point,
/// treating f as the polynomial it stores).
inline WittElement evaluate(const TruncatedSeries& f, const std::vector<WittElement>& point) {
  if (static_cast<int>(point.size()) != f.ring().nvars()) throw precondition_error("evaluate: wrong arity");
  WittElement acc = f.ring().coeff_ring().zero();
  for (const auto& [e, c] : f.terms()) {
    WittElement t = c;
    for (std::size_t i = 0; i < e.size(); ++i) t *= pow(point[i], static_cast<std::uint64_t>(e[i]));
    acc += t;
  }
  return acc;
}

/// Maps coefficients into `target` (same residue field and variable count),
/// reducing precision if target.n < source n; drops degrees >= target degree.
inline TruncatedSeries change_coefficient_ring(const TruncatedSeries& f, const SeriesRing& target) {
  if (target.nvars() != f.ring().nvars()) throw domain_error("change_coefficient_ring: variable count differs");
  TruncatedSeries out(target);
  for (const auto& [e, c] : f.terms())
    if (total_degree(e) < target.degree()) out.add_term(e, lift(target.coeff_ring(), c));
  return out;
}

/// Identity coordinates (x_1, ..., x_n) of a ring.
inline std::vector<TruncatedSeries> identity_substitution(const SeriesRing& ring) {
  std::vector<TruncatedSeries> v;
  for (int i = 0; i < ring.nvars(); ++i) v.push_back(TruncatedSeries::variable(ring, i));
  return v;
}

/// Composition (phi o psi)_i = phi_i(psi).
inline std::vector<TruncatedSeries> compose(const std::vector<TruncatedSeries>& phi,
                                            const std::vector<TruncatedSeries>& psi) {
  std::vector<TruncatedSeries> out;
  for (const auto& s : phi) out.push_back(substitute(s, psi));
  return out;
}

// ---------------------------------------------------------------------------
// Text form

namespace detail {

// Symmetric integer representative in (-p^n/2, p^n/2].
inline int_t symmetric(int_t v, int_t pn) { return v > pn / 2 ? v - pn : v; }

// Renders a rational coefficient using p-powers where that is the whole value.
inline std::string render_integer(int_t v, int_t p) {
  if (v == 0) return "0";
  int k = 0;
  int_t t = v;
  while (t % p == 0) {
    t /= p;
    ++k;
  }
  if (k > 0 && (t == 1 || t == -1)) return k == 1 ? "p" : "p^" + std::to_string(k);
  return std::to_string(v);
}

}  // namespace detail

/// Coefficient text: (negative?, magnitude) so callers can place signs.
inline std::pair<bool, std::string> coefficient_text(const WittElement& c) {
  const WittRing& r = c.ring();
  if (c.is_rational()) {
    const int_t v = detail::symmetric(c.coeff(0), r.pn());
    return {v < 0, detail::render_integer(v < 0 ? -v : v, r.p())};
  }
  std::string s;
  for (int i = 0; i < r.m(); ++i) {
    const int_t v = detail::symmetric(c.coeff(i), r.pn());
    if (v == 0) continue;
    std::string mag = detail::render_integer(v < 0 ? -v : v, r.p());
    std::string mono = i == 0 ? "" : (i == 1 ? "z" : "z^" + std::to_string(i));
    std::string term = mono.empty() ? mag : (mag == "1" ? mono : mag + "*" + mono);
    if (s.empty())
      s = (v < 0 ? "-" : "") + term;
    else
      s += (v < 0 ? " - " : " + ") + term;
  }
  return {false, "(" + s + ")"};
}

inline std::string TruncatedSeries::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += ring_.names()[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    auto [neg, mag] = coefficient_text(c);
    std::string body;
    if (mono.empty())
      body = mag;
    else if (mag == "1")
      body = mono;
    else
      body = mag + "*" + mono;
    if (first)
      out = (neg ? "-" : "") + body;
    else
      out += (neg ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

namespace detail {

class SeriesParser {
 public:
  SeriesParser(const SeriesRing& ring, std::string text) : ring_(ring), s_(std::move(text)) {}

  TruncatedSeries parse() {
    TruncatedSeries r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw precondition_error("series text, position " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char ch) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  TruncatedSeries expr() {
    TruncatedSeries acc(ring_);
    bool negate = accept('-');
    if (!negate) accept('+');
    acc = negate ? -term() : term();
    while (true) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

  TruncatedSeries term() {
    TruncatedSeries acc = factor();
    while (accept('*')) acc *= factor();
    return acc;
  }

  TruncatedSeries factor() {
    TruncatedSeries base = primary();
    if (accept('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      return pow(base, std::stoi(s_.substr(start, pos_ - start)));
    }
    return base;
  }

  TruncatedSeries primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      TruncatedSeries inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    const WittRing& cr = ring_.coeff_ring();
    if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return TruncatedSeries::constant(ring_, cr.from_int(std::stoll(s_.substr(start, pos_ - start)) % cr.pn()));
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string ident = s_.substr(start, pos_ - start);
    if (ident.empty()) fail("unexpected character");
    for (int i = 0; i < ring_.nvars(); ++i)
      if (ring_.names()[static_cast<std::size_t>(i)] == ident) return TruncatedSeries::variable(ring_, i);
    if (ident == "p") return TruncatedSeries::constant(ring_, cr.from_int(cr.p()));
    if (ident == "z") return TruncatedSeries::constant(ring_, cr.generator());
    fail("unknown identifier '" + ident + "'");
  }

  const SeriesRing& ring_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the text form, e.g. "p + t11*t22 - t12*t21" or "x1^2 + 3*z*x2".
/// Integers and `p` are read in Z/p^n, `z` is the ring generator.
inline TruncatedSeries parse_series(const SeriesRing& ring, const std::string& text) {
  return detail::SeriesParser(ring, text).parse();
}

}  // namespace sll
