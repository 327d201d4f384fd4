#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sll/dieudonne.hpp"
#include "sll/errors.hpp"
#include "sll/finite_field.hpp"
#include "sll/local_model.hpp"
#include "sll/matrix.hpp"
#include "sll/quadform.hpp"
#include "sll/series.hpp"
#include "sll/singularity.hpp"
#include "sll/witt.hpp"

namespace sll::json_io {

using json = nlohmann::ordered_json;

/// Malformed or schema-violating JSON input.
class schema_error : public precondition_error {
 public:
  using precondition_error::precondition_error;
};

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw schema_error(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline int_t as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw schema_error(std::string(what) + ": expected an integer");
  return j.get<int_t>();
}

inline int as_small_int(const json& j, const char* what, int lo, int hi) {
  const int_t v = as_int(j, what);
  if (v < lo || v > hi)
    throw schema_error(std::string(what) + ": must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

}  // namespace detail

// Ring: {"p":2,"m":2,"n":3,"modulus":[1,1,1]} (modulus low coefficient first, optional).

inline json ring_to_json(const WittRing& r) {
  return json{{"p", r.p()}, {"m", r.m()}, {"n", r.n()}, {"modulus", r.base().modulus()}};
}

inline WittRing ring_from_json(const json& j) {
  const int_t p = detail::as_int(detail::field(j, "p"), "p");
  if (p < 2 || p > 1000 || !is_prime(p)) throw schema_error("p: must be a prime below 1000");
  const int m = j.contains("m") ? detail::as_small_int(j.at("m"), "m", 1, FiniteField::kMaxDegree) : 1;
  const int n = detail::as_small_int(detail::field(j, "n"), "n", 1, 12);
  if (ipow(p, n) > (int_t{1} << 31)) throw schema_error("p^n too large");
  if (j.contains("modulus")) {
    const json& mj = j.at("modulus");
    if (!mj.is_array()) throw schema_error("modulus: expected an array of integers");
    upoly::Poly poly;
    for (const auto& c : mj) poly.push_back(mod(detail::as_int(c, "modulus"), p));
    FiniteField k(p, poly);
    if (k.m() != m) throw schema_error("modulus: degree does not match m");
    return WittRing(k, n);
  }
  return WittRing::make(p, m, n);
}

// Compact scalar: an integer when m = 1, else a list of m integers mod p^n.

inline json scalar_to_json(const WittElement& a) {
  if (a.ring().m() == 1) return a.coeff(0);
  json arr = json::array();
  for (int i = 0; i < a.ring().m(); ++i) arr.push_back(a.coeff(i));
  return arr;
}

inline WittElement scalar_from_json(const WittRing& r, const json& j) {
  WittRing::Coeffs c{};
  if (j.is_number_integer()) {
    c[0] = mod(j.get<int_t>(), r.pn());
  } else if (j.is_array()) {
    if (static_cast<int>(j.size()) > r.m()) throw schema_error("coefficient list longer than m");
    for (std::size_t i = 0; i < j.size(); ++i) c[i] = mod(detail::as_int(j[i], "coefficient"), r.pn());
  } else {
    throw schema_error("coefficient: expected an integer or a list of integers");
  }
  return {r, c};
}

/// Element: {"p","m","n","coeffs":[...]} or {"p","m","n","digits":[...]}.
inline json element_to_json(const WittElement& a) {
  json j = ring_to_json(a.ring());
  json arr = json::array();
  for (int i = 0; i < a.ring().m(); ++i) arr.push_back(a.coeff(i));
  j["coeffs"] = arr;
  return j;
}

inline json digits_to_json(const WittElement& a) {
  json arr = json::array();
  for (const auto& d : digits(a)) arr.push_back(scalar_to_json(d));
  return arr;
}

inline WittElement element_from_json(const json& j, const WittRing* ring = nullptr) {
  const WittRing r = ring != nullptr ? *ring : ring_from_json(j);
  if (j.contains("digits")) {
    const json& d = j.at("digits");
    if (!d.is_array()) throw schema_error("digits: expected an array");
    std::vector<WittElement> ds;
    for (const auto& x : d) {
      const WittElement a = scalar_from_json(r, x);
      for (int i = 0; i < r.m(); ++i)
        if (a.coeff(i) >= r.p()) throw schema_error("digits: entries must lie in [0, p)");
      ds.push_back(reduce(a));
    }
    if (static_cast<int>(ds.size()) > r.n()) throw schema_error("digits: more digits than precision n");
    return from_digits(r, ds);
  }
  const json& c = detail::field(j, "coeffs");
  if (!c.is_array()) throw schema_error("coeffs: expected an array");
  return scalar_from_json(r, c);
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(scalar_to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

inline Matrix matrix_from_json(const WittRing& r, const json& j, std::size_t rows, std::size_t cols, const char* what) {
  if (!j.is_array() || j.size() != rows) throw schema_error(std::string(what) + ": wrong number of rows");
  Matrix m(r, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw schema_error(std::string(what) + ": wrong number of columns");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = scalar_from_json(r, j[i][k]);
  }
  return m;
}

/// Module: {"ring":{...},"F":[[...]],"V":[[...]],"J":[[...]]}.
inline json module_to_json(const DieudonneModule& m) {
  return json{{"ring", ring_to_json(m.ring())},
              {"F", matrix_to_json(m.F())},
              {"V", matrix_to_json(m.V())},
              {"J", matrix_to_json(m.J())}};
}

inline DieudonneModule module_from_json(const json& j) {
  const WittRing r = ring_from_json(detail::field(j, "ring"));
  return {matrix_from_json(r, detail::field(j, "F"), 4, 4, "F"), matrix_from_json(r, detail::field(j, "V"), 4, 4, "V"),
          matrix_from_json(r, detail::field(j, "J"), 4, 4, "J")};
}

/// Series: {"ring":{...},"nvars":k,"degree":D,"names":[...],"terms":[{"exp":[...],"coeff":c},...],"text":"..."}.
/// On input either "terms" or "text" is required; output carries both.
inline json series_to_json(const TruncatedSeries& f) {
  const SeriesRing& s = f.ring();
  json terms = json::array();
  for (const auto& [e, c] : f.terms()) terms.push_back(json{{"exp", e}, {"coeff", scalar_to_json(c)}});
  return json{{"ring", ring_to_json(s.coeff_ring())}, {"nvars", s.nvars()}, {"degree", s.degree()},
              {"names", s.names()},                   {"terms", terms},       {"text", f.to_string()}};
}

inline SeriesRing series_ring_from_json(const json& j, std::optional<int> degree_override = std::nullopt) {
  const WittRing r = ring_from_json(detail::field(j, "ring"));
  const int nvars = detail::as_small_int(detail::field(j, "nvars"), "nvars", 1, 16);
  int degree = degree_override.value_or(0);
  if (!degree_override)
    degree = j.contains("degree") ? detail::as_small_int(j.at("degree"), "degree", 3, 32)
                                  : default_truncation_degree(r.p());
  if (degree < 3 || degree > 32) throw schema_error("degree: must lie in [3, 32]");
  std::vector<std::string> names;
  if (j.contains("names")) {
    if (!j.at("names").is_array() || j.at("names").size() != static_cast<std::size_t>(nvars))
      throw schema_error("names: expected one name per variable");
    for (const auto& n : j.at("names")) {
      if (!n.is_string()) throw schema_error("names: expected strings");
      names.push_back(n.get<std::string>());
    }
  }
  return SeriesRing(r, nvars, degree, names);
}

inline TruncatedSeries series_from_json(const json& j, std::optional<int> degree_override = std::nullopt) {
  const SeriesRing ring = series_ring_from_json(j, degree_override);
  if (j.contains("terms")) {
    const json& terms = j.at("terms");
    if (!terms.is_array()) throw schema_error("terms: expected an array");
    TruncatedSeries f(ring);
    for (const auto& t : terms) {
      const json& e = detail::field(t, "exp");
      if (!e.is_array() || e.size() != static_cast<std::size_t>(ring.nvars()))
        throw schema_error("exp: expected one exponent per variable");
      Exponent ex;
      for (const auto& x : e) ex.push_back(detail::as_small_int(x, "exponent", 0, 64));
      f.add_term(ex, scalar_from_json(ring.coeff_ring(), detail::field(t, "coeff")));
    }
    return f;
  }
  const json& text = detail::field(j, "text");
  if (!text.is_string()) throw schema_error("text: expected a string");
  return parse_series(ring, text.get<std::string>());
}

inline json quadform_to_json(const QuadraticForm& q) {
  json upper = json::array();
  for (int i = 0; i < q.nvars(); ++i)
    for (int k = i; k < q.nvars(); ++k) upper.push_back(scalar_to_json(q.coefficient(i, k)));
  return json{{"nvars", q.nvars()}, {"upper", upper}};
}

inline QuadraticForm quadform_from_json(const WittRing& r, const json& j) {
  const int n = detail::as_small_int(detail::field(j, "nvars"), "nvars", 1, 16);
  const json& u = detail::field(j, "upper");
  if (!u.is_array() || u.size() != static_cast<std::size_t>(n * (n + 1) / 2))
    throw schema_error("upper: expected n(n+1)/2 coefficients");
  std::vector<WittElement> coeffs;
  for (const auto& c : u) coeffs.push_back(scalar_from_json(r, c));
  return QuadraticForm(r, n, coeffs);
}

inline json local_class_to_json(const LocalRingClass& c) {
  json j{{"class", to_string(c.tag)}};
  if (c.a_prime) {
    j["a_prime"] = scalar_to_json(*c.a_prime);
    j["a_prime_valuation"] = c.a_prime_valuation;
  }
  if (c.unit_ideal) j["unit_ideal"] = true;
  if (c.smooth_variable) j["smooth_variable"] = *c.smooth_variable;
  j["reason"] = c.reason;
  return j;
}

inline json normal_form_to_json(const NormalFormResult& r) {
  json phi = json::array();
  for (const auto& s : r.phi) phi.push_back(series_to_json(s));
  json shift = json::array();
  for (const auto& b : r.linear_shift) shift.push_back(scalar_to_json(b));
  return json{{"a_prime", scalar_to_json(r.a_prime)},
              {"a_prime_valuation", valuation(r.a_prime)},
              {"q_prime", quadform_to_json(r.q_prime)},
              {"phi", phi},
              {"unit", series_to_json(r.unit)},
              {"linear_shift", shift}};
}

inline NormalFormResult normal_form_from_json(const json& j) {
  const json& unit_j = detail::field(j, "unit");
  const TruncatedSeries unit = series_from_json(unit_j);
  const WittRing& r = unit.ring().coeff_ring();
  std::vector<TruncatedSeries> phi;
  const json& phi_j = detail::field(j, "phi");
  if (!phi_j.is_array()) throw schema_error("phi: expected an array");
  for (const auto& s : phi_j) phi.push_back(series_from_json(s));
  std::vector<WittElement> shift;
  if (j.contains("linear_shift"))
    for (const auto& b : j.at("linear_shift")) shift.push_back(scalar_from_json(r, b));
  return {scalar_from_json(r, detail::field(j, "a_prime")), quadform_from_json(r, detail::field(j, "q_prime")),
          std::move(phi), unit, std::move(shift)};
}

inline json plane_to_json(const IsotropicPlane& pl) { return matrix_to_json(pl.basis); }

inline IsotropicPlane plane_from_json(const WittRing& k, const json& j) {
  return plane_from_rows(matrix_from_json(k.residue_field(), j, 2, 4, "plane"));
}

}  // namespace sll::json_io
