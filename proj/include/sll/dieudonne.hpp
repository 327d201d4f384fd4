#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sll/errors.hpp"
#include "sll/matrix.hpp"
#include "sll/witt.hpp"

namespace sll {

/// Rank-4 quasi-polarized Dieudonne module over W_n(F_q), covariant convention.
/// F(x) = F_matrix * sigma(x), V(x) = V_matrix * sigma^-1(x); columns are images
/// of basis vectors. <x, y> = x^T J y.
class DieudonneModule {
 public:
  static constexpr std::size_t kRank = 4;

  DieudonneModule(Matrix f, Matrix v, Matrix j) : f_(std::move(f)), v_(std::move(v)), j_(std::move(j)) {
    for (const Matrix* m : {&f_, &v_, &j_}) {
      if (m->rows() != kRank || m->cols() != kRank) throw precondition_error("DieudonneModule: matrices must be 4x4");
      if (!(m->ring() == f_.ring())) throw domain_error("DieudonneModule: matrices over different rings");
    }
  }

  const WittRing& ring() const { return f_.ring(); }
  const Matrix& F() const { return f_; }
  const Matrix& V() const { return v_; }
  const Matrix& J() const { return j_; }

  std::vector<WittElement> apply_F(const std::vector<WittElement>& x) const { return f_ * sigma(x, 1); }
  std::vector<WittElement> apply_V(const std::vector<WittElement>& x) const { return v_ * sigma(x, -1); }

  WittElement pairing(const std::vector<WittElement>& x, const std::vector<WittElement>& y) const {
    WittElement s = ring().zero();
    for (std::size_t i = 0; i < kRank; ++i)
      for (std::size_t k = 0; k < kRank; ++k)
        if (!j_(i, k).is_zero()) s += x[i] * j_(i, k) * y[k];
    return s;
  }

  friend bool operator==(const DieudonneModule& a, const DieudonneModule& b) {
    return a.f_ == b.f_ && a.v_ == b.v_ && a.j_ == b.j_;
  }

 private:
  static std::vector<WittElement> sigma(std::vector<WittElement> x, int k) {
    for (auto& c : x) c = frobenius(c, k);
    return x;
  }

  Matrix f_, v_, j_;
};

struct ValidationReport {
  bool fv_is_p = false;             // F sigma(V) = p
  bool vf_is_p = false;             // V sigma^-1(F) = p
  bool alternating = false;         // J^T = -J, zero diagonal
  bool degree_p_squared = false;    // elementary divisors of J are (1, 1, p, p)
  bool compatible = false;          // <Fx, y> = sigma <x, Vy>
  std::vector<int> pairing_divisors;  // valuations of the elementary divisors of J
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

inline ValidationReport validate(const DieudonneModule& m) {
  const WittRing& r = m.ring();
  const Matrix p_id = r.from_int(r.p()) * Matrix::identity(r, 4);
  ValidationReport rep;
  rep.fv_is_p = m.F() * frobenius(m.V(), 1) == p_id;
  rep.vf_is_p = m.V() * frobenius(m.F(), -1) == p_id;
  rep.alternating = m.J().transpose() == r.from_int(-1) * m.J();
  for (std::size_t i = 0; i < 4; ++i) rep.alternating = rep.alternating && m.J()(i, i).is_zero();
  rep.pairing_divisors = smith_form(m.J()).valuations;
  rep.degree_p_squared = rep.pairing_divisors == std::vector<int>{0, 0, 1, 1} && r.n() >= 2;
  rep.compatible = m.F().transpose() * m.J() == frobenius(m.J() * m.V(), 1);
  if (!rep.fv_is_p) rep.failures.emplace_back("F*sigma(V) != p");
  if (!rep.vf_is_p) rep.failures.emplace_back("V*sigma^-1(F) != p");
  if (!rep.alternating) rep.failures.emplace_back("pairing is not alternating");
  if (!rep.degree_p_squared) rep.failures.emplace_back("pairing elementary divisors are not (1,1,p,p)");
  if (!rep.compatible) rep.failures.emplace_back("<Fx,y> != sigma<x,Vy>");
  return rep;
}

enum class StandardCase { iia, iib, ordinary, lagrangian_generic, supersingular };

inline std::string to_string(StandardCase c) {
  switch (c) {
    case StandardCase::iia:
      return "iia";
    case StandardCase::iib:
      return "iib";
    case StandardCase::ordinary:
      return "ordinary";
    case StandardCase::lagrangian_generic:
      return "lagrangian_generic";
    case StandardCase::supersingular:
      return "supersingular";
  }
  return "?";
}

/// Accepts the case names above; "mixed" is an alias of lagrangian_generic.
inline std::optional<StandardCase> parse_standard_case(std::string_view s) {
  if (s == "iia") return StandardCase::iia;
  if (s == "iib") return StandardCase::iib;
  if (s == "ordinary") return StandardCase::ordinary;
  if (s == "lagrangian_generic" || s == "mixed") return StandardCase::lagrangian_generic;
  if (s == "supersingular") return StandardCase::supersingular;
  return std::nullopt;
}

namespace detail {

struct Entry {
  std::size_t row, col;
  int_t unit;   // multiplied by p^power
  int power;
};

inline Matrix sparse_matrix(const WittRing& r, std::initializer_list<Entry> entries) {
  Matrix m(r, 4, 4);
  const WittElement p = r.from_int(r.p());
  for (const auto& e : entries) m(e.row, e.col) = r.from_int(e.unit) * pow(p, static_cast<std::uint64_t>(e.power));
  return m;
}

}  // namespace detail

/// Standard fixtures. Basis order for iia, iib and lagrangian_generic is
/// (X1, X2, Y1, Y2); ordinary and supersingular use (e1, e2, e3, e4).
/// lagrangian_generic is ordinary rank 2 (X1, Y1) plus supersingular rank 2
/// (X2, Y2) with the Lagrangian pairing <X1,Y1> = 1, <X2,Y2> = p.
/// supersingular has a-number 1 and p-rank 0; it needs p odd.
inline DieudonneModule make_standard(const WittRing& r, StandardCase c) {
  using detail::sparse_matrix;
  if (r.n() < 2) throw precondition_error("make_standard: precision n must be at least 2");
  const Matrix j_lagrangian = sparse_matrix(r, {{0, 2, 1, 0}, {2, 0, -1, 0}, {1, 3, 1, 1}, {3, 1, -1, 1}});
  switch (c) {
    case StandardCase::iia:
      return {sparse_matrix(r, {{2, 0, 1, 0}, {0, 2, -1, 1}, {3, 1, 1, 0}, {1, 3, -1, 1}}),
              sparse_matrix(r, {{2, 0, -1, 0}, {0, 2, 1, 1}, {3, 1, -1, 0}, {1, 3, 1, 1}}), j_lagrangian};
    case StandardCase::iib:
      return {sparse_matrix(r, {{2, 0, 1, 0}, {0, 2, 1, 1}, {3, 1, 1, 0}, {1, 3, 1, 1}}),
              sparse_matrix(r, {{2, 0, 1, 0}, {0, 2, 1, 1}, {3, 1, 1, 0}, {1, 3, 1, 1}}),
              sparse_matrix(r, {{0, 1, 1, 0}, {1, 0, -1, 0}, {2, 3, 1, 1}, {3, 2, -1, 1}})};
    case StandardCase::ordinary:
      return {sparse_matrix(r, {{0, 0, 1, 0}, {1, 1, 1, 0}, {2, 2, 1, 1}, {3, 3, 1, 1}}),
              sparse_matrix(r, {{0, 0, 1, 1}, {1, 1, 1, 1}, {2, 2, 1, 0}, {3, 3, 1, 0}}), j_lagrangian};
    case StandardCase::lagrangian_generic:
      return {sparse_matrix(r, {{0, 0, 1, 0}, {2, 2, 1, 1}, {3, 1, 1, 0}, {1, 3, -1, 1}}),
              sparse_matrix(r, {{0, 0, 1, 1}, {2, 2, 1, 0}, {3, 1, -1, 0}, {1, 3, 1, 1}}), j_lagrangian};
    case StandardCase::supersingular:
      if (r.p() == 2) throw unsupported_characteristic("make_standard: supersingular fixture needs odd p");
      return {sparse_matrix(r, {{1, 0, 1, 1}, {2, 1, 1, 1}, {3, 2, 1, 0}, {0, 3, -1, 0}}),
              sparse_matrix(r, {{3, 0, -1, 1}, {0, 1, 1, 0}, {1, 2, 1, 0}, {2, 3, 1, 1}}),
              sparse_matrix(r, {{0, 1, 1, 1},
                                {1, 0, -1, 1},
                                {0, 3, 1, 1},
                                {3, 0, -1, 1},
                                {1, 2, 1, 0},
                                {2, 1, -1, 0},
                                {2, 3, 1, 0},
                                {3, 2, -1, 0}})};
  }
  throw precondition_error("make_standard: unknown case");
}

/// The same module in the basis given by the columns of g (g invertible).
inline DieudonneModule base_change(const DieudonneModule& m, const Matrix& g) {
  const Matrix g_inv = inverse(g);
  return {g_inv * m.F() * frobenius(g, 1), g_inv * m.V() * frobenius(g, -1), g.transpose() * m.J() * g};
}

/// a(M) = dim M / (F, V)M.
inline int a_number(const DieudonneModule& m) {
  return 4 - static_cast<int>(rank_mod_p(hconcat(m.F(), m.V())));
}

/// Rank of the stable image of F mod p, i.e. the rank of F^4 mod p.
inline int p_rank(const DieudonneModule& m) {
  Matrix power = m.F();
  for (int k = 1; k < 4; ++k) power = power * frobenius(m.F(), k);
  return static_cast<int>(rank_mod_p(power));
}

/// Basis (as columns in the e-basis) of p M^t = { x : <x, M> in pW }.
/// Satisfies basis^T J = p Id exactly. Accepts pairings with elementary
/// divisors in {1, p}.
inline Matrix dual_lattice(const DieudonneModule& m) {
  const WittRing& r = m.ring();
  if (r.n() < 2) throw precondition_error("dual_lattice: precision n must be at least 2");
  const SmithForm s = smith_form(m.J());
  Matrix scale(r, 4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const int v = s.valuations[i];
    if (v > 1) throw precondition_error("dual_lattice: pairing has an elementary divisor beyond p");
    scale(i, i) = v == 0 ? r.from_int(r.p()) : r.one();
  }
  // J = L^-1 D R^-1, so p J^-T = L^T (p D^-1) R^T.
  return s.left.transpose() * scale * s.right.transpose();
}

enum class KernelType { AlphaSquare, NonAlphaSquare, NotSuperspecial };

inline std::string to_string(KernelType k) {
  switch (k) {
    case KernelType::AlphaSquare:
      return "AlphaSquare";
    case KernelType::NonAlphaSquare:
      return "NonAlphaSquare";
    case KernelType::NotSuperspecial:
      return "NotSuperspecial";
  }
  return "?";
}

/// AlphaSquare iff F M^t and V M^t lie in M; tested as F(pM^t), V(pM^t)
/// lying in pM, which only needs the dual basis mod p.
inline KernelType kernel_type(const DieudonneModule& m) {
  if (m.ring().n() < 2) throw precondition_error("kernel_type: precision n must be at least 2");
  if (a_number(m) != 2) return KernelType::NotSuperspecial;
  const Matrix b = dual_lattice(m);
  const Matrix fb = m.F() * frobenius(b, 1);
  const Matrix vb = m.V() * frobenius(b, -1);
  const bool inside = reduce(fb).is_zero() && reduce(vb).is_zero();
  return inside ? KernelType::AlphaSquare : KernelType::NonAlphaSquare;
}

/// Hodge filtration Fil = V M / p M, as an F_q-basis in reduced echelon form.
inline Matrix hodge_filtration(const DieudonneModule& m) { return column_space_mod_p(m.V()); }

struct LagrangianWitness {
  Matrix basis;                            // columns X1, X2, Y1, Y2 in the e-basis
  std::array<std::array<WittElement, 2>, 2> t;  // chart coordinates of (Y1, Y2) over the Hodge lift
};

struct WitnessSearchResult {
  std::optional<LagrangianWitness> witness;
  int precision = 0;
  std::size_t nodes = 0;  // partial assignments examined
  std::string report;
};

namespace detail {

// Indices of two standard basis vectors completing the columns of y to a basis mod p.
inline std::optional<std::pair<std::size_t, std::size_t>> standard_complement(const Matrix& y) {
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b) {
      Matrix full(y.ring(), 4, 4);
      for (std::size_t i = 0; i < 4; ++i) {
        full(i, 0) = y(i, 0);
        full(i, 1) = y(i, 1);
      }
      full(a, 2) = y.ring().one();
      full(b, 3) = y.ring().one();
      if (rank_mod_p(full) == 4) return std::pair{a, b};
    }
  return std::nullopt;
}

inline std::vector<WittElement> axpy(std::vector<WittElement> y, const WittElement& a, const std::vector<WittElement>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
  return y;
}

// Completes an isotropic direct summand span(y1, y2) to a basis with
// <X1,Y1> = 1, <X2,Y2> = p and all other pairings zero.
inline std::optional<Matrix> complete_lagrangian(const DieudonneModule& m, std::vector<WittElement> y1,
                                                 std::vector<WittElement> y2,
                                                 std::pair<std::size_t, std::size_t> comp) {
  const WittRing& r = m.ring();
  std::vector<WittElement> x1(4, r.zero()), x2(4, r.zero());
  x1[comp.first] = r.one();
  x2[comp.second] = r.one();
  Matrix k(r, 2, 2);
  k(0, 0) = m.pairing(x1, y1);
  k(0, 1) = m.pairing(x1, y2);
  k(1, 0) = m.pairing(x2, y1);
  k(1, 1) = m.pairing(x2, y2);
  const WittElement p = r.from_int(r.p());
  const bool trivial = k(0, 0).is_one() && k(0, 1).is_zero() && k(1, 0).is_zero() && k(1, 1) == p;
  if (!trivial) {
    const SmithForm s = smith_form(k);
    if (s.valuations != std::vector<int>{0, 1}) return std::nullopt;
    // New X = old X combined by rows of `left`, new Y by columns of `right`.
    auto nx1 = axpy(axpy(std::vector<WittElement>(4, r.zero()), s.left(0, 0), x1), s.left(0, 1), x2);
    auto nx2 = axpy(axpy(std::vector<WittElement>(4, r.zero()), s.left(1, 0), x1), s.left(1, 1), x2);
    auto ny1 = axpy(axpy(std::vector<WittElement>(4, r.zero()), s.right(0, 0), y1), s.right(1, 0), y2);
    auto ny2 = axpy(axpy(std::vector<WittElement>(4, r.zero()), s.right(0, 1), y1), s.right(1, 1), y2);
    x1 = std::move(nx1);
    x2 = std::move(nx2);
    y1 = std::move(ny1);
    y2 = std::move(ny2);
  }
  const WittElement c = m.pairing(x1, x2);
  if (!c.is_zero()) x2 = axpy(x2, -c, y1);
  // <X1, X1> = 0 is automatic for an alternating pairing.
  Matrix basis = Matrix::from_columns(r, {x1, x2, y1, y2});
  if (!determinant(basis).is_unit()) return std::nullopt;
  return basis;
}

}  // namespace detail

/// Searches for a co-torsion-free isotropic rank-2 sublattice L of VM. Such an
/// L lifts Fil, so in the chart y_i = Y_i + sum_j t_ij X_j (Y a lift of the
/// echelon basis of Fil, X standard complement vectors, t in pW) it is a zero
/// of <y1, y2>. The t digits are fixed one p-adic place at a time with
/// backtracking. A witness is a proof; exhaustion only covers precision n.
inline WitnessSearchResult lagrangian_witness_search(const DieudonneModule& m, std::size_t node_budget = 5'000'000) {
  const WittRing& r = m.ring();
  WitnessSearchResult res;
  res.precision = r.n();
  if (r.n() < 2) throw precondition_error("lagrangian_witness_search: precision n must be at least 2");
  const Matrix fil = hodge_filtration(m);
  if (fil.cols() != 2) {
    res.report = "Hodge filtration does not have dimension 2";
    return res;
  }
  const Matrix y = lift(r, fil);
  const auto comp = detail::standard_complement(y);
  if (!comp) {
    res.report = "no standard complement";
    return res;
  }
  const auto y0 = y.column(0), y1 = y.column(1);
  std::vector<WittElement> ex1(4, r.zero()), ex2(4, r.zero());
  ex1[comp->first] = r.one();
  ex2[comp->second] = r.one();

  // <y1 + a X1 + b X2, y2 + c X1 + d X2> expanded once into coefficients.
  const WittElement c0 = m.pairing(y0, y1);
  const WittElement c_a = m.pairing(ex1, y1), c_b = m.pairing(ex2, y1);
  const WittElement c_c = m.pairing(y0, ex1), c_d = m.pairing(y0, ex2);
  const WittElement c_bc = m.pairing(ex2, ex1), c_ad = m.pairing(ex1, ex2);
  auto relation = [&](const std::array<WittElement, 4>& t) {
    return c0 + c_a * t[0] + c_b * t[1] + c_c * t[2] + c_d * t[3] + c_ad * t[0] * t[3] + c_bc * t[1] * t[2];
  };

  const int_t q = r.q();
  const WittRing k = r.residue_field();
  std::vector<WittElement> digit_values;
  for (int_t i = 0; i < q; ++i) digit_values.push_back(teichmuller(r, k.element_at(i)));
  const WittElement p = r.from_int(r.p());

  std::array<WittElement, 4> t{r.zero(), r.zero(), r.zero(), r.zero()};
  bool exhausted_budget = false;
  // Place `level` is p^level; the relation must vanish mod p^(level+1) afterwards.
  auto dfs = [&](auto&& self, int level) -> bool {
    if (level == r.n()) return true;
    const WittElement place = pow(p, static_cast<std::uint64_t>(level));
    const std::array<WittElement, 4> base = t;
    const int_t combos = ipow(q, 4);
    for (int_t idx = 0; idx < combos; ++idx) {
      if (++res.nodes > node_budget) {
        exhausted_budget = true;
        return false;
      }
      int_t rest = idx;
      for (std::size_t v = 0; v < 4; ++v) {
        t[v] = base[v] + digit_values[static_cast<std::size_t>(rest % q)] * place;
        rest /= q;
      }
      if (valuation(relation(t)) >= level + 1 && self(self, level + 1)) return true;
      if (exhausted_budget) return false;
    }
    t = base;
    return false;
  };

  bool found = false;
  if (valuation(c0) >= 1) found = dfs(dfs, 1);
  if (found) {
    auto w1 = detail::axpy(detail::axpy(y0, t[0], ex1), t[1], ex2);
    auto w2 = detail::axpy(detail::axpy(y1, t[2], ex1), t[3], ex2);
    if (auto basis = detail::complete_lagrangian(m, w1, w2, *comp)) {
      res.witness = LagrangianWitness{*basis, {{{t[0], t[1]}, {t[2], t[3]}}}};
      res.report = "witness found";
      return res;
    }
    res.report = "isotropic lift found but could not be completed";
    return res;
  }
  res.report = exhausted_budget ? "search budget exhausted" : "no witness at precision " + std::to_string(r.n());
  return res;
}

/// Checks the witness shape of a basis directly.
inline bool is_lagrangian_witness(const DieudonneModule& m, const Matrix& basis) {
  const WittRing& r = m.ring();
  if (!determinant(basis).is_unit()) return false;
  const Matrix g = basis.transpose() * m.J() * basis;
  Matrix expected(r, 4, 4);
  expected(0, 2) = r.one();
  expected(2, 0) = -r.one();
  expected(1, 3) = r.from_int(r.p());
  expected(3, 1) = -r.from_int(r.p());
  if (!(g == expected)) return false;
  // Y1, Y2 in VM: columns of V span VM since sigma^-1 is bijective.
  const Matrix y = Matrix::from_columns(r, {basis.column(2), basis.column(3)});
  return span_contains(m.V(), y, r.n());
}

}  // namespace sll
