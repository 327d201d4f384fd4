#include <gtest/gtest.h>

#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "sll/dieudonne.hpp"
#include "sll/random.hpp"

using namespace sll;

namespace {

using Vec = std::vector<WittElement>;
using Key = std::vector<std::vector<int_t>>;

std::vector<WittRing> fixture_rings() {
  std::vector<WittRing> out;
  for (int p : {2, 3, 5})
    for (int m : {1, 2})
      for (int n : {2, 3}) out.push_back(WittRing::make(p, m, n));
  return out;
}

std::vector<StandardCase> cases_for(const WittRing& r) {
  std::vector<StandardCase> c{StandardCase::iia, StandardCase::iib, StandardCase::ordinary,
                              StandardCase::lagrangian_generic};
  if (r.p() != 2) c.push_back(StandardCase::supersingular);
  return c;
}

Vec basis_vector(const WittRing& r, std::size_t i) {
  Vec e(4, r.zero());
  e[i] = r.one();
  return e;
}

Key key_mod_p(const Vec& v) {
  Key k;
  for (const auto& c : v) k.push_back(reduce(c).coeffs());
  return k;
}

// All vectors of F_q^4, lifted to W_n.
std::vector<Vec> all_residue_vectors(const WittRing& r) {
  const WittRing k = r.residue_field();
  std::vector<Vec> out;
  const int_t q = k.size();
  for (int_t idx = 0; idx < q * q * q * q; ++idx) {
    Vec v;
    int_t rest = idx;
    for (int i = 0; i < 4; ++i) {
      v.push_back(lift(r, k.element_at(rest % q)));
      rest /= q;
    }
    out.push_back(v);
  }
  return out;
}

// log_q of the size of a subspace of F_q^4 given as a set.
int dimension_of(std::size_t size, int_t q) {
  int d = 0;
  std::size_t s = 1;
  while (s < size) {
    s *= static_cast<std::size_t>(q);
    ++d;
  }
  EXPECT_EQ(s, size);
  return d;
}

// 4 - dim (F M + V M) mod p, by enumerating images.
int a_number_by_enumeration(const DieudonneModule& m) {
  const auto all = all_residue_vectors(m.ring());
  std::set<Key> fm, vm;
  std::vector<Vec> fv, vv;
  for (const auto& x : all) {
    if (fm.insert(key_mod_p(m.apply_F(x))).second) fv.push_back(m.apply_F(x));
    if (vm.insert(key_mod_p(m.apply_V(x))).second) vv.push_back(m.apply_V(x));
  }
  std::set<Key> sum;
  for (const auto& a : fv)
    for (const auto& b : vv) {
      Vec s(4, m.ring().zero());
      for (std::size_t i = 0; i < 4; ++i) s[i] = a[i] + b[i];
      sum.insert(key_mod_p(s));
    }
  return 4 - dimension_of(sum.size(), m.ring().q());
}

// dim of F^4(M) mod p, by iterating F on the full residue space.
int p_rank_by_enumeration(const DieudonneModule& m) {
  std::vector<Vec> cur = all_residue_vectors(m.ring());
  for (int k = 0; k < 4; ++k) {
    std::set<Key> seen;
    std::vector<Vec> next;
    for (const auto& x : cur) {
      Vec y = m.apply_F(x);
      for (auto& c : y) c = lift(m.ring(), reduce(c));
      if (seen.insert(key_mod_p(y)).second) next.push_back(y);
    }
    cur = next;
  }
  return dimension_of(cur.size(), m.ring().q());
}

bool same_span(const Matrix& a, const Matrix& b, int precision) {
  return span_contains(a, b, precision) && span_contains(b, a, precision);
}

}  // namespace

TEST(StandardCase, Names) {
  for (auto c : {StandardCase::iia, StandardCase::iib, StandardCase::ordinary, StandardCase::lagrangian_generic,
                 StandardCase::supersingular})
    EXPECT_EQ(parse_standard_case(to_string(c)), c);
  EXPECT_EQ(parse_standard_case("mixed"), StandardCase::lagrangian_generic);
  EXPECT_FALSE(parse_standard_case("iic").has_value());
}

TEST(MakeStandard, AllFixturesValidate) {
  for (const auto& r : fixture_rings())
    for (auto c : cases_for(r)) {
      const auto rep = validate(make_standard(r, c));
      EXPECT_TRUE(rep.ok()) << to_string(c) << " p=" << r.p() << " m=" << r.m() << " n=" << r.n();
      EXPECT_EQ(rep.pairing_divisors, (std::vector<int>{0, 0, 1, 1}));
    }
}

TEST(MakeStandard, Errors) {
  EXPECT_THROW(make_standard(WittRing::make(3, 1, 1), StandardCase::iib), precondition_error);
  EXPECT_THROW(make_standard(WittRing::make(2, 1, 3), StandardCase::supersingular), unsupported_characteristic);
}

TEST(MakeStandard, CaseIibRelations) {
  // Basis (X1, X2, Y1, Y2): F X1 = Y1, F Y1 = p X1, V X1 = Y1, V Y1 = p X1.
  const WittRing r = WittRing::make(3, 2, 3);
  const auto m = make_standard(r, StandardCase::iib);
  const WittElement p = r.from_int(3);
  Vec y1 = basis_vector(r, 2), px1 = basis_vector(r, 0);
  px1[0] = p;
  EXPECT_EQ(m.apply_F(basis_vector(r, 0)), y1);
  EXPECT_EQ(m.apply_F(basis_vector(r, 2)), px1);
  EXPECT_EQ(m.apply_V(basis_vector(r, 0)), y1);
  EXPECT_EQ(m.apply_V(basis_vector(r, 2)), px1);
}

TEST(MakeStandard, CaseIiaRelations) {
  // F X1 = Y1, F Y1 = -p X1.
  const WittRing r = WittRing::make(5, 1, 2);
  const auto m = make_standard(r, StandardCase::iia);
  Vec mpx1 = basis_vector(r, 0);
  mpx1[0] = -r.from_int(5);
  EXPECT_EQ(m.apply_F(basis_vector(r, 0)), basis_vector(r, 2));
  EXPECT_EQ(m.apply_F(basis_vector(r, 2)), mpx1);
}

TEST(MakeStandard, PairingShapes) {
  const WittRing r = WittRing::make(3, 1, 2);
  const WittElement p = r.from_int(3);
  const auto a = make_standard(r, StandardCase::iia), b = make_standard(r, StandardCase::iib);
  // iia: <X1,Y1> = 1, <X2,Y2> = p; iib: <X1,X2> = 1, <Y1,Y2> = p.
  EXPECT_EQ(a.pairing(basis_vector(r, 0), basis_vector(r, 2)), r.one());
  EXPECT_EQ(a.pairing(basis_vector(r, 1), basis_vector(r, 3)), p);
  EXPECT_EQ(b.pairing(basis_vector(r, 0), basis_vector(r, 1)), r.one());
  EXPECT_EQ(b.pairing(basis_vector(r, 2), basis_vector(r, 3)), p);
  EXPECT_EQ(determinant(a.J()), p * p);
  EXPECT_EQ(determinant(b.J()), p * p);
}

TEST(Validate, FrobeniusCompatibilityOnBasisPairs) {
  for (const auto& r : fixture_rings())
    for (auto c : cases_for(r)) {
      const auto m = make_standard(r, c);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          ASSERT_EQ(m.pairing(m.apply_F(basis_vector(r, i)), basis_vector(r, j)),
                    frobenius(m.pairing(basis_vector(r, i), m.apply_V(basis_vector(r, j)))))
              << to_string(c);
    }
}

TEST(Validate, DetectsBrokenModules) {
  const WittRing r = WittRing::make(3, 1, 2);
  const auto m = make_standard(r, StandardCase::iib);
  const auto bad_fv = validate(DieudonneModule(m.F(), m.F() * m.F(), m.J()));
  EXPECT_FALSE(bad_fv.fv_is_p);
  EXPECT_FALSE(bad_fv.ok());
  const auto bad_j = validate(DieudonneModule(m.F(), m.V(), Matrix::identity(r, 4)));
  EXPECT_FALSE(bad_j.alternating);
  Matrix principal(r, 4, 4);
  principal(0, 1) = r.one();
  principal(1, 0) = -r.one();
  principal(2, 3) = r.one();
  principal(3, 2) = -r.one();
  EXPECT_FALSE(validate(DieudonneModule(m.F(), m.V(), principal)).degree_p_squared);
}

TEST(Invariants, Table) {
  for (const auto& r : fixture_rings()) {
    auto inv = [&](StandardCase c) {
      const auto m = make_standard(r, c);
      return std::make_pair(a_number(m), p_rank(m));
    };
    EXPECT_EQ(inv(StandardCase::iia), std::make_pair(2, 0));
    EXPECT_EQ(inv(StandardCase::iib), std::make_pair(2, 0));
    EXPECT_EQ(inv(StandardCase::ordinary), std::make_pair(0, 2));
    EXPECT_EQ(inv(StandardCase::lagrangian_generic), std::make_pair(1, 1));
    if (r.p() != 2) {
      EXPECT_EQ(inv(StandardCase::supersingular), std::make_pair(1, 0));
    }
  }
}

TEST(Invariants, AgreeWithEnumeration) {
  for (auto [p, m] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}}) {
    const WittRing r = WittRing::make(p, m, 2);
    for (auto c : cases_for(r)) {
      const auto mod = make_standard(r, c);
      EXPECT_EQ(a_number(mod), a_number_by_enumeration(mod)) << to_string(c);
      EXPECT_EQ(p_rank(mod), p_rank_by_enumeration(mod)) << to_string(c);
    }
  }
}

TEST(Invariants, StableUnderBaseChange) {
  std::mt19937_64 rng(1);
  for (auto [p, m, n] : std::vector<std::tuple<int, int, int>>{{3, 2, 3}, {2, 2, 3}, {5, 1, 2}}) {
    const WittRing r = WittRing::make(p, m, n);
    for (auto c : cases_for(r)) {
      const auto mod = make_standard(r, c);
      const int a = a_number(mod), f = p_rank(mod);
      const KernelType k = kernel_type(mod);
      for (int t = 0; t < 50; ++t) {
        const Matrix g = random_invertible(r, 4, rng);
        const auto moved = base_change(mod, g);
        ASSERT_TRUE(validate(moved).ok());
        ASSERT_EQ(a_number(moved), a);
        ASSERT_EQ(p_rank(moved), f);
        ASSERT_EQ(kernel_type(moved), k);
        ASSERT_EQ(base_change(moved, inverse(g)), mod);
      }
    }
  }
}

TEST(DualLattice, CaseIib) {
  const WittRing r = WittRing::make(3, 1, 3);
  const auto m = make_standard(r, StandardCase::iib);
  const Matrix d = dual_lattice(m);
  const Matrix expected = Matrix::from_ints(r, {{3, 0, 0, 0}, {0, 3, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  EXPECT_TRUE(same_span(d, expected, r.n()));
  EXPECT_EQ(d.transpose() * m.J(), r.from_int(3) * Matrix::identity(r, 4));
}

TEST(DualLattice, CaseIia) {
  // span(p X1, p Y1, X2, Y2) in the basis (X1, X2, Y1, Y2).
  const WittRing r = WittRing::make(5, 2, 2);
  const auto m = make_standard(r, StandardCase::iia);
  const Matrix expected = Matrix::from_ints(r, {{5, 0, 0, 0}, {0, 0, 1, 0}, {0, 5, 0, 0}, {0, 0, 0, 1}});
  EXPECT_TRUE(same_span(dual_lattice(m), expected, r.n()));
}

TEST(DualLattice, PrincipalPairingIsSelfDual) {
  const WittRing r = WittRing::make(3, 1, 3);
  const auto m = make_standard(r, StandardCase::iib);
  Matrix principal(r, 4, 4);
  principal(0, 2) = r.one();
  principal(2, 0) = -r.one();
  principal(1, 3) = r.one();
  principal(3, 1) = -r.one();
  const Matrix d = dual_lattice(DieudonneModule(m.F(), m.V(), principal));
  EXPECT_TRUE(same_span(d, r.from_int(3) * Matrix::identity(r, 4), r.n()));
}

TEST(DualLattice, ExactDualityAfterBaseChange) {
  std::mt19937_64 rng(2);
  const WittRing r = WittRing::make(2, 2, 3);
  for (auto c : cases_for(r)) {
    const auto m = base_change(make_standard(r, c), random_invertible(r, 4, rng));
    EXPECT_EQ(dual_lattice(m).transpose() * m.J(), r.from_int(2) * Matrix::identity(r, 4));
  }
}

TEST(KernelType, Dichotomy) {
  for (const auto& r : fixture_rings()) {
    EXPECT_EQ(kernel_type(make_standard(r, StandardCase::iib)), KernelType::AlphaSquare);
    EXPECT_EQ(kernel_type(make_standard(r, StandardCase::iia)), KernelType::NonAlphaSquare);
    EXPECT_EQ(kernel_type(make_standard(r, StandardCase::ordinary)), KernelType::NotSuperspecial);
    EXPECT_EQ(kernel_type(make_standard(r, StandardCase::lagrangian_generic)), KernelType::NotSuperspecial);
  }
  EXPECT_EQ(to_string(KernelType::AlphaSquare), "AlphaSquare");
}

TEST(KernelType, DirectContainmentCheck) {
  // F(pM^t) and V(pM^t) inside pM, tested column by column on the dual basis.
  for (const auto& r : fixture_rings())
    for (auto c : {StandardCase::iia, StandardCase::iib}) {
      const auto m = make_standard(r, c);
      const Matrix d = dual_lattice(m);
      bool inside = true;
      for (std::size_t j = 0; j < 4; ++j) {
        for (const auto& img : {m.apply_F(d.column(j)), m.apply_V(d.column(j))})
          for (const auto& x : img) inside = inside && valuation(x) >= 1;
      }
      EXPECT_EQ(inside, c == StandardCase::iib);
    }
}

TEST(HodgeFiltration, IsTwoDimensional) {
  for (const auto& r : fixture_rings())
    for (auto c : cases_for(r)) {
      const Matrix fil = hodge_filtration(make_standard(r, c));
      EXPECT_EQ(fil.cols(), 2u);
      EXPECT_EQ(fil.ring().n(), 1);
    }
}

TEST(LagrangianSearch, FindsWitnesses) {
  for (auto [p, m, n] : std::vector<std::tuple<int, int, int>>{{3, 1, 2}, {3, 1, 3}, {2, 2, 3}, {5, 1, 2}}) {
    const WittRing r = WittRing::make(p, m, n);
    for (auto c : {StandardCase::iia, StandardCase::lagrangian_generic, StandardCase::ordinary}) {
      const auto mod = make_standard(r, c);
      const auto res = lagrangian_witness_search(mod);
      ASSERT_TRUE(res.witness.has_value()) << to_string(c) << ": " << res.report;
      EXPECT_TRUE(is_lagrangian_witness(mod, res.witness->basis));
      EXPECT_EQ(res.precision, n);
    }
  }
}

TEST(LagrangianSearch, DefiningBasisOfTheLagrangianFixture) {
  const WittRing r = WittRing::make(3, 1, 3);
  const auto m = make_standard(r, StandardCase::lagrangian_generic);
  EXPECT_TRUE(is_lagrangian_witness(m, Matrix::identity(r, 4)));
}

TEST(LagrangianSearch, CaseIibIsExhausted) {
  for (int m : {1, 2})
    for (int n : {2, 3}) {
      const WittRing r = WittRing::make(2, m, n);
      const auto res = lagrangian_witness_search(make_standard(r, StandardCase::iib));
      EXPECT_FALSE(res.witness.has_value());
      EXPECT_EQ(res.report, "no witness at precision " + std::to_string(n));
    }
}

TEST(LagrangianSearch, BudgetIsReported) {
  const WittRing r = WittRing::make(2, 2, 3);
  const auto res = lagrangian_witness_search(make_standard(r, StandardCase::iib), 10);
  EXPECT_FALSE(res.witness.has_value());
  EXPECT_EQ(res.report, "search budget exhausted");
}

TEST(LagrangianSearch, RejectsNonWitnesses) {
  const WittRing r = WittRing::make(3, 1, 3);
  const auto m = make_standard(r, StandardCase::iib);
  EXPECT_FALSE(is_lagrangian_witness(m, Matrix::identity(r, 4)));
}
