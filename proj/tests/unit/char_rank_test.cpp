#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "rosc/char_rank.hpp"

using namespace rosc;

namespace {

// floating-point pairing <chi_T, Ind_H^G 1> over the dihedral group, with
// Ind 1 written out directly: q+1 ... values (1 on rotations a=0, (q+1)/2... )
double float_rank(long q, const std::vector<int>& m) {
  const double pi = std::acos(-1.0);
  std::complex<double> s = 0;
  for (int sgn = 0; sgn < 2; ++sgn)
    for (long a = 0; a < q; ++a) {
      std::complex<double> chi = 0;
      if (!sgn)
        for (std::size_t k = 0; k < m.size(); ++k) chi += 2.0 * m[k] * std::cos(2 * pi * double(k + 1) * double(a) / double(q));
      // permutation character on the cosets G/H: fixed points of g on the q reflections' axes
      double ind = sgn ? 1.0 : (a == 0 ? double(q) : 0.0);
      s += chi * ind;
    }
  return s.real() / double(2 * q);
}

NumberField nf(std::initializer_list<long> c, const std::string& label) { return parse_number_field(c, label); }

}  // namespace

TEST(CharRank, SemidirectAgreesWithFloatOracle) {
  std::mt19937 rng(7);
  for (long q : {3L, 5L, 7L, 11L, 13L}) {
    std::vector<int> m(static_cast<std::size_t>((q - 1) / 2));
    for (int trial = 0; trial < 6; ++trial) {
      for (auto& x : m) x = static_cast<int>(rng() % 3);
      auto r = semidirect_rank(q, m);
      EXPECT_EQ(r.rank, r.rank_via_induction);
      EXPECT_NEAR(float_rank(q, m), r.rank, 1e-9);
      int dim = 0;
      for (int x : m) dim += 2 * x;
      EXPECT_EQ(r.dim, dim);
    }
  }
}

TEST(CharRank, SemidirectGaloisComplete) {
  auto r = semidirect_rank(7, {2, 2, 2});
  EXPECT_TRUE(r.galois_complete);
  EXPECT_EQ(r.dim, 12);
  EXPECT_EQ(r.rank, 6);
  EXPECT_THROW(semidirect_rank(5, {1, -1}), Error);
  EXPECT_THROW(semidirect_rank(9, {1, 1, 1, 1}), Error);
  EXPECT_THROW(semidirect_rank(5, {1}), Error);
}

TEST(CharRank, AnisotropicBounds) {
  auto K = nf({2, 0, 0, 1}, "K");  // x^3 + 2: r1 = 1, r2 = 1
  auto b = anisotropic_rank_bounds(K, 3);
  EXPECT_EQ(b.lo, 3);
  EXPECT_EQ(b.hi, 6);
}

TEST(CharRank, AbelianNormOneRanks) {
  auto Q = rationals();
  struct Case {
    std::vector<long> poly;
    std::vector<long> S;
    int expect;
  };
  std::vector<Case> cases = {
      {{1, 0, 1}, {}, 0},       {{-2, 0, 1}, {}, 1},        {{1, 1, 1, 1, 1}, {}, 1},
      {{1, 0, 1}, {5}, 1},      {{1, 0, 1}, {5, 13}, 2},    {{1, 0, 1}, {3}, 0},
      {{1, 1, 1, 1, 1}, {11}, 4}, {{1, 1, 1}, {7}, 1},
  };
  for (auto& c : cases) {
    auto L = parse_number_field(std::vector<Int>(c.poly.begin(), c.poly.end()), "L");
    KPoly u = lift_to(Q, to_qpoly(L.defining_poly()));
    std::vector<int> inv = {static_cast<int>(L.degree())};
    SSpec S{c.S};
    auto r = subtorus_rank_abelian(Q, u, L, S, CharacterDatum::norm_one(inv));
    EXPECT_EQ(r.rank, c.expect) << poly_string(L.defining_poly());
    EXPECT_EQ(r.rank, s_unit_rank(L, S) - s_unit_rank(Q, S));
  }
}

TEST(CharRank, AbelianErrors) {
  auto Q = rationals();
  auto L = nf({1, 0, 1}, "L");
  KPoly u = lift_to(Q, to_qpoly(L.defining_poly()));
  EXPECT_THROW(subtorus_rank_abelian(Q, u, L, SSpec(), CharacterDatum{}), Error);
  CharacterDatum neg{{2}, {{1, -1}}};
  EXPECT_THROW(subtorus_rank_abelian(Q, u, L, SSpec(), neg), Error);
  // Klein four group: non-regular piece is unsupported
  auto V = nf({1, 0, -1, 0, 1}, "V");  // x^4 - x^2 + 1 = Q(i, sqrt 3)
  KPoly uv = lift_to(Q, to_qpoly(V.defining_poly()));
  CharacterDatum odd{{2, 2}, {{1, 1}}};
  EXPECT_THROW(subtorus_rank_abelian(Q, uv, V, SSpec(), odd), Error);
  auto r = subtorus_rank_abelian(Q, uv, V, SSpec(), CharacterDatum::norm_one({2, 2}));
  EXPECT_EQ(r.rank, s_unit_rank(V, SSpec()));
}

TEST(CharRank, InfinitePairingTotallyComplex) {
  auto K = nf({1, 0, 1}, "K");
  auto Q = rationals();
  CharacterDatum reg{{4}, {{0, 1}, {1, 1}, {2, 1}, {3, 1}}};
  // totally complex: psi = r2 * Reg
  EXPECT_EQ(infinite_pairing(K, nf({1, 0, 0, 0, 1}, "L"), 2, CharacterDatum{{2}, {{0, 1}, {1, 1}}}), K.r2() * 2);
  EXPECT_EQ(infinite_pairing(Q, nf({1, 1, 1, 1, 1}, "L"), 4, reg), 2);
}

TEST(CharRank, PrimeCountMatchesFactorCount) {
  auto Q = rationals();
  struct T {
    long q, alpha, p;
  };
  std::vector<T> triples = {{3, 2, 5},  {3, 2, 7},  {3, 2, 13}, {3, 2, 31}, {3, 3, 7},  {3, 5, 11}, {5, 2, 3},
                            {5, 2, 11}, {5, 2, 31}, {5, 3, 7},  {5, 3, 41}, {7, 2, 29}, {7, 3, 43}, {7, 2, 13},
                            {3, 10, 7}, {5, 7, 11}, {3, 6, 19}, {11, 2, 23}, {13, 2, 53}, {5, 6, 61}};
  for (auto& t : triples) {
    auto rep = sunit_prime_count(Q, SSpec({t.p}), t.q, Q.element(Rat(t.alpha)));
    ZPoly f = ZPoly::monomial(Int(1), static_cast<int>(t.q)) - ZPoly::constant(Int(t.alpha));
    auto fac = factor_mod_p(f, t.p);
    EXPECT_EQ(rep.total_S_prime, static_cast<int>(fac.factors.size())) << t.q << " " << t.alpha << " " << t.p;
  }
}

TEST(CharRank, PrimeCountSpecialCases) {
  auto Q = rationals();
  auto r = sunit_prime_count(Q, SSpec({2, 5}), 5, Q.element(Rat(2)));
  EXPECT_EQ(r.total_S_prime, 2);  // ramified at 2, over q at 5
  EXPECT_TRUE(r.entries[1].over_q);
  auto K = nf({1, 0, 1}, "K");
  NfElem a = K.element(qpoly({2, 1}));  // 2 + i vanishes at one prime above 5
  try {
    sunit_prime_count(K, SSpec({5}), 3, a);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnsupportedValuation);
  }
  EXPECT_EQ(sunit_prime_count(K, SSpec({13}), 3, a).entries.size(), 2u);
}

TEST(CharRank, MainBound) {
  auto Q = rationals();
  VerifierInstance a{Q, {}, SSpec(), 5, Q.element(Rat(1))};
  auto r = verify_main_rank_bound(a, Subfield{Q, qpoly({0, 1})});
  EXPECT_EQ(r.rank, 1);
  EXPECT_EQ(r.rhs, Rat(9, 4));
  EXPECT_TRUE(r.pass);
  auto K = nf({1, 0, 1}, "Q(i)");
  VerifierInstance b{K, {}, SSpec(), 7, K.element(Rat(1))};
  auto s = verify_main_rank_bound(b, Subfield{K, qpoly({0, 1})});
  EXPECT_EQ(s.rank, 5);
  EXPECT_EQ(s.rhs, Rat(35, 4));
  EXPECT_TRUE(s.pass);
  EXPECT_NE(std::find(s.hypothesis_flags.begin(), s.hypothesis_flags.end(), "CmSubfieldPresent"), s.hypothesis_flags.end());
}

TEST(CharRank, NoSubgroup) {
  auto Q = rationals();
  auto a = verify_no_subgroup_obstruction({Q, {}, SSpec(), 5, Q.element(Rat(2))});
  EXPECT_TRUE(a.pass);
  EXPECT_EQ(a.classes[0].margin, 2);
  auto b = verify_no_subgroup_obstruction({Q, {}, SSpec({5}), 5, Q.element(Rat(2))});
  EXPECT_TRUE(b.pass);
  EXPECT_EQ(b.correction, 0);
  auto c = verify_no_subgroup_obstruction({Q, {}, SSpec(), 3, Q.element(Rat(2))});
  EXPECT_FALSE(c.pass);
  EXPECT_EQ(c.classes[0].margin, 1);
  EXPECT_EQ(*c.failing_m, 1);
  EXPECT_THROW(verify_no_subgroup_obstruction({Q, {}, SSpec(), 3, Q.element(Rat(8))}), Error);
  auto w = verify_no_subgroup_obstruction({Q, {}, SSpec(), 5, Q.element(Rat(3))});
  EXPECT_EQ(w.warnings.size(), 1u);
}

TEST(CharRank, ClassicalChabauty) {
  auto Q = rationals();
  auto c = make_curve(Q, SSpec(), lift_to(Q, qpoly({1, 0, 1})), false);
  auto r = classical_chabauty_verdict(c);
  EXPECT_TRUE(r.finite);
  EXPECT_EQ(r.witness->rank, 0);
  EXPECT_EQ(r.witness->dim, 1);
  auto K = nf({-2, 0, 0, 1}, "Q(cbrt2)");
  auto c2 = make_curve(K, SSpec(), lift_to(K, qpoly({0, -1, 1})), true);
  auto r2 = classical_chabauty_verdict(c2);
  EXPECT_FALSE(r2.finite);
  EXPECT_EQ(r2.verdict, "ChabautySetIsEverything-underLeopoldt");
}
