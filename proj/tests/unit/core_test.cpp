#include <gtest/gtest.h>

#include <random>

#include "rosc/relative.hpp"

using namespace rosc;

namespace {

std::vector<std::pair<int, int>> dm(const ZPoly& f, long p) { return factor_mod_p(f, p).degree_multiplicity; }

// real roots by Descartes-rule bisection on (lo, hi], squarefree input
int descartes_variations(const QPoly& f, const Rat& a, const Rat& b) {
  // roots in (a, b) map to positive roots of (1+x)^n f((a + b x)/(1 + x))
  int n = f.degree();
  QPoly acc;
  QPoly num{a, b}, den{Rat(1), Rat(1)};
  for (int i = 0; i <= n; ++i) {
    QPoly t = QPoly::constant(f[i]);
    for (int k = 0; k < i; ++k) t = t * num;
    for (int k = i; k < n; ++k) t = t * den;
    acc = acc + t;
  }
  int v = 0, last = 0;
  for (const auto& c : acc.coefficients()) {
    int s = sgn(c);
    if (!s) continue;
    if (last && s != last) ++v;
    last = s;
  }
  return v;
}

int bisection_count(const QPoly& f, Rat a, Rat b, int depth = 0) {
  int v = descartes_variations(f, a, b);
  if (v == 0) return 0;
  if (v == 1) return 1;
  if (depth > 200) return -1000;
  Rat m = (a + b) / 2;
  int atm = sgn(f(m)) == 0 ? 1 : 0;
  return bisection_count(f, a, m, depth + 1) + atm + bisection_count(f, m, b, depth + 1);
}

}  // namespace

TEST(Polynomial, ArithmeticAndDivision) {
  QPoly f = qpoly({-2, 0, 1}), g = qpoly({1, 1});
  auto [q, r] = divmod(f, g);
  EXPECT_EQ(q, qpoly({-1, 1}));
  EXPECT_EQ(r, qpoly({-1}));
  EXPECT_EQ(q * g + r, f);
  EXPECT_EQ(poly_gcd(qpoly({-1, 0, 1}), qpoly({1, 2, 1})), qpoly({1, 1}));
}

TEST(Polynomial, ResultantAndDiscriminant) {
  EXPECT_EQ(discriminant(qpoly({1, 0, 1})), Rat(-4));
  EXPECT_EQ(discriminant(qpoly({-2, 0, 0, 1})), Rat(-108));
  EXPECT_EQ(discriminant(qpoly({1, 1, 1, 1, 1})), Rat(125));
  EXPECT_EQ(resultant(qpoly({-2, 0, 1}), qpoly({1, 0, 1})), Rat(9));
}

TEST(FactorModP, KnownCases) {
  EXPECT_EQ(dm(zpoly({-2, 0, 0, 1}), 5), (std::vector<std::pair<int, int>>{{1, 1}, {2, 1}}));
  EXPECT_EQ(dm(zpoly({1, 0, 1}), 2), (std::vector<std::pair<int, int>>{{1, 2}}));
  EXPECT_EQ(dm(zpoly({-3, 0, 0, 0, 0, 0, 0, 1}), 2), (std::vector<std::pair<int, int>>{{1, 1}, {3, 1}, {3, 1}}));
  EXPECT_THROW(factor_mod_p(zpoly({3, 0, 3}), 3), Error);
}

TEST(FactorModP, ProductReproducesInput) {
  std::mt19937_64 rng(7);
  for (long p : {2L, 3L, 5L, 7L, 13L}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Int> c;
      int n = 1 + static_cast<int>(rng() % 9);
      for (int i = 0; i < n; ++i) c.emplace_back(static_cast<long>(rng() % 11) - 5);
      c.emplace_back(1);
      ZPoly f(c);
      auto fac = factor_mod_p(f, p);
      FpPoly prod = FpPoly::constant(Fp(1, p));
      for (auto& fm : fac.factors)
        for (int k = 0; k < fm.multiplicity; ++k) prod = prod * fm.factor;
      EXPECT_EQ(prod, reduce_mod_p(f, p).monic());
    }
  }
}

TEST(FactorQ, Zassenhaus) {
  auto fs = factor_q(qpoly({-1, 0, 0, 0, 1}));  // (x-1)(x+1)(x^2+1)
  ASSERT_EQ(fs.size(), 3u);
  auto sw = factor_q(qpoly({1, 0, -10, 0, 1}));  // min poly of sqrt2+sqrt3
  EXPECT_EQ(sw.size(), 1u);
  auto g = factor_q(qpoly({4, 0, 0, 0, 1}));  // x^4+4 = (x^2+2x+2)(x^2-2x+2)
  EXPECT_EQ(g.size(), 2u);
  auto h = factor_q(qpoly({-6, 11, -6, 2}));  // 2x^3 - 6x^2 + 11x - 6 has root 1
  ASSERT_FALSE(h.empty());
  QPoly prod = qpoly({2});
  for (auto& qf : h) prod = prod * qf.factor;
  EXPECT_EQ(prod, qpoly({-6, 11, -6, 2}));
  auto sq = factor_q(qpoly({1, 2, 1}) * qpoly({-2, 0, 1}));
  ASSERT_EQ(sq.size(), 2u);
  EXPECT_EQ(sq[0].multiplicity, 2);
}

TEST(NumberFieldParse, KnownCases) {
  auto gi = parse_number_field({1, 0, 1});
  EXPECT_EQ(gi.degree(), 2);
  EXPECT_EQ(gi.signature(), (Signature{0, 1}));
  auto c2 = parse_number_field({-2, 0, 0, 1});
  EXPECT_EQ(c2.signature(), (Signature{1, 1}));
  try {
    parse_number_field({-1, 0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Reducible);
    EXPECT_EQ(e.witness(), "x - 1");
  }
  EXPECT_THROW(parse_number_field({1, 0, 2}), Error);
  try {
    parse_number_field({0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ZeroPolynomial);
  }
  try {
    parse_number_field({4, 0, 0, 0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Reducible);
  }
}

TEST(NumberFieldParse, Signatures) {
  EXPECT_EQ(parse_number_field({-1, 1}).signature(), (Signature{1, 0}));
  EXPECT_EQ(parse_number_field({-2, 0, 1}).signature(), (Signature{2, 0}));
  EXPECT_EQ(parse_number_field({1, 1, 1, 1, 1}).signature(), (Signature{0, 2}));
}

TEST(Sturm, MatchesDescartesBisection) {
  std::mt19937_64 rng(20);
  int checked = 0;
  while (checked < 20) {
    int n = 1 + static_cast<int>(rng() % 6);
    std::vector<Rat> c;
    for (int i = 0; i <= n; ++i) c.emplace_back(static_cast<long>(rng() % 21) - 10);
    QPoly f(c);
    if (f.degree() < 1) continue;
    f = f / poly_gcd(f, f.derivative());  // Descartes bisection needs squarefree input
    Rat bound = 1;
    for (const auto& a : f.coefficients()) bound += abs(a / f.leading());
    EXPECT_EQ(sturm_count(f), bisection_count(f, -bound, bound)) << poly_string(f);
    ++checked;
  }
}

TEST(Splitting, KnownCases) {
  auto gi = parse_number_field({1, 0, 1});
  auto sp = splitting_profile(gi, 5);
  EXPECT_EQ(sp.residue_degrees, (std::vector<int>{1, 1}));
  auto c2 = parse_number_field({-2, 0, 0, 1});
  EXPECT_EQ(splitting_profile(c2, 5).residue_degrees, (std::vector<int>{1, 2}));
  try {
    splitting_profile(gi, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IndexObstruction);
  }
  for (long p : {5L, 7L, 11L, 13L, 17L}) {
    auto s = splitting_profile(c2, p);
    int sum = 0;
    for (int d : s.residue_degrees) sum += d;
    EXPECT_EQ(sum, 3);
  }
}

TEST(SUnitRank, KnownCases) {
  EXPECT_EQ(s_unit_rank(rationals(), SSpec({2, 3})), 2);
  EXPECT_EQ(s_unit_rank(parse_number_field({-2, 0, 1}), SSpec()), 1);
  EXPECT_EQ(s_unit_rank(parse_number_field({1, 1, 1, 1, 1}), SSpec()), 1);
  for (auto S : {SSpec(), SSpec({2}), SSpec({2, 3, 5}), SSpec({7, 11})})
    EXPECT_EQ(s_unit_rank(rationals(), S), static_cast<int>(S.size()));
}

TEST(AbsoluteField, KnownCases) {
  auto Q = rationals();
  auto r2 = absolute_field(Q, lift_to(Q, qpoly({-2, 0, 1})));
  EXPECT_EQ(r2.degree(), 2);
  auto gi = parse_number_field({1, 0, 1});
  auto a = absolute_field(gi, lift_to(gi, qpoly({-2, 0, 1})));
  EXPECT_EQ(a.degree(), 4);
  EXPECT_EQ(a.signature(), (Signature{0, 2}));
  auto s2 = parse_number_field({-2, 0, 1});
  auto b = absolute_field(s2, lift_to(s2, qpoly({1, 0, 1})));
  EXPECT_EQ(b.degree(), 4);
  EXPECT_EQ(b.signature(), a.signature());
  for (long p : {5L, 7L}) {
    EXPECT_EQ(splitting_profile(a, p).residue_degrees, splitting_profile(b, p).residue_degrees);
  }
  try {
    absolute_field(gi, lift_to(gi, qpoly({1, 0, 1})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RelativeReducible);
  }
}

TEST(FactorOver, CyclotomicOverGaussian) {
  auto gi = parse_number_field({1, 0, 1});
  auto fs = factor_over(gi, lift_to(gi, qpoly({1, 1, 1, 1, 1})));
  EXPECT_EQ(fs.size(), 1u);
  auto fs2 = factor_over(gi, lift_to(gi, qpoly({1, 0, 1}) * qpoly({-3, 1})));
  EXPECT_EQ(fs2.size(), 3u);
  auto z3 = parse_number_field({1, 1, 1});
  auto fs3 = factor_over(z3, lift_to(z3, qpoly({-2, 0, 0, 1})));  // x^3-2 over Q(zeta3) stays irreducible
  EXPECT_EQ(fs3.size(), 1u);
  auto c2 = parse_number_field({-2, 0, 0, 1});
  auto fs4 = factor_over(c2, lift_to(c2, qpoly({-2, 0, 0, 1})));  // (x - t)(x^2 + t x + t^2)
  EXPECT_EQ(fs4.size(), 2u);
}

TEST(Tower, ValidationAndDescent) {
  auto Q = rationals();
  auto s2 = parse_number_field({-2, 0, 1}, "K'");
  auto r4 = parse_number_field({-2, 0, 0, 0, 1}, "K");
  SubfieldTower t({Q, s2, r4}, {qpoly({0}), qpoly({0, 0, 1})});
  EXPECT_EQ(t.size(), 3u);
  NfElem sq = t.generator_image(1, 2);
  EXPECT_EQ(sq * sq, r4.element(Rat(2)));
  EXPECT_TRUE(t.descend(2, 1, sq).has_value());
  EXPECT_FALSE(t.descend(2, 1, r4.gen()).has_value());
  EXPECT_THROW(SubfieldTower({Q, s2, r4}, {qpoly({0}), qpoly({0, 1})}), Error);
}

TEST(CmDetection, KnownCases) {
  auto Q = rationals();
  auto c2 = parse_number_field({-2, 0, 0, 1});
  auto v = detect_cm_subfield(c2, {{Q, qpoly({0})}});
  EXPECT_FALSE(v.found);
  EXPECT_TRUE(v.parity_shortcut);
  auto gi = parse_number_field({1, 0, 1});
  auto w = detect_cm_subfield(gi, {{Q, qpoly({0})}, {gi, qpoly({0, 1})}});
  ASSERT_TRUE(w.found);
  EXPECT_EQ(w.cm_field->degree(), 2);
  auto z5 = parse_number_field({1, 1, 1, 1, 1});
  auto s5 = parse_number_field({-1, -1, 1});  // (1+sqrt5)/2 = -(z^2 + z^3)
  auto u = detect_cm_subfield(z5, {{Q, qpoly({0})}, {s5, qpoly({0, 0, -1, -1})}, {z5, qpoly({0, 1})}});
  ASSERT_TRUE(u.found);
  EXPECT_EQ(u.cm_field->degree(), 4);
  EXPECT_EQ(u.real_field->degree(), 2);
  EXPECT_THROW(detect_cm_subfield(z5, {{s5, qpoly({0, 1})}}), Error);
}
