#include <gtest/gtest.h>

#include <chrono>

#include "rosc/bcp.hpp"

using namespace rosc;

namespace {

BcpContext table1_context() {
  auto Q = rationals();
  auto Kp = parse_number_field({-2, 0, 1}, "K'");
  auto K = parse_number_field({-2, 0, 0, 0, 1}, "K");
  return {SubfieldTower({Q, Kp, K}, {qpoly({0}), qpoly({0, 0, 1})}), SSpec()};
}

PuncturedCurve four_punctured(const BcpContext& ctx) {
  const auto& K = ctx.tower.top();
  return make_curve(K, ctx.S, lift_to(K, qpoly({0, 2, -3, 1})), true, "P1 minus {0,1,2,inf}");
}

// member multiset, e.g. "K K K'"
std::string members(const IsogenyClass& c) {
  std::string s;
  for (auto& f : c.factors) {
    EXPECT_EQ(f.block, "Gm");
    s += (s.empty() ? "" : " ") + f.member_label;
  }
  return s;
}

}  // namespace

TEST(Bcp, Table1) {
  auto ctx = table1_context();
  auto t0 = std::chrono::steady_clock::now();
  auto classes = enumerate_bcp_tori(ctx, four_punctured(ctx), 4);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 1.0);
  std::vector<std::pair<int, std::string>> got;
  for (auto& c : classes) got.push_back({c.min_n, members(c.cls)});
  std::vector<std::pair<int, std::string>> want{
      {0, "K K K"},  {1, "K' K' K'"}, {1, "Q Q Q"},  {2, "K K K'"}, {2, "K K Q"},
      {2, "K K' K'"}, {2, "K Q Q"},  {3, "K' K' Q"}, {3, "K' Q Q"}, {4, "K K' Q"},
  };
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
}

TEST(Bcp, DepthZeroAndTwoPunctures) {
  auto ctx = table1_context();
  auto c0 = enumerate_bcp_tori(ctx, four_punctured(ctx), 0);
  ASSERT_EQ(c0.size(), 1u);
  EXPECT_EQ(members(c0[0].cls), "K K K");
  auto Q = rationals();
  auto K = parse_number_field({-2, 0, 1}, "K");
  BcpContext two{SubfieldTower({Q, K}, {qpoly({0})}), SSpec()};
  auto c = make_curve(K, SSpec(), lift_to(K, qpoly({0, 1})), true);
  auto cl = enumerate_bcp_tori(two, c, 2);
  ASSERT_EQ(cl.size(), 2u);
  EXPECT_EQ(members(cl[0].cls), "K");
  EXPECT_EQ(members(cl[1].cls), "Q");
}

TEST(Bcp, MovesAndReplay) {
  auto ctx = table1_context();
  auto x = four_punctured(ctx);
  auto ch = start_chain(ctx, x);
  // orbits sorted by degree then insertion: x, x-1, x-2, inf
  auto a = p_successor_forget(ctx, ch, {0, 3});
  a = bc_successor(ctx, a, 1);
  EXPECT_EQ(members(a.result), "K K K'");
  EXPECT_EQ(a.n, 2);
  auto b = p_successor_forget(ctx, ch, {0, 1, 3});
  b = bc_successor(ctx, b, 1);
  EXPECT_EQ(members(b.result), "K K' K'");
  auto same = bc_successor(ctx, ch, 2);
  EXPECT_EQ(same.result, ch.result);
  auto r = replay(ctx, x, a.steps);
  EXPECT_EQ(r.result, a.result);
  try {
    p_successor_forget(ctx, ch, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidCoverMove);
  }
  EXPECT_THROW(p_successor_forget(ctx, ch, {3}), Error);
}

TEST(Bcp, NotDescendable) {
  auto Q = rationals();
  auto gi = parse_number_field({1, 0, 1}, "Q(i)");
  BcpContext ctx{SubfieldTower({Q, gi}, {qpoly({0})}), SSpec()};
  // x (x - 1) (x - i) and infinity
  KPoly d = lift_to(gi, qpoly({0, -1, 1})) * KPoly{NfElem() - gi.gen(), gi.element(Rat(1))};
  auto c = make_curve(gi, SSpec(), d, true);
  auto ch = start_chain(ctx, c);
  try {
    bc_successor(ctx, ch, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotDescendable);
  }
}

TEST(Bcp, LedgerAndVerdicts) {
  auto Q = rationals();
  BcpContext ctx{SubfieldTower({Q}, {}), SSpec()};
  auto x15 = build_x_alpha_q(Q, SSpec(), Q.element(Rat(1)), 5);
  auto ch = start_chain(ctx, x15);
  auto L = delta_ledger(ctx, ch);
  ASSERT_EQ(L.deltas.size(), 1u);
  EXPECT_EQ(L.deltas[0].value, 2);
  EXPECT_EQ(L.lower_bound, 2);
  auto v = obstruction_verdict(ctx, ch, VerdictMode::Unconditional);
  EXPECT_EQ(v.verdict, Verdict::NoObstruction);
  EXPECT_EQ(v.intersection_dim, 1);
  // X_{2,3} over Q with S = {}: dim 2, rank 1, intersection bounded by 1
  auto x23 = make_curve(Q, SSpec(), lift_to(Q, qpoly({-2, 0, 0, 1})), false);
  auto p = jacobian_profile(x23);
  auto w = obstruction_verdict_subtorus(p.dim, p.rank, Q, VerdictMode::Unconditional);
  EXPECT_EQ(w.verdict, Verdict::NoObstruction);
  EXPECT_GE(w.dim_T - *w.rank_T_R0, w.intersection_dim);
  // BC steps contribute zero
  auto ctx1 = table1_context();
  auto c = bc_successor(ctx1, start_chain(ctx1, four_punctured(ctx1)), 0);
  auto L1 = delta_ledger(ctx1, c);
  EXPECT_EQ(L1.deltas.back().value, 0);
  Int sum = 0;
  for (auto& e : L1.deltas)
    if (e.value > 0) sum += e.value;
  EXPECT_EQ(sum, L1.lower_bound);
}

TEST(Bcp, CoverRankGap) {
  auto g = cover_rank_gap(4, 1, 0, 1, 2);
  EXPECT_EQ(g.Delta, 2);
  EXPECT_EQ(g.bound, Rat(1));
  EXPECT_EQ(cover_rank_gap(4, 1, 0, 1, 1).bound, Rat(0));
  try {
    cover_rank_gap(4, 1, 0, 1, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DeltaDoesNotDivide);
  }
}

TEST(Bcp, QuotientStep) {
  auto Q = rationals();
  BcpContext ctx{SubfieldTower({Q}, {}), SSpec()};
  // primitive 5th roots of unity: one orbit of four punctures, rank 1
  auto c = make_curve(Q, SSpec(), lift_to(Q, qpoly({1, 1, 1, 1, 1})), false);
  auto ch = start_chain(ctx, c);
  try {
    p_successor_quotient(ctx, ch, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RiemannHurwitzViolation);
  }
  EXPECT_THROW(p_successor_quotient(ctx, ch, 3), Error);
  auto q = p_successor_quotient(ctx, ch, 2);
  EXPECT_FALSE(q.result.rank_r0.has_value());
  EXPECT_EQ(q.result.dim, 3);
  auto L = delta_ledger(ctx, q);
  ASSERT_EQ(L.deltas.size(), 2u);
  EXPECT_TRUE(L.deltas[0].unknown);
  EXPECT_TRUE(L.deltas[1].is_bound);
  EXPECT_EQ(L.deltas[1].value, 1);  // (4, 1, 0, 1, 2) -> bound 1
}

TEST(Bcp, CmWitness) {
  auto Q = rationals();
  auto gi = parse_number_field({1, 0, 1}, "Q(i)");
  auto t0 = std::chrono::steady_clock::now();
  auto w = cm_bcp_witness(gi, {{Q, qpoly({0})}, {gi, qpoly({0, 1})}}, 7, SSpec());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 5.0);
  EXPECT_EQ(w.field.degree(), 6);
  EXPECT_EQ(sturm_count(to_qpoly(w.field.defining_poly())), 6);
  EXPECT_EQ(w.dim, 5);
  EXPECT_EQ(w.rank, 5);
  EXPECT_EQ(w.verdict.verdict, Verdict::ObstructionUnderLeopoldt);
  EXPECT_EQ(w.beta, gi.gen());
  auto c2 = parse_number_field({-2, 0, 0, 1});
  try {
    cm_bcp_witness(c2, {{Q, qpoly({0})}}, 7, SSpec());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotCmField);
  }
  EXPECT_THROW(cm_bcp_witness(gi, {{Q, qpoly({0})}}, 2, SSpec()), Error);
  auto z3 = parse_number_field({1, 1, 1}, "Q(zeta3)");
  try {
    cm_bcp_witness(z3, {{Q, qpoly({0})}}, 3, SSpec());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CyclotomicNotDisjoint);
  }
}
