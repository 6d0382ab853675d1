#pragma once

// BCP tori up to isogeny. A chain is replayed from its origin curve: a BC
// step descends the running curve to a lower tower member, a forget step
// drops puncture orbits and banks their Prym (the Weil restriction of G_m
// over each forgotten residue field), a quotient step banks a symbolic Prym
// and ends the chain. The class is the banked part plus the Jacobian of the
// running curve.

#include <deque>
#include <map>
#include <set>

#include "rosc/puncture.hpp"

namespace rosc {

struct BcpContext {
  SubfieldTower tower;
  SSpec S;
  ResidueFieldProvider provider = default_residue_field;
};

struct IsogenyFactor {
  std::size_t member = 0;  // tower index
  std::string member_label;
  std::string block;  // "Gm", "R1[<orbit>]", "Prym[...]", "J[...]"
  int dim = 0;
  std::optional<int> rank;

  std::string key() const { return std::to_string(member) + "|" + block; }
};

struct IsogenyClass {
  std::vector<IsogenyFactor> factors;  // canonical order: member descending, then block
  int dim = 0;
  std::optional<int> rank_r0;

  void canonicalize() {
    std::sort(factors.begin(), factors.end(), [](const IsogenyFactor& a, const IsogenyFactor& b) {
      if (a.member != b.member) return a.member > b.member;
      return a.block < b.block;
    });
    dim = 0;
    rank_r0 = 0;
    for (auto& f : factors) {
      dim += f.dim;
      if (f.rank && rank_r0) *rank_r0 += *f.rank;
      else rank_r0.reset();
    }
  }
  std::string canonical() const {
    std::string s;
    for (auto& f : factors) s += f.key() + ";";
    return s;
  }
  friend bool operator==(const IsogenyClass& a, const IsogenyClass& b) { return a.canonical() == b.canonical(); }
};

struct BcpStep {
  enum class Kind { BC, Forget, Quotient };
  Kind kind = Kind::BC;
  std::size_t target = 0;             // BC
  std::vector<std::size_t> retained;  // Forget, indices into the running curve's orbits
  int delta = 0;                      // Quotient
};

// per-step record of the running Jacobian, used by the ledger
struct StepTrace {
  BcpStep step;
  std::size_t member_before, member_after;
  int dim_before, rank_before;
  int dim_after;
  std::optional<int> rank_after;  // unknown after a quotient
  int geometric_before;
  std::string forgotten;
};

struct BcpChain {
  PuncturedCurve origin;
  std::vector<BcpStep> steps;
  IsogenyClass result;
  int n = 0;

  // running state
  PuncturedCurve running;
  std::size_t member = 0;
  std::vector<IsogenyFactor> banked;
  bool symbolic = false;  // ended by a quotient
  int symbolic_punctures = 0;
  std::vector<StepTrace> trace;
};

namespace detail {

inline std::string orbit_tag(const PunctureOrbit& o) { return o.at_infinity() ? "inf" : kpoly_string(*o.relative_poly); }

inline IsogenyFactor gm_factor(const BcpContext& ctx, std::size_t m) {
  const auto& M = ctx.tower[m];
  return {m, M.label(), "Gm", M.degree(), s_unit_rank(M, ctx.S)};
}

inline IsogenyFactor r1_factor(const BcpContext& ctx, std::size_t m, const PunctureOrbit& o) {
  const auto& M = ctx.tower[m];
  int r = s_unit_rank(o.residue_field, ctx.S) - s_unit_rank(M, ctx.S);
  return {m, M.label(), "R1" + orbit_tag(o), M.degree() * (o.degree - 1), r};
}

inline std::vector<IsogenyFactor> jacobian_factors(const BcpContext& ctx, const PuncturedCurve& c, std::size_t m) {
  std::vector<IsogenyFactor> out;
  for (std::size_t i = 1; i < c.orbits.size(); ++i) out.push_back(gm_factor(ctx, m));
  for (auto& o : c.orbits)
    if (o.degree > 1) out.push_back(r1_factor(ctx, m, o));
  return out;
}

inline void refresh(const BcpContext& ctx, BcpChain& ch) {
  IsogenyClass k;
  k.factors = ch.banked;
  if (ch.symbolic) {
    const auto& M = ctx.tower[ch.member];
    if (ch.symbolic_punctures > 1)
      k.factors.push_back({ch.member, M.label(), "J[symbolic,n=" + std::to_string(ch.symbolic_punctures) + "]",
                           M.degree() * (ch.symbolic_punctures - 1), std::nullopt});
  } else {
    auto j = jacobian_factors(ctx, ch.running, ch.member);
    k.factors.insert(k.factors.end(), j.begin(), j.end());
  }
  k.canonicalize();
  ch.result = std::move(k);
  ch.n = static_cast<int>(ch.steps.size());
}

}  // namespace detail

inline BcpChain start_chain(const BcpContext& ctx, const PuncturedCurve& curve) {
  auto m = ctx.tower.index_of(curve.base);
  if (!m) throw Error(Errc::InvalidArgument, "curve base is not a tower member", curve.base.label());
  if (!(curve.s_spec == ctx.S)) throw Error(Errc::InvalidArgument, "curve S0 differs from the enumeration S0");
  BcpChain ch;
  ch.origin = curve;
  ch.running = curve;
  ch.member = *m;
  detail::refresh(ctx, ch);
  return ch;
}

inline BcpChain bc_successor(const BcpContext& ctx, BcpChain ch, std::size_t target) {
  if (ch.symbolic) throw Error(Errc::InvalidCoverMove, "no moves after a quotient step");
  if (target > ch.member) throw Error(Errc::NotDescendable, "BC target must lie below the running member");
  auto jb = jacobian_profile(ch.running);
  StepTrace t{{BcpStep::Kind::BC, target, {}, 0}, ch.member, target, jb.dim, jb.rank, jb.dim, jb.rank, ch.running.geometric_count(), {}};
  if (target != ch.member) {
    KPoly d = ch.running.finite_divisor();
    for (auto& o : ch.running.orbits) {
      if (o.at_infinity()) continue;
      if (!ctx.tower.descend_poly(ch.member, target, *o.relative_poly))
        throw Error(Errc::NotDescendable, "puncture orbit does not descend to " + ctx.tower[target].label(), detail::orbit_tag(o));
    }
    auto down = ctx.tower.descend_poly(ch.member, target, d);
    if (!down) throw Error(Errc::NotDescendable, "divisor does not descend to " + ctx.tower[target].label());
    PuncturedCurve y = make_curve(ctx.tower[target], ctx.S, *down, ch.running.has_infinity(), ch.running.label, ctx.provider);
    ch.running = std::move(y);
    ch.member = target;
  }
  ch.steps.push_back(t.step);
  ch.trace.push_back(t);
  detail::refresh(ctx, ch);
  return ch;
}

inline BcpChain p_successor_forget(const BcpContext& ctx, BcpChain ch, std::vector<std::size_t> retained) {
  if (ch.symbolic) throw Error(Errc::InvalidCoverMove, "no moves after a quotient step");
  std::sort(retained.begin(), retained.end());
  retained.erase(std::unique(retained.begin(), retained.end()), retained.end());
  const auto& orbits = ch.running.orbits;
  if (retained.empty() || retained.size() >= orbits.size())
    throw Error(Errc::InvalidCoverMove, "retained orbits must form a proper nonempty subset");
  int kept = 0;
  for (auto i : retained) {
    if (i >= orbits.size()) throw Error(Errc::InvalidCoverMove, "orbit index out of range");
    kept += orbits[i].degree;
  }
  if (kept < 2) throw Error(Errc::InvalidCoverMove, "image curve needs at least two geometric punctures");
  auto jb = jacobian_profile(ch.running);
  PuncturedCurve y = ch.running;
  y.orbits.clear();
  std::string forgotten;
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    if (std::binary_search(retained.begin(), retained.end(), i)) {
      y.orbits.push_back(orbits[i]);
    } else {
      ch.banked.push_back(detail::gm_factor(ctx, ch.member));
      if (orbits[i].degree > 1) ch.banked.push_back(detail::r1_factor(ctx, ch.member, orbits[i]));
      forgotten += (forgotten.empty() ? "" : ",") + detail::orbit_tag(orbits[i]);
    }
  }
  auto ja = jacobian_profile(y);
  StepTrace t{{BcpStep::Kind::Forget, 0, retained, 0}, ch.member, ch.member, jb.dim, jb.rank, ja.dim, ja.rank, ch.running.geometric_count(), forgotten};
  ch.running = std::move(y);
  ch.steps.push_back(t.step);
  ch.trace.push_back(t);
  detail::refresh(ctx, ch);
  return ch;
}

inline BcpChain p_successor_quotient(const BcpContext& ctx, BcpChain ch, int delta) {
  if (ch.symbolic) throw Error(Errc::InvalidCoverMove, "no moves after a quotient step");
  if (ch.running.orbits.size() != 1) throw Error(Errc::InvalidCoverMove, "quotient moves need a single puncture orbit");
  int n = ch.running.geometric_count();
  if (delta == 1) throw Error(Errc::RiemannHurwitzViolation, "a degree-1 quotient that is not an isomorphism");
  if (delta < 1 || n % delta) throw Error(Errc::InvalidCoverMove, "delta must divide the puncture count");
  auto jb = jacobian_profile(ch.running);
  const auto& M = ctx.tower[ch.member];
  ch.banked.push_back({ch.member, M.label(), "Prym[delta=" + std::to_string(delta) + ",n=" + std::to_string(n) + "]",
                       M.degree() * (n - n / delta), std::nullopt});
  ch.symbolic = true;
  ch.symbolic_punctures = n / delta;
  StepTrace t{{BcpStep::Kind::Quotient, 0, {}, delta}, ch.member, ch.member, jb.dim, jb.rank, n / delta - 1, std::nullopt, n, {}};
  ch.steps.push_back(t.step);
  ch.trace.push_back(t);
  detail::refresh(ctx, ch);
  return ch;
}

inline BcpChain apply_step(const BcpContext& ctx, BcpChain ch, const BcpStep& s) {
  switch (s.kind) {
    case BcpStep::Kind::BC: return bc_successor(ctx, std::move(ch), s.target);
    case BcpStep::Kind::Forget: return p_successor_forget(ctx, std::move(ch), s.retained);
    case BcpStep::Kind::Quotient: return p_successor_quotient(ctx, std::move(ch), s.delta);
  }
  return ch;
}

inline BcpChain replay(const BcpContext& ctx, const PuncturedCurve& origin, const std::vector<BcpStep>& steps) {
  BcpChain ch = start_chain(ctx, origin);
  for (auto& s : steps) ch = apply_step(ctx, std::move(ch), s);
  return ch;
}

inline std::string step_string(const BcpContext& ctx, const StepTrace& t) {
  switch (t.step.kind) {
    case BcpStep::Kind::BC: return "BC " + ctx.tower[t.member_before].label() + "->" + ctx.tower[t.member_after].label();
    case BcpStep::Kind::Forget: return "P forget {" + t.forgotten + "}";
    case BcpStep::Kind::Quotient: return "P quotient delta=" + std::to_string(t.step.delta);
  }
  return {};
}

struct EnumeratedClass {
  IsogenyClass cls;
  int min_n = 0;
  BcpChain witness;
};

inline std::vector<EnumeratedClass> enumerate_bcp_tori(const BcpContext& ctx, const PuncturedCurve& curve, int max_depth) {
  if (max_depth < 0) throw Error(Errc::InvalidArgument, "max_depth must be nonnegative");
  std::map<std::string, EnumeratedClass> classes;
  std::set<std::string> seen_states;
  auto state_key = [](const BcpChain& c) {
    std::string k = std::to_string(c.member) + "#";
    for (auto& o : c.running.orbits) k += detail::orbit_tag(o) + "/";
    std::vector<std::string> b;
    for (auto& f : c.banked) b.push_back(f.key());
    std::sort(b.begin(), b.end());
    for (auto& s : b) k += s + ";";
    return k;
  };
  std::deque<BcpChain> frontier{start_chain(ctx, curve)};
  seen_states.insert(state_key(frontier.front()));
  while (!frontier.empty()) {
    BcpChain ch = std::move(frontier.front());
    frontier.pop_front();
    auto key = ch.result.canonical();
    if (!classes.count(key)) classes.emplace(key, EnumeratedClass{ch.result, ch.n, ch});
    if (ch.n >= max_depth) continue;
    std::vector<BcpChain> next;
    for (std::size_t t = 0; t < ch.member; ++t) {
      try {
        next.push_back(bc_successor(ctx, ch, t));
      } catch (const Error&) {
      }
    }
    std::size_t k = ch.running.orbits.size();
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << k); ++mask) {
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1) keep.push_back(i);
      try {
        next.push_back(p_successor_forget(ctx, ch, keep));
      } catch (const Error&) {
      }
    }
    for (auto& c : next)
      if (seen_states.insert(state_key(c)).second) frontier.push_back(std::move(c));
  }
  std::vector<EnumeratedClass> out;
  for (auto& [k, v] : classes) out.push_back(std::move(v));
  std::stable_sort(out.begin(), out.end(), [](const EnumeratedClass& a, const EnumeratedClass& b) {
    if (a.min_n != b.min_n) return a.min_n < b.min_n;
    return a.cls.canonical() < b.cls.canonical();
  });
  return out;
}

struct CoverRankGap {
  Int Delta;
  Rat bound;
};

inline CoverRankGap cover_rank_gap(int n_gamma1, int rank_j1, int rank_gm_r, int d, int delta) {
  if (delta < 1 || n_gamma1 % delta) throw Error(Errc::DeltaDoesNotDivide, std::to_string(delta) + " does not divide " + std::to_string(n_gamma1));
  Int D = Int(d) * n_gamma1 - (rank_j1 + rank_gm_r + 1);
  return {D, make_rat(delta - 1, delta) * Rat(D)};
}

struct LedgerEntry {
  std::string label;  // e.g. "delta_0", "delta_1 (BC Q(..)->Q)"
  Int value;
  bool is_bound = false;  // quotient steps: ceiling of the cover_rank_gap bound
  bool unknown = false;   // symbolic terminal curve; contributes 0
};

struct DeltaLedger {
  std::vector<LedgerEntry> deltas;  // paper order: delta_0 first
  Int lower_bound = 0;
};

inline DeltaLedger delta_ledger(const BcpContext& ctx, const BcpChain& ch) {
  DeltaLedger L;
  const auto& M0 = ctx.tower[ch.member];
  if (ch.symbolic) {
    L.deltas.push_back({"delta_0 (symbolic terminal curve)", 0, false, true});
  } else {
    auto j0 = jacobian_profile(ch.running);
    L.deltas.push_back({"delta_0", Int(M0.degree()) * j0.dim - j0.rank, false, false});
  }
  int i = 1;
  for (auto it = ch.trace.rbegin(); it != ch.trace.rend(); ++it, ++i) {
    std::string lab = "delta_" + std::to_string(i) + " (" + step_string(ctx, *it) + ")";
    int d = ctx.tower[it->member_before].degree();
    switch (it->step.kind) {
      case BcpStep::Kind::BC: L.deltas.push_back({lab, 0, false, false}); break;
      case BcpStep::Kind::Forget:
        L.deltas.push_back({lab, Int(d) * (it->dim_before - it->dim_after) - (it->rank_before - *it->rank_after), false, false});
        break;
      case BcpStep::Kind::Quotient: {
        auto g = cover_rank_gap(it->geometric_before, it->rank_before, s_unit_rank(ctx.tower[it->member_before], ctx.S), d, it->step.delta);
        L.deltas.push_back({lab, ceil_div(g.bound), true, false});
        break;
      }
    }
  }
  for (auto& e : L.deltas)
    if (e.value > 0) L.lower_bound += e.value;
  return L;
}

enum class VerdictMode { Unconditional, LeopoldtAssumed };
enum class Verdict { NoObstruction, ObstructionUnderLeopoldt, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::NoObstruction: return "NoObstruction";
    case Verdict::ObstructionUnderLeopoldt: return "ObstructionUnderLeopoldt";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return {};
}
inline std::string to_string(VerdictMode m) { return m == VerdictMode::Unconditional ? "Unconditional" : "LeopoldtAssumed"; }

struct ObstructionVerdict {
  VerdictMode mode = VerdictMode::Unconditional;
  int dim_T = 0;
  std::optional<int> rank_T_R0;
  std::optional<int> closure_dim_bound;     // mode-dependent
  std::optional<int> unconditional_bound;   // rank
  std::optional<int> leopoldt_value;        // min(rank, dim)
  int intersection_dim = 0;
  std::optional<Int> ledger_lower_bound;
  Verdict verdict = Verdict::Inconclusive;
  std::string evidence;
};

inline ObstructionVerdict evaluate_obstruction(int dim, std::optional<int> rank, int intersection, std::optional<Int> ledger_lb, VerdictMode mode) {
  ObstructionVerdict v;
  v.mode = mode;
  v.dim_T = dim;
  v.rank_T_R0 = rank;
  v.intersection_dim = intersection;
  v.ledger_lower_bound = ledger_lb;
  if (rank) {
    v.unconditional_bound = *rank;
    v.leopoldt_value = std::min(*rank, dim);
    v.closure_dim_bound = mode == VerdictMode::Unconditional ? *rank : std::min(*rank, dim);
  }
  auto s = [](auto x) { return std::to_string(x); };
  if (rank && intersection <= dim - *rank) {
    v.verdict = Verdict::NoObstruction;
    v.evidence = "intersection_dim " + s(intersection) + " <= dim_T - rank " + s(dim) + " - " + s(*rank) + " = " + s(dim - *rank);
  } else if (ledger_lb && *ledger_lb >= intersection) {
    v.verdict = Verdict::NoObstruction;
    v.evidence = "ledger lower_bound " + ledger_lb->get_str() + " >= intersection_dim " + s(intersection);
  } else if (mode == VerdictMode::LeopoldtAssumed && rank && intersection > dim - std::min(*rank, dim)) {
    v.verdict = Verdict::ObstructionUnderLeopoldt;
    v.evidence = "intersection_dim " + s(intersection) + " > dim_T - min(rank, dim) " + s(dim) + " - " + s(std::min(*rank, dim)) + " = " +
                 s(dim - std::min(*rank, dim));
  } else {
    v.verdict = Verdict::Inconclusive;
    v.evidence = rank ? "intersection_dim " + s(intersection) + " > dim_T - rank " + s(dim - *rank) + " and ledger bound below intersection"
                      : "rank unknown and ledger bound below intersection";
  }
  return v;
}

inline ObstructionVerdict obstruction_verdict(const BcpContext& ctx, const BcpChain& ch, VerdictMode mode) {
  auto L = delta_ledger(ctx, ch);
  // dim(T meet j(Res X)) is the degree of the base at the chain's terminal curve, preserved by successors
  int inter = ctx.tower[ch.member].degree();
  return evaluate_obstruction(ch.result.dim, ch.result.rank_r0, inter, L.lower_bound, mode);
}

// bare subtorus check: intersection bounded by [K:Q]
inline ObstructionVerdict obstruction_verdict_subtorus(int dim, int rank, const NumberField& K, VerdictMode mode) {
  return evaluate_obstruction(dim, rank, K.degree(), std::nullopt, mode);
}

struct CmWitness {
  CmVerdict cm;
  NfElem beta;            // in the CM field
  KPoly minimal_poly;     // of f(zeta_q) over the totally real field
  PuncturedCurve curve;   // over the totally real field
  NumberField field;      // absolute form of the totally real field adjoined f(zeta_q)
  int dim = 0, rank = 0;
  int intersection_dim = 0;
  ObstructionVerdict verdict;
};

inline CmWitness cm_bcp_witness(const NumberField& K, const std::vector<Subfield>& subfields, long q, const SSpec& S,
                                const ResidueFieldProvider& provider = default_residue_field) {
  if (q < 3 || !is_prime(q)) throw Error(Errc::QNotPrime, "q must be an odd prime");
  CmWitness w;
  w.cm = detect_cm_subfield(K, subfields);
  if (!w.cm.found) throw Error(Errc::NotCmField, K.label() + " has no CM subfield among those listed");
  if (factor_over(K, lift_to(K, cyclotomic_prime(q))).size() != 1)
    throw Error(Errc::CyclotomicNotDisjoint, "Q(zeta_" + std::to_string(q) + ") is not disjoint from " + K.label());
  const NumberField& E = *w.cm.cm_field;
  const NumberField& E0 = *w.cm.real_field;
  int m = E0.degree();
  NfElem eps = eval_in(w.cm.real_in_cm, E.gen());
  // e^2 = t e - n with t, n in E0
  RatMatrix A(E.degree(), std::vector<Rat>(2 * m));
  NfElem pw = E.element(Rat(1));
  for (int k = 0; k < m; ++k) {
    NfElem te = pw * E.gen();
    for (int r = 0; r < E.degree(); ++r) {
      A[r][k] = te.poly().coeff(r);
      A[r][m + k] = -pw.poly().coeff(r);
    }
    pw = pw * eps;
  }
  NfElem e2 = E.gen() * E.gen();
  std::vector<Rat> b(E.degree());
  for (int r = 0; r < E.degree(); ++r) b[r] = e2.poly().coeff(r);
  auto sol = solve_linear(A, b);
  if (!sol) throw Error(Errc::NotCmField, "CM field is not quadratic over its real subfield");
  NfElem t = E.element(Rat(0));
  pw = E.element(Rat(1));
  for (int k = 0; k < m; ++k) {
    t = t + NfElem((*sol)[k]) * pw;
    pw = pw * eps;
  }
  w.beta = E.gen() - t * NfElem(Rat(1, 2));
  // P(y) = ((y + beta)^q - (y - beta)^q) / (2 q beta), coefficients beta^(j-1) with j odd
  NfElem b2 = w.beta * w.beta;
  std::vector<NfElem> coeffs(static_cast<std::size_t>(q));
  Int binom = 1;
  NfElem bp = E.element(Rat(1));
  for (long j = 1; j <= q; ++j) {
    binom = binom * (q - j + 1) / j;
    if (j % 2) {
      coeffs[static_cast<std::size_t>(q - j)] = NfElem(make_rat(binom, q)) * bp;
      bp = bp * b2;
    }
  }
  std::vector<NfElem> down;
  for (auto& c : coeffs) {
    auto x = express_in_subfield(c, eps, m);
    if (!x) throw Error(Errc::NotCmField, "minimal polynomial of f(zeta) does not descend to the real subfield");
    down.push_back(E0.element(*x));
  }
  w.minimal_poly = KPoly(std::move(down));
  w.curve = make_curve(E0, S, w.minimal_poly, false, "Y_{cm," + std::to_string(q) + "}", provider);
  if (w.curve.orbits.size() != 1) throw Error(Errc::CyclotomicNotDisjoint, "f(zeta) is not of full degree over the real subfield");
  w.field = w.curve.orbits[0].residue_field;
  if (!w.field.totally_real()) throw Error(Errc::NotCmField, "constructed field is not totally real");
  auto prof = jacobian_profile(w.curve);
  w.dim = m * prof.dim;
  w.rank = prof.rank;
  w.intersection_dim = m;
  Int delta0 = Int(m) * prof.dim - prof.rank;
  w.verdict = evaluate_obstruction(w.dim, w.rank, m, delta0 > 0 ? delta0 : Int(0), VerdictMode::LeopoldtAssumed);
  return w;
}

}  // namespace rosc
