#pragma once

// Skolem-style congruence sieve for x + y = 1 in S-units, and the desk solver.

#include <map>
#include <set>

#include "rosc/char_rank.hpp"
#include "rosc/padic.hpp"

namespace rosc {

struct SUnitGenerator {
  NfElem value;
  int torsion_order = 0;  // 0 for a free generator
};

// -1 and the primes of S0
inline std::vector<SUnitGenerator> default_generators(const NumberField& K, const SSpec& S) {
  if (K.degree() != 1) throw Error(Errc::InvalidArgument, "S-unit generators must be supplied for " + K.label());
  std::vector<SUnitGenerator> g{{K.element(Rat(-1)), 2}};
  for (long p : S.primes) g.push_back({K.element(Rat(p)), 0});
  return g;
}

inline std::string element_string(const NfElem& a) { return a.is_rational() ? rat_string(a.rational()) : coeff_list(a.poly()); }

struct SUnitSolution {
  NfElem x, y;
};

struct SieveStageCounts {
  long universe = 0, unit_at_p = 0, tame = 0, log_span = 0, exact = 0;
};

struct SieveResult {
  long p = 0;
  int N = 0;
  int exhaustive_bound_used = 0;
  std::vector<std::vector<Int>> surviving_classes;  // residues of x in each completion
  std::vector<SUnitSolution> confirmed_solutions;
  int surviving_unconfirmed = 0;
  SieveStageCounts stages;
  ClosureEstimate closure;
};

struct SieveConfig {
  NumberField field = rationals();
  SSpec S;
  std::vector<SUnitGenerator> generators;  // empty: defaults for Q
  long p = 0;                              // 0: smallest usable odd prime outside S0
  int N = 10;
  int box = 12;
  bool strict = false;
};

namespace detail {

// exponent vectors: torsion generators in [0, order), free ones in [-B, B]
template <class F>
void for_each_exponent(const std::vector<SUnitGenerator>& gens, int B, F&& f) {
  std::vector<int> e(gens.size());
  auto lo = [&](std::size_t i) { return gens[i].torsion_order ? 0 : -B; };
  auto hi = [&](std::size_t i) { return gens[i].torsion_order ? gens[i].torsion_order - 1 : B; };
  for (std::size_t i = 0; i < gens.size(); ++i) e[i] = lo(i);
  for (;;) {
    f(e);
    std::size_t i = 0;
    for (; i < gens.size(); ++i) {
      if (e[i] < hi(i)) {
        ++e[i];
        break;
      }
      e[i] = lo(i);
    }
    if (i == gens.size()) return;
  }
}

inline NfElem power(const NfElem& a, int e) {
  NfElem base = e < 0 ? a.inverse() : a;
  NfElem r = a / a;
  for (int k = 0; k < std::abs(e); ++k) r = r * base;
  return r;
}

inline bool solution_less(const SUnitSolution& a, const SUnitSolution& b) {
  if (a.x.is_rational() && b.x.is_rational()) {
    if (a.x.rational() != b.x.rational()) return a.x.rational() < b.x.rational();
    return a.y.rational() < b.y.rational();
  }
  auto sa = element_string(a.x), sb = element_string(b.x);
  if (sa != sb) return sa < sb;
  return element_string(a.y) < element_string(b.y);
}

struct Universe {
  std::vector<std::vector<int>> exponents;
  std::vector<NfElem> values;
  std::map<std::string, std::size_t> index;
};

inline Universe build_universe(const std::vector<SUnitGenerator>& gens, int B, const NfElem& one) {
  Universe u;
  detail::for_each_exponent(gens, B, [&](const std::vector<int>& e) {
    NfElem x = one;
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (e[i]) x = x * power(gens[i].value, e[i]);
    std::string key = element_string(x);
    if (u.index.count(key)) return;  // torsion relations can repeat values
    u.index[key] = u.values.size();
    u.values.push_back(x);
    u.exponents.push_back(e);
  });
  return u;
}

inline void check_generators(const NumberField& K, const SSpec& S, const std::vector<SUnitGenerator>& gens) {
  for (const auto& g : gens) {
    if (!is_s_unit(K, S, g.value)) throw Error(Errc::NotAnSUnit, "generator is not an S-unit", element_string(g.value));
    if (g.torsion_order < 0) throw Error(Errc::InvalidArgument, "negative torsion order");
  }
}

}  // namespace detail

inline long default_sieve_prime(const NumberField& K, const SSpec& S, const std::vector<SUnitGenerator>& gens) {
  for (long p = 3;; p = next_prime(p)) {
    if (std::find(S.primes.begin(), S.primes.end(), p) != S.primes.end()) continue;
    try {
      auto sc = split_completions(K, p, 1);
      for (const auto& g : gens) unit_log(g.value, sc);
      return p;
    } catch (const Error& e) {
      if (e.code() != Errc::NonSplitCompletion && e.code() != Errc::GeneratorNotCoprime) throw;
    }
    if (p > 1000) throw Error(Errc::NonSplitCompletion, "no split auxiliary prime below 1000");
  }
}

// every x + y = 1 with x, y in the box, by exact arithmetic only
inline std::vector<SUnitSolution> exhaustive_sunit_solutions(const NumberField& K, const SSpec& S, std::vector<SUnitGenerator> gens, int B) {
  if (gens.empty()) gens = default_generators(K, S);
  detail::check_generators(K, S, gens);
  auto u = detail::build_universe(gens, B, K.element(Rat(1)));
  std::vector<SUnitSolution> out;
  NfElem one = K.element(Rat(1));
  for (const auto& x : u.values) {
    NfElem y = one - x;
    if (is_zero(y)) continue;
    if (u.index.count(element_string(y))) out.push_back({x, y});
  }
  std::sort(out.begin(), out.end(), detail::solution_less);
  return out;
}

inline SieveResult skolem_sieve(SieveConfig cfg) {
  const NumberField& K = cfg.field;
  if (cfg.generators.empty()) cfg.generators = default_generators(K, cfg.S);
  detail::check_generators(K, cfg.S, cfg.generators);
  if (cfg.N < 2) throw Error(Errc::PrecisionExhausted, "sieve precision must be at least 2");
  if (cfg.box < 0) throw Error(Errc::InvalidArgument, "box radius must be nonnegative");
  if (cfg.p == 0) cfg.p = default_sieve_prime(K, cfg.S, cfg.generators);
  if (std::find(cfg.S.primes.begin(), cfg.S.primes.end(), cfg.p) != cfg.S.primes.end())
    throw Error(Errc::GeneratorNotCoprime, "auxiliary prime lies in S0");
  const long p = cfg.p;
  const int N = cfg.N;
  auto sc = split_completions(K, p, N);
  const std::size_t nc = sc.roots.size();

  SieveResult res;
  res.p = p;
  res.N = N;
  res.exhaustive_bound_used = cfg.box;

  // generator images, logs and the tame subgroup of prod F_p^*
  std::vector<std::vector<PAdicInt>> gimg;
  std::vector<LogVector> glog;
  for (std::size_t i = 0; i < cfg.generators.size(); ++i) {
    glog.push_back(unit_log(cfg.generators[i].value, sc, "g" + std::to_string(i)));
    std::vector<PAdicInt> im;
    for (const auto& r : sc.roots) im.push_back(embed(cfg.generators[i].value, r, p, N));
    gimg.push_back(im);
  }
  auto encode = [&](const std::vector<PAdicInt>& v) {
    long code = 0;
    for (const auto& c : v) code = code * p + mpz_class(c.r % p).get_si();
    return code;
  };
  std::set<long> tame{encode(std::vector<PAdicInt>(nc, PAdicInt(p, N, Int(1))))};
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<long> cur(tame.begin(), tame.end());
    for (long c : cur)
      for (const auto& g : gimg) {
        long d = c, out = 0;
        std::vector<long> digits(nc);
        for (std::size_t j = nc; j-- > 0;) digits[j] = d % p, d /= p;
        for (std::size_t j = 0; j < nc; ++j) {
          long gj = mpz_class(g[j].r % p).get_si();
          out = out * p + (digits[j] * gj) % p;
        }
        if (tame.insert(out).second) grew = true;
      }
  }
  std::vector<LogVector> rows = glog;
  if (rows.empty()) rows.push_back({std::vector<PAdicInt>(nc, PAdicInt(p, N, Int(0))), "none"});
  res.closure = closure_dimension(rows);
  auto ech = padic_echelon(rows);

  auto u = detail::build_universe(cfg.generators, cfg.box, K.element(Rat(1)));
  NfElem one = K.element(Rat(1));
  std::set<std::vector<Int>> classes;
  for (std::size_t idx = 0; idx < u.values.size(); ++idx) {
    ++res.stages.universe;
    const auto& e = u.exponents[idx];
    std::vector<PAdicInt> x(nc, PAdicInt(p, N, Int(1)));
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i])
        for (std::size_t j = 0; j < nc; ++j) x[j] = x[j] * padic_pow(gimg[i][j], Int(e[i]));
    std::vector<PAdicInt> y;
    bool unit = true;
    for (std::size_t j = 0; j < nc; ++j) {
      y.push_back(PAdicInt(p, N, Int(1)) - x[j]);
      if (!y.back().is_unit()) unit = false;
    }
    if (!unit) continue;
    ++res.stages.unit_at_p;
    if (!tame.count(encode(y))) continue;
    ++res.stages.tame;
    LogVector ly;
    for (const auto& c : y) ly.coords.push_back(padic_div(padic_log(padic_pow(c, Int(p - 1))), PAdicInt(p, N, Int(p - 1))));
    if (!in_log_span(ech, ly)) continue;
    ++res.stages.log_span;
    std::vector<Int> cls;
    for (const auto& c : x) cls.push_back(c.r);
    classes.insert(cls);
    // exact firewall
    NfElem yx = one - u.values[idx];
    if (is_zero(yx) || !is_s_unit(K, cfg.S, yx)) continue;
    ++res.stages.exact;
    if (u.index.count(element_string(yx))) {
      res.confirmed_solutions.push_back({u.values[idx], yx});
    } else {
      if (cfg.strict)
        throw Error(Errc::BoxTooSmall, "S-unit partner outside the exponent box", element_string(u.values[idx]) + " + " + element_string(yx));
      ++res.surviving_unconfirmed;
    }
  }
  res.surviving_classes.assign(classes.begin(), classes.end());
  std::sort(res.confirmed_solutions.begin(), res.confirmed_solutions.end(), detail::solution_less);
  return res;
}

// ---- desk solver ----

struct DeskCurve {
  std::string alpha;
  std::string shape;
  std::string verdict;
  std::string evidence;
  int images = 0;
};

struct DeskConfig {
  NumberField field = rationals();
  SSpec S;
  std::vector<SUnitGenerator> generators;
  long q = 0;  // 0: smallest prime > 4 [K:Q]
  long p = 0;
  int N = 10;
  int box = 12;
  bool strict = false;
};

struct DeskReport {
  long q = 0;
  std::vector<DeskCurve> curves;
  SieveResult sieve;
  std::vector<SUnitSolution> solutions;
  int discarded_at_punctures = 0;
  bool oracle_agrees = false;
  std::string label;  // CONFIRMED or CANDIDATE
};

inline void desk_verdict(const BcpContext& ctx, const DeskConfig& cfg, const NfElem& a, long q, DeskCurve& dc) {
  const NumberField& K = cfg.field;
  auto X = build_x_alpha_q(K, cfg.S, a, q);
  dc.shape = X.shape;
  if (qth_root(K, a, q)) {
    auto v = obstruction_verdict(ctx, start_chain(ctx, X), VerdictMode::Unconditional);
    dc.verdict = to_string(v.verdict);
    dc.evidence = v.evidence;
  } else {
    auto ns = verify_no_subgroup_obstruction({K, {}, cfg.S, q, a});
    dc.verdict = ns.pass ? "NoSubgroupObstruction" : "Inconclusive";
    const auto& c = ns.failing_m ? ns.classes[static_cast<std::size_t>(*ns.failing_m - 1)] : ns.classes.back();
    dc.evidence = "m=" + std::to_string(c.m) + ": dim " + std::to_string(c.dim) + " - rank_upper " + std::to_string(c.rank_upper) +
                  " = " + std::to_string(c.margin) + (c.pass ? " > " : " <= ") + std::to_string(K.degree());
  }
}

inline DeskReport solve_sunit_desk(DeskConfig cfg) {
  const NumberField& K = cfg.field;
  if (cfg.generators.empty()) cfg.generators = default_generators(K, cfg.S);
  detail::check_generators(K, cfg.S, cfg.generators);
  DeskReport rep;
  rep.q = cfg.q ? cfg.q : next_prime(4 * K.degree());
  if (rep.q < 3 || !is_prime(rep.q)) throw Error(Errc::QNotPrime, "q must be an odd prime");
  const long q = rep.q;

  // coset representatives of the S-units modulo q-th powers
  std::vector<SUnitGenerator> reps_gens;
  for (const auto& g : cfg.generators)
    if (!g.torsion_order || std::gcd(g.torsion_order, static_cast<int>(q)) > 1) reps_gens.push_back({g.value, static_cast<int>(q)});
  std::vector<NfElem> alphas;
  detail::for_each_exponent(reps_gens, 0, [&](const std::vector<int>& e) {
    NfElem a = K.element(Rat(1));
    for (std::size_t i = 0; i < e.size(); ++i) a = a * detail::power(reps_gens[i].value, e[i]);
    alphas.push_back(a);
  });

  SubfieldTower tower = K.degree() == 1 ? SubfieldTower({K}, {}) : SubfieldTower({rationals(), K}, {QPoly()});
  BcpContext ctx{tower, cfg.S};
  for (const auto& a : alphas) {
    DeskCurve dc;
    dc.alpha = element_string(a);
    try {
      desk_verdict(ctx, cfg, a, q, dc);
    } catch (const Error& e) {
      // e.g. IndexObstruction when a prime of S0 ramifies in a residue field
      dc.verdict = "Unsupported";
      dc.evidence = e.what();
    }
    rep.curves.push_back(dc);
  }

  rep.sieve = skolem_sieve({K, cfg.S, cfg.generators, cfg.p, cfg.N, cfg.box, cfg.strict});
  for (const auto& s : rep.sieve.confirmed_solutions) {
    // sections through the removed points 0, 1, infinity
    if (is_zero(s.x) || is_zero(s.y)) {
      ++rep.discarded_at_punctures;
      continue;
    }
    rep.solutions.push_back(s);
    for (std::size_t i = 0; i < alphas.size(); ++i)
      if (qth_root(K, s.x / alphas[i], q)) {
        ++rep.curves[i].images;
        break;
      }
  }
  auto oracle = exhaustive_sunit_solutions(K, cfg.S, cfg.generators, cfg.box);
  rep.oracle_agrees = oracle.size() == rep.solutions.size();
  for (std::size_t i = 0; rep.oracle_agrees && i < oracle.size(); ++i)
    rep.oracle_agrees = element_string(oracle[i].x) == element_string(rep.solutions[i].x) &&
                        element_string(oracle[i].y) == element_string(rep.solutions[i].y);
  rep.label = rep.oracle_agrees && rep.sieve.surviving_unconfirmed == 0 ? "CONFIRMED" : "CANDIDATE";
  return rep;
}

}  // namespace rosc
