#pragma once

// Character-theoretic ranks and instance-level verifiers.

#include <map>
#include <numeric>

#include "rosc/bcp.hpp"

namespace rosc {

struct RankBounds {
  int lo, hi;
};

inline RankBounds anisotropic_rank_bounds(const NumberField& F, int dim_T) {
  return {F.r2() * dim_T, (F.r1() + F.r2()) * dim_T};
}

// ---- Z/q semidirect Z/2 (dihedral of order 2q) ----

struct SemidirectRank {
  int dim = 0;
  int rank = 0;                // <Res_H chi_T, 1>_H
  int rank_via_induction = 0;  // <chi_T, Ind_H^G 1>_G over all 2q elements
  bool galois_complete = false;
};

namespace detail {

struct DihedralElement {
  long a;
  int s;
};

inline DihedralElement dmul(DihedralElement x, DihedralElement y, long q) {
  long b = x.s ? -y.a : y.a;
  return {((x.a + b) % q + q) % q, x.s ^ y.s};
}
inline DihedralElement dinv(DihedralElement x, long q) { return x.s ? x : DihedralElement{(q - x.a) % q, 0}; }

// chi_T(g) as an element of Z[C_q] (coefficient j <-> zeta^j)
inline std::vector<long> chi_value(const std::vector<int>& m, DihedralElement g, long q) {
  std::vector<long> v(static_cast<std::size_t>(q), 0);
  if (g.s) return v;
  for (std::size_t k = 0; k < m.size(); ++k) {
    long kk = static_cast<long>(k + 1);
    v[static_cast<std::size_t>(kk * g.a % q)] += m[k];
    v[static_cast<std::size_t>((q - kk * g.a % q) % q)] += m[k];
  }
  return v;
}

// reduces sum v_j zeta^j to a rational number; throws if it is not rational
inline Rat cyclo_rational(const std::vector<Rat>& v, long q) {
  QPoly r = QPoly(v) % cyclotomic_prime(q);
  if (r.degree() > 0) throw Error(Errc::InvalidArgument, "character pairing is not rational");
  return r.coeff(0);
}

}  // namespace detail

inline SemidirectRank semidirect_rank(long q, const std::vector<int>& m) {
  if (q < 3 || !is_prime(q)) throw Error(Errc::QNotPrime, "q must be an odd prime");
  if (m.size() != static_cast<std::size_t>((q - 1) / 2))
    throw Error(Errc::InvalidArgument, "expected (q-1)/2 multiplicities");
  for (int x : m)
    if (x < 0) throw Error(Errc::NegativeMultiplicity, "multiplicities must be nonnegative");
  SemidirectRank out;
  std::vector<detail::DihedralElement> G;
  for (int s = 0; s < 2; ++s)
    for (long a = 0; a < q; ++a) G.push_back({a, s});
  auto in_H = [](detail::DihedralElement g) { return g.a == 0; };
  // Ind_H^G 1 (g) = (1/|H|) #{x : x g x^-1 in H}
  std::vector<Rat> total(static_cast<std::size_t>(q), Rat(0));
  for (auto g : G) {
    long fix = 0;
    for (auto x : G)
      if (in_H(detail::dmul(detail::dmul(x, g, q), detail::dinv(x, q), q))) ++fix;
    Rat ind = make_rat(fix, 2);
    auto chi = detail::chi_value(m, g, q);
    for (long j = 0; j < q; ++j) total[static_cast<std::size_t>(j)] += ind * chi[static_cast<std::size_t>(j)];
  }
  for (auto& t : total) t /= 2 * q;
  Rat viaG = detail::cyclo_rational(total, q);
  // <Res_H chi, 1>_H = (chi(e) + chi(sigma)) / 2
  std::vector<Rat> h(static_cast<std::size_t>(q), Rat(0));
  for (auto g : {detail::DihedralElement{0, 0}, detail::DihedralElement{0, 1}}) {
    auto chi = detail::chi_value(m, g, q);
    for (long j = 0; j < q; ++j) h[static_cast<std::size_t>(j)] += make_rat(chi[static_cast<std::size_t>(j)], 2);
  }
  Rat viaH = detail::cyclo_rational(h, q);
  auto chi_e = detail::chi_value(m, {0, 0}, q);
  Rat dim = detail::cyclo_rational(std::vector<Rat>(chi_e.begin(), chi_e.end()), q);
  if (viaG != viaH || viaG.get_den() != 1) throw Error(Errc::InvalidArgument, "Frobenius reciprocity check failed");
  out.dim = static_cast<int>(dim.get_num().get_si());
  out.rank = static_cast<int>(viaH.get_num().get_si());
  out.rank_via_induction = static_cast<int>(viaG.get_num().get_si());
  out.galois_complete = std::adjacent_find(m.begin(), m.end(), std::not_equal_to<>()) == m.end();
  if (out.galois_complete && out.dim % (q - 1)) throw Error(Errc::InvalidArgument, "Galois-complete dimension not divisible by q-1");
  return out;
}

// ---- abelian L/K ----

struct CharacterDatum {
  std::vector<int> invariants;  // abelian group Z/n1 x ... ; empty means not declared
  std::map<int, int> multiplicities;  // mixed-radix character index -> multiplicity

  int order() const { return std::accumulate(invariants.begin(), invariants.end(), 1, std::multiplies<>()); }
  int dimension() const {
    int d = 0;
    for (auto& [k, m] : multiplicities) d += m;
    return d;
  }
  static CharacterDatum norm_one(std::vector<int> inv) {
    CharacterDatum c{std::move(inv), {}};
    for (int k = 1; k < c.order(); ++k) c.multiplicities[k] = 1;
    return c;
  }
};

struct AbelianRankReport {
  int rank = 0;
  int trivial_correction = 0;
  std::vector<PlaceCount> fixed_dims;  // <chi, 1>_{D_v} per place
};

namespace detail {

// <chi, 1>_D for D the decomposition group of order f; cyclic groups have a
// unique such subgroup, other groups only admit a*Reg + b*1 pieces
inline int fixed_dim(const CharacterDatum& c, int f) {
  int n = c.order();
  if (c.invariants.size() == 1) {
    int s = 0;
    for (auto& [k, m] : c.multiplicities)
      if (k % f == 0) s += m;
    return s;
  }
  int m0 = c.multiplicities.count(0) ? c.multiplicities.at(0) : 0;
  int a = -1;
  for (int k = 1; k < n; ++k) {
    int mk = c.multiplicities.count(k) ? c.multiplicities.at(k) : 0;
    if (a < 0) a = mk;
    else if (a != mk) throw Error(Errc::UnsupportedGaloisShape, "non-cyclic group with a piece that is not a*Reg + b*1");
  }
  if (a < 0) a = 0;
  return a * (n / f) + (m0 - a);
}

}  // namespace detail

// L = K[x]/(u), abelian over K with the declared group
inline AbelianRankReport subtorus_rank_abelian(const NumberField& K, const KPoly& u, const NumberField& L, const SSpec& S,
                                               const CharacterDatum& piece) {
  if (piece.invariants.empty() || piece.order() != u.degree())
    throw Error(Errc::NotAbelianDeclared, "abelian group of order [L:K] must be declared");
  for (auto& [k, m] : piece.multiplicities) {
    if (m < 0) throw Error(Errc::NegativeMultiplicity, "multiplicities must be nonnegative");
    if (k < 0 || k >= piece.order()) throw Error(Errc::InvalidArgument, "character index out of range");
  }
  int n = u.degree();
  AbelianRankReport rep;
  int total = 0;
  // infinite places
  int x = K.r1() - L.r1() / n;  // real places of K that become complex in L
  if (x && n % 2) throw Error(Errc::NotAbelianDeclared, "odd-degree extension cannot complexify a real place");
  if (K.r1() - x) {
    int d = detail::fixed_dim(piece, 1);
    rep.fixed_dims.push_back({"real split x" + std::to_string(K.r1() - x), d});
    total += (K.r1() - x) * d;
  }
  if (x) {
    int d = detail::fixed_dim(piece, 2);
    rep.fixed_dims.push_back({"real ramified x" + std::to_string(x), d});
    total += x * d;
  }
  if (K.r2()) {
    int d = detail::fixed_dim(piece, 1);
    rep.fixed_dims.push_back({"complex x" + std::to_string(K.r2()), d});
    total += K.r2() * d;
  }
  for (long p : S.primes) {
    auto sp = splitting_profile(K, p);
    for (std::size_t k = 0; k < sp.factors.size(); ++k) {
      auto ctx = make_fq(sp.factors[k]);
      FqPoly ub = reduce_at_prime(u, ctx);
      if (ub.degree() != n || poly_gcd(ub, ub.derivative()).degree() > 0)
        throw Error(Errc::IndexObstruction, "L/K ramified or non-integral above " + std::to_string(p));
      int r = count_irreducible_factors(ub, ctx->order());
      if (n % r) throw Error(Errc::NotAbelianDeclared, "unequal splitting contradicts the declared Galois structure");
      int d = detail::fixed_dim(piece, n / r);
      rep.fixed_dims.push_back({"p=" + std::to_string(p) + ",#" + std::to_string(k), d});
      total += d;
    }
  }
  rep.trivial_correction = detail::fixed_dim(piece, n);
  rep.rank = total - rep.trivial_correction;
  return rep;
}

// <psi, chi> where psi is the infinite-places representation; for a totally
// complex field this equals r2 * <Reg, chi>
inline int infinite_pairing(const NumberField& K, const NumberField& L, int n, const CharacterDatum& piece) {
  int x = K.r1() - L.r1() / n;
  return (K.r1() - x + K.r2()) * detail::fixed_dim(piece, 1) + x * detail::fixed_dim(piece, 2);
}

// ---- S-unit prime counts ----

struct PrimeCountEntry {
  long p;
  int place_index;
  int residue_degree;
  long a_p;  // order of #kappa mod q; 0 when p = q
  bool over_q;
  bool qth_power_residue;
  int count_above;
};

struct PrimeCountReport {
  std::vector<PrimeCountEntry> entries;
  int total_S_prime = 0;
  int places_S = 0;
};

inline PrimeCountReport sunit_prime_count(const NumberField& K, const SSpec& S, long q, const NfElem& alpha) {
  if (!is_prime(q)) throw Error(Errc::QNotPrime, std::to_string(q) + " is not prime");
  if (is_zero(alpha)) throw Error(Errc::InvalidArgument, "alpha must be nonzero");
  PrimeCountReport rep;
  for (long p : S.primes) {
    auto sp = splitting_profile(K, p);
    for (std::size_t k = 0; k < sp.factors.size(); ++k) {
      auto ctx = make_fq(sp.factors[k]);
      PrimeCountEntry e{p, static_cast<int>(k), ctx->f, 0, p == q, false, 1};
      ++rep.places_S;
      if (p == q) {
        rep.entries.push_back(e);
        rep.total_S_prime += 1;
        continue;
      }
      Int size = ctx->order();
      e.a_p = static_cast<long>(mult_order(mpz_class(size % q).get_ui(), static_cast<std::uint64_t>(q)));
      NfElem a = alpha;
      int v = 0;
      if (alpha.is_rational()) {
        v = valuation(alpha.rational(), p);
        a = K.element(alpha.rational() / Rat(ipow(Int(p), static_cast<unsigned long>(std::abs(v)))) *
                      (v < 0 ? Rat(ipow(Int(p), 2 * static_cast<unsigned long>(-v))) : Rat(1)));
      }
      FpPoly r;
      bool ok = reduce_mod_p(a.poly(), static_cast<std::uint64_t>(p), r);
      if (!alpha.is_rational() && (!ok || is_zero(Fq(r, ctx))))
        throw Error(Errc::UnsupportedValuation, "alpha is not a unit at a prime above " + std::to_string(p));
      if (v % q != 0) {
        e.count_above = 1;
      } else {
        Fq ab(r, ctx);
        Int g;
        Int qq(q);
        Int sm1 = size - 1;
        mpz_gcd(g.get_mpz_t(), qq.get_mpz_t(), sm1.get_mpz_t());
        e.qth_power_residue = field_pow(ab, sm1 / g) == Fq(1);
        e.count_above = e.qth_power_residue ? 1 + static_cast<int>((q - 1) / e.a_p) : 1;
      }
      rep.total_S_prime += e.count_above;
      rep.entries.push_back(e);
    }
  }
  return rep;
}

// ---- verifiers ----

struct VerifierInstance {
  NumberField base;
  std::vector<Subfield> subfields;  // declared subfields of the base (with images)
  SSpec S;
  long q = 5;
  NfElem alpha;  // element of the base
  Rat epsilon = Rat(1, 4);
};

struct MainBoundReport {
  int rank = 0;
  Rat rhs;
  bool pass = false;
  std::vector<std::string> hypothesis_flags;
  std::string shape;
  int subfield_degree = 0;
};

inline MainBoundReport verify_main_rank_bound(const VerifierInstance& inst, const Subfield& sub,
                                              const ResidueFieldProvider& provider = default_residue_field) {
  if (inst.epsilon <= 0) throw Error(Errc::InvalidArgument, "epsilon must be positive");
  MainBoundReport rep;
  const NumberField& Kp = sub.field;
  auto a = express_in_subfield(inst.alpha, inst.base.element(sub.image), Kp.degree());
  if (!a) throw Error(Errc::InvalidArgument, "alpha does not lie in the chosen subfield");
  auto X = build_x_alpha_q(Kp, inst.S, Kp.element(*a), inst.q, provider);
  rep.shape = X.shape;
  if (X.shape != "X_{1,q}") rep.hypothesis_flags.push_back("ShapeAgnostic");
  rep.rank = jacobian_profile(X).rank;
  rep.subfield_degree = Kp.degree();
  rep.rhs = (Rat(Kp.degree()) - Rat(1, 2) + inst.epsilon) * Rat(inst.q - 2);
  rep.pass = Rat(rep.rank) <= rep.rhs;
  if (detect_cm_subfield(inst.base, inst.subfields).found) rep.hypothesis_flags.push_back("CmSubfieldPresent");
  return rep;
}

struct SubgroupClassCheck {
  int m, dim, rank_upper;
  int margin;  // dim - rank_upper
  bool pass;
};

struct NoSubgroupReport {
  std::vector<SubgroupClassCheck> classes;
  PrimeCountReport primes;
  int correction = 0;
  bool pass = false;  // NoSubgroupObstruction
  std::optional<int> failing_m;
  std::vector<std::string> warnings;
};

inline NoSubgroupReport verify_no_subgroup_obstruction(const VerifierInstance& inst) {
  if (qth_root(inst.base, inst.alpha, inst.q)) throw Error(Errc::AlphaIsQthPower, "alpha is a qth power in " + inst.base.label());
  NoSubgroupReport rep;
  if (!is_s_unit(inst.base, inst.S, inst.alpha)) rep.warnings.push_back("AlphaNotSUnit");
  rep.primes = sunit_prime_count(inst.base, inst.S, inst.q, inst.alpha);
  rep.correction = rep.primes.total_S_prime - rep.primes.places_S;
  int d = inst.base.degree();
  rep.pass = true;
  for (int m = 1; m <= d; ++m) {
    auto sr = semidirect_rank(inst.q, std::vector<int>(static_cast<std::size_t>((inst.q - 1) / 2), m));
    int ru = sr.rank + rep.correction;
    SubgroupClassCheck c{m, sr.dim, ru, sr.dim - ru, sr.dim - ru > d};
    rep.classes.push_back(c);
    if (!c.pass && rep.pass) {
      rep.pass = false;
      rep.failing_m = m;
    }
  }
  return rep;
}

struct ChabautyFactor {
  std::string description;
  int dim;  // over the base
  int rank;
  bool anisotropic;
};

struct ClassicalChabautyReport {
  std::vector<ChabautyFactor> factors;
  std::optional<ChabautyFactor> witness;
  bool finite = false;  // FiniteChabautySet
  std::string verdict;
  int jacobian_dim = 0, jacobian_rank = 0;
};

// declared: orbit index -> abelian group invariants of its residue extension
inline ClassicalChabautyReport classical_chabauty_verdict(const PuncturedCurve& c, const std::map<std::size_t, std::vector<int>>& declared = {}) {
  ClassicalChabautyReport rep;
  const auto& K = c.base;
  int sK = s_unit_rank(K, c.s_spec);
  for (std::size_t i = 0; i < c.orbits.size(); ++i) {
    const auto& o = c.orbits[i];
    if (o.degree == 1) continue;
    int r = s_unit_rank(o.residue_field, c.s_spec) - sK;
    std::vector<int> inv;
    if (declared.count(i)) inv = declared.at(i);
    else if (o.degree == 2) inv = {2};
    if (!inv.empty()) {
      auto ab = subtorus_rank_abelian(K, *o.relative_poly, o.residue_field, c.s_spec, CharacterDatum::norm_one(inv));
      if (ab.rank != r) throw Error(Errc::InvalidArgument, "norm-one rank disagrees between routes");
    }
    rep.factors.push_back({"R1 " + kpoly_string(*o.relative_poly), o.degree - 1, r, true});
  }
  for (std::size_t i = 1; i < c.orbits.size(); ++i) rep.factors.push_back({"Gm", 1, sK, false});
  for (auto& f : rep.factors)
    if (f.rank < f.dim && !rep.witness) rep.witness = f;
  auto prof = jacobian_profile(c);
  rep.jacobian_dim = prof.dim;
  rep.jacobian_rank = prof.rank;
  rep.finite = rep.witness.has_value();
  rep.verdict = rep.finite ? "FiniteChabautySet" : "ChabautySetIsEverything-underLeopoldt";
  return rep;
}

}  // namespace rosc
