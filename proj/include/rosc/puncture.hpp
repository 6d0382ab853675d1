#pragma once

// Punctured genus-0 curves over a number field and their generalized
// Jacobian profiles, by residue-field unit ranks and by orbit counting.

#include <functional>
#include <optional>

#include "rosc/relative.hpp"

namespace rosc {

struct PunctureOrbit {
  std::optional<KPoly> relative_poly;  // empty: the point at infinity
  NumberField residue_field;
  int degree = 1;
  bool at_infinity() const { return !relative_poly.has_value(); }
};

struct PuncturedCurve {
  NumberField base;
  SSpec s_spec;
  std::vector<PunctureOrbit> orbits;
  std::string label;
  std::string shape;  // free-form note, e.g. "X_{1,q}"

  int geometric_count() const {
    int n = 0;
    for (auto& o : orbits) n += o.degree;
    return n;
  }
  bool has_infinity() const {
    for (auto& o : orbits)
      if (o.at_infinity()) return true;
    return false;
  }
  KPoly finite_divisor() const {
    KPoly d = KPoly::constant(base.element(Rat(1)));
    for (auto& o : orbits)
      if (!o.at_infinity()) d = d * *o.relative_poly;
    return d;
  }
};

using ResidueFieldProvider = std::function<NumberField(const NumberField&, const KPoly&)>;

inline NumberField default_residue_field(const NumberField& base, const KPoly& f) { return absolute_field(base, f); }

inline std::vector<PunctureOrbit> puncture_orbits(const NumberField& base, const KPoly& divisor, bool include_infinity,
                                                  const ResidueFieldProvider& provider = default_residue_field) {
  std::vector<PunctureOrbit> out;
  if (divisor.degree() >= 1) {
    for (auto& g : factor_over(base, divisor)) {
      NumberField L = g.degree() == 1 ? base : provider(base, g);
      if (L.degree() != base.degree() * g.degree())
        throw Error(Errc::RelativeFactorizationFailed, "residue field degree mismatch", kpoly_string(g));
      out.push_back({g, L, g.degree()});
    }
  }
  if (include_infinity) out.push_back({std::nullopt, base, 1});
  return out;
}

inline PuncturedCurve make_curve(const NumberField& base, const SSpec& S, const KPoly& divisor, bool include_infinity,
                                 std::string label = {}, const ResidueFieldProvider& provider = default_residue_field) {
  PuncturedCurve c{base, S, puncture_orbits(base, divisor, include_infinity, provider), std::move(label), {}};
  if (c.geometric_count() < 2) throw Error(Errc::InvalidArgument, "a punctured curve needs at least two geometric punctures");
  return c;
}

struct OrbitProfile {
  int degree;
  Signature residue_signature;
  int s_unit_rank;
  int places_above_S;
  bool at_infinity;
};

struct PlaceCount {
  std::string place;
  int orbits;
};

struct GenJacobianProfile {
  int dim = 0;
  int rank = 0;
  int galois_orbits = 0;
  std::vector<OrbitProfile> per_orbit;
  std::vector<PlaceCount> place_counts;  // filled by the orbit form only
};

inline GenJacobianProfile jacobian_profile(const PuncturedCurve& c) {
  GenJacobianProfile p;
  p.dim = c.geometric_count() - 1;
  p.galois_orbits = static_cast<int>(c.orbits.size());
  int sum = 0;
  for (auto& o : c.orbits) {
    int s = s_unit_rank(o.residue_field, c.s_spec);
    sum += s;
    p.per_orbit.push_back({o.degree, o.residue_field.signature(), s, places_above(o.residue_field, c.s_spec), o.at_infinity()});
  }
  p.rank = sum - s_unit_rank(c.base, c.s_spec);
  return p;
}

// reduces a polynomial over K modulo the prime given by (p, h), h | g mod p
inline FqPoly reduce_at_prime(const KPoly& u, const std::shared_ptr<const FqContext>& ctx) {
  std::vector<Fq> v;
  for (const auto& a : u.coefficients()) {
    FpPoly r;
    if (!reduce_mod_p(a.poly(), ctx->p, r))
      throw Error(Errc::IndexObstruction, "puncture coefficient not integral at " + std::to_string(ctx->p), coeff_list(a.poly()));
    v.push_back(Fq(r, ctx));
  }
  return FqPoly(std::move(v));
}

// Galois orbits of the punctures counted per place. Finite places: each
// orbit contributes the number of irreducible factors of its polynomial over
// the residue field of the place. Infinite places: residue-field signatures.
inline GenJacobianProfile jacobian_profile_orbit_form(const PuncturedCurve& c) {
  GenJacobianProfile prof;
  prof.dim = c.geometric_count() - 1;
  prof.galois_orbits = static_cast<int>(c.orbits.size());
  int rank = -(prof.galois_orbits - 1);
  for (long p : c.s_spec.primes) {
    auto sp = splitting_profile(c.base, p);
    for (std::size_t k = 0; k < sp.factors.size(); ++k) {
      auto ctx = make_fq(sp.factors[k]);
      int count = 0;
      for (auto& o : c.orbits) {
        if (o.at_infinity()) {
          ++count;
          continue;
        }
        FqPoly u = reduce_at_prime(*o.relative_poly, ctx);
        if (u.degree() != o.degree || poly_gcd(u, u.derivative()).degree() > 0)
          throw Error(Errc::IndexObstruction, "puncture orbit not squarefree modulo a prime above " + std::to_string(p),
                      kpoly_string(*o.relative_poly));
        count += count_irreducible_factors(u, ctx->order());
      }
      prof.place_counts.push_back({"p=" + std::to_string(p) + ",f=" + std::to_string(ctx->f) + ",#" + std::to_string(k), count});
      rank += count - 1;
    }
  }
  // sum over real places of #orbits, and over complex places
  int r1K = c.base.r1(), r2K = c.base.r2();
  int real_total = 0, complex_total = 0;
  for (auto& o : c.orbits) {
    const auto& L = o.residue_field;
    complex_total += r2K * o.degree;
    real_total += L.r1() + L.r2() - r2K * o.degree;
  }
  if (r1K) prof.place_counts.push_back({"real(" + std::to_string(r1K) + " places, total)", real_total});
  if (r2K) prof.place_counts.push_back({"complex(" + std::to_string(r2K) + " places, total)", complex_total});
  rank += real_total - r1K + complex_total - r2K;
  prof.rank = rank;
  for (auto& o : c.orbits)
    prof.per_orbit.push_back({o.degree, o.residue_field.signature(), -1, -1, o.at_infinity()});
  return prof;
}

// element syntax: "a/b" (rational) or "[c0,c1,...]" (polynomial in the generator)
inline NfElem parse_element(const NumberField& K, const std::string& s) {
  if (s.find('[') != std::string::npos || s.find(',') != std::string::npos) return K.element(parse_qpoly_list(s));
  return K.element(parse_rat(s));
}

inline bool is_s_unit(const NumberField& K, const SSpec& S, const NfElem& a) {
  if (is_zero(a)) return false;
  Rat n = K.norm(a);
  if (!is_smooth_over(n.get_num(), S.primes) || !is_smooth_over(n.get_den(), S.primes)) return false;
  QPoly cp = K.charpoly(a);
  for (const auto& c : cp.coefficients())
    if (!is_smooth_over(c.get_den(), S.primes)) return false;
  return true;
}

inline std::optional<Int> exact_root(const Int& n, unsigned long q) {
  if (n < 0 && q % 2 == 0) return std::nullopt;
  Int a = abs(n), r;
  if (!mpz_root(r.get_mpz_t(), a.get_mpz_t(), q)) return std::nullopt;
  return n < 0 ? Int(-r) : r;
}

// root test on x^q - alpha; returns a qth root when one exists in K
inline std::optional<NfElem> qth_root(const NumberField& K, const NfElem& alpha, long q) {
  if (alpha.is_rational() && K.degree() == 1) {
    Rat a = alpha.rational();
    auto n = exact_root(a.get_num(), q), d = exact_root(a.get_den(), q);
    if (!n || !d) return std::nullopt;
    return K.element(make_rat(*n, *d));
  }
  // cheap negative test at split primes
  for (long p = 3; p < 400; p = next_prime(p)) {
    if (p == q || K.poly_discriminant() % p == 0) continue;
    auto sp = splitting_profile(K, p);
    for (auto& h : sp.factors) {
      auto ctx = make_fq(h);
      Int size = ctx->order();
      if ((size - 1) % q != 0) continue;
      FpPoly r;
      if (!reduce_mod_p(alpha.poly(), static_cast<std::uint64_t>(p), r)) continue;
      Fq a(r, ctx);
      if (is_zero(a)) continue;
      if (!(field_pow(a, (size - 1) / q) == Fq(1))) return std::nullopt;
    }
  }
  KPoly f = KPoly::monomial(K.element(Rat(1)), static_cast<std::size_t>(q)) - KPoly::constant(alpha);
  for (auto& g : factor_over(K, f))
    if (g.degree() == 1) return NfElem() - g[0];
  return std::nullopt;
}

inline QPoly cyclotomic_prime(long q) {
  std::vector<Rat> v(static_cast<std::size_t>(q), Rat(1));
  return QPoly(std::move(v));
}

inline PuncturedCurve build_x_alpha_q(const NumberField& base, const SSpec& S, const NfElem& alpha, long q,
                                      const ResidueFieldProvider& provider = default_residue_field) {
  if (!is_prime(q)) throw Error(Errc::QNotPrime, std::to_string(q) + " is not prime");
  if (!is_s_unit(base, S, alpha)) throw Error(Errc::NotAnSUnit, "alpha is not an S-unit of " + base.label(), coeff_list(alpha.poly()));
  bool power = qth_root(base, alpha, q).has_value();
  KPoly div = power ? lift_to(base, cyclotomic_prime(q))
                    : KPoly::monomial(base.element(Rat(1)), static_cast<std::size_t>(q)) - KPoly::constant(alpha);
  std::string a = alpha.is_rational() ? rat_string(alpha.rational()) : coeff_list(alpha.poly());
  auto c = make_curve(base, S, div, false, "X_{" + a + "," + std::to_string(q) + "}", provider);
  c.shape = power ? "X_{1,q}" : "X_{alpha,q}";
  return c;
}

}  // namespace rosc
