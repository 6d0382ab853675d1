#pragma once

// Factorization of rational polynomials: squarefree decomposition plus
// Zassenhaus (modular factorization, Hensel lifting, subset recombination).

#include <algorithm>
#include <numeric>
#include <set>

#include "rosc/finite_field.hpp"

namespace rosc {

namespace detail {

inline ZPoly fp_to_z(const FpPoly& f) {
  std::vector<Int> v;
  for (const auto& c : f.coefficients()) v.emplace_back(static_cast<unsigned long>(c.v));
  return ZPoly(std::move(v));
}

inline ZPoly zmod(const ZPoly& f, const Int& m) {
  std::vector<Int> v;
  for (const auto& c : f.coefficients()) v.push_back(mod_nonneg(c, m));
  return ZPoly(std::move(v));
}

inline ZPoly zsymmetric(const ZPoly& f, const Int& m) {
  Int half = m / 2;
  std::vector<Int> v;
  for (const auto& c : f.coefficients()) {
    Int r = mod_nonneg(c, m);
    if (r > half) r -= m;
    v.push_back(r);
  }
  return ZPoly(std::move(v));
}

inline FpPoly to_fp(const ZPoly& f, std::uint64_t p) { return reduce_mod_p(f, p); }

// lifts f = g h (mod p), g and h monic and coprime mod p, to mod p^k
inline std::pair<ZPoly, ZPoly> hensel_pair(const ZPoly& f, ZPoly g, ZPoly h, std::uint64_t p, int k) {
  Int P(static_cast<unsigned long>(p));
  Int pk = ipow(P, static_cast<unsigned long>(k));
  auto xg = poly_xgcd(to_fp(g, p), to_fp(h, p));
  FpPoly s = xg.s, t = xg.t;
  Int m = P;
  for (int i = 1; i < k; ++i) {
    ZPoly e = zmod(f - g * h, pk);
    std::vector<Int> ev;
    for (const auto& c : e.coefficients()) ev.push_back(c / m);
    FpPoly ebar = to_fp(ZPoly(std::move(ev)), p);
    auto [q, dh] = divmod(ebar * s, to_fp(h, p));
    FpPoly dg = ebar * t + q * to_fp(g, p);
    g = zmod(g + m * fp_to_z(dg), pk);
    h = zmod(h + m * fp_to_z(dh), pk);
    m *= P;
  }
  return {g, h};
}

inline std::vector<ZPoly> hensel_multi(const ZPoly& f, const std::vector<FpPoly>& facs, std::uint64_t p, int k) {
  if (facs.size() == 1) return {zmod(f, ipow(Int(static_cast<unsigned long>(p)), static_cast<unsigned long>(k)))};
  std::size_t mid = facs.size() / 2;
  std::vector<FpPoly> a(facs.begin(), facs.begin() + mid), b(facs.begin() + mid, facs.end());
  FpPoly pa = FpPoly::constant(Fp(1, p)), pb = pa;
  for (auto& x : a) pa = pa * x;
  for (auto& x : b) pb = pb * x;
  auto [ga, gb] = hensel_pair(f, fp_to_z(pa), fp_to_z(pb), p, k);
  auto ra = hensel_multi(ga, a, p, k);
  auto rb = hensel_multi(gb, b, p, k);
  ra.insert(ra.end(), rb.begin(), rb.end());
  return ra;
}

// degrees realisable as sums of sub-multisets
inline std::set<int> subset_degrees(const std::vector<int>& degs) {
  std::set<int> s{0};
  for (int d : degs) {
    std::set<int> t = s;
    for (int x : s) t.insert(x + d);
    s = std::move(t);
  }
  return s;
}

}  // namespace detail

// factors a monic squarefree integer polynomial into monic irreducibles
inline std::vector<ZPoly> zassenhaus_monic(const ZPoly& g) {
  int n = g.degree();
  if (n <= 1) return {g};
  Int lc = g.leading();
  std::set<int> feasible;
  for (int i = 0; i <= n; ++i) feasible.insert(i);
  std::uint64_t best_p = 0;
  std::vector<FpPoly> best;
  int tried = 0;
  for (long p = 3; tried < 8 && p < 2000; p = next_prime(p)) {
    FpPoly gp = reduce_mod_p(g, static_cast<std::uint64_t>(p));
    if (gp.degree() != n) continue;
    if (poly_gcd(gp, gp.derivative()).degree() > 0) continue;
    ++tried;
    std::vector<FpPoly> facs;
    for (auto& fm : factor_fp(gp)) facs.push_back(fm.factor);
    if (facs.size() == 1) return {g};
    std::vector<int> degs;
    for (auto& h : facs) degs.push_back(h.degree());
    std::set<int> sd = detail::subset_degrees(degs), inter;
    std::set_intersection(feasible.begin(), feasible.end(), sd.begin(), sd.end(), std::inserter(inter, inter.begin()));
    feasible = std::move(inter);
    if (feasible.size() <= 2) return {g};
    if (best.empty() || facs.size() < best.size()) {
      best = std::move(facs);
      best_p = static_cast<std::uint64_t>(p);
    }
  }
  (void)lc;
  // coefficient bound for any factor: 2^n * ||g||_2
  Int norm2 = 0;
  for (const auto& c : g.coefficients()) norm2 += c * c;
  Int root;
  mpz_sqrt(root.get_mpz_t(), norm2.get_mpz_t());
  Int bound = 2 * ipow(Int(2), static_cast<unsigned long>(n)) * (root + 1);
  Int P(static_cast<unsigned long>(best_p)), pk = P;
  int k = 1;
  while (pk <= bound) {
    pk *= P;
    ++k;
  }
  std::vector<ZPoly> lifted = detail::hensel_multi(g, best, best_p, k);
  std::vector<ZPoly> result;
  ZPoly rest = g;
  std::vector<std::size_t> idx(lifted.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::size_t s = 1;
  while (2 * s <= idx.size()) {
    bool found = false;
    std::vector<std::size_t> comb(s);
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
      int deg = 0;
      for (auto c : comb) deg += lifted[idx[c]].degree();
      if (feasible.count(deg)) {
        ZPoly cand = ZPoly::constant(Int(1));
        for (auto c : comb) cand = detail::zmod(cand * lifted[idx[c]], pk);
        cand = detail::zsymmetric(cand, pk);
        ZPoly quot;
        bool cheap_ok = rest[0] == 0 || (cand[0] != 0 && Int(rest[0] % cand[0]) == 0);
        if (cheap_ok && detail::zsymmetric(cand, pk).degree() == deg && zpoly_divides(cand, rest, &quot)) {
          result.push_back(cand);
          rest = quot;
          std::vector<std::size_t> keep;
          for (std::size_t i = 0; i < idx.size(); ++i)
            if (std::find(comb.begin(), comb.end(), i) == comb.end()) keep.push_back(idx[i]);
          idx = std::move(keep);
          found = true;
          break;
        }
      }
      // next combination
      int i = static_cast<int>(s) - 1;
      while (i >= 0 && comb[i] == idx.size() - s + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (std::size_t j = i + 1; j < s; ++j) comb[j] = comb[j - 1] + 1;
    }
    if (!found) ++s;
  }
  result.push_back(rest);
  return result;
}

struct QFactor {
  QPoly factor;  // monic irreducible
  int multiplicity;
};

// Yun's algorithm over Q, returns monic squarefree parts with multiplicities
inline std::vector<QFactor> squarefree_q(const QPoly& f0) {
  std::vector<QFactor> out;
  QPoly f = f0.monic();
  if (f.degree() < 1) return out;
  QPoly d = f.derivative();
  QPoly a = poly_gcd(f, d);
  QPoly b = f / a, c = d / a - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    QPoly g = poly_gcd(b, c);
    if (g.degree() > 0) out.push_back({g, i});
    b = b / g;
    c = c / g - b.derivative();
    ++i;
  }
  return out;
}

// x -> x/lc transform making a primitive integer polynomial monic
inline ZPoly make_monic_integral(const ZPoly& f, Int* lc_out = nullptr) {
  Int lc = f.leading();
  int n = f.degree();
  // coefficient i gets lc^{n-1-i}
  std::vector<Int> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = i == n ? Int(1) : f[i] * ipow(lc, static_cast<unsigned long>(n - 1 - i));
  if (lc_out) *lc_out = lc;
  return ZPoly(std::move(w));
}

inline std::vector<QFactor> factor_q(const QPoly& f) {
  if (f.is_zero()) throw Error(Errc::ZeroPolynomial, "cannot factor zero");
  std::vector<QFactor> out;
  for (auto& sf : squarefree_q(f)) {
    ZPoly z = primitive_part(sf.factor);
    Int lc;
    ZPoly m = make_monic_integral(z, &lc);
    for (auto& h : zassenhaus_monic(m)) {
      // h(lc x) up to content is a factor of z
      QPoly hq = to_qpoly(h).compose(QPoly{Rat(0), Rat(lc)});
      out.push_back({hq.monic(), sf.multiplicity});
    }
  }
  std::sort(out.begin(), out.end(), [](const QFactor& a, const QFactor& b) {
    if (a.factor.degree() != b.factor.degree()) return a.factor.degree() < b.factor.degree();
    for (std::size_t i = a.factor.size(); i-- > 0;)
      if (a.factor[i] != b.factor[i]) return a.factor[i] < b.factor[i];
    return a.multiplicity < b.multiplicity;
  });
  return out;
}

inline bool is_irreducible_q(const QPoly& f) {
  auto fs = factor_q(f);
  return fs.size() == 1 && fs[0].multiplicity == 1;
}

// rational roots of an integer polynomial, by |r| ascending, positive first
inline std::vector<Rat> rational_roots(const ZPoly& f) {
  std::vector<Rat> out;
  for (auto& qf : factor_q(to_qpoly(f)))
    if (qf.factor.degree() == 1) out.push_back(-qf.factor[0]);
  std::sort(out.begin(), out.end(), [](const Rat& a, const Rat& b) {
    Rat aa = abs(a), bb = abs(b);
    if (aa != bb) return aa < bb;
    return a > b;
  });
  return out;
}

}  // namespace rosc
