#pragma once

// Prime-field elements and polynomial factorization over F_p and F_{p^f}.

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <vector>

#include "rosc/polynomial.hpp"

namespace rosc {

// p == 0 marks a context-free integer constant that adopts the modulus of
// the other operand.
struct Fp {
  std::uint64_t v = 0;
  std::uint64_t p = 0;
  std::int64_t raw = 0;  // only meaningful while p == 0

  Fp() = default;
  Fp(long c) : raw(c) {}
  Fp(std::int64_t c, std::uint64_t mod) : p(mod) {
    std::int64_t r = c % static_cast<std::int64_t>(mod);
    if (r < 0) r += static_cast<std::int64_t>(mod);
    v = static_cast<std::uint64_t>(r);
  }
  static Fp from_int(const Int& c, std::uint64_t mod) {
    Int r = mod_nonneg(c, Int(static_cast<unsigned long>(mod)));
    Fp e;
    e.p = mod;
    e.v = r.get_ui();
    return e;
  }

  Fp with(std::uint64_t mod) const { return p ? *this : Fp(raw, mod); }

  friend std::uint64_t common(const Fp& a, const Fp& b) { return a.p ? a.p : b.p; }

  friend Fp operator+(const Fp& a, const Fp& b) {
    std::uint64_t m = common(a, b);
    if (!m) return Fp(a.raw + b.raw);
    Fp x = a.with(m), y = b.with(m);
    x.v = (x.v + y.v) % m;
    return x;
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    std::uint64_t m = common(a, b);
    if (!m) return Fp(a.raw - b.raw);
    Fp x = a.with(m), y = b.with(m);
    x.v = (x.v + m - y.v) % m;
    return x;
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    std::uint64_t m = common(a, b);
    if (!m) return Fp(a.raw * b.raw);
    Fp x = a.with(m), y = b.with(m);
    x.v = mulmod(x.v, y.v, m);
    return x;
  }
  friend Fp operator/(const Fp& a, const Fp& b) {
    std::uint64_t m = common(a, b);
    if (!m) {
      if (b.raw == 0 || a.raw % b.raw) throw Error(Errc::InvalidArgument, "inexact division of unreduced constants");
      return Fp(a.raw / b.raw);
    }
    Fp x = a.with(m), y = b.with(m);
    if (y.v == 0) throw Error(Errc::ZeroModP, "division by zero in F_p");
    x.v = mulmod(x.v, powmod(y.v, m - 2, m), m);
    return x;
  }
  friend bool operator==(const Fp& a, const Fp& b) {
    std::uint64_t m = common(a, b);
    if (!m) return a.raw == b.raw;
    return a.with(m).v == b.with(m).v;
  }
  friend std::ostream& operator<<(std::ostream& os, const Fp& a) { return os << (a.p ? static_cast<std::int64_t>(a.v) : a.raw); }
};

inline bool is_zero(const Fp& a) { return a.p ? a.v == 0 : a.raw == 0; }

using FpPoly = Polynomial<Fp>;

inline FpPoly reduce_mod_p(const ZPoly& f, std::uint64_t p) {
  std::vector<Fp> v;
  for (const auto& c : f.coefficients()) v.push_back(Fp::from_int(c, p));
  return FpPoly(std::move(v));
}

// returns false if some denominator is divisible by p
inline bool reduce_mod_p(const QPoly& f, std::uint64_t p, FpPoly& out) {
  std::vector<Fp> v;
  for (const auto& c : f.coefficients()) {
    Fp d = Fp::from_int(c.get_den(), p);
    if (d.v == 0) return false;
    v.push_back(Fp::from_int(c.get_num(), p) / d);
  }
  out = FpPoly(std::move(v));
  return true;
}

inline std::uint64_t modulus_of(const FpPoly& f) { return f.is_zero() ? 0 : f.leading().p; }

// Element of F_p[y]/(h), h monic irreducible over F_p. ctx == nullptr marks
// a context-free constant.
struct FqContext {
  std::uint64_t p;
  FpPoly h;
  int f;
  Int order() const { return ipow(Int(static_cast<unsigned long>(p)), static_cast<unsigned long>(f)); }
};

struct Fq {
  FpPoly v;
  std::shared_ptr<const FqContext> ctx;
  long raw = 0;

  Fq() = default;
  Fq(long c) : raw(c) {}
  Fq(FpPoly x, std::shared_ptr<const FqContext> c) : ctx(std::move(c)) { v = x % ctx->h; }

  Fq with(const std::shared_ptr<const FqContext>& c) const {
    if (ctx) return *this;
    return Fq(FpPoly::constant(Fp(raw, c->p)), c);
  }
  friend const std::shared_ptr<const FqContext>& common(const Fq& a, const Fq& b) { return a.ctx ? a.ctx : b.ctx; }
  friend Fq operator+(const Fq& a, const Fq& b) {
    auto c = common(a, b);
    if (!c) return Fq(a.raw + b.raw);
    return Fq(a.with(c).v + b.with(c).v, c);
  }
  friend Fq operator-(const Fq& a, const Fq& b) {
    auto c = common(a, b);
    if (!c) return Fq(a.raw - b.raw);
    return Fq(a.with(c).v - b.with(c).v, c);
  }
  friend Fq operator*(const Fq& a, const Fq& b) {
    auto c = common(a, b);
    if (!c) return Fq(a.raw * b.raw);
    return Fq(a.with(c).v * b.with(c).v, c);
  }
  friend Fq operator/(const Fq& a, const Fq& b) {
    auto c = common(a, b);
    if (!c) {
      if (b.raw == 0 || a.raw % b.raw) throw Error(Errc::InvalidArgument, "inexact division of unreduced constants");
      return Fq(a.raw / b.raw);
    }
    Fq y = b.with(c);
    if (y.v.is_zero()) throw Error(Errc::ZeroModP, "division by zero in F_q");
    auto xg = poly_xgcd(y.v, c->h);
    return Fq(a.with(c).v * xg.s, c);
  }
  friend bool operator==(const Fq& a, const Fq& b) {
    auto c = common(a, b);
    if (!c) return a.raw == b.raw;
    return a.with(c).v == b.with(c).v;
  }
  friend std::ostream& operator<<(std::ostream& os, const Fq& a) {
    if (!a.ctx) return os << a.raw;
    return os << "(" << poly_string(a.v, "y") << ")";
  }
};

inline bool is_zero(const Fq& a) { return a.ctx ? a.v.is_zero() : a.raw == 0; }

using FqPoly = Polynomial<Fq>;

template <class T>
T field_pow(T b, Int e) {
  T r(1);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = r * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return r;
}

struct FactorMultiplicity {
  FpPoly factor;
  int multiplicity;
};

// square-free decomposition over F_p; input must have a nonzero leading coefficient
inline std::vector<FactorMultiplicity> squarefree_decomposition(const FpPoly& f0) {
  std::vector<FactorMultiplicity> out;
  std::uint64_t p = modulus_of(f0);
  FpPoly f = f0.monic();
  if (f.degree() < 1) return out;
  auto pth_root = [p](const FpPoly& g) {
    std::vector<Fp> v;
    for (std::size_t i = 0; i < g.size(); i += p) v.push_back(g[i]);
    return FpPoly(std::move(v));
  };
  auto merge = [&out](const FpPoly& fac, int m) {
    if (fac.degree() < 1) return;
    out.push_back({fac, m});
  };
  FpPoly d = f.derivative();
  if (d.is_zero()) {
    for (auto& fm : squarefree_decomposition(pth_root(f))) merge(fm.factor, fm.multiplicity * static_cast<int>(p));
    return out;
  }
  FpPoly c = poly_gcd(f, d);
  FpPoly w = f / c;
  int i = 1;
  while (w.degree() > 0) {
    FpPoly y = poly_gcd(w, c);
    merge((w / y).monic(), i);
    ++i;
    w = y;
    c = c / y;
  }
  if (c.degree() > 0)
    for (auto& fm : squarefree_decomposition(pth_root(c.monic()))) merge(fm.factor, fm.multiplicity * static_cast<int>(p));
  return out;
}

// distinct-degree factorization of a monic squarefree polynomial over a
// field of size q; returns (product of all degree-d factors, d)
template <class T>
std::vector<std::pair<Polynomial<T>, int>> distinct_degree(Polynomial<T> f, const Int& q) {
  std::vector<std::pair<Polynomial<T>, int>> out;
  using P = Polynomial<T>;
  P x = P::x();
  P h = x % f;
  for (int d = 1; f.degree() >= 2 * d; ++d) {
    h = powmod(h, q, f);
    P g = poly_gcd(h - x, f);
    if (g.degree() > 0) {
      out.push_back({g, d});
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.push_back({f.monic(), f.degree()});
  return out;
}

// Cantor-Zassenhaus equal-degree splitting over F_p, all factors of degree d
inline void equal_degree(const FpPoly& f, int d, std::mt19937_64& rng, std::vector<FpPoly>& out) {
  if (f.degree() == d) {
    out.push_back(f.monic());
    return;
  }
  std::uint64_t p = modulus_of(f);
  Int q = ipow(Int(static_cast<unsigned long>(p)), static_cast<unsigned long>(d));
  while (true) {
    std::vector<Fp> a(f.degree());
    for (auto& c : a) c = Fp(static_cast<std::int64_t>(rng() % p), p);
    FpPoly r(a);
    if (r.degree() < 1) continue;
    FpPoly b;
    if (p == 2) {
      FpPoly t = r, s = r;
      for (int i = 1; i < d; ++i) {
        s = (s * s) % f;
        t = t + s;
      }
      b = t;
    } else {
      b = powmod(r, (q - 1) / 2, f) - FpPoly::constant(Fp(1, p));
    }
    FpPoly g = poly_gcd(b, f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      equal_degree(g, d, rng, out);
      equal_degree(f / g, d, rng, out);
      return;
    }
  }
}

// full factorization over F_p into monic irreducibles with multiplicities
inline std::vector<FactorMultiplicity> factor_fp(const FpPoly& f) {
  std::vector<FactorMultiplicity> out;
  std::mt19937_64 rng(0x5eed);
  std::uint64_t p = modulus_of(f);
  for (auto& sf : squarefree_decomposition(f)) {
    for (auto& [g, d] : distinct_degree(sf.factor, Int(static_cast<unsigned long>(p)))) {
      std::vector<FpPoly> parts;
      equal_degree(g, d, rng, parts);
      for (auto& h : parts) out.push_back({h, sf.multiplicity});
    }
  }
  std::sort(out.begin(), out.end(), [](const FactorMultiplicity& a, const FactorMultiplicity& b) {
    if (a.factor.degree() != b.factor.degree()) return a.factor.degree() < b.factor.degree();
    if (a.multiplicity != b.multiplicity) return a.multiplicity < b.multiplicity;
    for (std::size_t i = a.factor.size(); i-- > 0;)
      if (a.factor[i].v != b.factor[i].v) return a.factor[i].v < b.factor[i].v;
    return false;
  });
  return out;
}

struct ModPFactorization {
  std::uint64_t p;
  std::vector<FactorMultiplicity> factors;
  std::vector<std::pair<int, int>> degree_multiplicity;  // sorted (degree, multiplicity)
  int count() const { return static_cast<int>(factors.size()); }
};

inline ModPFactorization factor_mod_p(const ZPoly& f, long p) {
  if (p < 2 || !is_prime(p)) throw Error(Errc::InvalidArgument, "modulus is not prime");
  FpPoly g = reduce_mod_p(f, static_cast<std::uint64_t>(p));
  if (g.is_zero()) throw Error(Errc::ZeroModP, "polynomial vanishes mod " + std::to_string(p));
  ModPFactorization r{static_cast<std::uint64_t>(p), {}, {}};
  if (g.degree() == 0) return r;
  r.factors = factor_fp(g);
  for (auto& fm : r.factors) r.degree_multiplicity.push_back({fm.factor.degree(), fm.multiplicity});
  return r;
}

inline std::shared_ptr<const FqContext> make_fq(const FpPoly& h) {
  return std::make_shared<const FqContext>(FqContext{modulus_of(h), h.monic(), h.degree()});
}

inline Fq fq_from(const Fp& c, const std::shared_ptr<const FqContext>& ctx) { return Fq(FpPoly::constant(c), ctx); }

// number of irreducible factors over F_q of a monic squarefree polynomial
inline int count_irreducible_factors(const FqPoly& f, const Int& q) {
  int n = 0;
  for (auto& [g, d] : distinct_degree(f.monic(), q)) n += g.degree() / d;
  return n;
}

}  // namespace rosc
