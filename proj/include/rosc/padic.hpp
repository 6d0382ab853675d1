#pragma once

// Fixed-precision p-adic integers, logarithms and log matrices.

#include <string>
#include <vector>

#include "rosc/number_field.hpp"

namespace rosc {

struct PAdicInt {
  long p = 0;
  int N = 0;  // absolute precision
  Int r;      // in [0, p^N)

  PAdicInt() = default;
  PAdicInt(long p_, int N_, const Int& v) : p(p_), N(N_) { r = mod_nonneg(v, modulus()); }

  Int modulus() const { return ipow(Int(p), static_cast<unsigned long>(N)); }
  bool is_zero() const { return r == 0; }
  int valuation() const { return r == 0 ? N : rosc::valuation(r, p); }
  bool is_unit() const { return N > 0 && r % p != 0; }

  friend PAdicInt operator+(const PAdicInt& a, const PAdicInt& b) { return {a.p, std::min(a.N, b.N), a.r + b.r}; }
  friend PAdicInt operator-(const PAdicInt& a, const PAdicInt& b) { return {a.p, std::min(a.N, b.N), a.r - b.r}; }
  friend PAdicInt operator*(const PAdicInt& a, const PAdicInt& b) { return {a.p, std::min(a.N, b.N), a.r * b.r}; }
  PAdicInt operator-() const { return {p, N, -r}; }
  friend bool operator==(const PAdicInt& a, const PAdicInt& b) {
    int n = std::min(a.N, b.N);
    Int m = ipow(Int(a.p), static_cast<unsigned long>(n));
    return a.p == b.p && mod_nonneg(a.r - b.r, m) == 0;
  }
  PAdicInt at(int n) const { return {p, std::min(n, N), r}; }
};

inline Int inverse_mod(const Int& a, const Int& m) {
  Int r;
  if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t())) throw Error(Errc::InvalidArgument, "not invertible");
  return r;
}

inline PAdicInt padic_from_rat(const Rat& x, long p, int N) {
  if (x.get_den() % p == 0) throw Error(Errc::InvalidArgument, "denominator divisible by " + std::to_string(p));
  PAdicInt out;
  out.p = p;
  out.N = N;
  Int m = out.modulus();
  out.r = mod_nonneg(x.get_num() * inverse_mod(x.get_den(), m), m);
  return out;
}

// a / b; loses v_p(b) digits of precision
inline PAdicInt padic_div(const PAdicInt& a, const PAdicInt& b) {
  if (b.is_zero()) throw Error(Errc::PrecisionExhausted, "division by a p-adic zero at this precision");
  int v = b.valuation();
  if (a.valuation() < v) throw Error(Errc::InvalidArgument, "quotient is not integral");
  int n = std::min(a.N, b.N) - v;
  if (n <= 0) throw Error(Errc::PrecisionExhausted, "no precision left after division");
  Int pv = ipow(Int(a.p), static_cast<unsigned long>(v));
  Int m = ipow(Int(a.p), static_cast<unsigned long>(n));
  return {a.p, n, (a.r / pv) * inverse_mod(mod_nonneg(b.r / pv, m), m)};
}

inline PAdicInt padic_pow(const PAdicInt& a, const Int& e) {
  PAdicInt out = a;
  Int m = a.modulus();
  if (e < 0) {
    Int ne = -e;
    mpz_powm(out.r.get_mpz_t(), inverse_mod(a.r, m).get_mpz_t(), ne.get_mpz_t(), m.get_mpz_t());
  } else {
    mpz_powm(out.r.get_mpz_t(), a.r.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  }
  return out;
}

// log(x) = sum (-1)^{k+1} (x-1)^k / k, exact modulo p^N for x = 1 mod p.
// Terms are computed with guard digits so the division by k loses nothing.
inline PAdicInt padic_log(const PAdicInt& x) {
  if (x.p == 2) throw Error(Errc::EvenPrimeUnsupported, "p = 2 is not supported by padic_log");
  if (x.N <= 0 || mod_nonneg(x.r - 1, Int(x.p)) != 0) throw Error(Errc::NotOneUnit, "argument is not 1 mod p");
  const long p = x.p;
  const int N = x.N;
  PAdicInt z = x - PAdicInt(p, N, Int(1));
  if (z.is_zero()) return {p, N, Int(0)};
  int vz = z.valuation();
  int kmax = 1;
  for (int k = 1;; ++k) {
    // k*vz - v_p(k) >= N for all later k once k*vz - log_p(k) >= N
    double lg = std::log(double(k)) / std::log(double(p));
    if (k * vz - lg >= N) break;
    kmax = k;
  }
  int guard = 0;
  for (long k = p; k <= kmax; k *= p) ++guard;
  Int mg = ipow(Int(p), static_cast<unsigned long>(N + guard));
  Int m = ipow(Int(p), static_cast<unsigned long>(N));
  Int zp = z.r, pw = 1, sum = 0;
  for (int k = 1; k <= kmax; ++k) {
    pw = mod_nonneg(pw * zp, mg);
    int vk = valuation(Int(k), p);
    if (k * vz - vk >= N) continue;
    Int pv = ipow(Int(p), static_cast<unsigned long>(vk));
    Int unit = Int(k) / pv;
    Int term = (pw / pv) * inverse_mod(unit, m);
    sum += (k % 2) ? term : Int(-term);
  }
  return {p, N, sum};
}

struct LogVector {
  std::vector<PAdicInt> coords;
  std::string provenance;
};

// Completions of K at the primes above p, all required to be Q_p.
struct SplitCompletions {
  long p;
  int N;
  std::vector<Int> roots;  // roots of the defining polynomial mod p^N
};

inline SplitCompletions split_completions(const NumberField& K, long p, int N) {
  SplitCompletions sc{p, N, {}};
  const ZPoly& f = K.defining_poly();
  if (K.degree() == 1) {
    sc.roots.push_back(mod_nonneg(-f.coeff(0), ipow(Int(p), static_cast<unsigned long>(N))));
    return sc;
  }
  if (K.poly_discriminant() % p == 0) throw Error(Errc::NonSplitCompletion, std::to_string(p) + " divides the discriminant");
  auto fac = factor_mod_p(f, p);
  for (const auto& fm : fac.factors)
    if (fm.factor.degree() != 1) throw Error(Errc::NonSplitCompletion, "completion of degree > 1 above " + std::to_string(p));
  ZPoly df = f.derivative();
  Int m = ipow(Int(p), static_cast<unsigned long>(N));
  for (const auto& fm : fac.factors) {
    Int r = mod_nonneg(-Int(static_cast<unsigned long>(fm.factor.coeff(0).v)), Int(p));
    // Newton lifting
    for (int prec = 1; prec < N; prec *= 2) {
      Int fr = mod_nonneg(f(r), m), dr = mod_nonneg(df(r), m);
      r = mod_nonneg(r - fr * inverse_mod(dr, m), m);
    }
    sc.roots.push_back(r);
  }
  std::sort(sc.roots.begin(), sc.roots.end());
  return sc;
}

inline PAdicInt embed(const NfElem& a, const Int& root, long p, int N) {
  PAdicInt acc(p, N, Int(0));
  PAdicInt t(p, N, root);
  const auto& c = a.poly().coefficients();
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + padic_from_rat(c[i], p, N);
  return acc;
}

// (1/(p-1)) log(g^(p-1)) in each completion
inline LogVector unit_log(const NfElem& g, const SplitCompletions& sc, const std::string& provenance = {}) {
  LogVector lv{{}, provenance};
  for (const auto& root : sc.roots) {
    PAdicInt x;
    try {
      x = embed(g, root, sc.p, sc.N);
    } catch (const Error&) {
      throw Error(Errc::GeneratorNotCoprime, "generator has a denominator divisible by " + std::to_string(sc.p), provenance);
    }
    if (!x.is_unit()) throw Error(Errc::GeneratorNotCoprime, "generator is not a unit at " + std::to_string(sc.p), provenance);
    PAdicInt l = padic_log(padic_pow(x, Int(sc.p - 1)));
    lv.coords.push_back(padic_div(l, PAdicInt(sc.p, sc.N, Int(sc.p - 1))));
  }
  return lv;
}

inline std::vector<LogVector> unit_log_matrix(const NumberField& K, const std::vector<NfElem>& gens, long p, int N) {
  auto sc = split_completions(K, p, N);
  std::vector<LogVector> rows;
  for (std::size_t i = 0; i < gens.size(); ++i) rows.push_back(unit_log(gens[i], sc, "g" + std::to_string(i)));
  return rows;
}

// Row reduction over Z/p^M choosing a pivot of least valuation each time.
struct PAdicEchelon {
  long p = 0;
  int M = 0;
  std::vector<std::vector<Int>> rows;
  std::vector<int> pivot_cols, pivot_vals;
  int loss = 0;
};

inline PAdicEchelon padic_echelon(const std::vector<LogVector>& m) {
  PAdicEchelon e;
  if (m.empty()) throw Error(Errc::InvalidArgument, "empty log matrix");
  e.p = m[0].coords.empty() ? 0 : m[0].coords[0].p;
  e.M = 1 << 30;
  std::size_t width = m[0].coords.size();
  for (const auto& r : m) {
    if (r.coords.size() != width) throw Error(Errc::InvalidArgument, "ragged log matrix");
    for (const auto& c : r.coords) e.M = std::min(e.M, c.N);
  }
  if (width == 0) {
    e.M = 0;
    return e;
  }
  if (e.M <= 0) throw Error(Errc::PrecisionExhausted, "log matrix carries no precision");
  Int mod = ipow(Int(e.p), static_cast<unsigned long>(e.M));
  std::vector<std::vector<Int>> a;
  for (const auto& r : m) {
    std::vector<Int> row;
    for (const auto& c : r.coords) row.push_back(mod_nonneg(c.r, mod));
    a.push_back(row);
  }
  std::vector<bool> used_row(a.size(), false), used_col(width, false);
  for (;;) {
    int best = e.M;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (used_row[i]) continue;
      for (std::size_t j = 0; j < width; ++j) {
        if (used_col[j] || a[i][j] == 0) continue;
        int v = valuation(a[i][j], e.p);
        if (v < best) best = v, bi = i, bj = j;
      }
    }
    if (best >= e.M) break;
    used_row[bi] = used_col[bj] = true;
    Int pv = ipow(Int(e.p), static_cast<unsigned long>(best));
    Int inv = inverse_mod(a[bi][bj] / pv, mod);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (used_row[i] || a[i][bj] == 0) continue;
      Int f = mod_nonneg((a[i][bj] / pv) * inv, mod);
      for (std::size_t j = 0; j < width; ++j) a[i][j] = mod_nonneg(a[i][j] - f * a[bi][j], mod);
    }
    e.rows.push_back(a[bi]);
    e.pivot_cols.push_back(static_cast<int>(bj));
    e.pivot_vals.push_back(best);
    e.loss = std::max(e.loss, best);
  }
  return e;
}

struct ClosureEstimate {
  int dim = 0;
  bool certified = false;
  std::vector<int> pivot_valuations;
  int precision = 0;
};

inline ClosureEstimate closure_dimension(const std::vector<LogVector>& m) {
  auto e = padic_echelon(m);
  ClosureEstimate c;
  c.dim = static_cast<int>(e.pivot_vals.size());
  c.pivot_valuations = e.pivot_vals;
  c.precision = e.M;
  c.certified = true;
  for (int v : e.pivot_vals)
    if (2 * v >= e.M) c.certified = false;
  return c;
}

// is v in the Z_p-span of the echelon rows, modulo p^(M - loss)?
inline bool in_log_span(const PAdicEchelon& e, const LogVector& v) {
  if (e.M == 0) return true;
  Int mod = ipow(Int(e.p), static_cast<unsigned long>(e.M));
  std::vector<Int> t;
  for (const auto& c : v.coords) t.push_back(mod_nonneg(c.r, mod));
  for (std::size_t k = 0; k < e.rows.size(); ++k) {
    int c = e.pivot_cols[k];
    if (t[c] == 0) continue;
    int vt = valuation(t[c], e.p);
    if (vt < e.pivot_vals[k]) {
      if (vt < e.M - e.loss) return false;
      continue;
    }
    Int pv = ipow(Int(e.p), static_cast<unsigned long>(e.pivot_vals[k]));
    Int f = mod_nonneg((t[c] / pv) * inverse_mod(e.rows[k][c] / pv, mod), mod);
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = mod_nonneg(t[j] - f * e.rows[k][j], mod);
  }
  Int keep = ipow(Int(e.p), static_cast<unsigned long>(e.M - e.loss));
  for (const auto& x : t)
    if (mod_nonneg(x, keep) != 0) return false;
  return true;
}

}  // namespace rosc
