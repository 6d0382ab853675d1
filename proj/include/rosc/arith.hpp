#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "rosc/errors.hpp"

namespace rosc {

using Int = mpz_class;
using Rat = mpq_class;

inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

inline bool is_prime(long n) { return is_prime(Int(n)); }

inline long next_prime(long n) {
  long p = n + 1;
  while (!is_prime(p)) ++p;
  return p;
}

// multiplicity of p in n, n != 0
inline int valuation(Int n, long p) {
  if (n == 0) throw Error(Errc::InvalidArgument, "valuation of zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline int valuation(const Rat& r, long p) {
  return valuation(Int(r.get_num()), p) - valuation(Int(r.get_den()), p);
}

// strips all primes of S from n, returns the cofactor
inline Int strip_primes(Int n, const std::vector<long>& primes) {
  if (n < 0) n = -n;
  for (long p : primes)
    while (n != 0 && n % p == 0) n /= p;
  return n;
}

inline bool is_smooth_over(const Int& n, const std::vector<long>& primes) {
  return n != 0 && strip_primes(n, primes) == 1;
}

inline std::vector<long> prime_factors(Int n) {
  std::vector<long> out;
  if (n < 0) n = -n;
  for (long p = 2; n > 1; ++p) {
    if (Int(p) * p > n) {
      out.push_back(n.get_si());
      break;
    }
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  return out;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

inline Int mod_nonneg(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

inline Int ipow(const Int& b, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline Int ceil_div(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Int floor_div(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

// gmpxx leaves Rat(n, d) unreduced
inline Rat make_rat(const Int& n, const Int& d) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

// "n" or "n/d"
inline std::string rat_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rat parse_rat(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw Error(Errc::InvalidArgument, "bad rational '" + s + "'");
  r.canonicalize();
  return r;
}

// multiplicative order of a mod m, gcd(a, m) = 1
inline std::uint64_t mult_order(std::uint64_t a, std::uint64_t m) {
  a %= m;
  std::uint64_t x = a, k = 1;
  while (x != 1 % m) {
    x = mulmod(x, a, m);
    ++k;
  }
  return k;
}

}  // namespace rosc
