#pragma once

// Dense univariate polynomials, coefficients in ascending degree order.
// T must default-construct to a context-free zero, construct from long,
// and provide + - * / == and is_zero(T).

#include <algorithm>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rosc/arith.hpp"

namespace rosc {

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }
inline bool is_zero(const Int& r) { return sgn(r) == 0; }

template <class T>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<T> c) : c_(std::move(c)) { trim(); }
  Polynomial(std::initializer_list<T> c) : c_(c) { trim(); }

  static Polynomial constant(T c) { return Polynomial(std::vector<T>{std::move(c)}); }
  static Polynomial monomial(T c, std::size_t deg) {
    std::vector<T> v(deg + 1);
    v[deg] = std::move(c);
    return Polynomial(std::move(v));
  }
  static Polynomial x() { return monomial(T(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::size_t size() const { return c_.size(); }
  const T& operator[](std::size_t i) const { return c_[i]; }
  T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : T{}; }
  const T& leading() const { return c_.back(); }
  std::span<const T> coefficients() const { return c_; }
  const std::vector<T>& vec() const { return c_; }
  bool is_one() const { return c_.size() == 1 && c_[0] == T(1); }

  void set(std::size_t i, T v) {
    if (i >= c_.size()) c_.resize(i + 1);
    c_[i] = std::move(v);
    trim();
  }

  T operator()(const T& x) const {
    T r{};
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
  }

  // evaluation at an element of another ring S that accepts T via conversion
  template <class S, class Conv>
  S eval_as(const S& x, Conv conv) const {
    S r{};
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + conv(c_[i]);
    return r;
  }

  Polynomial derivative() const {
    std::vector<T> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * T(static_cast<long>(i)));
    return Polynomial(std::move(d));
  }

  Polynomial monic() const {
    if (c_.empty()) return *this;
    T inv = T(1) / c_.back();
    std::vector<T> v(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] = c_[i] * inv;
    return Polynomial(std::move(v));
  }

  Polynomial compose(const Polynomial& g) const {
    Polynomial r;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * g + constant(c_[i]);
    return r;
  }

  Polynomial operator-() const {
    std::vector<T> v(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] = T{} - c_[i];
    return Polynomial(std::move(v));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<T> v(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) + b.coeff(i);
    return Polynomial(std::move(v));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<T> v(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) - b.coeff(i);
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<T> v(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (rosc_is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(const T& s, const Polynomial& a) {
    std::vector<T> v(a.c_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * a.c_[i];
    return Polynomial(std::move(v));
  }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (!(a.c_[i] == b.c_[i])) return false;
    return true;
  }

  // field division with remainder
  friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw Error(Errc::ZeroPolynomial, "division by zero polynomial");
    if (a.degree() < b.degree()) return {Polynomial{}, a};
    std::vector<T> r = a.c_;
    std::vector<T> q(a.c_.size() - b.c_.size() + 1);
    T inv = T(1) / b.c_.back();
    for (std::size_t k = q.size(); k-- > 0;) {
      T t = r[k + b.c_.size() - 1] * inv;
      q[k] = t;
      if (rosc_is_zero(t)) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[k + j] = r[k + j] - t * b.c_[j];
    }
    r.resize(b.c_.size() - 1);
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
  }
  friend Polynomial operator%(const Polynomial& a, const Polynomial& b) { return divmod(a, b).second; }
  friend Polynomial operator/(const Polynomial& a, const Polynomial& b) { return divmod(a, b).first; }

 private:
  static bool rosc_is_zero(const T& t) {
    using rosc::is_zero;
    return is_zero(t);
  }
  void trim() {
    while (!c_.empty() && rosc_is_zero(c_.back())) c_.pop_back();
  }
  std::vector<T> c_;
};

template <class T>
Polynomial<T> poly_gcd(Polynomial<T> a, Polynomial<T> b) {
  while (!b.is_zero()) {
    Polynomial<T> r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// returns (g, s, t) with s*a + t*b = g monic
template <class T>
struct XGcd {
  Polynomial<T> g, s, t;
};

template <class T>
XGcd<T> poly_xgcd(const Polynomial<T>& a, const Polynomial<T>& b) {
  Polynomial<T> r0 = a, r1 = b;
  Polynomial<T> s0 = Polynomial<T>::constant(T(1)), s1;
  Polynomial<T> t0, t1 = Polynomial<T>::constant(T(1));
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Polynomial<T> s2 = s0 - q * s1;
    Polynomial<T> t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  T inv = T(1) / r0.leading();
  return {inv * r0, inv * s0, inv * t0};
}

template <class T>
Polynomial<T> powmod(Polynomial<T> base, Int e, const Polynomial<T>& m) {
  Polynomial<T> r = Polynomial<T>::constant(T(1)) % m;
  base = base % m;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = (r * base) % m;
    e >>= 1;
    if (e > 0) base = (base * base) % m;
  }
  return r;
}

using QPoly = Polynomial<Rat>;
using ZPoly = Polynomial<Int>;

inline QPoly to_qpoly(const ZPoly& f) {
  std::vector<Rat> v;
  for (const auto& c : f.coefficients()) v.emplace_back(c);
  return QPoly(std::move(v));
}

inline QPoly qpoly(std::initializer_list<long> c) {
  std::vector<Rat> v;
  for (long x : c) v.emplace_back(x);
  return QPoly(std::move(v));
}

inline ZPoly zpoly(std::initializer_list<long> c) {
  std::vector<Int> v;
  for (long x : c) v.emplace_back(x);
  return ZPoly(std::move(v));
}

// clears denominators and content; sign makes leading coefficient positive
inline ZPoly primitive_part(const QPoly& f) {
  if (f.is_zero()) return {};
  Int l = 1;
  for (const auto& c : f.coefficients()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  std::vector<Int> v;
  Int g = 0;
  for (const auto& c : f.coefficients()) {
    Int z = Int(c * l);
    v.push_back(z);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
  }
  if (f.leading() < 0) g = -g;
  for (auto& z : v) z /= g;
  return ZPoly(std::move(v));
}

// exact quotient over Z if b divides a
inline bool zpoly_divides(const ZPoly& b, const ZPoly& a, ZPoly* quotient = nullptr) {
  auto [q, r] = divmod(to_qpoly(a), to_qpoly(b));
  if (!r.is_zero()) return false;
  std::vector<Int> v;
  for (const auto& c : q.coefficients()) {
    if (c.get_den() != 1) return false;
    v.push_back(c.get_num());
  }
  if (quotient) *quotient = ZPoly(std::move(v));
  return true;
}

// Euclidean resultant over Q, Res(a, b) = lc(a)^deg b * prod b(roots of a)
inline Rat resultant(QPoly a, QPoly b) {
  if (a.is_zero() || b.is_zero()) return 0;
  Rat res = 1;
  while (true) {
    int da = a.degree(), db = b.degree();
    if (db == 0) {
      Rat p = 1;
      for (int i = 0; i < da; ++i) p *= b[0];
      return res * p;
    }
    if (da < db) {
      if ((da % 2) && (db % 2)) res = -res;
      std::swap(a, b);
      continue;
    }
    QPoly r = a % b;
    if (r.is_zero()) return 0;
    // Res(a,b) = (-1)^{da db} lc(b)^{da - dr} Res(b, r)
    if ((da % 2) && (db % 2)) res = -res;
    Rat lb = b.leading();
    for (int i = 0; i < da - r.degree(); ++i) res *= lb;
    a = std::move(b);
    b = std::move(r);
  }
}

// (-1)^{n(n-1)/2} res(f, f') / lc(f)
inline Rat discriminant(const QPoly& f) {
  int n = f.degree();
  Rat r = resultant(f, f.derivative()) / f.leading();
  if ((static_cast<long>(n) * (n - 1) / 2) % 2) r = -r;
  return r;
}

template <class T>
std::string poly_string(const Polynomial<T>& f, const std::string& var = "x") {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = f.size(); i-- > 0;) {
    if (is_zero(f[i])) continue;
    std::ostringstream cs;
    cs << f[i];
    std::string c = cs.str();
    bool neg = !c.empty() && c[0] == '-';
    if (neg) c = c.substr(1);
    if (!first) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    first = false;
    if (i == 0 || c != "1") os << (c.find_first_of("+- ") != std::string::npos ? "(" + c + ")" : c);
    if (i > 0) {
      if (c != "1") os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

// parses "x^3 - 2", "1,0,-2" (descending is not supported), or "[c0,c1,...]"
inline QPoly parse_qpoly_list(const std::string& s) {
  std::vector<Rat> v;
  std::string tok;
  for (char ch : s + ",") {
    if (ch == '[' || ch == ']' || ch == ' ') continue;
    if (ch == ',') {
      if (!tok.empty()) v.push_back(parse_rat(tok));
      tok.clear();
    } else {
      tok += ch;
    }
  }
  return QPoly(std::move(v));
}

}  // namespace rosc
