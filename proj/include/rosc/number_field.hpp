#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rosc/factor.hpp"
#include "rosc/sturm.hpp"

namespace rosc {

struct FieldModulus {
  QPoly g;  // monic
};

// Element of Q[y]/(g). A null modulus marks a rational constant.
class NfElem {
 public:
  NfElem() = default;
  NfElem(long c) : v_(QPoly::constant(Rat(c))) {}
  NfElem(const Rat& c) : v_(QPoly::constant(c)) {}
  NfElem(QPoly v, std::shared_ptr<const FieldModulus> m) : m_(std::move(m)) { v_ = m_ ? v % m_->g : std::move(v); }

  const QPoly& poly() const { return v_; }
  const std::shared_ptr<const FieldModulus>& modulus() const { return m_; }
  bool is_rational() const { return v_.degree() <= 0; }
  Rat rational() const { return v_.coeff(0); }

  friend const std::shared_ptr<const FieldModulus>& common(const NfElem& a, const NfElem& b) { return a.m_ ? a.m_ : b.m_; }
  friend NfElem operator+(const NfElem& a, const NfElem& b) { return NfElem(a.v_ + b.v_, common(a, b)); }
  friend NfElem operator-(const NfElem& a, const NfElem& b) { return NfElem(a.v_ - b.v_, common(a, b)); }
  friend NfElem operator*(const NfElem& a, const NfElem& b) { return NfElem(a.v_ * b.v_, common(a, b)); }
  NfElem inverse() const {
    if (v_.is_zero()) throw Error(Errc::InvalidArgument, "inverse of zero field element");
    if (!m_ || v_.degree() == 0) return NfElem(QPoly::constant(Rat(1) / v_[0]), m_);
    auto xg = poly_xgcd(v_, m_->g);
    return NfElem(xg.s, m_);
  }
  friend NfElem operator/(const NfElem& a, const NfElem& b) { return a * b.inverse(); }
  friend bool operator==(const NfElem& a, const NfElem& b) { return a.v_ == b.v_; }
  friend std::ostream& operator<<(std::ostream& os, const NfElem& a) { return os << poly_string(a.v_, "t"); }

 private:
  QPoly v_;
  std::shared_ptr<const FieldModulus> m_;
};

inline bool is_zero(const NfElem& a) { return a.poly().is_zero(); }

using KPoly = Polynomial<NfElem>;

// Newton interpolation through (xs[i], ys[i])
inline QPoly interpolate(const std::vector<Rat>& xs, const std::vector<Rat>& ys) {
  std::size_t n = xs.size();
  std::vector<Rat> dd = ys;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
  QPoly r;
  for (std::size_t i = n; i-- > 0;) r = r * QPoly{-xs[i], Rat(1)} + QPoly::constant(dd[i]);
  return r;
}

class NumberField {
 public:
  NumberField() = default;

  const ZPoly& defining_poly() const { return poly_; }
  int degree() const { return poly_.degree(); }
  Signature signature() const { return sig_; }
  int r1() const { return sig_.r1; }
  int r2() const { return sig_.r2; }
  const Int& poly_discriminant() const { return disc_; }
  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }
  bool is_rational_field() const { return degree() == 1; }
  bool totally_real() const { return sig_.r2 == 0; }
  bool totally_complex() const { return sig_.r1 == 0; }
  const std::shared_ptr<const FieldModulus>& modulus() const { return mod_; }

  NfElem gen() const { return NfElem(QPoly::x(), mod_); }
  NfElem element(const QPoly& v) const { return NfElem(v, mod_); }
  NfElem element(const Rat& c) const { return NfElem(QPoly::constant(c), mod_); }

  // Res(g, a) with g monic
  Rat norm(const NfElem& a) const { return resultant(to_qpoly(poly_), a.poly()); }
  Rat trace(const NfElem& a) const {
    auto cp = charpoly(a);
    return -cp[cp.size() - 2];
  }
  // Res_y(g(y), x - a(y)), monic of degree [F:Q]
  QPoly charpoly(const NfElem& a) const {
    std::vector<Rat> xs, ys;
    QPoly g = to_qpoly(poly_);
    for (int k = 0; k <= degree(); ++k) {
      xs.emplace_back(k);
      ys.push_back(resultant(g, QPoly::constant(Rat(k)) - a.poly()));
    }
    return interpolate(xs, ys);
  }

  friend bool operator==(const NumberField& a, const NumberField& b) { return a.poly_ == b.poly_; }

  static NumberField make_unchecked(const ZPoly& f, std::string label = {}) {
    NumberField F;
    F.poly_ = f;
    QPoly q = to_qpoly(f);
    F.sig_ = signature_of(q);
    if (F.sig_.r1 + 2 * F.sig_.r2 != F.degree()) throw Error(Errc::InvalidArgument, "signature inconsistent with degree");
    Rat d = F.degree() == 1 ? Rat(1) : discriminant(q);
    F.disc_ = d.get_num();
    F.mod_ = std::make_shared<const FieldModulus>(FieldModulus{q});
    F.label_ = label.empty() ? default_label(f) : std::move(label);
    return F;
  }

  static std::string default_label(const ZPoly& f) {
    if (f.degree() == 1) return "Q";
    return "Q[t]/(" + poly_string(f, "t") + ")";
  }

 private:
  ZPoly poly_;
  Signature sig_;
  Int disc_;
  std::string label_;
  std::shared_ptr<const FieldModulus> mod_;
};

inline std::string coeff_list(const ZPoly& f) {
  std::string s = "[";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + f[i].get_str();
  return s + "]";
}

inline std::string coeff_list(const QPoly& f) {
  std::string s = "[";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + rat_string(f[i]);
  return s + "]";
}

// finite-field irreducibility shortcut; true means certainly irreducible
inline bool irreducible_mod_some_p(const ZPoly& f) {
  for (long p = 2; p < 60; p = next_prime(p)) {
    FpPoly g = reduce_mod_p(f, static_cast<std::uint64_t>(p));
    if (g.degree() != f.degree()) continue;
    if (poly_gcd(g, g.derivative()).degree() > 0) continue;
    auto dd = distinct_degree(g.monic(), Int(p));
    if (dd.size() == 1 && dd[0].second == f.degree()) return true;
  }
  return false;
}

inline NumberField parse_number_field(std::vector<Int> coeffs, std::string label = {}) {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  if (coeffs.empty()) throw Error(Errc::ZeroPolynomial, "empty or zero defining polynomial");
  if (coeffs.back() != 1) throw Error(Errc::NotMonic, "leading coefficient must be 1");
  if (coeffs.size() == 1) throw Error(Errc::InvalidArgument, "constant defining polynomial");
  ZPoly f(coeffs);
  if (f.degree() > 1) {
    for (auto& r : rational_roots(f)) {
      QPoly w{-r, Rat(1)};
      throw Error(Errc::Reducible, "defining polynomial has a rational root", poly_string(w));
    }
    if (!irreducible_mod_some_p(f)) {
      auto fs = factor_q(to_qpoly(f));
      if (fs.size() > 1 || fs[0].multiplicity > 1)
        throw Error(Errc::Reducible, "defining polynomial factors over Q", poly_string(fs[0].factor));
    }
  }
  return NumberField::make_unchecked(f, std::move(label));
}

inline NumberField parse_number_field(std::initializer_list<long> c, std::string label = {}) {
  std::vector<Int> v;
  for (long x : c) v.emplace_back(x);
  return parse_number_field(std::move(v), std::move(label));
}

inline NumberField rationals() { return parse_number_field({0, 1}, "Q"); }

inline Signature signature(const NumberField& F) { return F.signature(); }

struct SSpec {
  std::vector<long> primes;  // sorted, distinct

  SSpec() = default;
  SSpec(std::vector<long> ps) : primes(std::move(ps)) {
    std::sort(primes.begin(), primes.end());
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (!is_prime(primes[i])) throw Error(Errc::InvalidArgument, std::to_string(primes[i]) + " is not prime");
      if (i && primes[i] == primes[i - 1]) throw Error(Errc::InvalidArgument, "repeated prime in S0");
    }
  }
  std::size_t size() const { return primes.size(); }
  bool contains(long p) const { return std::binary_search(primes.begin(), primes.end(), p); }
  friend bool operator==(const SSpec&, const SSpec&) = default;
};

struct SplittingProfile {
  long prime = 0;
  std::vector<int> residue_degrees;  // sorted
  bool exact = false;
  std::vector<FpPoly> factors;  // monic irreducible factors of the defining polynomial mod p
  int places() const { return static_cast<int>(residue_degrees.size()); }
};

inline SplittingProfile splitting_profile(const NumberField& F, long p) {
  if (!is_prime(p)) throw Error(Errc::InvalidArgument, std::to_string(p) + " is not prime");
  SplittingProfile sp;
  sp.prime = p;
  if (F.degree() == 1) {
    sp.residue_degrees = {1};
    sp.exact = true;
    sp.factors = {reduce_mod_p(F.defining_poly(), static_cast<std::uint64_t>(p))};
    return sp;
  }
  if (F.poly_discriminant() % p == 0)
    throw Error(Errc::IndexObstruction, std::to_string(p) + " divides disc of " + F.label());
  auto fac = factor_mod_p(F.defining_poly(), p);
  for (auto& fm : fac.factors) {
    sp.residue_degrees.push_back(fm.factor.degree());
    sp.factors.push_back(fm.factor);
  }
  sp.exact = true;
  return sp;
}

inline int s_unit_rank(const NumberField& F, const SSpec& S) {
  int places = 0;
  for (long p : S.primes) places += splitting_profile(F, p).places();
  return F.r1() + F.r2() + places - 1;
}

// places of F above S0 (for reports)
inline int places_above(const NumberField& F, const SSpec& S) {
  int places = 0;
  for (long p : S.primes) places += splitting_profile(F, p).places();
  return places;
}

}  // namespace rosc
