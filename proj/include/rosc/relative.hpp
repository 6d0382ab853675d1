#pragma once

// Relative extensions: subfield towers, absolute fields via Trager norms,
// factorization over a number field, and CM-subfield detection.

#include <optional>

#include "rosc/linalg.hpp"
#include "rosc/number_field.hpp"

namespace rosc {

// writes a in the basis 1, e, ..., e^{m-1} of the subfield Q(e); nullopt if a is not there
inline std::optional<QPoly> express_in_subfield(const NfElem& a, const NfElem& e, int m) {
  const auto& mod = a.modulus() ? a.modulus() : e.modulus();
  int n = mod ? mod->g.degree() : 1;
  RatMatrix A(n, std::vector<Rat>(m));
  NfElem pw(QPoly::constant(Rat(1)), mod);
  for (int k = 0; k < m; ++k) {
    for (int r = 0; r < n; ++r) A[r][k] = pw.poly().coeff(r);
    pw = pw * e;
  }
  std::vector<Rat> b(n);
  for (int r = 0; r < n; ++r) b[r] = a.poly().coeff(r);
  auto x = solve_linear(A, b);
  if (!x) return std::nullopt;
  return QPoly(*x);
}

inline NfElem eval_in(const QPoly& f, const NfElem& at) {
  NfElem r(QPoly{}, at.modulus());
  for (std::size_t i = f.size(); i-- > 0;) r = r * at + NfElem(f[i]);
  return r;
}

class SubfieldTower {
 public:
  SubfieldTower() = default;
  // embeddings[i] is the image of chain[i]'s generator, as a polynomial in chain[i+1]'s generator
  SubfieldTower(std::vector<NumberField> chain, std::vector<QPoly> embeddings)
      : chain_(std::move(chain)), emb_(std::move(embeddings)) {
    if (chain_.empty() || chain_[0].degree() != 1) throw Error(Errc::InvalidEmbedding, "tower must start at Q");
    if (emb_.size() + 1 != chain_.size()) throw Error(Errc::InvalidEmbedding, "one embedding per consecutive pair");
    for (std::size_t i = 0; i + 1 < chain_.size(); ++i) {
      int a = chain_[i].degree(), b = chain_[i + 1].degree();
      if (a >= b || b % a) throw Error(Errc::InvalidEmbedding, "degrees must strictly increase and divide", chain_[i + 1].label());
      NfElem img = chain_[i + 1].element(emb_[i]);
      NfElem val = eval_in(to_qpoly(chain_[i].defining_poly()), img);
      if (!is_zero(val))
        throw Error(Errc::InvalidEmbedding, "embedding does not annihilate the defining polynomial", chain_[i].label() + " -> " + chain_[i + 1].label());
    }
  }

  std::size_t size() const { return chain_.size(); }
  const NumberField& operator[](std::size_t i) const { return chain_[i]; }
  const NumberField& top() const { return chain_.back(); }
  const std::vector<NumberField>& members() const { return chain_; }
  const std::vector<QPoly>& embeddings() const { return emb_; }

  std::optional<std::size_t> index_of(const std::string& label) const {
    for (std::size_t i = 0; i < chain_.size(); ++i)
      if (chain_[i].label() == label) return i;
    return std::nullopt;
  }
  std::optional<std::size_t> index_of(const NumberField& F) const {
    for (std::size_t i = 0; i < chain_.size(); ++i)
      if (chain_[i] == F) return i;
    return std::nullopt;
  }

  // image of chain[i]'s generator inside chain[j], i <= j
  NfElem generator_image(std::size_t i, std::size_t j) const {
    if (i == j) return chain_[j].gen();
    return eval_in(emb_[i], generator_image(i + 1, j));
  }

  NfElem embed(std::size_t i, std::size_t j, const NfElem& a) const {
    if (i == j) return chain_[j].element(a.poly());
    return eval_in(a.poly(), generator_image(i, j));
  }

  // a in chain[j] written in chain[i], i <= j
  std::optional<NfElem> descend(std::size_t j, std::size_t i, const NfElem& a) const {
    if (i == j) return chain_[i].element(a.poly());
    NfElem aj = chain_[j].element(a.poly());
    auto c = express_in_subfield(aj, generator_image(i, j), chain_[i].degree());
    if (!c) return std::nullopt;
    return chain_[i].element(*c);
  }

  KPoly embed_poly(std::size_t i, std::size_t j, const KPoly& f) const {
    std::vector<NfElem> v;
    for (const auto& c : f.coefficients()) v.push_back(embed(i, j, c));
    return KPoly(std::move(v));
  }

  std::optional<KPoly> descend_poly(std::size_t j, std::size_t i, const KPoly& f) const {
    std::vector<NfElem> v;
    for (const auto& c : f.coefficients()) {
      auto d = descend(j, i, c);
      if (!d) return std::nullopt;
      v.push_back(*d);
    }
    return KPoly(std::move(v));
  }

 private:
  std::vector<NumberField> chain_;
  std::vector<QPoly> emb_;
};

inline KPoly lift_to(const NumberField& K, const QPoly& f) {
  std::vector<NfElem> v;
  for (const auto& c : f.coefficients()) v.push_back(K.element(c));
  return KPoly(std::move(v));
}

inline KPoly kpoly_from(const NumberField& K, const std::vector<QPoly>& coeffs) {
  std::vector<NfElem> v;
  for (const auto& c : coeffs) v.push_back(K.element(c));
  return KPoly(std::move(v));
}

// all coefficients rational?
inline std::optional<QPoly> rational_part(const KPoly& f) {
  std::vector<Rat> v;
  for (const auto& c : f.coefficients()) {
    if (!c.is_rational()) return std::nullopt;
    v.push_back(c.rational());
  }
  return QPoly(std::move(v));
}

inline std::string kpoly_string(const KPoly& f) {
  std::string s = "[";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? ";" : "") + coeff_list(f[i].poly());
  return s + "]";
}

namespace detail {

// N(x) = Norm_{K/Q} f(x - s*theta), f monic over K
inline QPoly shifted_norm(const NumberField& K, const KPoly& f, long s) {
  int deg = K.degree() * f.degree();
  std::vector<Rat> xs, ys;
  NfElem st = K.element(QPoly{Rat(0), Rat(s)});
  for (int k = 0; k <= deg; ++k) {
    NfElem at = K.element(Rat(k)) - st;
    xs.emplace_back(k);
    ys.push_back(K.norm(f(at)));
  }
  return interpolate(xs, ys);
}

inline bool squarefree_q(const QPoly& f) { return poly_gcd(f, f.derivative()).degree() == 0; }

// monic integral ZPoly with the same splitting field: x -> x/c
inline ZPoly integralize_monic(const QPoly& f0) {
  QPoly f = f0.monic();
  Int c = 1;
  for (const auto& a : f.coefficients()) mpz_lcm(c.get_mpz_t(), c.get_mpz_t(), a.get_den_mpz_t());
  int n = f.degree();
  std::vector<Int> v(n + 1);
  for (int i = 0; i <= n; ++i) {
    Rat t = f[i] * Rat(ipow(c, static_cast<unsigned long>(n - i)));
    v[i] = t.get_num();
  }
  return ZPoly(std::move(v));
}

}  // namespace detail

inline NumberField absolute_field(const NumberField& base, const KPoly& rel0, std::string label = {}) {
  if (rel0.degree() < 1) throw Error(Errc::InvalidArgument, "relative polynomial must have positive degree");
  KPoly rel = rel0.monic();
  if (base.degree() == 1) {
    auto q = rational_part(rel);
    if (!q) {
      // elements of Q written in a degree-1 modulus are reduced to constants already
      throw Error(Errc::InvalidArgument, "non-rational coefficient over Q");
    }
    ZPoly z = detail::integralize_monic(*q);
    if (rel.degree() > 1 && !is_irreducible_q(to_qpoly(z)))
      throw Error(Errc::RelativeReducible, "relative polynomial is reducible over Q", poly_string(*q));
    return NumberField::make_unchecked(z, std::move(label));
  }
  for (long s = 0; s <= 32; ++s) {
    QPoly N = detail::shifted_norm(base, rel, s);
    if (!detail::squarefree_q(N)) continue;
    ZPoly z = detail::integralize_monic(N);
    if (!irreducible_mod_some_p(z) && !is_irreducible_q(to_qpoly(z)))
      throw Error(Errc::RelativeReducible, "relative polynomial is reducible over " + base.label(), kpoly_string(rel0));
    return NumberField::make_unchecked(z, std::move(label));
  }
  throw Error(Errc::ShiftExhausted, "no shift in [0,32] gives a squarefree norm");
}

inline KPoly kpoly_gcd(const KPoly& a, const KPoly& b) { return poly_gcd(a, b); }

// monic irreducible factors of a squarefree polynomial over K, sorted by degree
inline std::vector<KPoly> factor_over(const NumberField& K, const KPoly& f0) {
  if (f0.is_zero()) throw Error(Errc::ZeroPolynomial, "cannot factor zero");
  KPoly f = f0.monic();
  if (f.degree() < 1) return {};
  if (poly_gcd(f, f.derivative()).degree() > 0) throw Error(Errc::NotSquarefree, "polynomial is not squarefree over " + K.label(), kpoly_string(f0));
  std::vector<KPoly> out;
  if (f.degree() == 1) {
    out.push_back(f);
  } else if (K.degree() == 1) {
    auto q = rational_part(f);
    for (auto& qf : factor_q(*q)) out.push_back(lift_to(K, qf.factor));
  } else {
    bool done = false;
    for (long s = 0; s <= 32 && !done; ++s) {
      QPoly N = detail::shifted_norm(K, f, s);
      if (!detail::squarefree_q(N)) continue;
      KPoly shift{K.element(QPoly{Rat(0), Rat(s)}), K.element(Rat(1))};  // x + s*theta
      for (auto& qf : factor_q(N)) {
        KPoly g = poly_gcd(f, lift_to(K, qf.factor).compose(shift));
        if (g.degree() > 0) out.push_back(g);
      }
      done = true;
    }
    if (!done) throw Error(Errc::ShiftExhausted, "no shift in [0,32] gives a squarefree norm");
  }
  int total = 0;
  for (auto& g : out) total += g.degree();
  if (total != f.degree()) throw Error(Errc::RelativeFactorizationFailed, "factor degrees do not add up", kpoly_string(f0));
  std::stable_sort(out.begin(), out.end(), [](const KPoly& a, const KPoly& b) { return a.degree() < b.degree(); });
  return out;
}

struct Subfield {
  NumberField field;
  QPoly image;  // image of the subfield generator in F
};

struct CmVerdict {
  bool found = false;
  bool parity_shortcut = false;
  std::optional<NumberField> cm_field, real_field;
  QPoly cm_image;    // generator of the CM field inside F
  QPoly real_in_cm;  // generator of the totally real field inside the CM field
};

inline void validate_subfields(const NumberField& F, const std::vector<Subfield>& list) {
  for (const auto& s : list) {
    if (F.degree() % s.field.degree())
      throw Error(Errc::InvalidEmbedding, "subfield degree does not divide field degree", s.field.label());
    NfElem v = eval_in(to_qpoly(s.field.defining_poly()), F.element(s.image));
    if (!is_zero(v)) throw Error(Errc::InvalidEmbedding, "image does not satisfy the subfield polynomial", s.field.label());
  }
}

inline CmVerdict detect_cm_subfield(const NumberField& F, std::vector<Subfield> list) {
  validate_subfields(F, list);
  CmVerdict v;
  if (F.degree() % 2) {
    v.parity_shortcut = true;
    return v;
  }
  bool has_self = false, has_q = false;
  for (auto& s : list) {
    if (s.field.degree() == F.degree()) has_self = true;
    if (s.field.degree() == 1) has_q = true;
  }
  if (!has_self) list.push_back({F, QPoly::x()});
  if (!has_q) list.push_back({rationals(), QPoly()});
  for (const auto& E : list) {
    if (!E.field.totally_complex() || E.field.degree() % 2) continue;
    NfElem e = F.element(E.image);
    for (const auto& E0 : list) {
      if (!E0.field.totally_real() || 2 * E0.field.degree() != E.field.degree()) continue;
      auto c = express_in_subfield(F.element(E0.image), e, E.field.degree());
      if (!c) continue;
      v.found = true;
      v.cm_field = E.field;
      v.real_field = E0.field;
      v.cm_image = E.image;
      v.real_in_cm = *c;
      return v;
    }
  }
  return v;
}

}  // namespace rosc
