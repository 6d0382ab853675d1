#pragma once

#include <optional>
#include <vector>

#include "rosc/polynomial.hpp"

namespace rosc {

inline std::vector<QPoly> sturm_sequence(const QPoly& f) {
  std::vector<QPoly> s{f, f.derivative()};
  while (!s.back().is_zero()) {
    QPoly r = s[s.size() - 2] % s.back();
    if (r.is_zero()) break;
    s.push_back(-r);
  }
  return s;
}

namespace detail {
inline int sign_changes(const std::vector<int>& signs) {
  int n = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++n;
    last = s;
  }
  return n;
}
}  // namespace detail

// distinct real roots in (a, b]; nullopt bounds mean infinity
inline int sturm_count(const QPoly& f, std::optional<Rat> a = std::nullopt, std::optional<Rat> b = std::nullopt) {
  if (f.degree() < 1) return 0;
  auto seq = sturm_sequence(f);
  auto signs_at = [&](const std::optional<Rat>& x, bool plus) {
    std::vector<int> v;
    for (auto& p : seq) {
      if (x) {
        v.push_back(sgn(p(*x)));
      } else {
        int s = sgn(p.leading());
        if (!plus && p.degree() % 2) s = -s;
        v.push_back(s);
      }
    }
    return detail::sign_changes(v);
  };
  return signs_at(a, false) - signs_at(b, true);
}

struct Signature {
  int r1 = 0, r2 = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

inline Signature signature_of(const QPoly& f) {
  int r1 = sturm_count(f);
  return {r1, (f.degree() - r1) / 2};
}

}  // namespace rosc
