#pragma once

#include <optional>
#include <vector>

#include "rosc/arith.hpp"

namespace rosc {

using RatMatrix = std::vector<std::vector<Rat>>;

// solves A x = b over Q; returns one solution (free variables zero) or nullopt
inline std::optional<std::vector<Rat>> solve_linear(RatMatrix a, std::vector<Rat> b) {
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    std::swap(b[piv], b[r]);
    Rat inv = 1 / a[r][c];
    for (auto& x : a[r]) x *= inv;
    b[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rat m = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= m * a[r][j];
      b[i] -= m * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<Rat> x(cols, Rat(0));
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

inline int rank_of(RatMatrix a) {
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  int r = 0;
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(r) < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      Rat m = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= m * a[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace rosc
