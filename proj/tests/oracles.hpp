#pragma once

// Test-only oracles, independent of the library's computation paths.

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "mdimlab/bowen.hpp"

namespace oracles {

// Scans a 1-d map by dense sampling and reports the lap count and the slope
// magnitudes seen, independently of any symbolic composition.
struct LapScan {
  int laps = 0;
  double min_abs_slope = 0.0;
  double max_abs_slope = 0.0;
};

inline LapScan lap_scan(const std::function<double(double)>& f, double lo,
                        double hi, int samples_per_lap_hint) {
  int n = samples_per_lap_hint;
  double h = (hi - lo) / n;
  std::vector<double> slope(n);
  for (int i = 0; i < n; ++i) {
    double a = lo + i * h, b = lo + (i + 1) * h;
    slope[i] = (f(b) - f(a)) / h;
  }
  LapScan out;
  out.laps = 1;
  out.min_abs_slope = out.max_abs_slope = std::abs(slope[0]);
  for (int i = 1; i < n; ++i) {
    if (std::abs(slope[i] - slope[i - 1]) > 1e-6 * (1.0 + std::abs(slope[i])))
      ++out.laps;
    out.min_abs_slope = std::min(out.min_abs_slope, std::abs(slope[i]));
    out.max_abs_slope = std::max(out.max_abs_slope, std::abs(slope[i]));
  }
  return out;
}

// Exhaustive maximum separated count by bitmask enumeration (<= 22 points).
inline int brute_max_separated(const mdimlab::DistMatrix& d, double eps) {
  const std::size_t m = d.size();
  int best = 0;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (!(mask >> i & 1u)) continue;
      for (std::size_t j = i + 1; j < m && ok; ++j)
        if ((mask >> j & 1u) && d[i][j] <= eps) ok = false;
    }
    if (ok) best = std::max(best, std::popcount(mask));
  }
  return best;
}

// Exhaustive minimum spanning count (<= 20 points).
inline int brute_min_spanning(const mdimlab::DistMatrix& d, double eps) {
  const std::size_t m = d.size();
  int best = static_cast<int>(m);
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    if (std::popcount(mask) >= best) continue;
    bool covers = true;
    for (std::size_t x = 0; x < m && covers; ++x) {
      bool hit = false;
      for (std::size_t y = 0; y < m && !hit; ++y)
        if ((mask >> y & 1u) && (x == y || d[y][x] < eps)) hit = true;
      covers = hit;
    }
    if (covers) best = std::popcount(mask);
  }
  return best;
}

// Exhaustive minimum cover by diameter-< eps cells (<= 10 points): brute
// force over assignments of points to cells.
inline bool cover_feasible(const mdimlab::DistMatrix& d, double eps,
                           std::vector<int>& cell, std::size_t v, int cells) {
  if (v == d.size()) return true;
  int used = 0;
  for (std::size_t u = 0; u < v; ++u) used = std::max(used, cell[u] + 1);
  for (int c = 0; c < std::min(cells, used + 1); ++c) {
    bool ok = true;
    for (std::size_t u = 0; u < v && ok; ++u)
      if (cell[u] == c && d[u][v] >= eps) ok = false;
    if (!ok) continue;
    cell[v] = c;
    if (cover_feasible(d, eps, cell, v + 1, cells)) return true;
  }
  cell[v] = -1;
  return false;
}

inline int brute_min_cover(const mdimlab::DistMatrix& d, double eps) {
  for (int cells = 1; cells <= static_cast<int>(d.size()); ++cells) {
    std::vector<int> cell(d.size(), -1);
    if (cover_feasible(d, eps, cell, 0, cells)) return cells;
  }
  return static_cast<int>(d.size());
}

// Direct partial sums of the construction endpoints, kept separate from the
// library helpers on purpose.
inline double geometric_endpoint(double r, int n) {
  long double c = 1.0L - std::pow(3.0L, -static_cast<long double>(r));
  long double acc = 0.0L;
  for (int i = 0; i < n; ++i)
    acc += c * std::pow(3.0L, -static_cast<long double>(i) * r);
  return static_cast<double>(acc);
}

inline double basel_endpoint(int n) {
  const long double pi = std::numbers::pi_v<long double>;
  long double acc = 0.0L;
  for (int i = 1; i <= n; ++i)
    acc += 6.0L / (pi * pi * static_cast<long double>(i) * i);
  return static_cast<double>(acc);
}

// True distance matrix has no value exactly equal to eps (keeps the strict
// inequality conventions unambiguous in tests).
inline bool tie_free(const mdimlab::DistMatrix& d, double eps) {
  for (const auto& row : d)
    for (double v : row)
      if (v == eps || v == 2.0 * eps) return false;
  return true;
}

}  // namespace oracles
