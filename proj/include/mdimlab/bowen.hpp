#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "mdimlab/common.hpp"

namespace mdimlab {

// A metric system exposes: point type `point`, `distance(p, q)` and `step(p)`.
// Interval carriers use doubles with |x - y|; word carriers use the 3-adic
// metric. All counting below runs on explicit candidate vectors.

template <class Sys, class P>
double bowen_distance(const Sys& sys, const P& x, const P& y, int n) {
  if (n < 1) throw PreconditionError("bowen distance needs n >= 1");
  P a = x, b = y;
  double best = sys.distance(a, b);
  for (int t = 1; t < n; ++t) {
    a = sys.step(a);
    b = sys.step(b);
    best = std::max(best, sys.distance(a, b));
  }
  return best;
}

// Pairwise d_n matrix over the candidates, with orbits computed once.
template <class Sys, class P>
std::vector<std::vector<double>> bowen_matrix(const Sys& sys,
                                              const std::vector<P>& pts,
                                              int n) {
  if (n < 1) throw PreconditionError("bowen matrix needs n >= 1");
  const std::size_t m = pts.size();
  std::vector<std::vector<P>> orbit(m);
  for (std::size_t i = 0; i < m; ++i) {
    orbit[i].reserve(n);
    orbit[i].push_back(pts[i]);
    for (int t = 1; t < n; ++t) orbit[i].push_back(sys.step(orbit[i].back()));
  }
  std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double best = 0.0;
      for (int t = 0; t < n; ++t)
        best = std::max(best, sys.distance(orbit[i][t], orbit[j][t]));
      d[i][j] = d[j][i] = best;
    }
  }
  return d;
}

using DistMatrix = std::vector<std::vector<double>>;

namespace detail {

inline std::vector<std::uint64_t> close_masks(const DistMatrix& d, double eps,
                                              bool strict) {
  const std::size_t m = d.size();
  std::vector<std::uint64_t> adj(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && (strict ? d[i][j] < eps : d[i][j] <= eps))
        adj[i] |= std::uint64_t{1} << j;
  return adj;
}

// Explores include/exclude choices; `best` accumulates the global optimum.
// Subtrees that cannot beat `best` are pruned, so `best` ends exact.
inline void mis_bnb(const std::vector<std::uint64_t>& adj, std::uint64_t cand,
                    int depth, int& best) {
  if (cand == 0) { best = std::max(best, depth); return; }
  if (depth + std::popcount(cand) <= best) return;
  int v = std::countr_zero(cand);
  std::uint64_t bit = std::uint64_t{1} << v;
  mis_bnb(adj, cand & ~(adj[v] | bit), depth + 1, best);
  // excluding v only helps when v has close neighbours among the candidates
  if (adj[v] & cand) mis_bnb(adj, cand & ~bit, depth, best);
}

// Branches over the sets covering the hardest uncovered element; `best`
// accumulates the global minimum and every improving completion is explored.
inline void cover_bnb(const std::vector<std::uint64_t>& ball,
                      std::uint64_t uncovered, int used, int& best) {
  if (uncovered == 0) { best = std::min(best, used); return; }
  if (used + 1 >= best) return;  // any completion needs >= 1 more set
  int pick = -1, fewest = 1 << 30;
  for (std::uint64_t rest = uncovered; rest;) {
    int e = std::countr_zero(rest);
    rest &= rest - 1;
    int cnt = 0;
    for (std::size_t y = 0; y < ball.size(); ++y)
      if (ball[y] >> e & 1u) ++cnt;
    if (cnt == 0) return;  // uncoverable
    if (cnt < fewest) { fewest = cnt; pick = e; }
  }
  for (std::size_t y = 0; y < ball.size(); ++y) {
    if (!(ball[y] >> pick & 1u)) continue;
    cover_bnb(ball, uncovered & ~ball[y], used + 1, best);
  }
}

inline bool color_bnb(const std::vector<std::uint64_t>& conflict,
                      std::vector<int>& color, std::size_t v, int limit) {
  if (v == color.size()) return true;
  int used = 0;
  for (std::size_t u = 0; u < v; ++u) used = std::max(used, color[u] + 1);
  for (int c = 0; c < std::min(limit, used + 1); ++c) {
    bool ok = true;
    for (std::size_t u = 0; u < v && ok; ++u)
      if (color[u] == c && (conflict[v] >> u & 1u)) ok = false;
    if (!ok) continue;
    color[v] = c;
    if (color_bnb(conflict, color, v + 1, limit)) return true;
  }
  color[v] = -1;
  return false;
}

}  // namespace detail

// Greedy insertion in ascending candidate order; a deterministic lower bound.
inline int greedy_separated(const DistMatrix& d, double eps) {
  if (d.empty()) throw InputError("empty candidate set");
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < d.size(); ++i) {
    bool ok = true;
    for (std::size_t k : kept)
      if (d[i][k] <= eps) { ok = false; break; }
    if (ok) kept.push_back(i);
  }
  return static_cast<int>(kept.size());
}

// Maximum cardinality of a subset of candidates with pairwise d_n > eps.
// Exact branch-and-bound (maximum independent set of the "close" graph).
inline int max_separated_exact(const DistMatrix& d, double eps) {
  if (d.size() > kExactSeparatedCap)
    throw ResourceError("exact separated count capped at 30 candidates");
  if (d.empty()) throw InputError("empty candidate set");
  auto adj = detail::close_masks(d, eps, /*strict=*/false);  // close: d <= eps
  std::uint64_t all = (std::uint64_t{1} << d.size()) - 1;
  int best = greedy_separated(d, eps);  // warm start tightens the pruning
  detail::mis_bnb(adj, all, 0, best);
  return best;
}

// Minimum cardinality of a subset within d_n-distance < eps of every
// candidate. Exact set-cover branch-and-bound.
inline int min_spanning_exact(const DistMatrix& d, double eps) {
  if (d.size() > kExactSpanningCap)
    throw ResourceError("exact spanning count capped at 25 candidates");
  if (d.empty()) throw InputError("empty candidate set");
  const std::size_t m = d.size();
  std::vector<std::uint64_t> ball(m, 0);
  for (std::size_t y = 0; y < m; ++y) {
    ball[y] |= std::uint64_t{1} << y;
    for (std::size_t x = 0; x < m; ++x)
      if (d[y][x] < eps) ball[y] |= std::uint64_t{1} << x;
  }
  std::uint64_t all = (std::uint64_t{1} << m) - 1;
  int best = static_cast<int>(m) + 1;
  detail::cover_bnb(ball, all, 0, best);
  if (best > static_cast<int>(m)) throw InputError("candidates not spannable");
  return best;
}

// Greedy set cover; a deterministic upper bound with ascending tie-breaks.
inline int greedy_spanning(const DistMatrix& d, double eps) {
  if (d.empty()) throw InputError("empty candidate set");
  const std::size_t m = d.size();
  std::vector<char> covered(m, 0);
  std::size_t remaining = m;
  int used = 0;
  while (remaining > 0) {
    std::size_t best_y = m;
    std::size_t best_gain = 0;
    for (std::size_t y = 0; y < m; ++y) {
      std::size_t gain = 0;
      for (std::size_t x = 0; x < m; ++x)
        if (!covered[x] && (x == y || d[y][x] < eps)) ++gain;
      if (gain > best_gain) { best_gain = gain; best_y = y; }
    }
    if (best_y == m) throw InputError("candidates not spannable");
    for (std::size_t x = 0; x < m; ++x)
      if (!covered[x] && (x == best_y || d[best_y][x] < eps)) {
        covered[x] = 1;
        --remaining;
      }
    ++used;
  }
  return used;
}

// Minimum number of cells of d_n-diameter < eps needed to cover the
// candidates (the grid realization of the cover count). Cells are cliques of
// the strict "close" graph, so this is a minimum clique cover, computed as an
// exact coloring of the conflict graph.
inline int min_cover_exact(const DistMatrix& d, double eps) {
  if (d.size() > kExactCoverCap)
    throw ResourceError("exact cover count capped at 20 candidates");
  if (d.empty()) throw InputError("empty candidate set");
  const std::size_t m = d.size();
  std::vector<std::uint64_t> conflict(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && d[i][j] >= eps) conflict[i] |= std::uint64_t{1} << j;
  for (int limit = 1; limit <= static_cast<int>(m); ++limit) {
    std::vector<int> color(m, -1);
    if (detail::color_bnb(conflict, color, 0, limit)) return limit;
  }
  return static_cast<int>(m);
}

// First-fit cell assignment in ascending order; an upper bound for cov.
inline int greedy_cover(const DistMatrix& d, double eps) {
  if (d.empty()) throw InputError("empty candidate set");
  std::vector<std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < d.size(); ++i) {
    bool placed = false;
    for (auto& cell : cells) {
      bool fits = true;
      for (std::size_t j : cell)
        if (d[i][j] >= eps) { fits = false; break; }
      if (fits) { cell.push_back(i); placed = true; break; }
    }
    if (!placed) cells.push_back({i});
  }
  return static_cast<int>(cells.size());
}

// --- tables and growth rates --------------------------------------------

struct CountBound {
  double lo = 0.0;
  double hi = 0.0;
  bool exact() const { return lo == hi; }
};

enum class CountMode { exact, greedy, branch_formula };
enum class CountColumn { sep, span, cov };

struct CountRow {
  int n = 0;
  double eps = 0.0;
  CountBound sep, span, cov;
  std::string mode;
};

struct CountTable {
  std::vector<CountRow> rows;

  std::string to_csv() const {
    std::string out = "n,epsilon,sep_lo,sep_hi,span_lo,span_hi,cov_lo,cov_hi,mode\n";
    char buf[256];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf,
                    "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", r.n,
                    r.eps, r.sep.lo, r.sep.hi, r.span.lo, r.span.hi, r.cov.lo,
                    r.cov.hi, r.mode.c_str());
      out += buf;
    }
    return out;
  }
};

// Per-(n, eps) exact or greedy counts over an explicit candidate set.
template <class Sys, class P>
CountRow count_row(const Sys& sys, const std::vector<P>& candidates, int n,
                   double eps, CountMode mode) {
  DistMatrix d = bowen_matrix(sys, candidates, n);
  CountRow row;
  row.n = n;
  row.eps = eps;
  if (mode == CountMode::exact) {
    row.mode = "exact";
    double sep = max_separated_exact(d, eps);
    double span = min_spanning_exact(d, eps);
    row.sep = {sep, sep};
    row.span = {span, span};
    if (candidates.size() <= kExactCoverCap) {
      double cov = min_cover_exact(d, eps);
      row.cov = {cov, cov};
    } else {
      row.cov = {1.0, static_cast<double>(greedy_cover(d, eps))};
    }
  } else if (mode == CountMode::greedy) {
    row.mode = "greedy_bound";
    row.sep = {static_cast<double>(greedy_separated(d, eps)),
               static_cast<double>(candidates.size())};
    row.span = {1.0, static_cast<double>(greedy_spanning(d, eps))};
    row.cov = {1.0, static_cast<double>(greedy_cover(d, eps))};
  } else {
    throw InputError("branch_formula rows come from branch_formula_table");
  }
  return row;
}

struct GrowthEstimate {
  double lower_rate = 0.0;  // least-squares slope of log lo-counts vs n
  double upper_rate = 0.0;  // max successive difference of log hi-counts
  int n_min = 0;
  int n_max = 0;
  double eps = 0.0;
};

// Finite-scale surrogates for the exponential growth rate of a count column:
// the least-squares slope (lower) and the worst successive log-difference
// (upper), both in nats per iterate. Requires >= 3 usable rows at one eps.
inline GrowthEstimate growth_rate(const CountTable& table, CountColumn column,
                                  int n_min, int n_max) {
  std::vector<std::pair<int, CountBound>> rows;
  double eps = 0.0;
  bool have_eps = false;
  for (const auto& r : table.rows) {
    if (r.n < n_min || r.n > n_max) continue;
    if (!have_eps) { eps = r.eps; have_eps = true; }
    if (r.eps != eps)
      throw InputError("growth_rate needs a single-eps table slice");
    const CountBound& b = column == CountColumn::sep ? r.sep
                          : column == CountColumn::span ? r.span
                                                        : r.cov;
    rows.emplace_back(r.n, b);
  }
  if (rows.size() < 3)
    throw InputError("growth_rate needs at least 3 rows in the window");
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [n, b] : rows)
    if (!(b.lo > 0.0) || !(b.hi > 0.0))
      throw InputError("counts must be positive for a growth fit");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, b] : rows) {
    double x = n, y = std::log(b.lo);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  double m = static_cast<double>(rows.size());
  double lower = (m * sxy - sx * sy) / (m * sxx - sx * sx);

  double upper = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    double diff = (std::log(rows[i + 1].second.hi) -
                   std::log(rows[i].second.hi)) /
                  (rows[i + 1].first - rows[i].first);
    upper = std::max(upper, diff);
  }
  GrowthEstimate est;
  est.lower_rate = std::min(lower, upper);
  est.upper_rate = std::max(lower, upper);
  est.n_min = n_min;
  est.n_max = n_max;
  est.eps = eps;
  return est;
}

}  // namespace mdimlab
