#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "mdimlab/bowen.hpp"
#include "mdimlab/common.hpp"
#include "mdimlab/systems.hpp"
#include "mdimlab/truncated_system.hpp"

namespace mdimlab {

// Strictly decreasing positive scales driving the dimension-style ratios.
struct EpsilonSchedule {
  std::vector<double> eps;

  explicit EpsilonSchedule(std::vector<double> values) : eps(std::move(values)) {
    if (eps.empty()) throw InputError("empty epsilon schedule");
    for (std::size_t i = 0; i < eps.size(); ++i) {
      if (!(eps[i] > 0.0)) throw InputError("schedule entries must be positive");
      if (i && !(eps[i] < eps[i - 1]))
        throw InputError("schedule must be strictly decreasing");
    }
  }

  std::size_t size() const { return eps.size(); }

  // eps_k = |I_k| / s_k for the blocks of a truncated system, k = 1..k_max.
  static EpsilonSchedule for_blocks(const TruncatedIntervalSystem& sys,
                                    int k_max) {
    if (k_max < 1 || k_max >= static_cast<int>(sys.blocks().size()))
      throw InputError("schedule depth exceeds the constructed blocks");
    std::vector<double> v;
    v.reserve(k_max);
    for (int k = 1; k <= k_max; ++k) {
      const Block& b = sys.blocks()[k];
      v.push_back(b.length() * std::exp(-b.log_branches()));
    }
    return EpsilonSchedule(std::move(v));
  }

  // eps_k = C 3^{-k(r+s)-s} = |I_k| 3^{-s(k+1)} for the geometric family,
  // k = 1..k_max; the analytic form works past the constructed blocks.
  static EpsilonSchedule for_phi_sr(int s, double r, int k_max) {
    if (s < 1 || !(r > 0.0) || k_max < 1)
      throw InputError("for_phi_sr needs s >= 1, r > 0, k_max >= 1");
    const double c = -std::expm1(-r * std::log(3.0));
    std::vector<double> v;
    v.reserve(k_max);
    for (int k = 1; k <= k_max; ++k)
      v.push_back(c * std::exp(-(k * (r + s) + s) * std::log(3.0)));
    return EpsilonSchedule(std::move(v));
  }

  // eps_k = 3^{-k(j+1)}, the natural scales for the Cantor maps.
  static EpsilonSchedule for_psi(int j, int k_max) {
    std::vector<double> v;
    v.reserve(k_max);
    for (int k = 1; k <= k_max; ++k)
      v.push_back(std::pow(3.0, -static_cast<double>(k) * (j + 1)));
    return EpsilonSchedule(std::move(v));
  }

  // eps_k = 3^{-k}, the default box-counting scales.
  static EpsilonSchedule powers_of_third(int k_max) {
    std::vector<double> v;
    v.reserve(k_max);
    for (int k = 1; k <= k_max; ++k)
      v.push_back(std::pow(3.0, -static_cast<double>(k)));
    return EpsilonSchedule(std::move(v));
  }
};

struct BranchFormulaRow {
  int n = 0;
  double eps = 0.0;
  // sum over resolvable blocks of s_j^n |I_j| / eps, before integer rounding
  double span_sum_raw = 0.0;
  double span_bound = 0.0;   // per-term ceilings of the same sum
  double sep_lower = 0.0;    // max over resolvable blocks of floor((s_j/2)^n)
  double sep_upper = 0.0;    // spanning bound evaluated at eps/2
  double cov_upper = 0.0;    // spanning bound evaluated at eps/3
  int resolvable_blocks = 0;
};

namespace detail {

// Blocks are resolvable at scale eps when their branch cells are at least
// eps wide (|I_j| / s_j >= eps); coarser blocks contribute only bounded,
// non-exponential cover counts and are excluded, matching the restriction of
// the analysis to the resolvable region.
inline bool resolvable(const Block& b, double eps) {
  return std::log(b.length()) - b.log_branches() >=
         std::log(eps) * (1.0 + 1e-13) - 1e-13;
}

inline double span_sum(const TruncatedIntervalSystem& sys, int n, double eps,
                       bool ceil_terms, int* used = nullptr) {
  double total = 0.0;
  int count = 0;
  for (const auto& b : sys.blocks()) {
    if (!resolvable(b, eps)) continue;
    ++count;
    double log_term = n * b.log_branches() + std::log(b.length()) - std::log(eps);
    double term = std::exp(log_term);
    if (ceil_terms && term < 9.007e15) term = std::ceil(term);
    total += term;
  }
  if (used) *used = count;
  return total;
}

}  // namespace detail

// Closed-form count bounds for a full-branch block system at one (n, eps):
// the endpoint-subdivision spanning bound and the alternating-branch
// separated-set lower bound, both restricted to the resolvable blocks.
inline BranchFormulaRow branch_formula_row(const TruncatedIntervalSystem& sys,
                                           int n, double eps) {
  if (n < 1) throw PreconditionError("branch counts need n >= 1");
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  BranchFormulaRow row;
  row.n = n;
  row.eps = eps;
  row.span_sum_raw = detail::span_sum(sys, n, eps, false, &row.resolvable_blocks);
  row.span_bound = detail::span_sum(sys, n, eps, true);
  double best = 0.0;
  for (const auto& b : sys.blocks()) {
    if (!detail::resolvable(b, eps)) continue;
    best = std::max(best, n * (b.log_branches() - std::log(2.0)));
  }
  double sep = std::exp(best);
  row.sep_lower = std::max(1.0, sep < 9.007e15 ? std::floor(sep) : sep);
  row.sep_upper = detail::span_sum(sys, n, eps / 2.0, true);
  row.cov_upper = detail::span_sum(sys, n, eps / 3.0, true);
  if (row.span_bound < 1.0) row.span_bound = 1.0;
  if (row.sep_upper < row.sep_lower) row.sep_upper = row.sep_lower;
  if (row.cov_upper < 1.0) row.cov_upper = 1.0;
  return row;
}

// Assembles a count table over an n-window and a list of scales. Rows are
// independent; they may be computed concurrently with identical results.
inline CountTable branch_formula_table(const TruncatedIntervalSystem& sys,
                                       int n_min, int n_max,
                                       const std::vector<double>& scales) {
  if (n_min < 1 || n_max < n_min) throw InputError("bad n-window");
  std::size_t per = static_cast<std::size_t>(n_max - n_min + 1);
  CountTable table;
  table.rows.resize(per * scales.size());
  parallel_for(table.rows.size(), [&](std::size_t idx) {
    int n = n_min + static_cast<int>(idx % per);
    double eps = scales[idx / per];
    BranchFormulaRow r = branch_formula_row(sys, n, eps);
    CountRow row;
    row.n = n;
    row.eps = eps;
    row.mode = "branch_formula";
    row.sep = {r.sep_lower, r.sep_upper};
    row.span = {1.0, r.span_bound};
    row.cov = {1.0, r.cov_upper};
    table.rows[idx] = row;
  });
  return table;
}

enum class CountingMode { branch_formula, grid };

struct MdimEstimate {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::pair<double, double>> per_epsilon;  // (eps, rate/|log eps|)
};

namespace detail {

inline MdimEstimate finish_estimate(std::vector<std::pair<double, double>> pe,
                                    double dim_bound) {
  MdimEstimate est;
  est.per_epsilon = std::move(pe);
  std::size_t tail = (est.per_epsilon.size() + 1) / 2;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = est.per_epsilon.size() - tail;
       i < est.per_epsilon.size(); ++i) {
    lo = std::min(lo, est.per_epsilon[i].second);
    hi = std::max(hi, est.per_epsilon[i].second);
  }
  est.lower = lo;
  est.upper = hi;
  if (est.lower < -1e-9 || est.upper > dim_bound + 1e-9)
    throw InputError("estimate leaves [0, dim bound]; check the inputs");
  return est;
}

}  // namespace detail

// Dimension-style estimate: per scale, the fitted growth rate of the spanning
// bound divided by |log eps|; the reported pair is the min/max over the last
// half of the schedule. `dim_bound` is the ambient bound used for validation.
inline MdimEstimate mdim_estimate(const TruncatedIntervalSystem& sys,
                                  const EpsilonSchedule& schedule, int n_min,
                                  int n_max, CountingMode mode,
                                  double dim_bound = 1.0) {
  if (schedule.size() < 4) throw InputError("schedule needs >= 4 entries");
  if (mode != CountingMode::branch_formula)
    throw InputError("grid counting on a block system: use mdim_estimate_grid");
  std::vector<std::pair<double, double>> pe(schedule.size());
  parallel_for(schedule.size(), [&](std::size_t i) {
    double eps = schedule.eps[i];
    CountTable t = branch_formula_table(sys, n_min, n_max, {eps});
    GrowthEstimate g = growth_rate(t, CountColumn::span, n_min, n_max);
    // the spanning bound is log-affine in n up to lower-order terms, so the
    // least-squares slope of the upper counts is the stable rate surrogate
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (const auto& r : t.rows) {
      double x = r.n, y = std::log(r.span.hi);
      sx += x; sy += y; sxx += x * x; sxy += x * y; m += 1;
    }
    double rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rate = std::min(rate, g.upper_rate);
    pe[i] = {eps, rate / std::abs(std::log(eps))};
  });
  return detail::finish_estimate(std::move(pe), dim_bound);
}

// Grid-based variant for explicit maps at coarse scales: greedy separated
// counts on an eps/4 grid. Only usable where the grids stay small.
inline MdimEstimate mdim_estimate_grid(const PiecewiseAffineMap& map,
                                       const EpsilonSchedule& schedule,
                                       int n_min, int n_max,
                                       double dim_bound = 1.0,
                                       std::size_t grid_cap = 200'000) {
  if (schedule.size() < 4) throw InputError("schedule needs >= 4 entries");
  IntervalMapSystem sys{map};
  std::vector<std::pair<double, double>> pe(schedule.size());
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    double eps = schedule.eps[i];
    auto cands = interval_candidates(map, eps, grid_cap);
    CountTable t;
    for (int n = n_min; n <= n_max; ++n) {
      DistMatrix d = bowen_matrix(sys, cands, n);
      CountRow row;
      row.n = n;
      row.eps = eps;
      row.mode = "greedy_bound";
      double g = greedy_separated(d, eps);
      row.sep = {g, g};
      row.span = {1.0, static_cast<double>(cands.size())};
      row.cov = {1.0, static_cast<double>(cands.size())};
      t.rows.push_back(row);
    }
    GrowthEstimate gr = growth_rate(t, CountColumn::sep, n_min, n_max);
    pe[i] = {eps, gr.lower_rate / std::abs(std::log(eps))};
  }
  return detail::finish_estimate(std::move(pe), dim_bound);
}

}  // namespace mdimlab
