#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "mdimlab/common.hpp"

namespace mdimlab {

// One affine piece y = slope*x + intercept on the closed domain [lo, hi].
struct AffineBranch {
  double lo = 0.0;
  double hi = 1.0;
  double slope = 1.0;
  double intercept = 0.0;

  double at(double x) const { return slope * x + intercept; }
  long double at_ld(long double x) const {
    return static_cast<long double>(slope) * x +
           static_cast<long double>(intercept);
  }
  double image_min() const { return std::min(at(lo), at(hi)); }
  double image_max() const { return std::max(at(lo), at(hi)); }
};

namespace detail {
// Continuity and containment checks must absorb the rounding of slope*x,
// which grows with the slope; 1e-12 alone would reject deep compositions.
inline double eval_tol(double slope_scale, double x_scale) {
  return kGeomTol +
         16.0 * std::numeric_limits<double>::epsilon() *
             (std::abs(slope_scale) + 1.0) * std::max(1.0, std::abs(x_scale));
}
}  // namespace detail

// A continuous piecewise-affine self-map candidate of [ambient_lo, ambient_hi].
// Branch domains tile the ambient interval; consecutive branches agree at the
// shared endpoint. Evaluation picks the branch whose domain contains x, and at
// a shared breakpoint the left branch wins (both agree by continuity).
class PiecewiseAffineMap {
 public:
  PiecewiseAffineMap(double ambient_lo, double ambient_hi,
                     std::vector<AffineBranch> branches)
      : lo_(ambient_lo), hi_(ambient_hi), branches_(std::move(branches)) {
    validate();
  }

  static PiecewiseAffineMap identity(double lo, double hi) {
    return PiecewiseAffineMap(lo, hi, {AffineBranch{lo, hi, 1.0, 0.0}});
  }

  double ambient_lo() const { return lo_; }
  double ambient_hi() const { return hi_; }
  const std::vector<AffineBranch>& branches() const { return branches_; }
  std::size_t lap_count() const { return branches_.size(); }

  const AffineBranch& branch_at(double x) const {
    if (x < lo_ - kGeomTol || x > hi_ + kGeomTol)
      throw DomainError("evaluation point outside the ambient interval");
    x = std::clamp(x, lo_, hi_);
    // First branch whose hi >= x; ties resolve to the left branch.
    auto it = std::lower_bound(
        branches_.begin(), branches_.end(), x,
        [](const AffineBranch& b, double v) { return b.hi < v; });
    if (it == branches_.end()) --it;
    return *it;
  }

  double eval(double x) const { return branch_at(x).at(x); }

  double iterate(double x, int n) const {
    for (int i = 0; i < n; ++i) x = eval(x);
    return x;
  }

  // Exact image of [a, b] as a sorted union of disjoint closed intervals.
  std::vector<std::pair<double, double>> image_of(double a, double b) const {
    if (b < a) std::swap(a, b);
    std::vector<std::pair<double, double>> parts;
    for (const auto& br : branches_) {
      double s = std::max(a, br.lo), t = std::min(b, br.hi);
      if (s > t) continue;
      double u = br.at(s), v = br.at(t);
      if (u > v) std::swap(u, v);
      parts.emplace_back(u, v);
    }
    if (parts.empty()) throw DomainError("interval outside the ambient domain");
    std::sort(parts.begin(), parts.end());
    std::vector<std::pair<double, double>> merged;
    for (auto& p : parts) {
      if (!merged.empty() && p.first <= merged.back().second + kGeomTol)
        merged.back().second = std::max(merged.back().second, p.second);
      else
        merged.push_back(p);
    }
    return merged;
  }

  bool is_self_map(double tol = kGeomTol) const {
    for (const auto& b : branches_)
      if (b.image_min() < lo_ - tol || b.image_max() > hi_ + tol) return false;
    return true;
  }

  // Largest value jump across any interior breakpoint; zero for a continuous map.
  double max_breakpoint_jump() const {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < branches_.size(); ++i) {
      double x = branches_[i].hi;
      worst = std::max(worst, std::abs(branches_[i].at(x) - branches_[i + 1].at(x)));
    }
    return worst;
  }

 private:
  void validate() const {
    if (!(lo_ < hi_)) throw PreconditionError("ambient interval is empty");
    if (branches_.empty()) throw PreconditionError("map has no branches");
    double span = std::max(std::abs(lo_), std::abs(hi_));
    if (std::abs(branches_.front().lo - lo_) > detail::eval_tol(1.0, span) ||
        std::abs(branches_.back().hi - hi_) > detail::eval_tol(1.0, span))
      throw PreconditionError("branches do not cover the ambient interval");
    for (std::size_t i = 0; i < branches_.size(); ++i) {
      const auto& b = branches_[i];
      if (!(b.lo < b.hi)) throw PreconditionError("degenerate branch domain");
      double tol = detail::eval_tol(b.slope, hi_);
      if (b.image_min() < lo_ - tol || b.image_max() > hi_ + tol)
        throw PreconditionError("branch image leaves the ambient interval");
      if (i + 1 < branches_.size()) {
        const auto& c = branches_[i + 1];
        if (std::abs(c.lo - b.hi) > detail::eval_tol(1.0, span))
          throw PreconditionError("branch domains do not tile the interval");
        double jump = std::abs(b.at(b.hi) - c.at(b.hi));
        if (jump > detail::eval_tol(std::abs(b.slope) + std::abs(c.slope), b.hi))
          throw PreconditionError("map is discontinuous at a breakpoint");
      }
    }
  }

  double lo_, hi_;
  std::vector<AffineBranch> branches_;
};

// The slope-3 tent-like base map on [0,1]: x -> |1 - |3x - 1||.
// Three full laps with breakpoints {0, 1/3, 2/3, 1} and slopes (+3, -3, +3).
inline PiecewiseAffineMap tent3() {
  std::vector<AffineBranch> br = {
      {0.0, 1.0 / 3.0, 3.0, 0.0},
      {1.0 / 3.0, 2.0 / 3.0, -3.0, 2.0},
      {2.0 / 3.0, 1.0, 3.0, -2.0},
  };
  return PiecewiseAffineMap(0.0, 1.0, std::move(br));
}

// Symbolic composition outer(inner(x)). Branch domains of the result refine
// the inner branches by the preimages of the outer breakpoints, so slopes are
// exact products. Throws ResourceError past `branch_cap` pieces.
inline PiecewiseAffineMap compose(const PiecewiseAffineMap& outer,
                                  const PiecewiseAffineMap& inner,
                                  std::size_t branch_cap = kDefaultBranchCap) {
  std::vector<AffineBranch> out;
  const double tiny = 4.0 * kGeomTol;
  for (const auto& b : inner.branches()) {
    std::vector<double> cuts = {b.lo, b.hi};
    if (b.slope != 0.0) {
      for (std::size_t i = 0; i + 1 < outer.branches().size(); ++i) {
        double beta = outer.branches()[i].hi;  // interior breakpoint of outer
        double x = (beta - b.intercept) / b.slope;
        if (x > b.lo + tiny && x < b.hi - tiny) cuts.push_back(x);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double x0 = cuts[i], x1 = cuts[i + 1];
      if (x1 - x0 <= tiny) continue;
      if (out.size() >= branch_cap)
        throw ResourceError("composition exceeds the branch cap");
      double mid = 0.5 * (x0 + x1);
      const AffineBranch& ob = outer.branch_at(b.at(mid));
      double slope = ob.slope * b.slope;
      // Anchor the piece at its left端 value computed in extended precision so
      // neighbouring pieces agree at shared breakpoints to well under 1e-12.
      long double v0 = ob.at_ld(b.at_ld(x0));
      double intercept = static_cast<double>(
          v0 - static_cast<long double>(slope) * static_cast<long double>(x0));
      out.push_back(AffineBranch{x0, x1, slope, intercept});
    }
  }
  return PiecewiseAffineMap(inner.ambient_lo(), inner.ambient_hi(), std::move(out));
}

// Exact s-fold composition; tent3^s has 3^s laps.
inline PiecewiseAffineMap compose_power(const PiecewiseAffineMap& map, int s,
                                        std::size_t branch_cap = kDefaultBranchCap) {
  if (s < 1) throw PreconditionError("composition power must be positive");
  if (!map.is_self_map())
    throw PreconditionError("compose_power requires a self-map");
  PiecewiseAffineMap result = map;
  for (int i = 1; i < s; ++i) {
    if (result.lap_count() * map.lap_count() > branch_cap)
      throw ResourceError("composition exceeds the branch cap");
    result = compose(map, result, branch_cap);
  }
  return result;
}

// Fixed points of eval(x) - x located by bisection over sign changes on each
// branch, refined to `tol`. Endpoint fixed points are reported once.
inline std::vector<double> fixed_points(const PiecewiseAffineMap& map,
                                        double tol = kGeomTol) {
  std::vector<double> roots;
  auto g = [&](double x) { return map.eval(x) - x; };
  auto push = [&](double x) {
    for (double r : roots)
      if (std::abs(r - x) <= 8.0 * tol) return;
    roots.push_back(x);
  };
  for (const auto& b : map.branches()) {
    double fa = g(b.lo), fb = g(b.hi);
    if (std::abs(fa) <= tol) push(b.lo);
    if (std::abs(fb) <= tol) push(b.hi);
    if (fa * fb < 0.0) {
      double lo = b.lo, hi = b.hi;
      while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double fm = g(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((fa < 0.0) == (fm < 0.0)) { lo = mid; fa = fm; } else { hi = mid; }
      }
      push(0.5 * (lo + hi));
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Exact sup |f - g| over the common ambient interval. The difference is affine
// between merged breakpoints, so the maximum sits at a breakpoint.
inline double sup_distance(const PiecewiseAffineMap& f,
                           const PiecewiseAffineMap& g) {
  std::vector<double> xs;
  for (const auto& b : f.branches()) { xs.push_back(b.lo); xs.push_back(b.hi); }
  for (const auto& b : g.branches()) { xs.push_back(b.lo); xs.push_back(b.hi); }
  std::sort(xs.begin(), xs.end());
  double worst = 0.0;
  for (double x : xs) {
    x = std::clamp(x, f.ambient_lo(), f.ambient_hi());
    worst = std::max(worst, std::abs(f.eval(x) - g.eval(x)));
  }
  return worst;
}

}  // namespace mdimlab
