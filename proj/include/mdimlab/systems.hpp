#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "mdimlab/affine_map.hpp"
#include "mdimlab/shift_systems.hpp"
#include "mdimlab/truncated_system.hpp"
#include "mdimlab/words.hpp"

namespace mdimlab {

// Adapters presenting the concrete dynamical systems through the uniform
// carrier interface (point / distance / step) used by the Bowen counting.

struct IntervalMapSystem {
  using point = double;
  PiecewiseAffineMap map;

  double distance(double x, double y) const { return std::abs(x - y); }
  double step(double x) const { return map.eval(x); }
};

struct TruncatedSystemAdapter {
  using point = double;
  const TruncatedIntervalSystem* sys;

  double distance(double x, double y) const { return std::abs(x - y); }
  double step(double x) const { return sys->eval(x); }
};

struct WordSystem {
  using point = Word;
  SymbolicMap map;
  int max_symbol_diff = 2;

  double distance(const Word& u, const Word& v) const {
    return word_metric(u, v, max_symbol_diff).value;
  }
  Word step(const Word& w) const { return map.apply(w); }
};

// Coordinate-wise product under the sum metric.
template <class A, class B>
struct ProductSystem {
  using point = std::pair<typename A::point, typename B::point>;
  A left;
  B right;

  double distance(const point& x, const point& y) const {
    return left.distance(x.first, y.first) +
           right.distance(x.second, y.second);
  }
  point step(const point& p) const {
    return {left.step(p.first), right.step(p.second)};
  }
};

template <class A, class B>
ProductSystem<A, B> make_product(A a, B b) {
  return ProductSystem<A, B>{std::move(a), std::move(b)};
}

template <class A, class B>
std::vector<typename ProductSystem<A, B>::point> product_candidates(
    const std::vector<typename A::point>& xs,
    const std::vector<typename B::point>& ys) {
  std::vector<typename ProductSystem<A, B>::point> out;
  out.reserve(xs.size() * ys.size());
  for (const auto& x : xs)
    for (const auto& y : ys) out.emplace_back(x, y);
  return out;
}

// Uniform grid with spacing <= eps/4 plus all branch endpoints: the spanning
// sets used by the coarse estimators are endpoint subdivisions, so endpoints
// must be present among the candidates.
inline std::vector<double> interval_candidates(const PiecewiseAffineMap& map,
                                               double eps,
                                               std::size_t cap = 2'000'000) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  double len = map.ambient_hi() - map.ambient_lo();
  double want = std::ceil(4.0 * len / eps);
  if (want > static_cast<double>(cap))
    throw ResourceError("candidate grid exceeds the cap");
  auto cells = static_cast<std::size_t>(want);
  std::vector<double> pts;
  pts.reserve(cells + 1 + map.lap_count());
  for (std::size_t i = 0; i <= cells; ++i)
    pts.push_back(map.ambient_lo() + len * static_cast<double>(i) /
                                         static_cast<double>(cells));
  for (const auto& b : map.branches()) pts.push_back(b.lo);
  pts.push_back(map.ambient_hi());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Sanity probe for a metric: symmetry, non-negativity, identity on a sample.
template <class Sys, class P>
bool metric_axioms_hold(const Sys& sys, const std::vector<P>& sample,
                        double tol = 0.0) {
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (sys.distance(sample[i], sample[i]) > tol) return false;
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      double a = sys.distance(sample[i], sample[j]);
      double b = sys.distance(sample[j], sample[i]);
      if (a < 0.0 || std::abs(a - b) > tol) return false;
    }
  }
  return true;
}

}  // namespace mdimlab
