#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mdimlab/affine_map.hpp"
#include "mdimlab/common.hpp"

namespace mdimlab {

enum class Orientation { all_increasing, alternating };

// One invariant block [lo, hi] carrying a full-branch self-map. Three backing
// kinds share the interface:
//   tent_power  - conjugate of tent3^m rescaled onto the block (3^m branches),
//   uniform     - b equal sub-intervals, each affine onto the block,
//   explicit_map- a caller-supplied piecewise-affine map on the block.
// Branch counts can be astronomically large for deep blocks, so evaluation is
// formula-based and materialization to an explicit map is on demand.
class Block {
 public:
  // `analytic_length` carries the exact block length where the endpoint
  // difference underflows double resolution (deep geometric blocks cluster at
  // the accumulation point); it defaults to hi - lo.
  static Block tent_power(double lo, double hi, int iterations,
                          double analytic_length = -1.0) {
    Block b(lo, hi, analytic_length);
    b.tent_m_ = iterations;
    if (iterations < 1) throw PreconditionError("block needs >= 1 iteration");
    return b;
  }

  static Block uniform(double lo, double hi, std::int64_t count,
                       Orientation orient, double analytic_length = -1.0) {
    Block b(lo, hi, analytic_length);
    if (count < 2) throw PreconditionError("uniform block needs >= 2 branches");
    b.uniform_count_ = count;
    b.orient_ = orient;
    return b;
  }

  static Block explicit_map(PiecewiseAffineMap map) {
    Block b(map.ambient_lo(), map.ambient_hi(), -1.0);
    b.map_ = std::move(map);
    return b;
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double length() const { return length_; }

  // True when the endpoints are distinguishable in double precision; blocks
  // thinner than that evaluate as frozen (the error is below one ulp).
  bool representable() const { return hi_ > lo_; }

  // Number of full branches; exact below 2^53, otherwise use log_branches().
  double branches() const {
    if (tent_m_) return std::pow(3.0, *tent_m_);
    if (uniform_count_) return static_cast<double>(*uniform_count_);
    return static_cast<double>(map_->lap_count());
  }

  double log_branches() const {
    if (tent_m_) return *tent_m_ * std::log(3.0);
    return std::log(branches());
  }

  Orientation orientation() const { return orient_; }

  double eval(double x) const {
    if (x < lo_ - kGeomTol || x > hi_ + kGeomTol)
      throw DomainError("point outside the block");
    if (!representable()) return x;
    const long double lo = lo_, hi = hi_, len = hi - lo;
    long double u = (static_cast<long double>(x) - lo) / len;
    if (u < 0.0L) u = 0.0L;
    if (u > 1.0L) u = 1.0L;
    if (tent_m_) {
      for (int i = 0; i < *tent_m_; ++i) {
        long double t = 3.0L * u - 1.0L;
        u = 1.0L - (t < 0.0L ? -t : t);
        if (u < 0.0L) u = -u;
      }
      return static_cast<double>(lo + u * len);
    }
    if (uniform_count_) {
      const long double b = static_cast<long double>(*uniform_count_);
      long double scaled = u * b;
      auto idx = static_cast<std::int64_t>(scaled);
      if (idx >= *uniform_count_) idx = *uniform_count_ - 1;
      long double frac = scaled - static_cast<long double>(idx);
      bool increasing =
          orient_ == Orientation::all_increasing || idx % 2 == 0;
      long double v = increasing ? frac : 1.0L - frac;
      return static_cast<double>(lo + v * len);
    }
    return map_->eval(x);
  }

  PiecewiseAffineMap materialize(std::size_t cap = kDefaultBranchCap) const {
    if (map_) return *map_;
    if (!representable())
      throw ResourceError("block endpoints collapse at double resolution");
    if (branches() > static_cast<double>(cap))
      throw ResourceError("block branch count exceeds the cap");
    std::vector<AffineBranch> out;
    const double len = hi_ - lo_;
    if (tent_m_) {
      PiecewiseAffineMap base = compose_power(tent3(), *tent_m_, cap);
      out.reserve(base.lap_count());
      for (const auto& b : base.branches()) {
        // Conjugating by the same affine chart on both sides keeps the slope.
        double x0 = lo_ + b.lo * len;
        double x1 = lo_ + b.hi * len;
        long double v0 = static_cast<long double>(lo_) +
                         b.at_ld(b.lo) * static_cast<long double>(len);
        double intercept = static_cast<double>(
            v0 - static_cast<long double>(b.slope) * x0);
        out.push_back(AffineBranch{x0, x1, b.slope, intercept});
      }
    } else {
      auto n = *uniform_count_;
      const double sub = len / static_cast<double>(n);
      const double slope = static_cast<double>(n);
      for (std::int64_t i = 0; i < n; ++i) {
        double x0 = lo_ + i * sub;
        double x1 = (i + 1 == n) ? hi_ : lo_ + (i + 1) * sub;
        bool increasing =
            orient_ == Orientation::all_increasing || i % 2 == 0;
        double s = increasing ? slope : -slope;
        double anchor = increasing ? lo_ : hi_;
        out.push_back(AffineBranch{x0, x1, s, anchor - s * x0});
      }
    }
    return PiecewiseAffineMap(lo_, hi_, std::move(out));
  }

  bool is_explicit() const { return map_.has_value(); }
  std::optional<int> tent_iterations() const { return tent_m_; }

 private:
  Block(double lo, double hi, double analytic_length)
      : lo_(lo), hi_(hi), length_(analytic_length >= 0.0 ? analytic_length
                                                         : hi - lo) {
    if (lo > hi) throw PreconditionError("block interval is reversed");
    if (!(length_ > 0.0)) throw PreconditionError("block interval is empty");
  }

  double lo_, hi_, length_;
  std::optional<int> tent_m_;
  std::optional<std::int64_t> uniform_count_;
  Orientation orient_ = Orientation::all_increasing;
  std::optional<PiecewiseAffineMap> map_;
};

// A finite union of adjacent invariant blocks plus a frozen tail: points in
// [tail_fixed_point, ambient_hi] are fixed. The block maps are full-branch, so
// every block (and the tail) is forward invariant.
class TruncatedIntervalSystem {
 public:
  TruncatedIntervalSystem(double ambient_lo, double ambient_hi,
                          std::vector<Block> blocks, int level,
                          std::string name = {})
      : lo_(ambient_lo), hi_(ambient_hi), blocks_(std::move(blocks)),
        level_(level), name_(std::move(name)) {
    if (blocks_.empty()) throw PreconditionError("system has no blocks");
    for (std::size_t i = 0; i + 1 < blocks_.size(); ++i)
      if (std::abs(blocks_[i].hi() - blocks_[i + 1].lo()) > kGeomTol)
        throw PreconditionError("blocks are not adjacent");
    if (blocks_.front().lo() < lo_ - kGeomTol ||
        blocks_.back().hi() > hi_ + kGeomTol)
      throw PreconditionError("blocks leave the ambient interval");
  }

  static TruncatedIntervalSystem from_map(const PiecewiseAffineMap& map,
                                          std::string name = {}) {
    std::vector<Block> blocks;
    blocks.push_back(Block::explicit_map(map));
    return TruncatedIntervalSystem(map.ambient_lo(), map.ambient_hi(),
                                   std::move(blocks), 1, std::move(name));
  }

  double ambient_lo() const { return lo_; }
  double ambient_hi() const { return hi_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  int truncation_level() const { return level_; }
  double tail_fixed_point() const { return blocks_.back().hi(); }
  const std::string& name() const { return name_; }

  double eval(double x) const {
    if (x < lo_ - kGeomTol || x > hi_ + kGeomTol)
      throw DomainError("point outside the ambient interval");
    if (x >= tail_fixed_point()) return x;  // frozen tail
    // Blocks are adjacent and sorted; a shared endpoint is fixed by both maps.
    std::size_t lo = 0, hi = blocks_.size();
    while (lo + 1 < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (blocks_[mid].lo() <= x) lo = mid; else hi = mid;
    }
    return blocks_[lo].eval(std::clamp(x, blocks_[lo].lo(), blocks_[lo].hi()));
  }

  double iterate(double x, int n) const {
    for (int i = 0; i < n; ++i) x = eval(x);
    return x;
  }

  // Explicit map on the whole ambient interval (blocks plus identity tail).
  PiecewiseAffineMap materialize(std::size_t cap = kDefaultBranchCap) const {
    double total = 0.0;
    for (const auto& b : blocks_) total += b.branches();
    if (total > static_cast<double>(cap))
      throw ResourceError("system branch count exceeds the cap");
    std::vector<AffineBranch> out;
    for (const auto& b : blocks_) {
      auto m = b.materialize(cap);
      out.insert(out.end(), m.branches().begin(), m.branches().end());
    }
    if (tail_fixed_point() < hi_ - kGeomTol)
      out.push_back(AffineBranch{tail_fixed_point(), hi_, 1.0, 0.0});
    return PiecewiseAffineMap(lo_, hi_, std::move(out));
  }

 private:
  double lo_, hi_;
  std::vector<Block> blocks_;
  int level_;
  std::string name_;
};

namespace detail {

// Partial sums of C * 3^(-i*r) starting from a_0 = 0, with C = 1 - 3^(-r).
inline std::vector<double> geometric_endpoints(double r, int count) {
  const long double c = -std::expm1(-static_cast<long double>(r) *
                                     std::log(3.0L));
  std::vector<double> a(count + 1);
  long double acc = 0.0L;
  a[0] = 0.0;
  for (int n = 1; n <= count; ++n) {
    acc += c * std::pow(3.0L, -static_cast<long double>(n - 1) * r);
    a[n] = static_cast<double>(acc);
  }
  return a;
}

// Partial sums of 6 / (pi^2 i^2); the limit is 1.
inline std::vector<double> basel_endpoints(int count) {
  std::vector<double> a(count + 1);
  const long double pi = std::numbers::pi_v<long double>;
  long double acc = 0.0L;
  a[0] = 0.0;
  for (int n = 1; n <= count; ++n) {
    acc += 6.0L / (pi * pi * static_cast<long double>(n) *
                   static_cast<long double>(n));
    a[n] = static_cast<double>(acc);
  }
  return a;
}

}  // namespace detail

// Interval family with geometric block lengths C*3^(-n r) on [0,1]; block n
// (n = 0..K-1) carries the tent3 conjugate iterated s*(n+1) times, i.e.
// 3^(s(n+1)) full branches. Points beyond the K-th endpoint are frozen.
inline TruncatedIntervalSystem make_phi_sr(int s, double r, int K) {
  if (s < 1 || K < 1 || !(r > 0.0))
    throw PreconditionError("make_phi_sr requires s >= 1, r > 0, K >= 1");
  auto a = detail::geometric_endpoints(r, K);
  const double c = -std::expm1(-r * std::log(3.0));
  std::vector<Block> blocks;
  blocks.reserve(K);
  for (int n = 0; n < K; ++n) {
    double len = c * std::exp(-n * r * std::log(3.0));
    blocks.push_back(Block::tent_power(a[n], a[n + 1], s * (n + 1), len));
  }
  return TruncatedIntervalSystem(0.0, 1.0, std::move(blocks), K, "phi_sr");
}

// Blocks of length 6/(pi^2 n^2) for n = 1..K; block n carries 3^n branches.
inline TruncatedIntervalSystem make_varphi(int K) {
  if (K < 1) throw PreconditionError("make_varphi requires K >= 1");
  auto a = detail::basel_endpoints(K);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  std::vector<Block> blocks;
  blocks.reserve(K);
  for (int n = 1; n <= K; ++n)
    blocks.push_back(Block::tent_power(a[n - 1], a[n], n,
                                       6.0 / (pi2 * n * static_cast<double>(n))));
  return TruncatedIntervalSystem(0.0, 1.0, std::move(blocks), K, "varphi");
}

// Same block endpoints as make_varphi; block n is divided into 2n+1 equal
// full branches with alternating orientation (odd-numbered ones increasing).
inline TruncatedIntervalSystem make_psi134(int K) {
  if (K < 1) throw PreconditionError("make_psi134 requires K >= 1");
  auto a = detail::basel_endpoints(K);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  std::vector<Block> blocks;
  blocks.reserve(K);
  for (int n = 1; n <= K; ++n)
    blocks.push_back(Block::uniform(a[n - 1], a[n], 2 * n + 1,
                                    Orientation::alternating,
                                    6.0 / (pi2 * n * static_cast<double>(n))));
  return TruncatedIntervalSystem(0.0, 1.0, std::move(blocks), K, "psi134");
}

// Block-wise affine homeomorphism of [0,1] sending the r1-family blocks onto
// the r2-family blocks (the tail is mapped affinely as one piece). Strictly
// increasing and continuous; intertwines the two block systems.
inline PiecewiseAffineMap conjugacy_h(int s, double r1, double r2, int K) {
  if (s < 1 || K < 1 || !(r1 > 0.0) || !(r2 > 0.0))
    throw PreconditionError("conjugacy_h requires s >= 1, r > 0, K >= 1");
  auto a1 = detail::geometric_endpoints(r1, K);
  auto a2 = detail::geometric_endpoints(r2, K);
  std::vector<AffineBranch> out;
  out.reserve(K + 1);
  auto add_piece = [&](double x0, double x1, double y0, double y1) {
    double slope = (y1 - y0) / (x1 - x0);
    out.push_back(AffineBranch{x0, x1, slope, y0 - slope * x0});
  };
  for (int n = 0; n < K; ++n) add_piece(a1[n], a1[n + 1], a2[n], a2[n + 1]);
  if (a1[K] < 1.0 - kGeomTol) add_piece(a1[K], 1.0, a2[K], 1.0);
  return PiecewiseAffineMap(0.0, 1.0, std::move(out));
}

struct SpliceResult {
  PiecewiseAffineMap map;
  double sup_distance_to_base;  // exact sup metric distance to the base map
  double p_star;
  double delta;
};

// Replaces base on [p*, p*+delta] with (i) a copy of `inner` affinely rescaled
// into [p*, p*+delta/2] and (ii) a single affine connector from p*+delta/2 up
// to base(p*+delta). The result agrees with base outside [p*, p*+delta].
// p* must be fixed by base within 1e-9; the exact achieved sup distance is
// reported rather than guessed from a modulus of continuity.
inline SpliceResult splice(const PiecewiseAffineMap& base, double p_star,
                           double delta, const TruncatedIntervalSystem& inner,
                           std::size_t cap = kDefaultBranchCap) {
  const double lo = base.ambient_lo(), hi = base.ambient_hi();
  if (std::abs(base.eval(p_star) - p_star) > 1e-9)
    throw PreconditionError("p_star is not a fixed point of the base map");
  if (!(delta > 0.0)) throw PreconditionError("delta must be positive");
  if (p_star < lo - kGeomTol || p_star + delta > hi + kGeomTol)
    throw DomainError("splice window leaves the ambient interval");

  PiecewiseAffineMap inner_map = inner.materialize(cap);
  const double u_lo = inner_map.ambient_lo(), u_hi = inner_map.ambient_hi();
  if (std::abs(inner_map.eval(u_lo) - u_lo) > kGeomTol ||
      std::abs(inner_map.eval(u_hi) - u_hi) > kGeomTol)
    throw PreconditionError("inner system must fix its interval endpoints");

  const double mid = p_star + 0.5 * delta;
  const double right = p_star + delta;
  std::vector<AffineBranch> out;

  // Base on [lo, p*]. The final piece is tilted so its value at p* is exactly
  // p* (the fixed-point tolerance may leave a <=1e-9 offset); the tilt keeps
  // the value at the piece's left endpoint, so continuity is preserved.
  for (const auto& b : base.branches()) {
    if (b.hi <= lo || b.lo >= p_star - kGeomTol) continue;
    double x0 = std::max(b.lo, lo), x1 = std::min(b.hi, p_star);
    if (x1 - x0 <= kGeomTol) continue;
    if (std::abs(x1 - p_star) <= kGeomTol) {
      double y0 = b.at(x0);
      double slope = (p_star - y0) / (p_star - x0);
      out.push_back(AffineBranch{x0, p_star, slope, y0 - slope * x0});
    } else {
      out.push_back(AffineBranch{x0, x1, b.slope, b.intercept});
    }
  }

  // Rescaled copy of the inner system on [p*, mid]. Conjugation by the chart
  // preserves slopes, so the pieces transfer directly.
  {
    const double scale = (mid - p_star) / (u_hi - u_lo);
    for (const auto& b : inner_map.branches()) {
      double x0 = p_star + (b.lo - u_lo) * scale;
      double x1 = p_star + (b.hi - u_lo) * scale;
      long double v0 = static_cast<long double>(p_star) +
                       (b.at_ld(b.lo) - static_cast<long double>(u_lo)) *
                           static_cast<long double>(scale);
      double intercept =
          static_cast<double>(v0 - static_cast<long double>(b.slope) * x0);
      out.push_back(AffineBranch{x0, x1, b.slope, intercept});
    }
  }

  // Connector from (mid, mid) to (right, base(right)).
  {
    double y1 = base.eval(right);
    double slope = (y1 - mid) / (right - mid);
    out.push_back(AffineBranch{mid, right, slope, mid - slope * mid});
  }

  // Base on [right, hi].
  for (const auto& b : base.branches()) {
    if (b.hi <= right + kGeomTol || b.lo >= hi) continue;
    double x0 = std::max(b.lo, right), x1 = std::min(b.hi, hi);
    if (x1 - x0 <= kGeomTol) continue;
    out.push_back(AffineBranch{x0, x1, b.slope, b.intercept});
  }

  PiecewiseAffineMap spliced(lo, hi, std::move(out));
  double dist = sup_distance(spliced, base);
  return SpliceResult{std::move(spliced), dist, p_star, delta};
}

}  // namespace mdimlab
