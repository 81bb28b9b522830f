#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mdimlab/affine_map.hpp"
#include "mdimlab/bowen.hpp"
#include "mdimlab/common.hpp"
#include "mdimlab/truncated_system.hpp"

namespace mdimlab {

struct BlockProfileEntry {
  double length = 0.0;        // |I_k|
  double branches = 0.0;      // s_k (exact below 2^53)
  double log_branches = 0.0;  // exact even when s_k overflows a double
};

// Ordered (|I_k|, s_k) data feeding the limit formula; entries are sorted so
// the branch counts are non-decreasing, without changing the multiset.
using BlockProfile = std::vector<BlockProfileEntry>;

inline BlockProfile rearrange(BlockProfile profile) {
  std::stable_sort(profile.begin(), profile.end(),
                   [](const BlockProfileEntry& a, const BlockProfileEntry& b) {
                     return a.log_branches < b.log_branches;
                   });
  return profile;
}

// Extracts the block profile, verifying that every branch is a full affine
// map onto its block. Blocks small enough are materialized and checked branch
// by branch; huge blocks are validated structurally on sampled branches.
inline BlockProfile detect_blocks(const TruncatedIntervalSystem& sys,
                                  std::size_t verify_cap = 4096) {
  BlockProfile profile;
  int index = 0;
  for (const auto& block : sys.blocks()) {
    const double lo = block.lo(), hi = block.hi();
    auto reject = [&](const std::string& why) {
      throw StructureError("block " + std::to_string(index) + ": " + why);
    };
    if (block.branches() < 2.0 - kGeomTol)
      reject("fewer than two branches");
    if (block.representable() &&
        block.branches() <= static_cast<double>(verify_cap)) {
      PiecewiseAffineMap m = block.materialize(verify_cap);
      for (const auto& b : m.branches()) {
        double a0 = b.at(b.lo), a1 = b.at(b.hi);
        bool onto = (std::abs(a0 - lo) <= 1e-9 && std::abs(a1 - hi) <= 1e-9) ||
                    (std::abs(a0 - hi) <= 1e-9 && std::abs(a1 - lo) <= 1e-9);
        if (!onto) reject("a branch is not affine onto the block");
      }
    } else if (block.representable()) {
      // full branches force endpoint fixing and surjection of the first cell
      if (std::abs(block.eval(lo) - lo) > 1e-9)
        reject("left endpoint is not fixed");
      double cell = block.length() * std::exp(-block.log_branches());
      if (lo + cell > lo && std::abs(block.eval(lo + cell) - hi) > 1e-6 &&
          std::abs(block.eval(lo + cell) - lo) > 1e-6)
        reject("first branch does not reach a block endpoint");
    }
    profile.push_back({block.length(), block.branches(), block.log_branches()});
    ++index;
  }
  return rearrange(std::move(profile));
}

// Tail (min, max) over the last half of the profile of
//   s / | s - log|I_k| / log s_k |,
// the finite-scale surrogate for the dimension value of the s-th composition.
inline std::pair<double, double> horseshoe_mdim_formula(
    const BlockProfile& profile, int power = 1) {
  if (profile.empty()) throw InputError("empty block profile");
  if (power < 1) throw InputError("power must be >= 1");
  std::vector<double> values;
  values.reserve(profile.size());
  for (const auto& e : profile) {
    if (e.log_branches <= 0.0)
      throw InputError("s_k = 1 makes the formula singular");
    double ratio = std::log(e.length) / e.log_branches;
    values.push_back(power / std::abs(power - ratio));
  }
  std::size_t tail = (values.size() + 1) / 2;
  double lo = values[values.size() - tail], hi = lo;
  for (std::size_t i = values.size() - tail; i < values.size(); ++i) {
    lo = std::min(lo, values[i]);
    hi = std::max(hi, values[i]);
  }
  return {lo, hi};
}

// Full value sequence, for convergence inspection.
inline std::vector<double> horseshoe_formula_sequence(
    const BlockProfile& profile, int power = 1) {
  std::vector<double> values;
  values.reserve(profile.size());
  for (const auto& e : profile)
    values.push_back(power / std::abs(power - std::log(e.length) / e.log_branches));
  return values;
}

struct MisiurewiczReport {
  double entropy_upper = 0.0;  // estimated growth rate (upper surrogate)
  double bound = 0.0;          // log of the largest branch count
  double tolerance = 0.05;
  bool pass = false;
};

// Entropy consistency: the estimated rate must reach log(max s_k) within the
// tolerance. Report-only; a failure flags an inconsistent estimate.
inline MisiurewiczReport misiurewicz_check(const BlockProfile& profile,
                                           const GrowthEstimate& entropy,
                                           double tol = 0.05) {
  if (profile.empty()) throw InputError("empty block profile");
  MisiurewiczReport rep;
  rep.tolerance = tol;
  for (const auto& e : profile)
    rep.bound = std::max(rep.bound, e.log_branches);
  rep.entropy_upper = entropy.upper_rate;
  rep.pass = entropy.upper_rate >= rep.bound - tol;
  return rep;
}

// --- strong rectangular horseshoes --------------------------------------

// A closed n-dimensional rectangular box as a product of closed intervals.
struct Box {
  std::vector<std::array<double, 2>> sides;

  int dim() const { return static_cast<int>(sides.size()); }
  double min_side() const {
    double m = sides.front()[1] - sides.front()[0];
    for (const auto& s : sides) m = std::min(m, s[1] - s[0]);
    return m;
  }
  // the middle third of every side
  Box middle_third() const {
    Box b = *this;
    for (auto& s : b.sides) {
      double a = s[0], c = s[1];
      s = {(2.0 * a + c) / 3.0, (a + 2.0 * c) / 3.0};
    }
    return b;
  }
};

struct HorseshoeChecks {
  bool size_ok = false;         // |J| > eps
  bool subbox_sizes_ok = false; // every |J_i| > |J| / (2 k^{1/n})
  bool disjoint_ok = false;     // sub-box interiors pairwise disjoint
  bool containment_ok = false;  // J inside the interior of each image
};

struct HorseshoeCertificate {
  int dim = 0;
  double eps = 0.0;
  Box box;
  std::vector<Box> subboxes;
  std::vector<bool> subbox_contained;
  HorseshoeChecks checks;
  bool pass = false;
};

namespace detail {

// [lo, hi] must sit strictly inside one merged image interval (the merged
// parts are separated by genuine gaps, so a connected set cannot straddle).
inline bool covered_strictly(const std::vector<std::pair<double, double>>& image,
                             double lo, double hi) {
  for (const auto& part : image)
    if (part.first < lo - kGeomTol && part.second > hi + kGeomTol) return true;
  return false;
}

}  // namespace detail

// Verifies the three defining conditions of a strong (n, eps, k) rectangular
// horseshoe for a coordinate-product of piecewise-affine maps (one map per
// coordinate; pass the same map n times for a diagonal product). Image
// containment is computed exactly from branch images, with the interior
// enforced through strict margins of 1e-12.
inline HorseshoeCertificate verify_strong_horseshoe(
    const std::vector<const PiecewiseAffineMap*>& coordinate_maps,
    const Box& box, const std::vector<Box>& subboxes, double eps) {
  const int n = box.dim();
  if (n < 1 || static_cast<int>(coordinate_maps.size()) != n)
    throw InputError("coordinate maps must match the box dimension");
  for (const auto& sb : subboxes)
    if (sb.dim() != n) throw InputError("sub-box dimension mismatch");
  for (std::size_t a = 0; a < subboxes.size(); ++a)
    for (std::size_t b = a + 1; b < subboxes.size(); ++b) {
      bool overlap = true;
      for (int c = 0; c < n && overlap; ++c) {
        double lo = std::max(subboxes[a].sides[c][0], subboxes[b].sides[c][0]);
        double hi = std::min(subboxes[a].sides[c][1], subboxes[b].sides[c][1]);
        if (hi - lo <= kGeomTol) overlap = false;
      }
      if (overlap) throw InputError("sub-box interiors overlap");
    }

  HorseshoeCertificate cert;
  cert.dim = n;
  cert.eps = eps;
  cert.box = box;
  cert.subboxes = subboxes;
  cert.checks.disjoint_ok = true;
  cert.checks.size_ok = box.min_side() > eps + kGeomTol;

  const double k = static_cast<double>(subboxes.size());
  const double size_floor = box.min_side() / (2.0 * std::pow(k, 1.0 / n));
  cert.checks.subbox_sizes_ok = true;
  for (const auto& sb : subboxes)
    if (!(sb.min_side() > size_floor + kGeomTol))
      cert.checks.subbox_sizes_ok = false;

  cert.checks.containment_ok = true;
  cert.subbox_contained.reserve(subboxes.size());
  for (const auto& sb : subboxes) {
    Box hat = sb.middle_third();
    bool ok = true;
    for (int c = 0; c < n && ok; ++c) {
      auto image = coordinate_maps[c]->image_of(hat.sides[c][0], hat.sides[c][1]);
      ok = detail::covered_strictly(image, box.sides[c][0], box.sides[c][1]);
    }
    cert.subbox_contained.push_back(ok);
    if (!ok) cert.checks.containment_ok = false;
  }
  cert.pass = cert.checks.size_ok && cert.checks.subbox_sizes_ok &&
              cert.checks.disjoint_ok && cert.checks.containment_ok;
  return cert;
}

inline HorseshoeCertificate verify_strong_horseshoe(
    const PiecewiseAffineMap& map, const Box& box,
    const std::vector<Box>& subboxes, double eps) {
  return verify_strong_horseshoe(std::vector<const PiecewiseAffineMap*>{&map},
                                 box, subboxes, eps);
}

struct TentHorseshoeSpec {
  Box box;                  // hull of the sub-interval union
  std::vector<Box> subboxes;
  double eps = 0.0;         // 1 - 4/3^s
  int k = 0;                // (3^s - 3) / 3 sub-boxes
};

// The explicit strong horseshoe carried by the s-th tent composition:
// sub-intervals [ (3(r-1)+1)/3^s, (3(r-1)+4)/3^s ] whose middle thirds are
// full laps, so each image is all of [0,1].
inline TentHorseshoeSpec tent_power_horseshoe(int s) {
  if (s < 2) throw PreconditionError("tent horseshoe needs s >= 2");
  if (s > 33) throw ResourceError("3^s overflows the exact integer range");
  const double p = std::pow(3.0, s);
  TentHorseshoeSpec spec;
  spec.k = static_cast<int>((p - 3.0) / 3.0);
  spec.eps = 1.0 - 4.0 / p;
  spec.box.sides = {{1.0 / p, (p - 2.0) / p}};
  spec.subboxes.reserve(spec.k);
  for (int r = 1; r <= spec.k; ++r) {
    double a = (3.0 * (r - 1) + 1.0) / p;
    double b = (3.0 * (r - 1) + 4.0) / p;
    spec.subboxes.push_back(Box{{{a, b}}});
  }
  return spec;
}

}  // namespace mdimlab
