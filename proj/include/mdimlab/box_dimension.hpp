#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "mdimlab/branch_counts.hpp"
#include "mdimlab/common.hpp"

namespace mdimlab {

// Carriers for box counting: a finite 1-d sample, the exact middle-third
// cylinder structure at a given depth, or a product of two carriers.
class BoxCarrier {
 public:
  static BoxCarrier sample(std::vector<double> points) {
    if (points.empty()) throw InputError("empty carrier");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    BoxCarrier c;
    c.points_ = std::move(points);
    return c;
  }

  static BoxCarrier cantor(int depth) {
    if (depth < 1) throw InputError("cantor carrier needs depth >= 1");
    BoxCarrier c;
    c.cantor_depth_ = depth;
    return c;
  }

  static BoxCarrier product(BoxCarrier left, BoxCarrier right) {
    BoxCarrier c;
    c.left_ = std::make_shared<BoxCarrier>(std::move(left));
    c.right_ = std::make_shared<BoxCarrier>(std::move(right));
    return c;
  }

  // Minimal number of eps-boxes needed to cover the carrier.
  //  - samples: exact minimal cover of the points by length-eps intervals
  //    (greedy sweep, optimal in 1-d);
  //  - cylinders: number of depth-m cylinders at the finest m with diameter
  //    3^{-m} <= eps (their gaps are >= 3^{-m}, so none can be merged);
  //  - products: factor covers multiply (the boxes are coordinate products).
  double count(double eps) const {
    if (!(eps > 0.0)) throw InputError("eps must be positive");
    if (left_) return left_->count(eps) * right_->count(eps);
    if (cantor_depth_) {
      int m = static_cast<int>(std::ceil(-std::log(eps) / std::log(3.0) - 1e-9));
      m = std::clamp(m, 0, *cantor_depth_);
      return std::pow(2.0, m);
    }
    double used = 0.0;
    std::size_t i = 0;
    while (i < points_.size()) {
      double edge = points_[i] + eps;
      while (i < points_.size() && points_[i] <= edge) ++i;
      used += 1.0;
    }
    return used;
  }

  bool is_product() const { return static_cast<bool>(left_); }

 private:
  BoxCarrier() = default;
  std::vector<double> points_;
  std::optional<int> cantor_depth_;
  std::shared_ptr<BoxCarrier> left_, right_;
};

// Box-dimension estimate: ratios log N(eps) / |log eps| along the schedule,
// reported as the (min, max) over the last half.
inline MdimEstimate box_dimension(const BoxCarrier& carrier,
                                  const EpsilonSchedule& schedule,
                                  double dim_bound = 64.0) {
  std::vector<std::pair<double, double>> pe;
  pe.reserve(schedule.size());
  for (double eps : schedule.eps) {
    double n = carrier.count(eps);
    pe.emplace_back(eps, std::log(n) / std::abs(std::log(eps)));
  }
  return detail::finish_estimate(std::move(pe), dim_bound);
}

struct BoxDimProductReport {
  MdimEstimate left, right, product;
  bool lower_chain_ok = false;  // dim_L + dim_R <= dim_P (lower bounds)
  bool upper_chain_ok = false;  // dim_P <= dim_L + dim_R (upper bounds)
  double tolerance = 0.0;
};

// Estimates the six box-dimension quantities and checks the two product
// chains within the estimator tolerance.
inline BoxDimProductReport box_dim_product_report(const BoxCarrier& left,
                                                  const BoxCarrier& right,
                                                  const EpsilonSchedule& schedule,
                                                  double tol = 0.05) {
  BoxDimProductReport rep;
  rep.left = box_dimension(left, schedule);
  rep.right = box_dimension(right, schedule);
  rep.product = box_dimension(BoxCarrier::product(left, right), schedule);
  rep.tolerance = tol;
  rep.lower_chain_ok =
      rep.left.upper + rep.right.lower <= rep.product.upper + tol &&
      rep.left.lower + rep.right.lower <= rep.product.lower + tol;
  rep.upper_chain_ok =
      rep.product.upper <= rep.left.upper + rep.right.upper + tol &&
      rep.product.lower <= rep.left.lower + rep.right.upper + tol;
  return rep;
}

}  // namespace mdimlab
