#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "incsmooth/errors.hpp"
#include "incsmooth/multi_index.hpp"

namespace incsmooth {

// Cost of one function evaluation as a function of the number of coordinates
// in which the evaluation point deviates from the anchor. A valid rule is
// non-decreasing with values in [1, +inf]; this is probed at construction.
class CostModel {
 public:
  static CostModel linear() {
    return CostModel([](Index n) { return std::max<double>(1.0, static_cast<double>(n)); },
                     "linear");
  }
  static CostModel fixed(double k = 1.0) {
    if (!(k >= 1.0)) throw DomainError("fixed cost must be >= 1");
    return CostModel([k](Index) { return k; }, "fixed(" + std::to_string(k) + ")");
  }
  static CostModel exponential(double zeta, double scale = 1.0) {
    if (!(zeta >= 0.0)) throw DomainError("exponential cost rate must be >= 0");
    if (!(scale >= 1.0)) throw DomainError("exponential cost scale must be >= 1");
    return CostModel([zeta, scale](Index n) { return scale * std::exp(zeta * static_cast<double>(n)); },
                     "exponential(" + std::to_string(zeta) + ")");
  }
  static CostModel custom(std::function<double(Index)> fn, std::string label = "custom") {
    return CostModel(std::move(fn), std::move(label));
  }

  double operator()(Index active) const {
    if (active < 0) throw DomainError("active coordinate count must be >= 0");
    return fn_(active);
  }
  const std::string& label() const { return label_; }

 private:
  CostModel(std::function<double(Index)> fn, std::string label)
      : fn_(std::move(fn)), label_(std::move(label)) {
    double prev = 0.0;
    for (Index n = 0; n <= 64; ++n) {
      const double c = fn_(n);
      if (!(c >= 1.0)) throw DomainError("cost rule must be >= 1 everywhere");
      if (c < prev) throw DomainError("cost rule must be non-decreasing");
      prev = c;
    }
  }

  std::function<double(Index)> fn_;
  std::string label_;
};

// Total cost of evaluating at the given points; every point is described by
// the multi-index of coordinates in which it deviates from the anchor, so the
// active count is the support size.
struct CostReport {
  double total = 0.0;
  std::vector<double> per_point;
};

inline CostReport evaluate_cost(const std::vector<MultiIndex>& points, const CostModel& model) {
  CostReport rep;
  rep.per_point.reserve(points.size());
  for (const auto& p : points) {
    const double c = model(static_cast<Index>(p.support_size()));
    rep.per_point.push_back(c);
    rep.total += c;
  }
  return rep;
}

}  // namespace incsmooth
