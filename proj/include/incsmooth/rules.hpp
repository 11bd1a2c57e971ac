#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "incsmooth/errors.hpp"

namespace incsmooth {

using Index = std::int64_t;

// A positive sequence i -> value(i), i >= 1, given by a rule. Carries the
// liminf of value(i)/ln(i) when it is known in closed form; consumers fall
// back to numerical estimation otherwise.
struct SequenceRule {
  std::function<double(Index)> eval;
  std::optional<double> log_growth;  // liminf value(i) / ln(i)
  std::string label;

  double operator()(Index i) const {
    if (i < 1) throw DomainError("sequence rule evaluated at index < 1");
    return eval(i);
  }
};

// a_nu = 2*pi*floor((nu+1)/2)
inline SequenceRule builtin_a1() {
  return {[](Index nu) { return 2.0 * std::numbers::pi * static_cast<double>((nu + 1) / 2); },
          std::nullopt,
          "builtin_a1"};
}

// a_nu = 1 + floor((nu+1)/2)
inline SequenceRule builtin_a2() {
  return {[](Index nu) { return 1.0 + static_cast<double>((nu + 1) / 2); },
          std::nullopt,
          "builtin_a2"};
}

inline SequenceRule constant_rule(double value) {
  return {[value](Index) { return value; }, 0.0, "constant(" + std::to_string(value) + ")"};
}

// value(i) = c0 + c * ln(i); liminf value/ln = c
inline SequenceRule affine_log_rule(double c0, double c) {
  return {[c0, c](Index i) { return c0 + c * std::log(static_cast<double>(i)); },
          c,
          "affine_log(" + std::to_string(c0) + "," + std::to_string(c) + ")"};
}

// value(i) = c0 + c * i; liminf value/ln = +inf for c > 0
inline SequenceRule linear_rule(double c0, double c) {
  return {[c0, c](Index i) { return c0 + c * static_cast<double>(i); },
          c > 0 ? std::numeric_limits<double>::infinity() : 0.0,
          "linear(" + std::to_string(c0) + "," + std::to_string(c) + ")"};
}

// value(i) = c0 * i^p; liminf value/ln = +inf for p > 0, 0 for p == 0
inline SequenceRule power_rule(double c0, double p) {
  return {[c0, p](Index i) { return c0 * std::pow(static_cast<double>(i), p); },
          p > 0 ? std::numeric_limits<double>::infinity() : 0.0,
          "power(" + std::to_string(c0) + "," + std::to_string(p) + ")"};
}

// Explicit leading values, held constant beyond the list.
inline SequenceRule list_rule(std::vector<double> values) {
  if (values.empty()) throw DomainError("list rule needs at least one value");
  return {[vs = std::move(values)](Index i) {
            const auto k = static_cast<std::size_t>(i - 1);
            return k < vs.size() ? vs[k] : vs.back();
          },
          0.0,
          "list"};
}

inline SequenceRule custom_rule(std::function<double(Index)> fn,
                                std::optional<double> log_growth = std::nullopt,
                                std::string label = "custom") {
  return {std::move(fn), log_growth, std::move(label)};
}

// Numerical liminf of value(i)/ln(i): running minimum over dyadic windows
// [J/2, J]; the last window's minimum is the estimate.
inline double liminf_over_log(const std::function<double(Index)>& value, Index probe) {
  if (probe < 8) throw DomainError("liminf estimation needs probe >= 8");
  double window_min = std::numeric_limits<double>::infinity();
  const Index lo = probe / 2;
  Index step = (probe - lo) / 4096 + 1;
  for (Index i = lo; i <= probe; i += step) {
    window_min = std::min(window_min, value(i) / std::log(static_cast<double>(i)));
  }
  return window_min;
}

}  // namespace incsmooth
