#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "incsmooth/errors.hpp"
#include "incsmooth/sequences.hpp"
#include "incsmooth/weights.hpp"

namespace incsmooth {

// Orthonormal bases of the unweighted base space, indexed by nu >= 0 with
// e_0 = 1. Step-function bases follow the right-continuous convention with
// the last dyadic cell closed, so the value at x = 1 equals the value on the
// final cell. sigma is the sup-norm growth exponent entering the coefficient
// criterion for reproducing kernels (for the dyadic-block basis the exponent
// refers to block-summed growth and is 0).
enum class BasisKind { Trigonometric, Walsh, Haar, Jacobi };

inline double dyadic_scale(Index ell) { return std::exp2(0.5 * static_cast<double>(ell)); }

class BasisFamily {
 public:
  static BasisFamily trigonometric() { return BasisFamily(BasisKind::Trigonometric, 0, 0); }
  static BasisFamily walsh() { return BasisFamily(BasisKind::Walsh, 0, 0); }
  static BasisFamily haar() { return BasisFamily(BasisKind::Haar, 0, 0); }
  static BasisFamily jacobi(double alpha, double beta) {
    if (!(alpha > -0.5) || !(beta > -0.5))
      throw DomainError("jacobi basis requires alpha, beta > -1/2");
    return BasisFamily(BasisKind::Jacobi, alpha, beta);
  }

  BasisKind kind() const { return kind_; }
  double jacobi_alpha() const { return alpha_; }
  double jacobi_beta() const { return beta_; }

  double domain_lo() const { return kind_ == BasisKind::Jacobi ? -1.0 : 0.0; }
  double domain_hi() const { return 1.0; }

  double sigma() const {
    return kind_ == BasisKind::Jacobi ? std::max(alpha_, beta_) + 0.5 : 0.0;
  }

  bool complex_valued() const { return kind_ == BasisKind::Trigonometric; }

  std::complex<double> eval(Index nu, double x) const {
    if (nu < 0) throw DomainError("basis index must be >= 0");
    if (x < domain_lo() || x > domain_hi())
      throw DomainError("evaluation point outside the basis domain");
    switch (kind_) {
      case BasisKind::Trigonometric: {
        // frequency (-1)^nu * ceil(nu/2): 0, -1, 1, -2, 2, ...
        const auto half = static_cast<double>((nu + 1) / 2);
        const double f = (nu % 2 == 0) ? half : -half;
        const double t = 2.0 * std::numbers::pi * f * x;
        return {std::cos(t), std::sin(t)};
      }
      case BasisKind::Walsh:
        return {walsh_value(nu, x), 0.0};
      case BasisKind::Haar:
        return {haar_value(nu, x), 0.0};
      case BasisKind::Jacobi:
        return {jacobi_normalization(nu) * jacobi_poly(nu, x), 0.0};
    }
    return {0.0, 0.0};
  }

  // Exact supremum of |e_nu| over the domain.
  double sup_abs(Index nu) const {
    if (nu < 0) throw DomainError("basis index must be >= 0");
    switch (kind_) {
      case BasisKind::Trigonometric:
      case BasisKind::Walsh:
        return 1.0;
      case BasisKind::Haar:
        return nu == 0 ? 1.0 : dyadic_scale(std::bit_width(static_cast<std::uint64_t>(nu)) - 1);
      case BasisKind::Jacobi: {
        if (nu == 0) return 1.0;
        // endpoint values dominate for max(alpha, beta) >= -1/2
        const auto n = static_cast<double>(nu);
        const double at_one = std::lgamma(n + alpha_ + 1.0) - std::lgamma(alpha_ + 1.0) - std::lgamma(n + 1.0);
        const double at_minus_one = std::lgamma(n + beta_ + 1.0) - std::lgamma(beta_ + 1.0) - std::lgamma(n + 1.0);
        return jacobi_normalization(nu) * std::exp(std::max(at_one, at_minus_one));
      }
    }
    return 1.0;
  }

  double jacobi_normalization(Index nu) const {
    const auto n = static_cast<double>(nu);
    const double s = alpha_ + beta_;
    const double lc2 = std::log(2.0 * n + s + 1.0) + std::lgamma(n + 1.0) + std::lgamma(n + s + 1.0) +
                       std::lgamma(alpha_ + 1.0) + std::lgamma(beta_ + 1.0) - std::log(s + 1.0) -
                       std::lgamma(s + 1.0) - std::lgamma(n + alpha_ + 1.0) - std::lgamma(n + beta_ + 1.0);
    return std::exp(0.5 * lc2);
  }

  double jacobi_poly(Index nu, double x) const {
    if (nu == 0) return 1.0;
    const double a = alpha_, b = beta_;
    double p0 = 1.0;
    double p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for (Index n = 2; n <= nu; ++n) {
      const double nn = static_cast<double>(n);
      const double c0 = 2.0 * nn * (nn + a + b) * (2.0 * nn + a + b - 2.0);
      const double c1 = (2.0 * nn + a + b - 1.0) *
                        ((2.0 * nn + a + b) * (2.0 * nn + a + b - 2.0) * x + a * a - b * b);
      const double c2 = 2.0 * (nn + a - 1.0) * (nn + b - 1.0) * (2.0 * nn + a + b);
      const double p2 = (c1 * p1 - c2 * p0) / c0;
      p0 = p1;
      p1 = p2;
    }
    return p1;
  }

 private:
  BasisFamily(BasisKind k, double alpha, double beta) : kind_(k), alpha_(alpha), beta_(beta) {}

  static double walsh_value(Index nu, double x) {
    if (nu == 0) return 1.0;
    const int bits = std::bit_width(static_cast<std::uint64_t>(nu));
    std::uint64_t xb = 0;
    double y = x;
    for (int i = 0; i < bits; ++i) {
      y *= 2.0;
      if (y >= 1.0) {
        xb |= std::uint64_t{1} << i;
        y -= 1.0;
      }
    }
    return (std::popcount(static_cast<std::uint64_t>(nu) & xb) & 1) ? -1.0 : 1.0;
  }

  static double haar_value(Index nu, double x) {
    if (nu == 0) return 1.0;
    const Index ell = std::bit_width(static_cast<std::uint64_t>(nu)) - 1;
    const Index k = nu - (Index{1} << ell);
    const double scale = dyadic_scale(ell);
    if (x == 1.0) return k == (Index{1} << ell) - 1 ? -scale : 0.0;
    const double t = x * std::exp2(static_cast<double>(ell)) - static_cast<double>(k);
    if (t < 0.0 || t >= 1.0) return 0.0;
    return t < 0.5 ? scale : -scale;
  }

  BasisKind kind_;
  double alpha_, beta_;
};

inline std::complex<double> eval_basis(const BasisFamily& basis, Index nu, double x) {
  return basis.eval(nu, x);
}

// Coefficient criterion for the weighted space over this basis to consist of
// functions with continuous point evaluation: sum_nu alpha(nu,1)^-1 nu^(2 sigma)
// finite, which for the polynomial kind holds iff r_1 > 2 sigma + 1 (a_nu
// grows linearly, so the boundary case diverges). The tensor level adds the
// coordinate sum, where the liminf comparison is sharp only away from 1.
enum class RkhsLevel { Univariate, Tensor };

struct RkhsReport {
  Verdict verdict = Verdict::Unknown;
  double sigma = 0.0;
  double threshold = 0.0;    // r_1 must exceed this
  double partial_sum = 0.0;  // truncated criterion sum
};

inline RkhsReport rkhs_condition(const BasisFamily& basis, const WeightFamily& f, RkhsLevel level,
                                 Index trunc = 20000) {
  if (f.kind() == WeightKind::Table)
    throw RhoUnavailable("the coefficient criterion requires a parametric weight kind");
  RkhsReport rep;
  rep.sigma = basis.sigma();
  rep.threshold = 2.0 * rep.sigma + 1.0;
  for (Index nu = 1; nu <= trunc; ++nu) {
    const double t = std::exp(2.0 * rep.sigma * std::log(static_cast<double>(nu)) - f.log_alpha(nu, 1));
    rep.partial_sum += t;
    if (t < 1e-18 * (1.0 + rep.partial_sum) && nu > 8) break;
  }
  Verdict uni;
  if (f.kind() == WeightKind::Polynomial)
    uni = f.r(1) > rep.threshold ? Verdict::Convergent : Verdict::Divergent;
  else
    uni = Verdict::Convergent;
  if (level == RkhsLevel::Univariate) {
    rep.verdict = uni;
    return rep;
  }
  const EquivalenceReport eq = check_l4(f, 1.0, 2.0 * rep.sigma, trunc, trunc);
  rep.verdict = eq.both;
  return rep;
}

}  // namespace incsmooth
