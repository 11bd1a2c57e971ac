#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "incsmooth/bases.hpp"
#include "incsmooth/coefficients.hpp"
#include "incsmooth/errors.hpp"
#include "incsmooth/spectrum.hpp"
#include "incsmooth/weights.hpp"

namespace incsmooth {

// A concrete function space: a basis, a weight family, and which member of
// the scale is meant. Univariate members are indexed by j; the anchored
// variants carry the rescaling c and the anchor point. Product members are
// truncated to coordinates j <= j_max for evaluation purposes.
enum class SpaceFamilyKind { UniH, UniG, UniF, UniGc, UniFc, ProdH, ProdG, ProdF };

struct SpaceSpec {
  BasisFamily basis = BasisFamily::trigonometric();
  WeightFamily weights;
  SpaceFamilyKind family = SpaceFamilyKind::UniH;
  Index j = 1;          // univariate space index
  double c = 1.0;       // anchored rescaling
  double anchor = 0.0;  // anchor point in the basis domain
  Index nu_max = 64;    // univariate truncation of kernel sums
  Index j_max = 8;      // coordinate truncation of product kernels
  Index gamma_scan = 1 << 16;

  bool univariate() const {
    return family == SpaceFamilyKind::UniH || family == SpaceFamilyKind::UniG ||
           family == SpaceFamilyKind::UniF || family == SpaceFamilyKind::UniGc ||
           family == SpaceFamilyKind::UniFc;
  }
  bool anchored() const {
    return family == SpaceFamilyKind::UniGc || family == SpaceFamilyKind::UniFc;
  }
  bool f_type() const {
    return family == SpaceFamilyKind::UniF || family == SpaceFamilyKind::UniFc ||
           family == SpaceFamilyKind::ProdF;
  }

  // log of the coefficient weight of e_nu in the univariate member at
  // coordinate jj (for products) or at the configured j (univariate).
  // The constant term has weight 1 in every member of the scale.
  double log_weight(Index nu, Index jj) const {
    if (nu == 0) return 0.0;
    switch (family) {
      case SpaceFamilyKind::UniH:
      case SpaceFamilyKind::ProdH:
        return weights.log_alpha(nu, jj);
      case SpaceFamilyKind::UniG:
      case SpaceFamilyKind::ProdG:
        return weights.log_alpha(nu, 1) - gamma(weights, jj, gamma_scan).log_value;
      case SpaceFamilyKind::UniGc:
        return weights.log_alpha(nu, 1) - gamma(weights, jj, gamma_scan).log_value - std::log(c);
      case SpaceFamilyKind::UniF:
      case SpaceFamilyKind::ProdF:
        return weights.log_alpha(1, jj);
      case SpaceFamilyKind::UniFc:
        return weights.log_alpha(1, jj) - std::log(c);
    }
    return 0.0;
  }
};

namespace detail {

// sum_{nu > from} term(nu) for positive terms with an eventually power-law
// (or faster) tail: exact summation over a finite range, then a doubled
// integral-comparison remainder from the locally fitted exponent. Returns
// +inf when the tail does not exhibit summable decay.
inline double tail_sum(const std::function<double(Index)>& term, Index from) {
  double sum = 0.0;
  const Index mid = std::max<Index>(2 * from, from + 512);
  const Index hi = std::max<Index>(2 * mid, mid + 512);
  for (Index nu = from + 1; nu <= hi; ++nu) sum += term(nu);
  const double t_hi = term(hi), t_mid = term(mid);
  if (!(t_hi > 0.0)) return sum;
  if (!(t_mid > 0.0)) return std::numeric_limits<double>::infinity();
  const double p = std::log(t_hi / t_mid) / std::log(static_cast<double>(hi) / static_cast<double>(mid));
  if (!(p < -1.01)) return std::numeric_limits<double>::infinity();
  return sum + 2.0 * t_hi * static_cast<double>(hi) / (-p - 1.0);
}

// Dyadic-block tail for the piecewise-constant basis: within each block at
// most one basis function is non-zero at a point and its square is the block
// size, so the pointwise tail is bounded per block, not per index.
inline double haar_tail(const std::function<double(Index)>& log_weight, Index from) {
  if (from < 0) from = 0;
  double sum = 0.0;
  // partial block containing from + 1
  const Index ell0 = std::bit_width(static_cast<std::uint64_t>(from + 1)) - 1;
  sum += std::exp(ell0 * std::numbers::ln2 - log_weight(from + 1));
  double prev = 0.0;
  for (Index ell = ell0 + 1;; ++ell) {
    const double u = std::exp(ell * std::numbers::ln2 - log_weight(Index{1} << ell));
    sum += u;
    if (ell > ell0 + 8) {
      const double q = prev > 0.0 ? u / prev : 0.0;
      if (!(q < 0.99)) return std::numeric_limits<double>::infinity();
      if (u < 1e-18 * (1.0 + sum) || ell > 200) return sum + 2.0 * u * q / (1.0 - q);
    }
    prev = u;
  }
}

inline double univariate_tail(const SpaceSpec& s, Index jj) {
  if (s.f_type()) {
    // single non-constant coefficient; a tail exists only if it is truncated away
    if (s.nu_max >= 1) return 0.0;
    const double sup = s.basis.sup_abs(1);
    return std::exp(-s.log_weight(1, jj)) * sup * sup;
  }
  auto logw = [&](Index nu) { return s.log_weight(nu, jj); };
  switch (s.basis.kind()) {
    case BasisKind::Haar:
      return haar_tail(logw, s.nu_max);
    case BasisKind::Trigonometric:
    case BasisKind::Walsh:
      return tail_sum([&](Index nu) { return std::exp(-logw(nu)); }, s.nu_max);
    case BasisKind::Jacobi:
      return tail_sum(
          [&](Index nu) {
            const double sup = s.basis.sup_abs(nu);
            return std::exp(-logw(nu)) * sup * sup;
          },
          s.nu_max);
  }
  return 0.0;
}

// Full deviation bound sum_{nu >= 1} weight^-1 sup|e_nu|^2 of a univariate
// factor kernel from 1, computed for coordinate 1 and rescaled per
// coordinate by gamma_j (H and G members) or alpha(1,j)^-1 (F members).
inline double factor_deviation_scale(const SpaceSpec& s) {
  SpaceSpec first = s;
  first.family = SpaceFamilyKind::UniH;
  first.j = 1;
  first.nu_max = 0;
  return univariate_tail(first, 1);
}

inline void require_rkhs(const SpaceSpec& s, Index jj) {
  if (s.weights.kind() == WeightKind::Table) return;  // no closed-form verdict
  if (s.f_type()) return;                             // finite-dimensional
  const double r_eff = (s.family == SpaceFamilyKind::UniH || s.family == SpaceFamilyKind::ProdH)
                           ? s.weights.r(jj)
                           : s.weights.r(1);
  if (s.weights.kind() == WeightKind::Polynomial && !(r_eff > 2.0 * s.basis.sigma() + 1.0))
    throw NotRkhs("coefficient criterion fails: r <= 2*sigma + 1, point evaluation unbounded");
}

}  // namespace detail

// Truncated reproducing kernel value with a tail bound:
//   univariate:  1 + sum_{nu <= nu_max} weight(nu)^-1 e_nu(x) conj(e_nu(y))
//   product:     prod_{j <= j_max} k_j(x_j, y_j)
// The bound covers both the nu truncation of each factor and, for products,
// the coordinates beyond j_max via the multiplicative deviation sum.
// Anchored members have no coefficient-diagonal kernel and are rejected.
struct KernelValue {
  std::complex<double> value;
  double tail_bound = 0.0;
};

inline KernelValue kernel_eval(const SpaceSpec& s, double x, double y) {
  if (!s.univariate()) throw DomainError("scalar kernel arguments require a univariate member");
  if (s.anchored())
    throw DomainError("anchored members define scalar products only; their kernels are not materialized");
  detail::require_rkhs(s, s.j);
  std::complex<double> v = 1.0;
  const Index hi = s.f_type() ? std::min<Index>(1, s.nu_max) : s.nu_max;
  for (Index nu = 1; nu <= hi; ++nu)
    v += std::exp(-s.log_weight(nu, s.j)) * s.basis.eval(nu, x) * std::conj(s.basis.eval(nu, y));
  return {v, detail::univariate_tail(s, s.j)};
}

inline KernelValue kernel_eval(const SpaceSpec& s, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y) {
  if (s.univariate()) {
    if (x.size() != 1 || y.size() != 1)
      throw DomainError("univariate kernel takes scalar arguments");
    return kernel_eval(s, x(0), y(0));
  }
  if (x.size() < s.j_max || y.size() < s.j_max)
    throw DomainError("product kernel needs points with at least j_max coordinates");
  std::complex<double> prod = 1.0;
  double abs_prod = 1.0, abs_prod_padded = 1.0;
  for (Index jj = 1; jj <= s.j_max; ++jj) {
    detail::require_rkhs(s, jj);
    std::complex<double> v = 1.0;
    const Index hi = s.f_type() ? std::min<Index>(1, s.nu_max) : s.nu_max;
    for (Index nu = 1; nu <= hi; ++nu)
      v += std::exp(-s.log_weight(nu, jj)) * s.basis.eval(nu, x(jj - 1)) *
           std::conj(s.basis.eval(nu, y(jj - 1)));
    const double t = detail::univariate_tail(s, jj);
    prod *= v;
    abs_prod *= std::abs(v);
    abs_prod_padded *= std::abs(v) + t;
  }
  // coordinates beyond j_max: every factor deviates from 1 by at most the
  // per-coordinate scale times the full first-coordinate deviation sum
  double dev_sum;
  if (s.family == SpaceFamilyKind::ProdF) {
    const double sup1 = s.basis.sup_abs(1);
    dev_sum = detail::tail_sum(
        [&](Index jj) { return std::exp(-s.weights.log_alpha(1, jj)) * sup1 * sup1; }, s.j_max);
  } else {
    const double t1 = detail::factor_deviation_scale(s);
    dev_sum = t1 * detail::tail_sum(
                       [&](Index jj) { return gamma(s.weights, jj, s.gamma_scan).value; }, s.j_max);
  }
  const double trunc_part = abs_prod_padded - abs_prod;
  const double coord_part = abs_prod_padded * std::expm1(dev_sum);
  return {prod, trunc_part + coord_part};
}

// Norm induced by the member's scalar product. Anchored members evaluate
// f at the anchor from the coefficient expansion.
inline double norm(const SpaceSpec& s, const CoefVector& f) {
  if (!s.univariate()) throw DomainError("univariate norm requires a univariate member");
  double sq = 0.0;
  std::complex<double> at_anchor = 0.0;
  for (const auto& [nu, coef] : f.terms) {
    if (nu < 0) throw DomainError("coefficient indices must be >= 0");
    if (s.f_type() && nu > 1)
      throw DomainError("two-dimensional member supports coefficients on {0, 1} only");
    if (s.anchored()) {
      at_anchor += coef * s.basis.eval(nu, s.anchor);
      if (nu >= 1) sq += std::exp(s.log_weight(nu, s.j)) * std::norm(coef);
    } else {
      sq += std::exp(s.log_weight(nu, s.j)) * std::norm(coef);
    }
  }
  if (s.anchored()) {
    detail::require_rkhs(s, s.j);
    sq += std::norm(at_anchor);
  }
  return std::sqrt(sq);
}

inline double norm(const SpaceSpec& s, const ProductCoefVector& f) {
  if (s.univariate()) throw DomainError("product norm requires a product member");
  double sq = 0.0;
  for (const auto& [mi, coef] : f.terms) {
    double lw = 0.0;
    for (const auto& [jj, nu] : mi.entries()) {
      if (s.family == SpaceFamilyKind::ProdF && nu != 1)
        throw DomainError("product F member supports values in {0, 1} only");
      lw += s.log_weight(nu, jj);
    }
    sq += std::exp(lw) * std::norm(coef);
  }
  return std::sqrt(sq);
}

// Unweighted base-space norm of a coefficient expansion.
inline double base_norm(const CoefVector& f) {
  double sq = 0.0;
  for (const auto& [nu, coef] : f.terms) sq += std::norm(coef);
  return std::sqrt(sq);
}

// Two-sided comparison between the plain member norm and the anchored norms
// at rescalings c0 and 1/c0, plus the base-space bound:
//   (1 + theta/c0)^-1/2 ||f||_{anchored,1/c0}  <=  ||f||_plain
//   ||f||_plain  <=  (1 + theta)^1/2 ||f||_{anchored,c0}
//   ||f||_0      <=  (1 + theta/c0^2) ||f||_{anchored,1/c0}
// where theta is gamma_j for the G chain and alpha(1,j)^-1 for the F chain.
struct InequalityCheck {
  std::string name;
  double lhs = 0.0, rhs = 0.0;
  bool ok = true;
};

struct Lw2Report {
  double c0 = 0.0;
  double theta = 0.0;
  std::vector<InequalityCheck> checks;
  bool all_ok = true;
  double max_violation = 0.0;  // max over checks of (lhs - rhs) / max(1, rhs)
};

inline Lw2Report verify_lw2(const SpaceSpec& base, double c0, const std::vector<CoefVector>& fs) {
  if (!(c0 > 0.0 && c0 < 1.0)) throw DomainError("rescaling constant must satisfy 0 < c0 < 1");
  const bool g_chain = base.family == SpaceFamilyKind::UniG;
  if (!g_chain && base.family != SpaceFamilyKind::UniF)
    throw DomainError("norm comparison applies to univariate G or F members");
  Lw2Report rep;
  rep.c0 = c0;
  rep.theta = g_chain ? gamma(base.weights, base.j, base.gamma_scan).value
                      : std::exp(-base.weights.log_alpha(1, base.j));
  SpaceSpec anch_lo = base, anch_hi = base;
  anch_lo.family = g_chain ? SpaceFamilyKind::UniGc : SpaceFamilyKind::UniFc;
  anch_hi.family = anch_lo.family;
  anch_lo.c = c0;
  anch_hi.c = 1.0 / c0;
  auto record = [&](const std::string& name, double lhs, double rhs) {
    const bool ok = lhs <= rhs * (1.0 + 1e-12) + 1e-12;
    rep.checks.push_back({name, lhs, rhs, ok});
    rep.all_ok = rep.all_ok && ok;
    rep.max_violation = std::max(rep.max_violation, (lhs - rhs) / std::max(1.0, rhs));
  };
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const std::string tag = "f" + std::to_string(i);
    const double plain = norm(base, fs[i]);
    const double lo = norm(anch_hi, fs[i]);  // rescaling 1/c0
    const double hi = norm(anch_lo, fs[i]);  // rescaling c0
    record(tag + ":lower", std::pow(1.0 + rep.theta / c0, -0.5) * lo, plain);
    record(tag + ":upper", plain, std::sqrt(1.0 + rep.theta) * hi);
    record(tag + ":base", base_norm(fs[i]), (1.0 + rep.theta / (c0 * c0)) * lo);
  }
  return rep;
}

// Positive semidefiniteness of the kernel Gram matrix on a point set.
struct PsdReport {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool psd = true;
};

inline PsdReport gram_psd_check(const SpaceSpec& s, const std::vector<Eigen::VectorXd>& points,
                                double tol = 1e-10) {
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n == 0) throw DomainError("gram check needs at least one point");
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k <= i; ++k) {
      const auto v = kernel_eval(s, points[i], points[k]).value;
      g(i, k) = v;
      g(k, i) = std::conj(v);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  PsdReport rep;
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.max_eigenvalue = es.eigenvalues().maxCoeff();
  rep.psd = rep.min_eigenvalue >= -tol;
  return rep;
}

inline PsdReport gram_psd_check(const SpaceSpec& s, const std::vector<double>& points,
                                double tol = 1e-10) {
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(points.size());
  for (double x : points) pts.push_back(Eigen::VectorXd::Constant(1, x));
  return gram_psd_check(s, pts, tol);
}

}  // namespace incsmooth
