#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "incsmooth/bases.hpp"
#include "incsmooth/coefficients.hpp"
#include "incsmooth/errors.hpp"

namespace incsmooth {

// Piecewise-constant interpolation on the dyadic grid of level n: the value
// on each cell I_m = [m 2^-n, (m+1) 2^-n) is the function value at the cell
// midpoint. Right-continuous, last cell closed at 1.
struct HaarInterpolant {
  int level = 0;
  Eigen::VectorXcd values;  // one value per cell, 2^level entries

  std::complex<double> operator()(double x) const {
    if (x < 0.0 || x > 1.0) throw DomainError("interpolant evaluated outside [0, 1]");
    const auto cells = static_cast<Index>(values.size());
    const auto m = std::min<Index>(static_cast<Index>(x * std::exp2(level)), cells - 1);
    return values(m);
  }
};

inline HaarInterpolant interpolate(int n, const std::function<std::complex<double>(double)>& f) {
  if (n < 0) throw DomainError("interpolation level must be >= 0");
  HaarInterpolant t;
  t.level = n;
  const Index cells = Index{1} << n;
  t.values.resize(cells);
  for (Index m = 0; m < cells; ++m)
    t.values(m) = f((2.0 * static_cast<double>(m) + 1.0) * std::exp2(-(n + 1)));
  return t;
}

// Basis functions of level ell >= n that survive midpoint interpolation at
// level n: exactly one per cell m, with index k and cell value c:
//   k(ell, m) = 2^ell + m 2^(ell-n) + (ell == n ? 0 : 2^(ell-n-1))
//   c(ell)    = 2^(ell/2) * (ell == n ? -1 : +1)
struct HaarAtom {
  Index k = 0;
  double c = 0.0;
};

inline HaarAtom haar_index(int ell, Index m, int n) {
  if (n < 0 || ell < n) throw DomainError("atom index needs ell >= n >= 0");
  if (m < 0 || m >= (Index{1} << n)) throw DomainError("cell index m must lie in [0, 2^n)");
  HaarAtom a;
  a.k = (Index{1} << ell) + (m << (ell - n)) + (ell == n ? 0 : Index{1} << (ell - n - 1));
  a.c = dyadic_scale(ell) * (ell == n ? -1.0 : 1.0);
  return a;
}

// Action of level-n interpolation on basis function nu.
enum class InterpolationCase { Reproduced, Atom, Annihilated };

struct InterpolatedBasis {
  InterpolationCase kind = InterpolationCase::Reproduced;
  Index m = 0;     // cell of the surviving indicator (Atom case)
  double c = 0.0;  // its value
};

inline InterpolatedBasis interpolation_action(int n, Index nu) {
  if (n < 0 || nu < 0) throw DomainError("interpolation action needs n >= 0, nu >= 0");
  if (nu < (Index{1} << n)) return {InterpolationCase::Reproduced, 0, 0.0};
  const int ell = std::bit_width(static_cast<std::uint64_t>(nu)) - 1;
  const Index k = nu - (Index{1} << ell);
  if (ell == n) return {InterpolationCase::Atom, k, -dyadic_scale(ell)};
  const Index stride = Index{1} << (ell - n);
  if (k % stride == stride / 2) return {InterpolationCase::Atom, k / stride, dyadic_scale(ell)};
  return {InterpolationCase::Annihilated, 0, 0.0};
}

// Exact interpolation error of a finitely supported expansion in the
// smoothness norm setting: components below level n are reproduced; the
// surviving cell indicators are orthogonal to the remaining tail, so
//   ||f - T_n f||_0^2 = sum_{nu >= 2^n} |a_nu|^2 + 2^-n sum_m |b_m|^2
// with b_m collecting the atom contributions of cell m.
struct MeasuredError {
  double l2_error = 0.0;
  double h_norm = 0.0;    // (sum |a_nu|^2 max(nu,1)^r1)^(1/2)
  double constant = 0.0;  // (1 - 2^(1-r1))^(-1/2)
  double bound = 0.0;     // (1 + constant) 2^(-n r1 / 2) h_norm
  bool within_bound = true;
};

inline MeasuredError measured_error(int n, const CoefVector& f, double r1) {
  if (!(r1 > 1.0)) throw SmoothnessTooLow("piecewise-constant error bounds need r_1 > 1");
  if (n < 0) throw DomainError("interpolation level must be >= 0");
  MeasuredError me;
  me.constant = 1.0 / std::sqrt(1.0 - std::exp2(1.0 - r1));
  double tail_sq = 0.0, h_sq = 0.0;
  std::vector<std::pair<Index, std::complex<double>>> cell_sums;
  auto add_cell = [&](Index m, std::complex<double> v) {
    for (auto& [mm, vv] : cell_sums)
      if (mm == m) {
        vv += v;
        return;
      }
    cell_sums.emplace_back(m, v);
  };
  for (const auto& [nu, coef] : f.terms) {
    if (nu < 0) throw DomainError("coefficient indices must be >= 0");
    h_sq += std::norm(coef) * std::pow(static_cast<double>(std::max<Index>(nu, 1)), r1);
    const auto act = interpolation_action(n, nu);
    if (nu >= (Index{1} << n)) {
      tail_sq += std::norm(coef);
      if (act.kind == InterpolationCase::Atom) add_cell(act.m, coef * act.c);
    }
  }
  double cell_sq = 0.0;
  for (const auto& [m, v] : cell_sums) cell_sq += std::norm(v);
  me.l2_error = std::sqrt(tail_sq + std::exp2(-n) * cell_sq);
  me.h_norm = std::sqrt(h_sq);
  me.bound = (1.0 + me.constant) * std::exp2(-0.5 * n * r1) * me.h_norm;
  me.within_bound = me.l2_error <= me.bound * (1.0 + 1e-12);
  return me;
}

// Worst-case interpolation error over the unit ball of the smoothness-r1
// space, restricted to indices nu < 2^trunc_L. The Gram matrix of the error
// operator decomposes into one small block per cell (diagonal plus a rank-one
// update from the surviving indicator) and pure diagonal entries elsewhere,
// so the top eigenvalue is exact at any truncation level. The upper bound
// combines the closed-form bound with the truncated tail.
struct WorstCase {
  double lower = 0.0;
  double upper = 0.0;
  int n = 0;
  int trunc_L = 0;
};

inline WorstCase worst_case_error(int n, double r1, int trunc_L) {
  if (!(r1 > 1.0)) throw SmoothnessTooLow("piecewise-constant error bounds need r_1 > 1");
  if (n < 0 || trunc_L < 0) throw DomainError("levels must be >= 0");
  WorstCase wc;
  wc.n = n;
  wc.trunc_L = trunc_L;
  const double c = 1.0 / std::sqrt(1.0 - std::exp2(1.0 - r1));
  const double closed_form = (1.0 + c) * std::exp2(-0.5 * n * r1);
  double top = 0.0;
  if (trunc_L > n) {
    const int blk = trunc_L - n;
    Eigen::VectorXd h(blk), d(blk);
    for (Index m = 0; m < (Index{1} << n); ++m) {
      for (int ell = n; ell < trunc_L; ++ell) {
        const HaarAtom atom = haar_index(ell, m, n);
        const double w = std::pow(static_cast<double>(atom.k), -0.5 * r1);
        h(ell - n) = atom.c * w;
        d(ell - n) = w * w;
      }
      Eigen::MatrixXd b = std::exp2(-n) * (h * h.transpose());
      b.diagonal() += d;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
      top = std::max(top, es.eigenvalues().maxCoeff());
    }
    if (trunc_L > n + 1) top = std::max(top, std::exp2(-(n + 1) * r1));  // largest non-atom index
  }
  wc.lower = std::sqrt(top);
  wc.upper = std::min(closed_form, wc.lower + (1.0 + c) * std::exp2(-0.5 * trunc_L * r1));
  return wc;
}

}  // namespace incsmooth
