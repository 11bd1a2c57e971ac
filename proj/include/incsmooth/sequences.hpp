#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "incsmooth/errors.hpp"
#include "incsmooth/rules.hpp"
#include "incsmooth/weights.hpp"

namespace incsmooth {

// Positive sequence x_i, i >= 1, with optional declared invariants used to
// short-circuit numerical estimation.
struct PositiveSequence {
  std::function<double(Index)> term;
  std::optional<double> declared_decay;      // decay((x_i)) when known
  std::optional<double> declared_log_ratio;  // liminf x_i / ln i (for exponent sequences)

  static PositiveSequence from_values(std::vector<double> values) {
    return {[vs = std::move(values)](Index i) -> double {
              const auto k = static_cast<std::size_t>(i - 1);
              if (k >= vs.size()) throw DomainError("sequence index beyond stored values");
              return vs[k];
            },
            std::nullopt, std::nullopt};
  }
};

// Least-squares estimate of the decay exponent of x_i, i.e. the slope of
// ln(1/x_i) against ln(i), over logarithmically spaced samples in
// [i_min, i_max]. The first terms of a sequence are usually pre-asymptotic;
// callers choose the window accordingly.
struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the fit residuals
  int samples = 0;
  Index i_min = 0, i_max = 0;
};

inline DecayFit decay_fit(const std::function<double(Index)>& term, Index i_min, Index i_max,
                          int max_samples = 200) {
  if (i_min < 1 || i_max < i_min) throw DomainError("decay fit needs 1 <= i_min <= i_max");
  std::vector<Index> idx;
  const double llo = std::log(static_cast<double>(i_min));
  const double lhi = std::log(static_cast<double>(i_max));
  const int n = std::max(2, max_samples);
  for (int k = 0; k < n; ++k) {
    const double t = n == 1 ? llo : llo + (lhi - llo) * k / (n - 1);
    const auto i = static_cast<Index>(std::llround(std::exp(t)));
    idx.push_back(std::clamp(i, i_min, i_max));
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.size() < 3) throw DegenerateWindow("decay fit needs at least 3 distinct sample indices");

  Eigen::MatrixXd A(idx.size(), 2);
  Eigen::VectorXd y(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double x = term(idx[k]);
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("decay fit requires positive finite terms");
    A(k, 0) = 1.0;
    A(k, 1) = std::log(static_cast<double>(idx[k]));
    y(k) = -std::log(x);
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(y);
  DecayFit fit;
  fit.intercept = coef(0);
  fit.slope = coef(1);
  fit.residual = std::sqrt((A * coef - y).squaredNorm() / static_cast<double>(idx.size()));
  fit.samples = static_cast<int>(idx.size());
  fit.i_min = i_min;
  fit.i_max = i_max;
  return fit;
}

inline DecayFit decay_fit(const PositiveSequence& x, Index i_min, Index i_max,
                          int max_samples = 200) {
  return decay_fit(x.term, i_min, i_max, max_samples);
}

// Rearrangement identity for non-negative multi-sequences with finitely many
// non-unit factors per coordinate:
//   sum over multi-indices of prod_j beta(nu_j, j)  =  prod_j (1 + sum_nu beta(nu, j))
// beta[j][v] holds beta(v+1, j+1); the implicit beta(0, j) = 1 is not stored.
// The direct route enumerates every multi-index term individually (feasible
// when the term count is at most direct_cap) and is kept as an independent
// cross-check of the product route.
struct ProductSumResult {
  double product = 1.0;
  std::optional<double> direct;
  bool verified = false;
  double abs_sum = 0.0;  // sum of |beta| over the truncation
};

inline ProductSumResult product_sum(const std::vector<std::vector<double>>& beta,
                                    double tol = 1e-10, std::size_t direct_cap = 10'000'000) {
  ProductSumResult res;
  double log_terms = 0.0;
  for (const auto& col : beta) {
    double s = 0.0;
    for (double b : col) {
      res.abs_sum += std::abs(b);
      s += b;
    }
    res.product *= 1.0 + s;
    log_terms += std::log1p(static_cast<double>(col.size()));
  }
  if (!std::isfinite(res.product) || !std::isfinite(res.abs_sum))
    throw DivergentSum("product over coordinates overflows; truncated sums diverge");

  if (log_terms <= std::log(static_cast<double>(direct_cap))) {
    // term-by-term enumeration in depth-first order with compensated summation
    double sum = 0.0, comp = 0.0;
    auto add = [&](double v) {
      const double t = sum + v;
      comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
      sum = t;
    };
    std::vector<std::size_t> choice(beta.size(), 0);  // 0 = inactive, v = beta[j][v-1]
    while (true) {
      double term = 1.0;
      for (std::size_t j = 0; j < beta.size(); ++j)
        if (choice[j] > 0) term *= beta[j][choice[j] - 1];
      add(term);
      std::size_t j = 0;
      while (j < beta.size() && choice[j] == beta[j].size()) choice[j++] = 0;
      if (j == beta.size()) break;
      ++choice[j];
    }
    res.direct = sum + comp;
    res.verified = std::abs(*res.direct - res.product) <= tol * std::max(1.0, std::abs(res.product));
  }
  return res;
}

enum class Verdict { Convergent, Divergent, Boundary, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Convergent: return "convergent";
    case Verdict::Divergent: return "divergent";
    case Verdict::Boundary: return "boundary";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

// Equivalence of the bivariate sum with its two marginal single sums:
//   row:    sum_nu alpha(nu,1)^-tau * nu^sigma
//   col:    sum_j  alpha(1,j)^-tau
//   both:   sum_{nu,j} alpha(nu,j)^-tau * nu^sigma
// Under positive bivariate log-growth the double sum converges iff both
// single sums do. Partial sums are reported alongside closed-form verdicts;
// verdicts sit on the boundary when the deciding comparison is an equality.
struct EquivalenceReport {
  double row_sum = 0.0, col_sum = 0.0, double_sum = 0.0;
  Verdict row = Verdict::Unknown, col = Verdict::Unknown, both = Verdict::Unknown;
};

inline EquivalenceReport check_l4(const WeightFamily& f, double tau, double sigma,
                                  Index trunc_nu = 20000, Index trunc_j = 2000) {
  if (!(tau > 0.0)) throw DomainError("tau must be positive");
  if (f.kind() == WeightKind::Table)
    throw RhoUnavailable("convergence verdicts require a parametric weight kind");
  EquivalenceReport rep;
  for (Index nu = 1; nu <= trunc_nu; ++nu)
    rep.row_sum += std::exp(-tau * f.log_alpha(nu, 1) + sigma * std::log(static_cast<double>(nu)));
  for (Index j = 1; j <= trunc_j; ++j) rep.col_sum += std::exp(-tau * f.log_alpha(1, j));
  for (Index j = 1; j <= trunc_j; ++j) {
    double inner = 0.0;
    for (Index nu = 1; nu <= trunc_nu; ++nu) {
      const double t = std::exp(-tau * f.log_alpha(nu, j) + sigma * std::log(static_cast<double>(nu)));
      inner += t;
      if (t < 1e-18 * (1.0 + inner) && nu > 8) break;  // truncated tail is negligible
    }
    rep.double_sum += inner;
    if (inner < 1e-18 * (1.0 + rep.double_sum) && j > 8) break;
  }

  const DecayParams d = decay_params(f);
  auto cmp = [](double lhs, double rhs) {
    if (lhs > rhs + 1e-12) return Verdict::Convergent;
    if (lhs < rhs - 1e-12) return Verdict::Divergent;
    return Verdict::Boundary;
  };
  if (f.kind() == WeightKind::Polynomial)
    // a_nu grows linearly in nu, so the comparison is strict: the sum behaves
    // like sum nu^(sigma - tau*r_1) and diverges at the harmonic boundary
    rep.row = tau * f.r(1) > sigma + 1.0 ? Verdict::Convergent : Verdict::Divergent;
  else
    rep.row = Verdict::Convergent;  // super-polynomial decay in nu
  rep.col = cmp(tau * d.decay_alpha_1j, 1.0);
  if (d.rho_estimated && rep.col != Verdict::Divergent) rep.col = Verdict::Unknown;
  if (rep.row == Verdict::Convergent && rep.col == Verdict::Convergent)
    rep.both = Verdict::Convergent;
  else if (rep.row == Verdict::Divergent || rep.col == Verdict::Divergent)
    rep.both = Verdict::Divergent;
  else if (rep.row == Verdict::Boundary || rep.col == Verdict::Boundary)
    rep.both = Verdict::Boundary;
  else
    rep.both = Verdict::Unknown;
  return rep;
}

// Convergence of sum_j exp(-q_j) for a non-decreasing exponent sequence q:
// with q = liminf q_j / ln j, q > 1 is sufficient and q >= 1 necessary. On
// the boundary q == 1 the second-order exponent s = liminf (q_j - ln j) /
// ln(ln j) decides: s > 1 convergent, s < 1 divergent, s == 1 boundary.
struct TailReport {
  double q_liminf = 0.0;
  bool estimated = false;
  double partial_sum = 0.0;
  Verdict verdict = Verdict::Unknown;
};

inline TailReport check_l5(const PositiveSequence& q, Index trunc = 100000,
                           Index probe = Index{1} << 20) {
  TailReport rep;
  for (Index j = 1; j <= trunc; ++j) rep.partial_sum += std::exp(-q.term(j));
  if (q.declared_log_ratio) {
    rep.q_liminf = *q.declared_log_ratio;
  } else {
    rep.q_liminf = liminf_over_log(q.term, probe);
    rep.estimated = true;
  }
  const double tol = 0.02;
  if (rep.q_liminf > 1.0 + tol) {
    rep.verdict = Verdict::Convergent;
  } else if (rep.q_liminf < 1.0 - tol) {
    rep.verdict = Verdict::Divergent;
  } else {
    double s = std::numeric_limits<double>::infinity();
    for (Index j = probe / 2; j <= probe; j += probe / 8192 + 1) {
      const double lj = std::log(static_cast<double>(j));
      s = std::min(s, (q.term(j) - lj) / std::log(lj));
    }
    if (s > 1.0 + tol)
      rep.verdict = Verdict::Convergent;
    else if (s < 1.0 - tol)
      rep.verdict = Verdict::Divergent;
    else
      rep.verdict = Verdict::Boundary;
  }
  return rep;
}

}  // namespace incsmooth
