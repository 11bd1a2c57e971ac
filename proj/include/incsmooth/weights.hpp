#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "incsmooth/errors.hpp"
#include "incsmooth/rules.hpp"

namespace incsmooth {

// Doubly indexed weight grid alpha(nu, j), nu >= 0, j >= 0, with the
// conventions alpha(nu, 0) = alpha(0, j) = 1. Three kinds:
//   Polynomial:      alpha(nu, j) = a_nu ^ r_j
//   Subexponential:  alpha(nu, j) = base ^ (r_j * nu^(b_j)),  base > 1
//   Table:           explicit grid plus a declared extension rule
// All internal arithmetic is done on log_alpha; alpha itself may overflow to
// +inf for large arguments, which callers must tolerate.
enum class WeightKind { Polynomial, Subexponential, Table };

enum class TableExtension {
  None,              // queries beyond the grid throw IndexOutOfTable
  ConstantTail,      // clamp to the last row / column
  LastRowGeometric,  // log-linear extrapolation from the last two rows / columns
};

class WeightFamily {
 public:
  static WeightFamily polynomial(SequenceRule a_rule, SequenceRule r_rule) {
    WeightFamily f;
    f.kind_ = WeightKind::Polynomial;
    f.a_ = std::move(a_rule);
    f.r_ = std::move(r_rule);
    return f;
  }

  static WeightFamily subexponential(double base, SequenceRule r_rule, SequenceRule b_rule) {
    if (!(base > 1.0)) throw DomainError("subexponential kind requires base > 1");
    WeightFamily f;
    f.kind_ = WeightKind::Subexponential;
    f.base_ = base;
    f.r_ = std::move(r_rule);
    f.b_ = std::move(b_rule);
    return f;
  }

  // values(nu-1, j-1) = alpha(nu, j)
  static WeightFamily table(Eigen::MatrixXd values, TableExtension ext) {
    if (values.rows() < 1 || values.cols() < 1)
      throw DomainError("weight table must be non-empty");
    if ((values.array() <= 0.0).any())
      throw DomainError("weight table entries must be positive");
    if (ext == TableExtension::LastRowGeometric && (values.rows() < 2 || values.cols() < 2))
      throw DomainError("geometric extension needs at least a 2x2 table");
    WeightFamily f;
    f.kind_ = WeightKind::Table;
    f.log_table_ = values.array().log().matrix();
    f.ext_ = ext;
    return f;
  }

  WeightKind kind() const { return kind_; }
  TableExtension extension() const { return ext_; }
  double base() const { return base_; }
  const SequenceRule& r_rule() const { return r_; }
  const SequenceRule& a_rule() const { return a_; }
  const SequenceRule& b_rule() const { return b_; }

  double a(Index nu) const {
    if (kind_ != WeightKind::Polynomial) throw DomainError("a_nu rule only exists for the polynomial kind");
    return a_(nu);
  }
  double r(Index j) const {
    if (kind_ == WeightKind::Table) throw DomainError("r_j rule does not exist for the table kind");
    return r_(j);
  }
  double b(Index j) const {
    if (kind_ != WeightKind::Subexponential) throw DomainError("b_j rule only exists for the subexponential kind");
    return b_(j);
  }

  // Finite index extents (table kind without extension); nullopt = unbounded.
  std::optional<Index> nu_extent() const {
    if (kind_ == WeightKind::Table && ext_ == TableExtension::None) return log_table_.rows();
    return std::nullopt;
  }
  std::optional<Index> j_extent() const {
    if (kind_ == WeightKind::Table && ext_ == TableExtension::None) return log_table_.cols();
    return std::nullopt;
  }
  Index table_rows() const { return kind_ == WeightKind::Table ? log_table_.rows() : 0; }
  Index table_cols() const { return kind_ == WeightKind::Table ? log_table_.cols() : 0; }

  double log_alpha(Index nu, Index j) const {
    if (nu < 0 || j < 0) throw DomainError("weight indices must be >= 0");
    if (nu == 0 || j == 0) return 0.0;
    switch (kind_) {
      case WeightKind::Polynomial:
        return r_(j) * std::log(a_(nu));
      case WeightKind::Subexponential:
        return r_(j) * std::pow(static_cast<double>(nu), b_(j)) * std::log(base_);
      case WeightKind::Table:
        return log_table_entry(nu, j);
    }
    return 0.0;
  }

  double alpha(Index nu, Index j) const {
    if (nu < 0 || j < 0) throw DomainError("weight indices must be >= 0");
    if (nu == 0 || j == 0) return 1.0;
    switch (kind_) {
      case WeightKind::Polynomial:
        return std::pow(a_(nu), r_(j));
      case WeightKind::Subexponential:
        return std::pow(base_, r_(j) * std::pow(static_cast<double>(nu), b_(j)));
      case WeightKind::Table:
        return std::exp(log_table_entry(nu, j));
    }
    return 1.0;
  }

 private:
  double log_table_entry(Index nu, Index j) const {
    const Index rows = log_table_.rows(), cols = log_table_.cols();
    Index i = nu - 1, k = j - 1;
    if (i < rows && k < cols) return log_table_(i, k);
    switch (ext_) {
      case TableExtension::None:
        throw IndexOutOfTable("weight table has no entry (" + std::to_string(nu) + "," +
                              std::to_string(j) + ") and no extension rule");
      case TableExtension::ConstantTail:
        return log_table_(std::min(i, rows - 1), std::min(k, cols - 1));
      case TableExtension::LastRowGeometric: {
        // log-linear continuation, first in nu, then in j
        auto row_val = [&](Index rr, Index kk) -> double {
          if (kk < cols) return log_table_(rr, kk);
          const double step = log_table_(rr, cols - 1) - log_table_(rr, cols - 2);
          return log_table_(rr, cols - 1) + step * static_cast<double>(kk - (cols - 1));
        };
        if (i < rows) return row_val(i, k);
        const double last = row_val(rows - 1, k);
        const double step = last - row_val(rows - 2, k);
        return last + step * static_cast<double>(i - (rows - 1));
      }
    }
    return 0.0;
  }

  WeightKind kind_ = WeightKind::Polynomial;
  SequenceRule a_;
  SequenceRule r_;
  SequenceRule b_;
  double base_ = 2.0;
  Eigen::MatrixXd log_table_;
  TableExtension ext_ = TableExtension::None;
};

// gamma_j = sup_nu alpha(nu,1) / alpha(nu,j), always in (0, 1]. Closed form
// for the parametric kinds (the supremum is attained at nu = 1); a scan for
// the table kind, conclusive only when the scanned supremum reaches 1 or the
// tail is pinned by a constant extension.
struct GammaResult {
  double value = 1.0;
  double log_value = 0.0;
  bool exact = true;
};

inline GammaResult gamma(const WeightFamily& f, Index j, Index scan_limit = 1 << 16) {
  if (j < 1) throw DomainError("gamma is defined for j >= 1");
  switch (f.kind()) {
    case WeightKind::Polynomial: {
      const double lg = (f.r(1) - f.r(j)) * std::log(f.a(1));
      return {std::exp(lg), lg, true};
    }
    case WeightKind::Subexponential: {
      const double lg = (f.r(1) - f.r(j)) * std::log(f.base());
      return {std::exp(lg), lg, true};
    }
    case WeightKind::Table: {
      Index hi = scan_limit;
      bool covered = false;  // the scan sees every distinct ratio value
      if (f.extension() != TableExtension::LastRowGeometric && hi >= f.table_rows()) {
        hi = f.table_rows();
        covered = true;
      }
      double best = -std::numeric_limits<double>::infinity();
      for (Index nu = 1; nu <= hi; ++nu)
        best = std::max(best, f.log_alpha(nu, 1) - f.log_alpha(nu, j));
      const bool conclusive = covered || best >= -1e-12;  // ratio <= 1 under (C1)
      return {std::exp(best), best, conclusive};
    }
  }
  return {};
}

// liminf r_j / ln j; closed form when the r rule declares it, dyadic-window
// estimate otherwise.
struct RhoResult {
  double value = 0.0;
  bool estimated = false;
};

inline RhoResult rho(const WeightFamily& f, Index probe_j = Index{1} << 21) {
  if (f.kind() == WeightKind::Table)
    throw RhoUnavailable("liminf r_j/ln j is undefined for the table kind");
  const auto& rule = f.r_rule();
  if (rule.log_growth) return {*rule.log_growth, false};
  return {liminf_over_log(rule.eval, probe_j), true};
}

// Decay exponents of the three driving sequences:
//   decay((alpha(nu,1)^-1)_nu), decay((alpha(1,j)^-1)_j), decay((gamma_j)_j)
// where decay(x) = sup{tau > 0 : sum x_i^(1/tau) < inf} = liminf ln(1/x_i)/ln i.
struct DecayParams {
  double rho = 0.0;
  bool rho_estimated = false;
  double decay_alpha_nu1 = 0.0;  // r_1 (polynomial), +inf (subexponential)
  double decay_alpha_1j = 0.0;   // rho * ln a_1, resp. rho * ln base
  double decay_gamma = 0.0;      // equals decay_alpha_1j for both kinds
};

inline DecayParams decay_params(const WeightFamily& f) {
  if (f.kind() == WeightKind::Table)
    throw RhoUnavailable("decay parameters require a parametric weight kind");
  DecayParams d;
  const RhoResult rr = rho(f);
  d.rho = rr.value;
  d.rho_estimated = rr.estimated;
  if (f.kind() == WeightKind::Polynomial) {
    d.decay_alpha_nu1 = f.r(1);
    d.decay_alpha_1j = d.rho * std::log(f.a(1));
  } else {
    d.decay_alpha_nu1 = std::numeric_limits<double>::infinity();
    d.decay_alpha_1j = d.rho * std::log(f.base());
  }
  d.decay_gamma = d.decay_alpha_1j;
  return d;
}

// Structural checks on a family:
//   (C1) alpha(nu,j) >= max(alpha(nu,1), alpha(1,j)) on the probed grid
//   (C2) alpha(1,1) > 1
//   monotone r_j, b_j, a_nu over the probe
//   growth heuristic a_nu / nu bounded away from 0 and inf
//   bivariate growth verdict: liminf ln alpha(nu,j)/(ln nu * ln j) > 0,
//   decided via rho when available (+1 true, -1 false, 0 unknown)
struct ValidationReport {
  bool c1_ok = true;
  bool c2_ok = true;
  bool monotone_r = true;
  bool monotone_b = true;
  bool monotone_a = true;
  bool growth_ok = true;
  int bivariate_growth = 0;
  std::vector<std::string> messages;

  bool ok() const { return c1_ok && c2_ok && monotone_r && monotone_b && monotone_a; }
};

inline ValidationReport validate(const WeightFamily& f, Index probe_nu = 256, Index probe_j = 256) {
  ValidationReport rep;
  const Index nu_hi = f.nu_extent() ? std::min(probe_nu, *f.nu_extent()) : probe_nu;
  const Index j_hi = f.j_extent() ? std::min(probe_j, *f.j_extent()) : probe_j;

  if (!(f.log_alpha(1, 1) > 0.0)) {
    rep.c2_ok = false;
    rep.messages.push_back("alpha(1,1) <= 1");
  }
  for (Index nu = 1; nu <= nu_hi && rep.c1_ok; ++nu) {
    for (Index j = 1; j <= j_hi; ++j) {
      const double la = f.log_alpha(nu, j);
      if (la < f.log_alpha(nu, 1) - 1e-12 || la < f.log_alpha(1, j) - 1e-12) {
        rep.c1_ok = false;
        rep.messages.push_back("alpha(" + std::to_string(nu) + "," + std::to_string(j) +
                               ") < max(alpha(nu,1), alpha(1,j))");
        break;
      }
    }
  }

  if (f.kind() != WeightKind::Table) {
    double prev = f.r(1);
    if (!(prev > 0.0)) {
      rep.monotone_r = false;
      rep.messages.push_back("r_1 <= 0");
    }
    for (Index j = 2; j <= j_hi; ++j) {
      const double cur = f.r(j);
      if (cur < prev - 1e-12) {
        rep.monotone_r = false;
        rep.messages.push_back("r_j decreases at j=" + std::to_string(j));
        break;
      }
      prev = cur;
    }
  }
  if (f.kind() == WeightKind::Subexponential) {
    double prev = f.b(1);
    if (!(prev > 0.0)) {
      rep.monotone_b = false;
      rep.messages.push_back("b_1 <= 0");
    }
    for (Index j = 2; j <= j_hi; ++j) {
      const double cur = f.b(j);
      if (cur < prev - 1e-12) {
        rep.monotone_b = false;
        rep.messages.push_back("b_j decreases at j=" + std::to_string(j));
        break;
      }
      prev = cur;
    }
  }
  if (f.kind() == WeightKind::Polynomial) {
    double prev = f.a(1);
    if (!(prev > 1.0)) {
      rep.monotone_a = false;
      rep.messages.push_back("a_1 <= 1");
    }
    for (Index nu = 2; nu <= nu_hi; ++nu) {
      const double cur = f.a(nu);
      if (cur < prev - 1e-12) {
        rep.monotone_a = false;
        rep.messages.push_back("a_nu decreases at nu=" + std::to_string(nu));
        break;
      }
      prev = cur;
    }
    for (Index nu : {Index{16}, Index{64}, Index{256}, Index{1024}, Index{4096}}) {
      const double ratio = f.a(nu) / static_cast<double>(nu);
      if (!(ratio > 1.0 / 64.0 && ratio < 64.0)) {
        rep.growth_ok = false;
        rep.messages.push_back("a_nu / nu outside [1/64, 64] at nu=" + std::to_string(nu));
        break;
      }
    }
  }

  if (f.kind() != WeightKind::Table) {
    try {
      const RhoResult rr = rho(f);
      if (rr.value > 0.0)
        rep.bivariate_growth = 1;
      else
        rep.bivariate_growth = (f.kind() == WeightKind::Polynomial && !rr.estimated) ? -1 : 0;
    } catch (const RhoUnavailable&) {
      rep.bivariate_growth = 0;
    }
  }
  return rep;
}

// Norm of the embedding of the smoother space indexed by j into the one
// indexed by i: sup over nu >= 0 of sqrt(alpha(nu,i) / alpha(nu,j)). Space
// index 0 denotes the unweighted base space. Detected unbounded ratios
// (polynomial kind with r_i > r_j) report +inf.
struct NormBound {
  double value = 1.0;
  bool exact = true;
};

inline NormBound embedding_norm(const WeightFamily& f, Index i, Index j,
                                Index scan_limit = 1 << 16) {
  if (i < 0 || j < 0) throw DomainError("space indices must be >= 0");
  if (i == j) return {1.0, true};
  auto log_ratio = [&](Index nu) { return 0.5 * (f.log_alpha(nu, i) - f.log_alpha(nu, j)); };
  switch (f.kind()) {
    case WeightKind::Polynomial: {
      const double ri = i == 0 ? 0.0 : f.r(i), rj = j == 0 ? 0.0 : f.r(j);
      if (ri <= rj) return {1.0, true};  // sup attained at nu = 0
      return {std::numeric_limits<double>::infinity(), true};
    }
    case WeightKind::Subexponential: {
      const double ri = i == 0 ? 0.0 : f.r(i), rj = j == 0 ? 0.0 : f.r(j);
      const double bi = i == 0 ? 0.0 : f.b(i), bj = j == 0 ? 0.0 : f.b(j);
      if (ri <= rj && bi <= bj) return {1.0, true};
      if (ri >= rj && bi >= bj) return {std::numeric_limits<double>::infinity(), true};
      break;  // mixed orientation: fall through to the scan
    }
    case WeightKind::Table:
      break;
  }
  const Index hi = f.nu_extent() ? std::min<Index>(scan_limit, *f.nu_extent()) : scan_limit;
  double best = 0.0;  // nu = 0 contributes ratio 1
  for (Index nu = 1; nu <= hi; ++nu) best = std::max(best, log_ratio(nu));
  if (best > 40.0) return {std::numeric_limits<double>::infinity(), false};
  const bool bounded_tail = f.nu_extent().has_value() || f.extension() == TableExtension::ConstantTail;
  return {std::exp(best), bounded_tail};
}

}  // namespace incsmooth
