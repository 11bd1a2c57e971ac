#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "incsmooth/errors.hpp"
#include "incsmooth/multi_index.hpp"
#include "incsmooth/weights.hpp"

namespace incsmooth {

// Which per-coordinate weight profile drives the tensor-product spectrum.
//   H:  alpha(nu, j)
//   G:  alpha(nu, 1) / gamma_j            (same first-coordinate profile in every j)
//   F:  alpha(1, j), values restricted to {0, 1}
//   Gc: alpha(nu, 1) / (c * gamma_j)       anchored rescaling
//   Fc: alpha(1, j) / c                    anchored rescaling
enum class SpaceVariant { H, G, F, Gc, Fc };

inline const char* to_string(SpaceVariant v) {
  switch (v) {
    case SpaceVariant::H: return "H";
    case SpaceVariant::G: return "G";
    case SpaceVariant::F: return "F";
    case SpaceVariant::Gc: return "Gc";
    case SpaceVariant::Fc: return "Fc";
  }
  return "?";
}

struct StreamConfig {
  SpaceVariant variant = SpaceVariant::H;
  Index j_max = 1 << 20;           // largest coordinate the stream may activate
  bool finite_coordinates = false; // treat the space as having exactly j_max coordinates
  double c = 1.0;                  // anchored rescaling for Gc / Fc
  Index gamma_scan = 1 << 16;      // scan bound for table-kind gamma
  double tie_tol = 1e-12;          // relative tie tolerance on log weights
  std::size_t group_cap = std::size_t{1} << 20;
};

struct Emission {
  std::size_t rank = 0;   // 1-based position in the non-increasing arrangement
  double log_weight = 0;  // ln of the product weight
  double xi = 1.0;        // singular value exp(-log_weight / 2)
  MultiIndex index;
};

enum class StreamStatus { Emitted, HorizonExceeded, Exhausted };

// Lazy best-first emission of the non-increasing arrangement of the singular
// values xi = (product weight)^(-1/2) over all finitely supported
// multi-indices. Each index is generated exactly once from its canonical
// parent (drop or decrement the highest entry); the three successor moves are
//   increment the value of the highest entry,
//   activate the next coordinate with value 1,
//   shift a highest entry with value 1 one coordinate to the right.
// Weight ties within the relative tolerance are collected into a closed
// group, ordered deterministically (support size, coordinates, values), and
// emitted one by one. Correct order requires factor log weights positive,
// non-decreasing in the value for a fixed coordinate, and activation weights
// non-decreasing in the coordinate; violations raise StreamOrderViolation.
// Without the finite-coordinate flag an emission is certified only while its
// weight lies strictly below the activation weight of the first coordinate
// beyond j_max; afterwards try_next reports HorizonExceeded.
class SingularValueStream {
 public:
  SingularValueStream(WeightFamily family, StreamConfig cfg)
      : family_(std::move(family)), cfg_(cfg) {
    if (cfg_.j_max < 1) throw DomainError("stream needs j_max >= 1");
    if (!(cfg_.c > 0.0)) throw DomainError("anchored rescaling needs c > 0");
    if (const auto je = family_.j_extent()) {
      cfg_.j_max = std::min(cfg_.j_max, *je);
      cfg_.finite_coordinates = cfg_.finite_coordinates || cfg_.j_max == *je;
    }
    if (!cfg_.finite_coordinates) {
      horizon_log_ = coord_log_weight(1, cfg_.j_max + 1);
    } else {
      horizon_log_ = std::numeric_limits<double>::infinity();
    }
    frontier_.push(Node{0.0, MultiIndex{}});
  }

  const StreamConfig& config() const { return cfg_; }
  std::size_t emitted() const { return emitted_; }

  StreamStatus try_next(Emission& out) {
    if (horizon_hit_) return StreamStatus::HorizonExceeded;
    if (buffer_.empty() && !fill_buffer()) return StreamStatus::Exhausted;
    const Node& n = buffer_.front();
    if (n.logw >= horizon_log_ - tie_abs(horizon_log_)) {
      horizon_hit_ = true;  // order beyond this point would need coordinate j_max + 1
      return StreamStatus::HorizonExceeded;
    }
    out.rank = ++emitted_;
    out.log_weight = n.logw;
    out.xi = std::exp(-0.5 * n.logw);
    out.index = n.idx;
    buffer_.pop_front();
    return StreamStatus::Emitted;
  }

  Emission next() {
    Emission e;
    switch (try_next(e)) {
      case StreamStatus::Emitted:
        return e;
      case StreamStatus::HorizonExceeded:
        throw CoordinateHorizonExceeded(
            "certifying emission " + std::to_string(emitted_ + 1) +
            " needs a coordinate beyond j_max = " + std::to_string(cfg_.j_max));
      case StreamStatus::Exhausted:
        throw DomainError("stream exhausted: all multi-indices over the finite coordinate set emitted");
    }
    return e;
  }

  // Factor log weight of value nu at coordinate j under the configured variant.
  double coord_log_weight(Index nu, Index j) const {
    switch (cfg_.variant) {
      case SpaceVariant::H:
        return family_.log_alpha(nu, j);
      case SpaceVariant::G:
        return family_.log_alpha(nu, 1) - log_gamma(j);
      case SpaceVariant::Gc:
        return family_.log_alpha(nu, 1) - log_gamma(j) - std::log(cfg_.c);
      case SpaceVariant::F:
        return family_.log_alpha(1, j);
      case SpaceVariant::Fc:
        return family_.log_alpha(1, j) - std::log(cfg_.c);
    }
    return 0.0;
  }

  bool value_limited() const {
    return cfg_.variant == SpaceVariant::F || cfg_.variant == SpaceVariant::Fc;
  }

 private:
  struct Node {
    double logw;
    MultiIndex idx;
  };
  struct NodeGreater {
    bool operator()(const Node& a, const Node& b) const { return a.logw > b.logw; }
  };

  double tie_abs(double logw) const { return cfg_.tie_tol * std::max(1.0, std::abs(logw)); }

  double log_gamma(Index j) const {
    const auto it = gamma_cache_.find(j);
    if (it != gamma_cache_.end()) return it->second;
    const double lg = gamma(family_, j, cfg_.gamma_scan).log_value;
    gamma_cache_.emplace(j, lg);
    return lg;
  }

  Index value_extent(Index /*j*/) const {
    if (value_limited()) return 1;
    if (const auto ne = family_.nu_extent()) return *ne;
    return std::numeric_limits<Index>::max();
  }

  void push_checked(double parent_logw, double step, MultiIndex idx, const char* move) {
    if (step < -1e-9)
      throw StreamOrderViolation(std::string("factor weights not ordered for lazy enumeration (") +
                                 move + " step decreases the weight)");
    frontier_.push(Node{parent_logw + std::max(step, 0.0), std::move(idx)});
  }

  void expand(const Node& n) {
    if (n.idx.empty()) {
      if (cfg_.j_max >= 1) {
        const double w = coord_log_weight(1, 1);
        if (!(w > 1e-12))
          throw StreamOrderViolation("factor weight alpha(1,1) must exceed 1 for lazy enumeration");
        frontier_.push(Node{w, MultiIndex{}.with_appended(1, 1)});
      }
      return;
    }
    const auto [jk, vk] = n.idx.back();
    if (vk < value_extent(jk)) {
      const double step = coord_log_weight(vk + 1, jk) - coord_log_weight(vk, jk);
      push_checked(n.logw, step, n.idx.with_back_value(vk + 1), "increment");
    }
    if (jk + 1 <= cfg_.j_max) {
      const double w = coord_log_weight(1, jk + 1);
      if (!(w > 1e-12))
        throw StreamOrderViolation("activation weight alpha(1,j) must exceed 1 for lazy enumeration");
      frontier_.push(Node{n.logw + w, n.idx.with_appended(jk + 1, 1)});
      if (vk == 1) {
        const double step = w - coord_log_weight(1, jk);
        push_checked(n.logw, step, n.idx.with_back_coordinate(jk + 1), "shift");
      }
    }
  }

  bool fill_buffer() {
    if (frontier_.empty()) return false;
    std::vector<Node> group;
    group.push_back(frontier_.top());
    frontier_.pop();
    const double gmin = group.front().logw;
    const double cut = gmin + tie_abs(gmin);
    std::size_t expanded = 0;
    while (expanded < group.size()) {
      expand(group[expanded++]);
      while (!frontier_.empty() && frontier_.top().logw <= cut) {
        group.push_back(frontier_.top());
        frontier_.pop();
        if (group.size() > cfg_.group_cap)
          throw StreamOrderViolation("tie group exceeds cap; weights do not separate");
      }
    }
    std::sort(group.begin(), group.end(),
              [](const Node& a, const Node& b) { return MultiIndex::tie_less(a.idx, b.idx); });
    for (auto& n : group) buffer_.push_back(std::move(n));
    return true;
  }

  WeightFamily family_;
  StreamConfig cfg_;
  double horizon_log_ = std::numeric_limits<double>::infinity();
  bool horizon_hit_ = false;
  std::size_t emitted_ = 0;
  std::priority_queue<Node, std::vector<Node>, NodeGreater> frontier_;
  std::deque<Node> buffer_;
  mutable std::unordered_map<Index, double> gamma_cache_;
};

// err_n: the (n+1)-st largest singular value of the tensor-product
// approximation problem under full linear information.
inline double min_error_all(const WeightFamily& family, const StreamConfig& cfg, std::size_t n) {
  SingularValueStream s(family, cfg);
  Emission e;
  for (std::size_t k = 0; k <= n; ++k) e = s.next();
  return e.xi;
}

// Closed-form decay exponent of (err_n) under full linear information.
inline double predicted_decay_all(const DecayParams& d, SpaceVariant variant) {
  switch (variant) {
    case SpaceVariant::H:
      return 0.5 * std::min(d.decay_alpha_nu1, d.decay_alpha_1j);
    case SpaceVariant::F:
    case SpaceVariant::Fc:
      return 0.5 * d.decay_alpha_1j;
    case SpaceVariant::G:
    case SpaceVariant::Gc:
      return 0.5 * std::min(d.decay_alpha_nu1, d.decay_gamma);
  }
  return 0.0;
}

// Predicted decay exponent interval of sampling numbers under standard
// information; univariate_dec is the known decay of the univariate sampling
// problem for the first coordinate space. The interval collapses to a point
// whenever decay_gamma == decay_alpha_1j (both parametric kinds).
struct DecayInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool point() const { return lower == upper; }
};

inline DecayInterval predicted_decay_std(const DecayParams& d, double univariate_dec,
                                         SpaceVariant variant) {
  switch (variant) {
    case SpaceVariant::F:
    case SpaceVariant::Fc: {
      const double v = 0.5 * (d.decay_alpha_1j - 1.0);
      return {v, v};
    }
    case SpaceVariant::G:
    case SpaceVariant::Gc: {
      const double v = std::min(univariate_dec, 0.5 * (d.decay_gamma - 1.0));
      return {v, v};
    }
    case SpaceVariant::H:
      return {std::min(univariate_dec, 0.5 * (d.decay_gamma - 1.0)),
              std::min(univariate_dec, 0.5 * (d.decay_alpha_1j - 1.0))};
  }
  return {};
}

}  // namespace incsmooth
