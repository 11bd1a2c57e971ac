#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "incsmooth/errors.hpp"
#include "incsmooth/rules.hpp"

namespace incsmooth {

// Finitely supported multi-index: sorted (coordinate, value) pairs with
// coordinate >= 1 and value >= 1; absent coordinates are 0.
class MultiIndex {
 public:
  using Entry = std::pair<Index, Index>;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<Entry> entries) : entries_(std::move(entries)) {
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      if (entries_[k].first < 1 || entries_[k].second < 1)
        throw DomainError("multi-index entries need coordinate >= 1 and value >= 1");
      if (k > 0 && entries_[k - 1].first >= entries_[k].first)
        throw DomainError("multi-index coordinates must be strictly increasing");
    }
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  Index value_at(Index j) const {
    for (const auto& [jj, v] : entries_)
      if (jj == j) return v;
    return 0;
  }

  // last (highest-coordinate) entry; support must be non-empty
  const Entry& back() const { return entries_.back(); }

  MultiIndex with_back_value(Index v) const {
    MultiIndex m = *this;
    m.entries_.back().second = v;
    return m;
  }
  MultiIndex with_back_coordinate(Index j) const {
    MultiIndex m = *this;
    m.entries_.back().first = j;
    return m;
  }
  MultiIndex with_appended(Index j, Index v) const {
    MultiIndex m = *this;
    m.entries_.emplace_back(j, v);
    return m;
  }

  bool operator==(const MultiIndex& o) const { return entries_ == o.entries_; }
  bool operator!=(const MultiIndex& o) const { return !(*this == o); }

  // Deterministic order used to break weight ties: support size, then
  // coordinate lists, then value lists, each lexicographically.
  static bool tie_less(const MultiIndex& a, const MultiIndex& b) {
    if (a.support_size() != b.support_size()) return a.support_size() < b.support_size();
    for (std::size_t k = 0; k < a.entries_.size(); ++k)
      if (a.entries_[k].first != b.entries_[k].first)
        return a.entries_[k].first < b.entries_[k].first;
    for (std::size_t k = 0; k < a.entries_.size(); ++k)
      if (a.entries_[k].second != b.entries_[k].second)
        return a.entries_[k].second < b.entries_[k].second;
    return false;
  }

  std::string to_json() const {
    std::string s = "[";
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      if (k) s += ",";
      s += "[" + std::to_string(entries_[k].first) + "," + std::to_string(entries_[k].second) + "]";
    }
    return s + "]";
  }

 private:
  std::vector<Entry> entries_;
};

}  // namespace incsmooth
