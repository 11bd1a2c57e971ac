#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "incsmooth/errors.hpp"
#include "incsmooth/multi_index.hpp"

namespace incsmooth {

// Finitely supported coefficient expansion over a univariate basis:
// f = sum coef * e_nu. Indices must be distinct and >= 0.
struct CoefVector {
  std::vector<std::pair<Index, std::complex<double>>> terms;

  std::complex<double> at(Index nu) const {
    for (const auto& [n, c] : terms)
      if (n == nu) return c;
    return {0.0, 0.0};
  }
};

// Finitely supported expansion over the tensor basis indexed by
// finitely supported multi-indices.
struct ProductCoefVector {
  std::vector<std::pair<MultiIndex, std::complex<double>>> terms;
};

}  // namespace incsmooth
