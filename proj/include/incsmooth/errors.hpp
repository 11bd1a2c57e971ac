#pragma once

#include <stdexcept>
#include <string>

namespace incsmooth {

// Base class for all library errors. Every subtype names the violated
// precondition in what().
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the operation's domain (point outside the basis domain,
// negative index, invalid parameter range).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Table-backed weight family queried beyond its declared extent without an
// extension rule.
class IndexOutOfTable : public Error {
 public:
  using Error::Error;
};

// liminf r_j / ln j neither supplied in closed form nor estimable for the
// requested family.
class RhoUnavailable : public Error {
 public:
  using Error::Error;
};

// Lazy spectrum enumeration cannot certify the order of the next emission
// because a coordinate beyond the configured maximum would be needed.
class CoordinateHorizonExceeded : public Error {
 public:
  using Error::Error;
};

// Per-coordinate weights fail the monotonicity required for certified lazy
// enumeration (non-decreasing in nu for fixed j, activation weights
// non-decreasing in j, all factor weights > 1).
class StreamOrderViolation : public Error {
 public:
  using Error::Error;
};

// Pointwise evaluation requested in a space whose coefficient criterion for
// being a reproducing kernel Hilbert space fails.
class NotRkhs : public Error {
 public:
  using Error::Error;
};

// Piecewise-constant approximation bounds require smoothness r_1 > 1.
class SmoothnessTooLow : public Error {
 public:
  using Error::Error;
};

// Curve fit requested on a window with fewer than three usable samples.
class DegenerateWindow : public Error {
 public:
  using Error::Error;
};

// Truncated sum or product overflows, signalling divergence of the input.
class DivergentSum : public Error {
 public:
  using Error::Error;
};

}  // namespace incsmooth
