#pragma once

// Dyadic values k * 2^-c and the weight grid they form. Everything the
// network calculus builds is expressed on these grids so that float
// evaluation stays exact wherever the constructions promise exact values.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsybnet {

class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a requested enumeration/ERM budget exceeds the configured
// limit. Carries the computed bound as a decimal string.
class infeasible_budget_error : public error {
 public:
  infeasible_budget_error(const std::string& msg, std::string bound)
      : error(msg), bound_(std::move(bound)) {}
  const std::string& bound() const { return bound_; }

 private:
  std::string bound_;
};

// value = k * 2^-c with c >= 0
struct Dyadic {
  std::int64_t k = 0;
  int c = 0;

  double value() const { return std::ldexp(static_cast<double>(k), -c); }
};

// True iff v is exactly representable as k * 2^-c for integer k.
inline bool is_dyadic(double v, int c) {
  if (!std::isfinite(v)) return false;
  const double scaled = std::ldexp(v, c);
  if (std::abs(scaled) > 9.007199254740992e15) return false;  // 2^53
  return scaled == std::nearbyint(scaled);
}

// Exact integer numerator of a value known to lie on the 2^-c grid.
inline std::int64_t dyadic_numerator(double v, int c) {
  if (!is_dyadic(v, c))
    throw error("value " + std::to_string(v) + " is not on the 2^-" +
                std::to_string(c) + " grid");
  return static_cast<std::int64_t>(std::llround(std::ldexp(v, c)));
}

// The grid {k 2^-c : |k| <= 2^c} of admissible network weights.
struct WeightGrid {
  int c = 0;

  explicit WeightGrid(int exponent = 0) : c(exponent) {
    if (c < 0) throw error("grid exponent must be non-negative");
  }

  double step() const { return std::ldexp(1.0, -c); }

  bool contains(double v) const {
    return std::abs(v) <= 1.0 && is_dyadic(v, c);
  }

  // nearest grid value, ties toward zero magnitude handled by llround
  double snap(double v) const {
    const double clamped = std::max(-1.0, std::min(1.0, v));
    return std::ldexp(static_cast<double>(std::llround(std::ldexp(clamped, c))), -c);
  }

  // all 2^{c+1}+1 grid values in ascending order; only sensible for small c
  std::vector<double> values() const {
    const std::int64_t n = std::int64_t{1} << c;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(2 * n + 1));
    for (std::int64_t k = -n; k <= n; ++k)
      out.push_back(std::ldexp(static_cast<double>(k), -c));
    return out;
  }
};

// Smallest c <= cap with v on the 2^-c grid, or -1 if none.
inline int min_dyadic_exponent(double v, int cap = 52) {
  for (int c = 0; c <= cap; ++c)
    if (is_dyadic(v, c)) return c;
  return -1;
}

// Largest h = 2^-c (c >= 0) with h <= delta.
inline Dyadic dyadic_floor(double delta) {
  if (!(delta > 0.0)) throw error("dyadic_floor requires delta > 0");
  if (delta >= 1.0) return {1, 0};
  int expo = 0;
  std::frexp(delta, &expo);  // delta = m * 2^expo, m in [0.5, 1)
  int c = 1 - expo;          // 2^{expo-1} <= delta < 2^expo
  // frexp puts exact powers of two at m = 0.5, which the formula handles:
  // delta = 2^{expo-1} exactly gives h = delta.
  if (c < 0) c = 0;
  return {1, c};
}

}  // namespace tsybnet
