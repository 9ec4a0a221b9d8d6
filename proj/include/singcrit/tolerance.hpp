#pragma once

#include <cmath>

namespace singcrit {

/// Scale-aware zero test: x counts as zero when
/// |x| <= abs + rel * scale, where scale is the largest magnitude taking part
/// in the same determinant or series.
struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-9;

  constexpr double bound(double scale) const noexcept { return abs + rel * std::fabs(scale); }
  bool is_zero(double x, double scale) const noexcept { return std::fabs(x) <= bound(scale); }
};

inline constexpr Tolerance kDefaultTolerance{};

inline constexpr int kDefaultOrder = 9;
inline constexpr int kDefaultMaxK = 6;

}  // namespace singcrit
