#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "dmfd/matrix.hpp"

namespace dmfd {

/// Mean of squared entrywise differences.
double mse(const Matrix& a, const Matrix& b);

struct LogAdjusted {
  double value = 0.0;
  /// Set when mse >= 1, where -1/ln(mse) is negative or undefined.
  bool out_of_range = false;
};

/// -1 / ln(mse), a monotone stretch of small errors. mse == 0 maps to 0 (the
/// limit); mse >= 1 returns the formula value (infinite at exactly 1) with
/// out_of_range set. Negative mse throws NumericError.
LogAdjusted log_adjusted(double mse);

struct ErrorPoint {
  std::size_t sweep = 0;  ///< hidden nodes or feature dimension
  double mse = 0.0;
  LogAdjusted log_adjusted;
  bool diverged = false;
};

struct ErrorCurve {
  std::vector<ErrorPoint> points;

  /// CSV with header "sweep,mse,log_adjusted,flag"; flag is "ok",
  /// "mse>=1" or "diverged".
  void write_csv(const std::filesystem::path& path) const;
};

}  // namespace dmfd
