#pragma once

#include <cstddef>
#include <functional>

namespace maxrep {

struct QuadratureOptions {
  double absolute_tolerance = 1e-10;
  std::size_t max_subdivisions = std::size_t{1} << 20;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t subdivisions = 0;
};

/// Adaptive Simpson integration of `f` over [lo, hi]. Throws QuadratureFailure
/// when the subdivision budget runs out before the tolerance is met.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                                  const QuadratureOptions& options = {});

} // namespace maxrep
