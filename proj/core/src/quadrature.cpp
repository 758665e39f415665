#include "maxrep/quadrature.hpp"

#include "maxrep/errors.hpp"

#include <cmath>
#include <vector>

namespace maxrep {

namespace {

struct Panel {
  double lo, mid, hi;
  double f_lo, f_mid, f_hi;
  double whole;
  double tolerance;
  int depth;
};

double simpson(double lo, double hi, double f_lo, double f_mid, double f_hi) {
  return (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
}

} // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                                  const QuadratureOptions& options) {
  QuadratureResult result;
  if (hi == lo) {
    return result;
  }
  const double mid = 0.5 * (lo + hi);
  const double f_lo = f(lo), f_mid = f(mid), f_hi = f(hi);
  std::vector<Panel> stack{{lo, mid, hi, f_lo, f_mid, f_hi, simpson(lo, hi, f_lo, f_mid, f_hi),
                            options.absolute_tolerance, 0}};
  constexpr int kMinDepth = 4;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double left_mid = 0.5 * (p.lo + p.mid);
    const double right_mid = 0.5 * (p.mid + p.hi);
    const double f_lm = f(left_mid), f_rm = f(right_mid);
    const double left = simpson(p.lo, p.mid, p.f_lo, f_lm, p.f_mid);
    const double right = simpson(p.mid, p.hi, p.f_mid, f_rm, p.f_hi);
    const double delta = left + right - p.whole;
    // A few forced splits guard against a lucky agreement on the first panel.
    if (p.depth >= kMinDepth && std::abs(delta) <= 15.0 * p.tolerance) {
      result.value += left + right + delta / 15.0;
      result.error_estimate += std::abs(delta) / 15.0;
      continue;
    }
    if (++result.subdivisions > options.max_subdivisions) {
      throw QuadratureFailure("adaptive Simpson exhausted its subdivision budget");
    }
    stack.push_back({p.mid, right_mid, p.hi, p.f_mid, f_rm, p.f_hi, right, 0.5 * p.tolerance, p.depth + 1});
    stack.push_back({p.lo, left_mid, p.mid, p.f_lo, f_lm, p.f_mid, left, 0.5 * p.tolerance, p.depth + 1});
  }
  return result;
}

} // namespace maxrep
