#pragma once

#include "maxrep/models.hpp"

#include <cstddef>
#include <string>
#include <variant>

namespace maxrep {

struct GaussianNormingFamily {};
struct ChiNormingFamily {
  std::size_t d = 1;
};
struct OrderStatNormingFamily {
  std::size_t d = 1;
  std::size_t r = 1;
};
struct QuantileNormingFamily {
  std::string marginal;
};
struct ExplicitNormingFamily {};

using NormingFamily = std::variant<GaussianNormingFamily, ChiNormingFamily, OrderStatNormingFamily,
                                   QuantileNormingFamily, ExplicitNormingFamily>;

std::string describe(const NormingFamily& family);

// Affine normalization u_n(x) = x / a_n + b_n.
struct Norming {
  double a_n = 1.0;
  double b_n = 0.0;
  std::size_t n = 1;
  NormingFamily family = ExplicitNormingFamily{};

  double threshold(double x) const noexcept { return x / a_n + b_n; }
  double normalize(double level) const noexcept { return a_n * (level - b_n); }
};

/// a_n = sqrt(2 log n), b_n = a_n - (log log n + log 4 pi) / (2 a_n). Needs n >= 3.
Norming gaussian_norming(std::size_t n);

/// a_n = sqrt(2 log n), b_n = a_n + log(2^{1-d/2} a_n^{d-2} / Gamma(d/2)) / a_n.
Norming chi_norming(std::size_t n, std::size_t d);

// How the undefined location sequence in the order-statistic norming is read.
enum class OrderStatReading {
  // b_n = a_n/r + log(C_d^r (2 pi)^{-r/2} (a_n/r)^{-r}) / a_n; tail-calibrated.
  scaled_leading,
  // b_n = a_n/r + log(C_d^r (2 pi)^{-r/2} a_n^{-r}) / a_n; kept for comparison only.
  literal,
};

/// a_n = sqrt(2 r log n); b_n per `reading`.
Norming order_stat_norming(std::size_t n, std::size_t d, std::size_t r,
                           OrderStatReading reading = OrderStatReading::scaled_leading);

/// b_n = F^{-1}(1 - 1/n), a_n = n f(b_n). Gumbel-domain marginals only.
Norming quantile_norming(const Marginal& marginal, std::size_t n);

Norming explicit_norming(double a_n, double b_n, std::size_t n);

/// Family-appropriate norming for a process (quantile recipe for generic iid).
Norming auto_norming(const ProcessSpec& process, std::size_t n);

/// d! / (r! (d - r)!)
double binomial_coefficient(std::size_t d, std::size_t r);

} // namespace maxrep
