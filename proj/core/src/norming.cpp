#include "maxrep/norming.hpp"

#include "maxrep/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace maxrep {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double leading_scale(std::size_t n, double multiplier) {
  return std::sqrt(2.0 * multiplier * std::log(static_cast<double>(n)));
}

} // namespace

std::string describe(const NormingFamily& family) {
  return std::visit(overloaded{
                        [](const GaussianNormingFamily&) -> std::string { return "gaussian"; },
                        [](const ChiNormingFamily& c) { return "chi(d=" + std::to_string(c.d) + ")"; },
                        [](const OrderStatNormingFamily& o) {
                          return "orderstat(d=" + std::to_string(o.d) + ",r=" + std::to_string(o.r) + ")";
                        },
                        [](const QuantileNormingFamily& q) { return "quantile(" + q.marginal + ")"; },
                        [](const ExplicitNormingFamily&) -> std::string { return "explicit"; },
                    },
                    family);
}

Norming gaussian_norming(std::size_t n) {
  if (n <= 2) {
    throw DomainError("gaussian norming needs n >= 3, got " + std::to_string(n));
  }
  const double a = leading_scale(n, 1.0);
  const double logn = std::log(static_cast<double>(n));
  const double b = a - (std::log(logn) + std::log(4.0 * std::numbers::pi)) / (2.0 * a);
  return {a, b, n, GaussianNormingFamily{}};
}

Norming chi_norming(std::size_t n, std::size_t d) {
  if (n < 2) {
    throw DomainError("chi norming needs n >= 2, got " + std::to_string(n));
  }
  if (d < 1) {
    throw DomainError("chi norming needs d >= 1");
  }
  const double a = leading_scale(n, 1.0);
  const double half_d = 0.5 * static_cast<double>(d);
  // log(2^{1-d/2} / Gamma(d/2) * a^{d-2}), assembled in log space.
  const double log_term =
      (1.0 - half_d) * std::numbers::ln2 - std::lgamma(half_d) + (static_cast<double>(d) - 2.0) * std::log(a);
  return {a, a + log_term / a, n, ChiNormingFamily{d}};
}

double binomial_coefficient(std::size_t d, std::size_t r) {
  if (r > d) {
    return 0.0;
  }
  double c = 1.0;
  for (std::size_t i = 1; i <= r; ++i) {
    c = c * static_cast<double>(d - r + i) / static_cast<double>(i);
  }
  return std::round(c);
}

Norming order_stat_norming(std::size_t n, std::size_t d, std::size_t r, OrderStatReading reading) {
  if (n < 2) {
    throw DomainError("order-statistic norming needs n >= 2, got " + std::to_string(n));
  }
  if (r < 1 || r > d) {
    throw DomainError("order-statistic norming needs 1 <= r <= d");
  }
  const double rr = static_cast<double>(r);
  const double a = leading_scale(n, rr);
  const double power_base = reading == OrderStatReading::scaled_leading ? a / rr : a;
  const double log_term = std::log(binomial_coefficient(d, r)) -
                          0.5 * rr * std::log(2.0 * std::numbers::pi) - rr * std::log(power_base);
  return {a, a / rr + log_term / a, n, OrderStatNormingFamily{d, r}};
}

Norming quantile_norming(const Marginal& marginal, std::size_t n) {
  return std::visit(
      overloaded{
          [n](const ExponentialMarginal&) -> Norming {
            if (n < 2) {
              throw DomainError("quantile norming needs n >= 2 (F^{-1}(0) is a boundary point)");
            }
            const double nn = static_cast<double>(n);
            const double b = std::log(nn); // F^{-1}(1 - 1/n)
            const double a = nn * std::exp(-b); // n f(b_n)
            return {a, b, n, QuantileNormingFamily{"exponential"}};
          },
          [](const auto& other) -> Norming {
            throw UnsupportedMarginal("quantile norming supports Gumbel-domain marginals only; " +
                                      marginal_name(Marginal{other}) + " is not one");
          },
      },
      marginal);
}

Norming explicit_norming(double a_n, double b_n, std::size_t n) {
  if (!(a_n > 0.0) || !std::isfinite(a_n) || !std::isfinite(b_n)) {
    throw InvalidParameter("explicit norming needs finite a_n > 0 and finite b_n");
  }
  return {a_n, b_n, n, ExplicitNormingFamily{}};
}

Norming auto_norming(const ProcessSpec& process, std::size_t n) {
  return std::visit(overloaded{
                        [n](const GaussianProcess&) { return gaussian_norming(n); },
                        [n](const ChiProcess& c) { return chi_norming(n, c.d); },
                        [n](const OrderStatProcess& o) { return order_stat_norming(n, o.d, o.r); },
                        [n](const GenericIidProcess& g) { return quantile_norming(g.marginal, n); },
                    },
                    process);
}

} // namespace maxrep
