#include "maxrep/limits.hpp"

#include "maxrep/errors.hpp"
#include "maxrep/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace maxrep {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// -log G(x); zero at +infinity.
double gumbel_rate(double x) { return std::isinf(x) && x > 0 ? 0.0 : std::exp(-x); }

// (1 - e^{-c}) / c, continuous at c = 0.
double relative_expm1(double c) {
  if (std::abs(c) < 1e-12) {
    return 1.0 - 0.5 * c;
  }
  return -std::expm1(-c) / c;
}

// E[exp(-(lambda s + (1 - lambda) t))] for lambda ~ Beta(alpha, beta). The
// substitutions lambda = v^{1/alpha} near 0 and 1 - lambda = w^{1/beta} near 1
// remove the endpoint singularities of the density.
double beta_expectation(double s, double t, const BetaLaw& law) {
  const double a = law.alpha;
  const double b = law.beta;
  const double log_beta_fn = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double norm = std::exp(log_beta_fn);
  auto h = [s, t](double lambda) { return std::exp(-(lambda * s + (1.0 - lambda) * t)); };
  QuadratureOptions options;
  options.absolute_tolerance = 0.5e-10 * norm;
  const auto left = adaptive_simpson(
      [&](double v) {
        const double lambda = std::pow(v, 1.0 / a);
        return h(lambda) * std::pow(1.0 - lambda, b - 1.0) / a;
      },
      0.0, std::pow(0.5, a), options);
  const auto right = adaptive_simpson(
      [&](double w) {
        const double mu = std::pow(w, 1.0 / b);
        return h(1.0 - mu) * std::pow(1.0 - mu, a - 1.0) / b;
      },
      0.0, std::pow(0.5, b), options);
  return (left.value + right.value) / norm;
}

double lambda_expectation(double s, double t, const LambdaLaw& law) {
  return std::visit(
      overloaded{
          [&](const PointMassLaw& l) { return std::exp(-(l.p * s + (1.0 - l.p) * t)); },
          [&](const Uniform01Law&) { return std::exp(-t) * relative_expm1(s - t); },
          [&](const BetaLaw& l) { return beta_expectation(s, t, l); },
          [&](const DiscreteLaw& l) {
            double acc = 0.0;
            for (std::size_t i = 0; i < l.values.size(); ++i) {
              acc += l.probs[i] * std::exp(-(l.values[i] * s + (1.0 - l.values[i]) * t));
            }
            return acc;
          },
      },
      law);
}

} // namespace

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

double mixed_gumbel_expectation(double x, double y, const LambdaLaw& law) {
  return std::clamp(lambda_expectation(gumbel_rate(x), gumbel_rate(y), law), 0.0, 1.0);
}

double expected_survival_power(double x, const LambdaLaw& law) {
  return mixed_gumbel_expectation(std::numeric_limits<double>::infinity(), x, law);
}

double expected_observed_power(double x, const LambdaLaw& law) {
  return mixed_gumbel_expectation(x, std::numeric_limits<double>::infinity(), law);
}

double replacing_limit(double x, double y, const LambdaLaw& law) {
  return gumbel_cdf(std::min(x, y)) * expected_survival_power(std::max(x, y), law);
}

double missing_limit(double x, double y, const LambdaLaw& law) {
  return mixed_gumbel_expectation(std::min(x, y), y, law);
}

std::string to_string(LimitLaw law) {
  switch (law) {
  case LimitLaw::replacing:
    return "replacing";
  case LimitLaw::missing_constant:
    return "missing-constant";
  case LimitLaw::missing_random:
    return "missing-random";
  case LimitLaw::marginal:
    return "marginal";
  }
  return "unknown";
}

LimitSurface limit_surface(const EvalGrid& grid, const LambdaLaw& law, PerturbationMode mode) {
  validate(grid);
  validate(law);
  LimitSurface surface;
  surface.grid = grid;
  if (mode == PerturbationMode::replacing) {
    surface.law = LimitLaw::replacing;
  } else {
    surface.law = std::holds_alternative<PointMassLaw>(law) ? LimitLaw::missing_constant
                                                           : LimitLaw::missing_random;
  }
  surface.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    for (std::size_t j = 0; j < grid.cols(); ++j) {
      surface.values[grid.index(i, j)] = mode == PerturbationMode::replacing
                                             ? replacing_limit(grid.xs[i], grid.ys[j], law)
                                             : missing_limit(grid.xs[i], grid.ys[j], law);
    }
  }
  return surface;
}

} // namespace maxrep
