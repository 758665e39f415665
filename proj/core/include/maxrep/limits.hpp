#pragma once

#include "maxrep/models.hpp"

#include <string>
#include <vector>

namespace maxrep {

/// G(x) = exp(-e^{-x}).
double gumbel_cdf(double x);

/// E[ G(x)^lambda * G(y)^(1 - lambda) ] for lambda drawn from `law`.
/// Either argument may be +infinity (factor 1).
double mixed_gumbel_expectation(double x, double y, const LambdaLaw& law);

/// E[ G(x)^(1 - lambda) ].
double expected_survival_power(double x, const LambdaLaw& law);

/// E[ G(x)^lambda ]: limit law of the maximum over observed points only.
double expected_observed_power(double x, const LambdaLaw& law);

/// Joint limit of (perturbed max, original max) under random replacing:
/// G(min(x, y)) * E[G^{1-lambda}(max(x, y))].
double replacing_limit(double x, double y, const LambdaLaw& law);

/// Joint limit under random missing: E[G^lambda(min(x, y)) G^{1-lambda}(y)].
/// For x < y this is the classical form E[G^lambda(x) G^{1-lambda}(y)].
double missing_limit(double x, double y, const LambdaLaw& law);

enum class LimitLaw { replacing, missing_constant, missing_random, marginal };

std::string to_string(LimitLaw law);

struct LimitSurface {
  EvalGrid grid;
  std::vector<double> values; // row-major over (xs, ys)
  LimitLaw law = LimitLaw::replacing;

  double at(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }
};

LimitSurface limit_surface(const EvalGrid& grid, const LambdaLaw& law, PerturbationMode mode);

} // namespace maxrep
