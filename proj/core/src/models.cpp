#include "maxrep/models.hpp"

#include "maxrep/errors.hpp"
#include "maxrep/samplers.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace maxrep {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    os << (i ? "," : "") << v[i];
  }
  return os.str();
}

void require(bool ok, const std::string& message) {
  if (!ok) {
    throw InvalidParameter(message);
  }
}

void validate_probability_vector(const std::vector<double>& values,
                                 const std::vector<double>& probs, bool unit_interval) {
  require(!values.empty(), "support must be nonempty");
  require(values.size() == probs.size(), "values and probs must have equal length");
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    require(std::isfinite(values[i]), "support values must be finite");
    if (unit_interval) {
      require(values[i] >= 0.0 && values[i] <= 1.0, "lambda values must lie in [0, 1]");
    }
    require(probs[i] >= 0.0 && std::isfinite(probs[i]), "probabilities must be nonnegative");
    total += probs[i];
  }
  require(std::abs(total - 1.0) <= 1e-12, "probabilities must sum to 1");
}

} // namespace

double CovarianceSpec::lag(std::size_t k) const {
  if (k == 0) {
    return 1.0;
  }
  return std::visit(
      overloaded{
          [](const IidCovariance&) { return 0.0; },
          [k](const Ar1Covariance& c) { return std::pow(c.rho, static_cast<double>(k)); },
          [k](const PowerDecayCovariance& c) {
            return c.scale * std::pow(1.0 + static_cast<double>(k), -c.gamma);
          },
          [k](const MovingAverageCovariance& c) {
            if (k > c.m || k >= c.weights.size()) {
              return 0.0;
            }
            double norm = 0.0;
            double acc = 0.0;
            for (std::size_t i = 0; i < c.weights.size(); ++i) {
              norm += c.weights[i] * c.weights[i];
              if (i + k < c.weights.size()) {
                acc += c.weights[i] * c.weights[i + k];
              }
            }
            return acc / norm;
          },
          [k](const ExplicitCovariance& c) { return k < c.r.size() ? c.r[k] : 0.0; },
      },
      variant_);
}

std::string CovarianceSpec::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const IidCovariance&) { os << "iid"; },
                 [&](const Ar1Covariance& c) { os << "ar1(rho=" << c.rho << ")"; },
                 [&](const PowerDecayCovariance& c) {
                   os << "power(gamma=" << c.gamma << ",scale=" << c.scale << ")";
                 },
                 [&](const MovingAverageCovariance& c) {
                   os << "mdependent(m=" << c.m << ",weights=" << join(c.weights) << ")";
                 },
                 [&](const ExplicitCovariance& c) { os << "explicit(" << join(c.r) << ")"; },
             },
             variant_);
  return os.str();
}

CovarianceValidation validate(const CovarianceSpec& cov, std::optional<std::size_t> check_length) {
  CovarianceValidation out;
  std::visit(
      overloaded{
          [](const IidCovariance&) {},
          [](const Ar1Covariance& c) {
            require(std::isfinite(c.rho) && std::abs(c.rho) < 1.0,
                    "rho must lie in (-1, 1), got " + std::to_string(c.rho));
          },
          [](const PowerDecayCovariance& c) {
            require(std::isfinite(c.gamma) && c.gamma > 0.0,
                    "gamma must be positive, got " + std::to_string(c.gamma));
            require(std::isfinite(c.scale) && std::abs(c.scale) * std::pow(2.0, -c.gamma) <= 1.0,
                    "scale must satisfy |scale| * 2^-gamma <= 1, got " + std::to_string(c.scale));
          },
          [](const MovingAverageCovariance& c) {
            require(c.m >= 1, "m must be a positive integer");
            require(c.weights.size() == c.m + 1, "weights must have m + 1 entries");
            double norm = 0.0;
            for (double w : c.weights) {
              require(std::isfinite(w), "weights must be finite");
              norm += w * w;
            }
            require(norm > 0.0, "weights must not all be zero");
          },
          [&](const ExplicitCovariance& c) {
            require(!c.r.empty() && c.r[0] == 1.0, "explicit covariance must start with r_0 = 1");
            for (double v : c.r) {
              require(std::isfinite(v) && std::abs(v) <= 1.0, "explicit covariance needs |r_k| <= 1");
            }
            out.mixing = MixingStatus::unverified;
            const std::size_t length = std::max<std::size_t>(2, check_length.value_or(c.r.size()));
            out.checked_length = length;
            if (spectral_check(cov, length) >= kSpectralTolerance) {
              return;
            }
            if (length <= kDenseFallbackLimit && dense_min_eigenvalue(cov, length) >= kSpectralTolerance) {
              return;
            }
            throw NonPSDCovariance("explicit covariance is not positive semidefinite at length " +
                                   std::to_string(length));
          },
      },
      cov.variant());
  return out;
}

Marginal marginal_from_name(const std::string& name, double pareto_alpha) {
  if (name == "exponential") {
    return ExponentialMarginal{};
  }
  if (name == "uniform") {
    return UniformMarginal{};
  }
  if (name == "frechet") {
    return UnitFrechetMarginal{};
  }
  if (name == "pareto") {
    return ParetoMarginal{pareto_alpha};
  }
  throw UnknownMarginal("unknown marginal '" + name + "'");
}

std::string marginal_name(const Marginal& m) {
  return std::visit(overloaded{
                        [](const ExponentialMarginal&) -> std::string { return "exponential"; },
                        [](const UniformMarginal&) -> std::string { return "uniform"; },
                        [](const UnitFrechetMarginal&) -> std::string { return "frechet"; },
                        [](const ParetoMarginal& p) -> std::string {
                          std::ostringstream os;
                          os << "pareto(alpha=" << p.alpha << ")";
                          return os.str();
                        },
                        [](const DiscreteMarginal& d) -> std::string {
                          return "discrete(" + join(d.values) + ";" + join(d.probs) + ")";
                        },
                    },
                    m);
}

void validate(const Marginal& m) {
  if (const auto* p = std::get_if<ParetoMarginal>(&m)) {
    require(std::isfinite(p->alpha) && p->alpha > 0.0, "pareto alpha must be positive");
  }
  if (const auto* d = std::get_if<DiscreteMarginal>(&m)) {
    validate_probability_vector(d->values, d->probs, false);
  }
}

ProcessValidation validate(const ProcessSpec& process) {
  ProcessValidation out;
  std::visit(overloaded{
                 [&](const GaussianProcess& g) { out.mixing = validate(g.cov).mixing; },
                 [&](const ChiProcess& c) {
                   require(c.d >= 1, "d must be a positive integer");
                   out.mixing = validate(c.cov).mixing;
                 },
                 [&](const OrderStatProcess& o) {
                   require(o.d >= 1, "d must be a positive integer");
                   require(o.r >= 1 && o.r <= o.d, "r must lie in [1, d]");
                   out.mixing = validate(o.cov).mixing;
                 },
                 [](const GenericIidProcess& g) { validate(g.marginal); },
             },
             process);
  return out;
}

std::string describe(const ProcessSpec& process) {
  return std::visit(
      overloaded{
          [](const GaussianProcess& g) { return "gaussian[" + g.cov.describe() + "]"; },
          [](const ChiProcess& c) {
            return "chi(d=" + std::to_string(c.d) + ")[" + c.cov.describe() + "]";
          },
          [](const OrderStatProcess& o) {
            return "orderstat(d=" + std::to_string(o.d) + ",r=" + std::to_string(o.r) + ")[" +
                   o.cov.describe() + "]";
          },
          [](const GenericIidProcess& g) { return "iid[" + marginal_name(g.marginal) + "]"; },
      },
      process);
}

void validate(const LambdaLaw& law) {
  std::visit(overloaded{
                 [](const PointMassLaw& l) {
                   require(l.p >= 0.0 && l.p <= 1.0, "point mass must lie in [0, 1]");
                 },
                 [](const Uniform01Law&) {},
                 [](const BetaLaw& l) {
                   require(std::isfinite(l.alpha) && l.alpha > 0.0 && std::isfinite(l.beta) &&
                               l.beta > 0.0,
                           "beta law parameters must be positive");
                 },
                 [](const DiscreteLaw& l) { validate_probability_vector(l.values, l.probs, true); },
             },
             law);
}

double mean(const LambdaLaw& law) {
  return std::visit(overloaded{
                        [](const PointMassLaw& l) { return l.p; },
                        [](const Uniform01Law&) { return 0.5; },
                        [](const BetaLaw& l) { return l.alpha / (l.alpha + l.beta); },
                        [](const DiscreteLaw& l) {
                          return std::inner_product(l.values.begin(), l.values.end(),
                                                    l.probs.begin(), 0.0);
                        },
                    },
                    law);
}

std::string describe(const LambdaLaw& law) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const PointMassLaw& l) { os << "point(" << l.p << ")"; },
                 [&](const Uniform01Law&) { os << "uniform01"; },
                 [&](const BetaLaw& l) { os << "beta(" << l.alpha << "," << l.beta << ")"; },
                 [&](const DiscreteLaw& l) {
                   os << "discrete(" << join(l.values) << ";" << join(l.probs) << ")";
                 },
             },
             law);
  return os.str();
}

void validate(const SelectionSpec& selection) {
  validate(selection.lambda_law);
  if (const auto* pattern = std::get_if<PeriodicPattern>(&selection.scheme)) {
    require(!pattern->bits.empty(), "selection pattern must be nonempty");
    std::size_t ones = 0;
    for (auto b : pattern->bits) {
      require(b == 0 || b == 1, "selection pattern entries must be 0 or 1");
      ones += b;
    }
    const auto* point = std::get_if<PointMassLaw>(&selection.lambda_law);
    const double pattern_mean = static_cast<double>(ones) / static_cast<double>(pattern->bits.size());
    require(point != nullptr && std::abs(point->p - pattern_mean) <= 1e-12,
            "periodic pattern requires a point-mass lambda equal to the pattern mean");
  }
}

std::string to_string(PerturbationMode mode) {
  return mode == PerturbationMode::replacing ? "replacing" : "missing";
}

std::vector<double> EvalGrid::range(double lo, double step, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && std::isfinite(step) && step > 0.0 && hi >= lo,
          "grid range needs finite lo <= hi and positive step");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-6));
  out.reserve(count + 1);
  for (std::size_t i = 0; i <= count; ++i) {
    out.push_back(lo + static_cast<double>(i) * step);
  }
  return out;
}

void validate(const EvalGrid& grid) {
  for (const auto* axis : {&grid.xs, &grid.ys}) {
    require(!axis->empty(), "grid axes must be nonempty");
    for (std::size_t i = 0; i < axis->size(); ++i) {
      require(std::isfinite((*axis)[i]), "grid values must be finite");
      require(i == 0 || (*axis)[i] > (*axis)[i - 1], "grid axes must be strictly increasing");
    }
  }
}

} // namespace maxrep
