#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace maxrep {

// ---------------------------------------------------------------------------
// Covariance of a stationary unit-variance Gaussian sequence.
// ---------------------------------------------------------------------------

struct IidCovariance {};

// r_k = rho^k
struct Ar1Covariance {
  double rho = 0.0;
};

// r_k = scale * (1 + k)^(-gamma) for k >= 1
struct PowerDecayCovariance {
  double gamma = 1.0;
  double scale = 1.0;
};

// X_t = sum_{i=0}^{m} w_i Z_{t-i}, rescaled to unit variance; r_k = 0 for k > m.
struct MovingAverageCovariance {
  std::size_t m = 1;
  std::vector<double> weights; // m + 1 entries
};

// r_k given verbatim for k < r.size(), zero beyond.
struct ExplicitCovariance {
  std::vector<double> r;
};

class CovarianceSpec {
public:
  using Variant = std::variant<IidCovariance, Ar1Covariance, PowerDecayCovariance,
                               MovingAverageCovariance, ExplicitCovariance>;

  CovarianceSpec() = default;
  template <typename T>
    requires std::is_constructible_v<Variant, T>
  CovarianceSpec(T v) : variant_(std::move(v)) {}

  const Variant& variant() const noexcept { return variant_; }

  template <typename T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&variant_);
  }

  /// Autocovariance at lag `k` (r_0 = 1).
  double lag(std::size_t k) const;

  std::string describe() const;

private:
  Variant variant_ = IidCovariance{};
};

enum class MixingStatus { asserted, unverified };

struct CovarianceValidation {
  MixingStatus mixing = MixingStatus::asserted;
  std::size_t checked_length = 0;
};

/// Rejects covariances violating their parameter ranges (InvalidParameter) or,
/// for explicit sequences, failing the positive-semidefinite test at
/// `check_length` (NonPSDCovariance). The default length is the list length.
CovarianceValidation validate(const CovarianceSpec& cov,
                              std::optional<std::size_t> check_length = std::nullopt);

// ---------------------------------------------------------------------------
// Marginals for generic iid sequences.
// ---------------------------------------------------------------------------

struct ExponentialMarginal {};
struct UniformMarginal {};
struct UnitFrechetMarginal {};
struct ParetoMarginal {
  double alpha = 1.0;
};
// Finite support, used by the enumeration oracle.
struct DiscreteMarginal {
  std::vector<double> values;
  std::vector<double> probs;
};

using Marginal = std::variant<ExponentialMarginal, UniformMarginal, UnitFrechetMarginal,
                              ParetoMarginal, DiscreteMarginal>;

/// Builds a named continuous marginal ("exponential", "uniform", "frechet",
/// "pareto"); throws UnknownMarginal otherwise.
Marginal marginal_from_name(const std::string& name, double pareto_alpha = 1.0);
std::string marginal_name(const Marginal& m);
void validate(const Marginal& m);

// ---------------------------------------------------------------------------
// Processes.
// ---------------------------------------------------------------------------

struct GaussianProcess {
  CovarianceSpec cov;
};

// sqrt of the sum of squares of d independent copies of the Gaussian sequence.
struct ChiProcess {
  std::size_t d = 1;
  CovarianceSpec cov;
};

// r-th largest among d independent copies (r = 1 is the maximum).
struct OrderStatProcess {
  std::size_t d = 1;
  std::size_t r = 1;
  CovarianceSpec cov;
};

struct GenericIidProcess {
  Marginal marginal;
};

using ProcessSpec = std::variant<GaussianProcess, ChiProcess, OrderStatProcess, GenericIidProcess>;

struct ProcessValidation {
  MixingStatus mixing = MixingStatus::asserted;
};

ProcessValidation validate(const ProcessSpec& process);
std::string describe(const ProcessSpec& process);

// ---------------------------------------------------------------------------
// Observation sequence.
// ---------------------------------------------------------------------------

struct PointMassLaw {
  double p = 1.0;
};
struct Uniform01Law {};
struct BetaLaw {
  double alpha = 1.0;
  double beta = 1.0;
};
struct DiscreteLaw {
  std::vector<double> values;
  std::vector<double> probs;
};

using LambdaLaw = std::variant<PointMassLaw, Uniform01Law, BetaLaw, DiscreteLaw>;

void validate(const LambdaLaw& law);
double mean(const LambdaLaw& law);
std::string describe(const LambdaLaw& law);

// Draw lambda once per replication, then epsilon_i ~ Bernoulli(lambda) iid.
struct ConditionallyIid {};

// Deterministic 0/1 pattern repeated along the sequence.
struct PeriodicPattern {
  std::vector<std::uint8_t> bits;
};

using SelectionScheme = std::variant<ConditionallyIid, PeriodicPattern>;

struct SelectionSpec {
  LambdaLaw lambda_law = PointMassLaw{1.0};
  SelectionScheme scheme = ConditionallyIid{};
};

void validate(const SelectionSpec& selection);

// ---------------------------------------------------------------------------

enum class PerturbationMode { replacing, missing };

std::string to_string(PerturbationMode mode);

struct EvalGrid {
  std::vector<double> xs;
  std::vector<double> ys;

  std::size_t rows() const noexcept { return xs.size(); }
  std::size_t cols() const noexcept { return ys.size(); }
  std::size_t size() const noexcept { return xs.size() * ys.size(); }
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * ys.size() + j; }

  /// lo, lo + step, ... up to hi inclusive (within step/1e6).
  static std::vector<double> range(double lo, double step, double hi);
  static EvalGrid square(const std::vector<double>& axis) { return {axis, axis}; }

  bool operator==(const EvalGrid&) const = default;
};

void validate(const EvalGrid& grid);

} // namespace maxrep
