#pragma once

#include "maxrep/limits.hpp"
#include "maxrep/models.hpp"
#include "maxrep/norming.hpp"
#include "maxrep/random_stream.hpp"
#include "maxrep/samplers.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace maxrep {

struct ExperimentSpec {
  ProcessSpec process = GaussianProcess{};
  SelectionSpec selection;
  PerturbationMode mode = PerturbationMode::replacing;
  std::size_t n = 2000;
  std::size_t replications = 40000;
  std::uint64_t seed = 1;
  // 0 means one worker per hardware thread. Never affects results.
  unsigned workers = 0;
};

void validate(const ExperimentSpec& spec);

// Raw maxima of one replication. An empty `max_perturbed` means no index was
// observed in missing mode: the maximum sits at the lower endpoint and lies
// below every threshold.
struct RawOutcome {
  std::optional<double> max_perturbed;
  double max_original = 0.0;
  double realized_lambda = 0.0;
  double observed_fraction = 0.0;
};

struct ReplicationOutcome {
  std::optional<double> m_perturbed;
  double m_original = 0.0;
  double realized_lambda = 0.0;
  double s_n_over_n = 0.0;

  bool perturbed_at_most(double x) const noexcept { return !m_perturbed || *m_perturbed <= x; }
};

ReplicationOutcome normalize(const RawOutcome& raw, const Norming& norming);

// Runs replications of one experiment. Stream keys are derived from
// (seed, replication id, component tag), so every replication is
// reproducible in isolation and results do not depend on worker count.
class Simulator {
public:
  Simulator(ProcessSpec process, SelectionSpec selection, PerturbationMode mode, std::size_t n,
            std::uint64_t seed);
  explicit Simulator(const ExperimentSpec& spec);

  RawOutcome replicate(std::uint64_t replication_id) const;

  /// Replications 0..count-1, in replication order.
  std::vector<RawOutcome> run(std::size_t count, unsigned workers = 0) const;

  std::size_t length() const noexcept { return sampler_.length(); }

private:
  ProcessSampler sampler_;
  SelectionSpec selection_;
  PerturbationMode mode_;
  std::uint64_t seed_;
};

/// Draws the realized rate and the observation indicators of one replication.
double draw_selection(const SelectionSpec& selection, const StreamKey& key,
                      std::span<std::uint8_t> observed);

/// One replication, normalized by `norming`; `key` supplies seed and replication id.
ReplicationOutcome run_replication(const ProcessSpec& process, const SelectionSpec& selection,
                                   PerturbationMode mode, std::size_t n, const Norming& norming,
                                   const StreamKey& key);

struct JointEcdf {
  EvalGrid grid;
  std::vector<std::uint64_t> counts; // row-major over (xs, ys)
  std::uint64_t replications = 0;

  double value(std::size_t i, std::size_t j) const {
    return static_cast<double>(counts[grid.index(i, j)]) / static_cast<double>(replications);
  }
};

/// counts[i][j] = #{m_perturbed <= xs[i] and m_original <= ys[j]}.
JointEcdf tabulate(std::span<const ReplicationOutcome> outcomes, const EvalGrid& grid);

std::vector<ReplicationOutcome> simulate_normalized(const ExperimentSpec& spec, const Norming& norming);

JointEcdf estimate_joint_cdf(const ExperimentSpec& spec, const Norming& norming, const EvalGrid& grid);

struct ComparisonReport {
  EvalGrid grid;
  std::vector<double> empirical;
  std::vector<double> theoretical;
  std::vector<double> deviations; // empirical - theoretical
  std::vector<double> standard_errors; // sqrt(v (1 - v) / R) per cell
  double sup_distance = 0.0;
  std::size_t sup_cell = 0;
  double mc_standard_error = 0.0; // largest per-cell standard error
  std::uint64_t replications = 0;
};

ComparisonReport compare(const JointEcdf& ecdf, const LimitSurface& surface);

struct MarginalReport {
  std::vector<double> xs;
  std::vector<double> empirical_perturbed;
  std::vector<double> empirical_original;
  std::vector<double> theory_perturbed;
  std::vector<double> theory_original;
  double sup_perturbed = 0.0;
  double sup_original = 0.0;
};

/// One-dimensional checks: the original maximum against G, the perturbed
/// maximum against G (replacing) or E[G^lambda] (missing).
MarginalReport marginal_check(std::span<const ReplicationOutcome> outcomes,
                              const std::vector<double>& xs, const LambdaLaw& law,
                              PerturbationMode mode);
MarginalReport marginal_check(const ExperimentSpec& spec, const Norming& norming,
                              const std::vector<double>& xs);

struct DPrimeOptions {
  std::size_t replications = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

/// Monte Carlo estimate of n * sum_{j=2}^{floor(n/k)} P[X_1 > u, X_j > u] at
/// u = norming.threshold(x_level). Each lag probability pools every pair at
/// that lag within a path of length floor(n/k), which is unbiased by stationarity.
double dprime_diagnostic(const ProcessSpec& process, std::size_t n, std::size_t k, double x_level,
                         const Norming& norming, const DPrimeOptions& options);

/// Runs `body(begin, end)` over contiguous chunks of [0, count) on `workers`
/// threads (0 = hardware concurrency).
void parallel_chunks(std::size_t count, unsigned workers,
                     const std::function<void(std::size_t, std::size_t)>& body);

} // namespace maxrep
