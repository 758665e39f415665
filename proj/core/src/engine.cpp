#include "maxrep/engine.hpp"

#include "maxrep/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

namespace maxrep {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double draw_lambda(const LambdaLaw& law, CounterRng& rng) {
  return std::visit(overloaded{
                        [](const PointMassLaw& l) { return l.p; },
                        [&](const Uniform01Law&) { return rng.uniform(); },
                        [&](const BetaLaw& l) {
                          std::gamma_distribution<double> ga(l.alpha, 1.0);
                          std::gamma_distribution<double> gb(l.beta, 1.0);
                          const double x = ga(rng);
                          const double y = gb(rng);
                          return x / (x + y);
                        },
                        [&](const DiscreteLaw& l) {
                          const double u = rng.uniform();
                          double cumulative = 0.0;
                          for (std::size_t i = 0; i + 1 < l.values.size(); ++i) {
                            cumulative += l.probs[i];
                            if (u < cumulative) {
                              return l.values[i];
                            }
                          }
                          return l.values.back();
                        },
                    },
                    law);
}

// Index of the first axis value >= v; axis.size() when v exceeds them all.
std::size_t first_at_or_above(const std::vector<double>& axis, double v) {
  return static_cast<std::size_t>(std::lower_bound(axis.begin(), axis.end(), v) - axis.begin());
}

} // namespace

void validate(const ExperimentSpec& spec) {
  validate(spec.process);
  validate(spec.selection);
  if (spec.n < 1) {
    throw InvalidParameter("n must be positive");
  }
  if (spec.replications < 1) {
    throw InvalidParameter("replications must be positive");
  }
}

void parallel_chunks(std::size_t count, unsigned workers,
                     const std::function<void(std::size_t, std::size_t)>& body) {
  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    threads.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  threads.clear();
  for (auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

ReplicationOutcome normalize(const RawOutcome& raw, const Norming& norming) {
  ReplicationOutcome out;
  if (raw.max_perturbed) {
    out.m_perturbed = norming.normalize(*raw.max_perturbed);
  }
  out.m_original = norming.normalize(raw.max_original);
  out.realized_lambda = raw.realized_lambda;
  out.s_n_over_n = raw.observed_fraction;
  return out;
}

double draw_selection(const SelectionSpec& selection, const StreamKey& key,
                      std::span<std::uint8_t> observed) {
  return std::visit(
      overloaded{
          [&](const ConditionallyIid&) {
            CounterRng lambda_rng(key.with(StreamTag::lambda));
            const double lambda = draw_lambda(selection.lambda_law, lambda_rng);
            CounterRng rng(key.with(StreamTag::selection));
            // One 32-bit draw per index: P(observed) = lambda up to 2^-33.
            const double scaled = lambda * 4294967296.0;
            for (auto& e : observed) {
              e = static_cast<double>(rng()) + 0.5 < scaled ? 1 : 0;
            }
            return lambda;
          },
          [&](const PeriodicPattern& pattern) {
            const auto& bits = pattern.bits;
            for (std::size_t i = 0; i < observed.size(); ++i) {
              observed[i] = bits[i % bits.size()];
            }
            return std::get<PointMassLaw>(selection.lambda_law).p;
          },
      },
      selection.scheme);
}

Simulator::Simulator(ProcessSpec process, SelectionSpec selection, PerturbationMode mode,
                     std::size_t n, std::uint64_t seed)
    : sampler_(std::move(process), n), selection_(std::move(selection)), mode_(mode), seed_(seed) {
  validate(selection_);
}

Simulator::Simulator(const ExperimentSpec& spec)
    : Simulator(spec.process, spec.selection, spec.mode, spec.n, spec.seed) {}

RawOutcome Simulator::replicate(std::uint64_t replication_id) const {
  const std::size_t n = sampler_.length();
  thread_local std::vector<double> base;
  thread_local std::vector<double> copy;
  thread_local std::vector<std::uint8_t> observed;
  base.resize(n);
  observed.resize(n);

  const StreamKey key{seed_, replication_id, StreamTag::base_path, 0};
  RawOutcome out;
  out.realized_lambda = draw_selection(selection_, key, observed);
  sampler_.fill(base, key);

  std::size_t observed_count = 0;
  for (auto e : observed) {
    observed_count += e;
  }
  out.observed_fraction = static_cast<double>(observed_count) / static_cast<double>(n);
  out.max_original = *std::max_element(base.begin(), base.end());

  if (mode_ == PerturbationMode::missing) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (observed[i]) {
        m = std::max(m, base[i]);
      }
    }
    if (observed_count > 0) {
      out.max_perturbed = m;
    }
    return out;
  }

  if (observed_count == n) {
    out.max_perturbed = out.max_original;
    return out;
  }
  copy.resize(n);
  sampler_.fill(copy, key.with(StreamTag::replacing_copy));
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    m = std::max(m, observed[i] ? base[i] : copy[i]);
  }
  out.max_perturbed = m;
  return out;
}

std::vector<RawOutcome> Simulator::run(std::size_t count, unsigned workers) const {
  std::vector<RawOutcome> outcomes(count);
  parallel_chunks(count, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      outcomes[r] = replicate(r);
    }
  });
  return outcomes;
}

ReplicationOutcome run_replication(const ProcessSpec& process, const SelectionSpec& selection,
                                   PerturbationMode mode, std::size_t n, const Norming& norming,
                                   const StreamKey& key) {
  const Simulator sim(process, selection, mode, n, key.seed);
  return normalize(sim.replicate(key.replication), norming);
}

JointEcdf tabulate(std::span<const ReplicationOutcome> outcomes, const EvalGrid& grid) {
  validate(grid);
  const std::size_t nx = grid.rows();
  const std::size_t ny = grid.cols();
  // hits[i][j]: outcomes whose first admitting grid index is exactly (i, j);
  // a 2-D prefix sum then gives the cumulative counts.
  std::vector<std::uint64_t> hits((nx + 1) * (ny + 1), 0);
  for (const auto& o : outcomes) {
    const std::size_t i = o.m_perturbed ? first_at_or_above(grid.xs, *o.m_perturbed) : 0;
    const std::size_t j = first_at_or_above(grid.ys, o.m_original);
    ++hits[i * (ny + 1) + j];
  }
  JointEcdf ecdf{grid, std::vector<std::uint64_t>(grid.size(), 0), outcomes.size()};
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      std::uint64_t v = hits[i * (ny + 1) + j];
      if (i > 0) {
        v += ecdf.counts[grid.index(i - 1, j)];
      }
      if (j > 0) {
        v += ecdf.counts[grid.index(i, j - 1)];
      }
      if (i > 0 && j > 0) {
        v -= ecdf.counts[grid.index(i - 1, j - 1)];
      }
      ecdf.counts[grid.index(i, j)] = v;
    }
  }
  return ecdf;
}

std::vector<ReplicationOutcome> simulate_normalized(const ExperimentSpec& spec, const Norming& norming) {
  validate(spec);
  const Simulator sim(spec);
  const auto raw = sim.run(spec.replications, spec.workers);
  std::vector<ReplicationOutcome> out(raw.size());
  std::transform(raw.begin(), raw.end(), out.begin(),
                 [&](const RawOutcome& r) { return normalize(r, norming); });
  return out;
}

JointEcdf estimate_joint_cdf(const ExperimentSpec& spec, const Norming& norming, const EvalGrid& grid) {
  validate(grid);
  return tabulate(simulate_normalized(spec, norming), grid);
}

ComparisonReport compare(const JointEcdf& ecdf, const LimitSurface& surface) {
  if (!(ecdf.grid == surface.grid) || surface.values.size() != ecdf.grid.size()) {
    throw GridMismatch("empirical and theoretical grids differ");
  }
  ComparisonReport report;
  report.grid = ecdf.grid;
  report.replications = ecdf.replications;
  const std::size_t cells = ecdf.grid.size();
  report.empirical.resize(cells);
  report.theoretical = surface.values;
  report.deviations.resize(cells);
  report.standard_errors.resize(cells);
  const double r = static_cast<double>(ecdf.replications);
  for (std::size_t c = 0; c < cells; ++c) {
    const double v = static_cast<double>(ecdf.counts[c]) / r;
    report.empirical[c] = v;
    report.deviations[c] = v - surface.values[c];
    report.standard_errors[c] = std::sqrt(v * (1.0 - v) / r);
    if (std::abs(report.deviations[c]) > report.sup_distance) {
      report.sup_distance = std::abs(report.deviations[c]);
      report.sup_cell = c;
    }
    report.mc_standard_error = std::max(report.mc_standard_error, report.standard_errors[c]);
  }
  return report;
}

MarginalReport marginal_check(std::span<const ReplicationOutcome> outcomes,
                              const std::vector<double>& xs, const LambdaLaw& law,
                              PerturbationMode mode) {
  MarginalReport report;
  report.xs = xs;
  const double r = static_cast<double>(outcomes.size());
  for (double x : xs) {
    std::size_t perturbed = 0;
    std::size_t original = 0;
    for (const auto& o : outcomes) {
      perturbed += o.perturbed_at_most(x) ? 1 : 0;
      original += o.m_original <= x ? 1 : 0;
    }
    const double ep = static_cast<double>(perturbed) / r;
    const double eo = static_cast<double>(original) / r;
    const double tp = mode == PerturbationMode::replacing ? gumbel_cdf(x) : expected_observed_power(x, law);
    const double to = gumbel_cdf(x);
    report.empirical_perturbed.push_back(ep);
    report.empirical_original.push_back(eo);
    report.theory_perturbed.push_back(tp);
    report.theory_original.push_back(to);
    report.sup_perturbed = std::max(report.sup_perturbed, std::abs(ep - tp));
    report.sup_original = std::max(report.sup_original, std::abs(eo - to));
  }
  return report;
}

MarginalReport marginal_check(const ExperimentSpec& spec, const Norming& norming,
                              const std::vector<double>& xs) {
  const auto outcomes = simulate_normalized(spec, norming);
  return marginal_check(outcomes, xs, spec.selection.lambda_law, spec.mode);
}

double dprime_diagnostic(const ProcessSpec& process, std::size_t n, std::size_t k, double x_level,
                         const Norming& norming, const DPrimeOptions& options) {
  if (k < 2) {
    throw InvalidParameter("D' diagnostic needs k >= 2");
  }
  if (options.replications < 1) {
    throw InvalidParameter("D' diagnostic needs at least one replication");
  }
  const std::size_t length = n / k;
  if (length < 2) {
    return 0.0; // j ranges over an empty set
  }
  const double level = norming.threshold(x_level);
  const ProcessSampler sampler(process, length);

  const unsigned workers =
      options.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.workers;
  // Integer pair counts per lag; merged by summation, so chunk order is irrelevant.
  std::mutex merge_mutex;
  std::vector<std::uint64_t> pair_counts(length, 0);
  parallel_chunks(options.replications, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint64_t> local(length, 0);
    std::vector<double> path(length);
    std::vector<std::size_t> exceed;
    for (std::size_t r = begin; r < end; ++r) {
      sampler.fill(path, StreamKey{options.seed, r, StreamTag::diagnostic, 0});
      exceed.clear();
      for (std::size_t t = 0; t < length; ++t) {
        if (path[t] > level) {
          exceed.push_back(t);
        }
      }
      for (std::size_t a = 0; a < exceed.size(); ++a) {
        for (std::size_t b = a + 1; b < exceed.size(); ++b) {
          ++local[exceed[b] - exceed[a]];
        }
      }
    }
    std::lock_guard lock(merge_mutex);
    for (std::size_t h = 0; h < length; ++h) {
      pair_counts[h] += local[h];
    }
  });

  double sum = 0.0;
  const double reps = static_cast<double>(options.replications);
  for (std::size_t h = 1; h < length; ++h) {
    sum += static_cast<double>(pair_counts[h]) / (reps * static_cast<double>(length - h));
  }
  return static_cast<double>(n) * sum;
}

} // namespace maxrep
