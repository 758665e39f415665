#pragma once

#include "maxrep/config.hpp"
#include "maxrep/engine.hpp"
#include "maxrep/limits.hpp"
#include "maxrep/norming.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace maxrep {

struct SampleSummary {
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
};

SampleSummary summarize(const std::vector<double>& values);

struct ExperimentResult {
  ExperimentConfig config;
  Norming norming;
  LimitSurface theory;
  ComparisonReport joint;
  MarginalReport marginals;
  SampleSummary realized_lambda;
  SampleSummary observed_fraction;
  std::vector<std::pair<std::size_t, double>> dprime; // (k, estimate)
};

/// Simulates, tabulates and compares one configured experiment.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// `x,y,value` rows in row-major order, 9 significant digits.
std::string surface_csv(const EvalGrid& grid, const std::vector<double>& values);
std::string marginals_csv(const MarginalReport& marginals);
std::string report_json(const ExperimentResult& result);
std::string plot_script();

/// Writes surface_empirical.csv, surface_theory.csv, marginals.csv,
/// report.json and plot_surfaces.py into `dir` (created if needed).
void write_reports(const ExperimentResult& result, const std::filesystem::path& dir);

} // namespace maxrep
