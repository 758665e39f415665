#include "maxrep/report.hpp"

#include "maxrep/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace maxrep {

namespace {

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw InvalidParameter("output.dir: cannot write '" + path.string() + "'");
  }
  out << contents;
}

nlohmann::json summary_json(const SampleSummary& s) {
  return {{"mean", s.mean}, {"sd", s.sd}, {"min", s.min}, {"max", s.max}};
}

std::string norming_choice_name(NormingChoice c) {
  switch (c) {
  case NormingChoice::auto_by_family:
    return "auto";
  case NormingChoice::quantile:
    return "quantile";
  case NormingChoice::explicit_values:
    return "explicit";
  }
  return "unknown";
}

} // namespace

SampleSummary summarize(const std::vector<double>& values) {
  SampleSummary s;
  if (values.empty()) {
    return s;
  }
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) {
    ss += (v - s.mean) * (v - s.mean);
  }
  s.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result;
  result.config = config;
  result.norming = resolve_norming(config);
  const auto outcomes = simulate_normalized(config.experiment, result.norming);

  result.theory = limit_surface(config.grid, config.experiment.selection.lambda_law, config.experiment.mode);
  result.joint = compare(tabulate(outcomes, config.grid), result.theory);
  result.marginals =
      marginal_check(outcomes, config.grid.xs, config.experiment.selection.lambda_law, config.experiment.mode);

  std::vector<double> lambdas(outcomes.size());
  std::vector<double> fractions(outcomes.size());
  std::transform(outcomes.begin(), outcomes.end(), lambdas.begin(),
                 [](const ReplicationOutcome& o) { return o.realized_lambda; });
  std::transform(outcomes.begin(), outcomes.end(), fractions.begin(),
                 [](const ReplicationOutcome& o) { return o.s_n_over_n; });
  result.realized_lambda = summarize(lambdas);
  result.observed_fraction = summarize(fractions);

  if (config.dprime) {
    DPrimeOptions options;
    options.replications = config.dprime->replications;
    options.seed = config.experiment.seed;
    options.workers = config.experiment.workers;
    for (std::size_t k : config.dprime->ks) {
      result.dprime.emplace_back(k, dprime_diagnostic(config.experiment.process, config.experiment.n, k,
                                                      config.dprime->x_level, result.norming, options));
    }
  }
  return result;
}

std::string surface_csv(const EvalGrid& grid, const std::vector<double>& values) {
  std::string out = "x,y,value\n";
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    for (std::size_t j = 0; j < grid.cols(); ++j) {
      out += fmt9(grid.xs[i]) + "," + fmt9(grid.ys[j]) + "," + fmt9(values[grid.index(i, j)]) + "\n";
    }
  }
  return out;
}

std::string marginals_csv(const MarginalReport& m) {
  std::string out = "x,empirical_perturbed,empirical_original,theory_perturbed,theory_original\n";
  for (std::size_t i = 0; i < m.xs.size(); ++i) {
    out += fmt9(m.xs[i]) + "," + fmt9(m.empirical_perturbed[i]) + "," + fmt9(m.empirical_original[i]) +
           "," + fmt9(m.theory_perturbed[i]) + "," + fmt9(m.theory_original[i]) + "\n";
  }
  return out;
}

std::string report_json(const ExperimentResult& r) {
  const auto& cfg = r.config;
  const auto& joint = r.joint;
  const std::size_t cols = joint.grid.cols();
  nlohmann::ordered_json j;
  j["name"] = cfg.name;
  j["config"] = {
      {"process", describe(cfg.experiment.process)},
      {"lambda_law", describe(cfg.experiment.selection.lambda_law)},
      {"selection_scheme",
       std::holds_alternative<PeriodicPattern>(cfg.experiment.selection.scheme) ? "periodic" : "iid"},
      {"mode", to_string(cfg.experiment.mode)},
      {"n", cfg.experiment.n},
      {"replications", cfg.experiment.replications},
      {"seed", cfg.experiment.seed},
      {"norming_choice", norming_choice_name(cfg.norming_choice)},
      {"grid_x", cfg.grid.xs},
      {"grid_y", cfg.grid.ys},
  };
  j["norming"] = {{"family", describe(r.norming.family)},
                  {"n", r.norming.n},
                  {"a_n", r.norming.a_n},
                  {"b_n", r.norming.b_n}};
  j["limit_law"] = to_string(r.theory.law);
  j["sup_distance"] = joint.sup_distance;
  j["sup_cell"] = {{"x", joint.grid.xs[joint.sup_cell / cols]},
                   {"y", joint.grid.ys[joint.sup_cell % cols]},
                   {"empirical", joint.empirical[joint.sup_cell]},
                   {"theoretical", joint.theoretical[joint.sup_cell]}};
  j["mc_standard_error"] = joint.mc_standard_error;
  j["marginal_sup_distance"] = {{"perturbed", r.marginals.sup_perturbed},
                                {"original", r.marginals.sup_original}};
  j["realized_lambda"] = summary_json(r.realized_lambda);
  j["s_n_over_n"] = summary_json(r.observed_fraction);
  if (!r.dprime.empty()) {
    nlohmann::ordered_json curve = nlohmann::ordered_json::array();
    for (const auto& [k, v] : r.dprime) {
      curve.push_back({{"k", k}, {"estimate", v}});
    }
    j["dprime"] = {{"x_level", cfg.dprime->x_level},
                   {"replications", cfg.dprime->replications},
                   {"curve", curve}};
  }
  return j.dump(2) + "\n";
}

std::string plot_script() {
  return R"py(#!/usr/bin/env python3
# Generated by maxreplace. Plots empirical vs. limiting joint CDF surfaces.
import csv
import sys
from pathlib import Path

import matplotlib.pyplot as plt


def load(path):
    with open(path) as f:
        rows = list(csv.DictReader(f))
    xs = sorted({float(r["x"]) for r in rows})
    ys = sorted({float(r["y"]) for r in rows})
    grid = {(float(r["x"]), float(r["y"])): float(r["value"]) for r in rows}
    return xs, ys, [[grid[(x, y)] for y in ys] for x in xs]


def main(directory):
    d = Path(directory)
    xs, ys, emp = load(d / "surface_empirical.csv")
    _, _, theory = load(d / "surface_theory.csv")
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for ax, data, title in ((axes[0], emp, "empirical"), (axes[1], theory, "limit")):
        c = ax.contourf(ys, xs, data, levels=20, vmin=0.0, vmax=1.0)
        ax.set_xlabel("y (original max)")
        ax.set_ylabel("x (perturbed max)")
        ax.set_title(title)
    fig.colorbar(c, ax=axes)
    fig.savefig(d / "surfaces.png", dpi=120)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else ".")
)py";
}

void write_reports(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "surface_empirical.csv", surface_csv(result.joint.grid, result.joint.empirical));
  write_file(dir / "surface_theory.csv", surface_csv(result.joint.grid, result.joint.theoretical));
  write_file(dir / "marginals.csv", marginals_csv(result.marginals));
  write_file(dir / "report.json", report_json(result));
  write_file(dir / "plot_surfaces.py", plot_script());
}

} // namespace maxrep
