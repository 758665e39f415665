#include "maxrep/presets.hpp"

#include <algorithm>

namespace maxrep {

namespace {

std::string body(const std::string& name, const std::string& process, const std::string& selection,
                 const std::string& mode, std::size_t n, const std::string& extra = "") {
  return "name = " + name + "\n" + process + selection + "experiment.mode = " + mode +
         "\nexperiment.n = " + std::to_string(n) +
         "\nexperiment.replications = 40000\nexperiment.seed = 20240917\n"
         "grid.x = -2:0.5:3\ngrid.y = -2:0.5:3\nnorming.choice = auto\n" +
         extra;
}

const std::string kGaussianIid = "process.family = gaussian\nprocess.covariance = iid\n";
const std::string kHalf = "selection.lambda = point\nselection.p = 0.5\n";
const std::string kUniform = "selection.lambda = uniform\n";

std::vector<Preset> build() {
  return {
      {"thm22-gaussian-replacing",
       "iid standard Gaussian, lambda = 0.5, replacing, n = 2000",
       body("thm22-gaussian-replacing", kGaussianIid, kHalf, "replacing", 2000,
            "diagnostics.dprime_k = 5,10,20\ndiagnostics.dprime_x = 0\n"
            "diagnostics.dprime_replications = 20000\n")},
      {"thm22-gaussian-uniform-lambda",
       "iid standard Gaussian, lambda ~ U(0,1), replacing, n = 2000",
       body("thm22-gaussian-uniform-lambda", kGaussianIid, kUniform, "replacing", 2000)},
      {"thm22-ar1-replacing",
       "AR(1) Gaussian with rho = 0.5, lambda ~ U(0,1), replacing, n = 5000",
       body("thm22-ar1-replacing", "process.family = gaussian\nprocess.covariance = ar1\nprocess.rho = 0.5\n",
            kUniform, "replacing", 5000)},
      {"thm23-chi-d2", "chi process with d = 2 iid Gaussian components, lambda = 0.5, replacing, n = 5000",
       body("thm23-chi-d2", "process.family = chi\nprocess.d = 2\nprocess.covariance = iid\n", kHalf,
            "replacing", 5000)},
      {"thm23-chi-d3", "chi process with d = 3 iid Gaussian components, lambda = 0.5, replacing, n = 5000",
       body("thm23-chi-d3", "process.family = chi\nprocess.d = 3\nprocess.covariance = iid\n", kHalf,
            "replacing", 5000)},
      {"thm24-orderstat-d3-r1", "largest of d = 3 Gaussian components, lambda = 0.5, replacing, n = 5000",
       body("thm24-orderstat-d3-r1",
            "process.family = orderstat\nprocess.d = 3\nprocess.r = 1\nprocess.covariance = iid\n", kHalf,
            "replacing", 5000)},
      {"thm24-orderstat-d3-r2",
       "second largest of d = 3 Gaussian components, lambda = 0.5, replacing, n = 5000",
       body("thm24-orderstat-d3-r2",
            "process.family = orderstat\nprocess.d = 3\nprocess.r = 2\nprocess.covariance = iid\n", kHalf,
            "replacing", 5000)},
      {"contrast-missing-vs-replacing",
       "missing-data counterpart of thm22-gaussian-replacing (compare the two reports at (0, 1))",
       body("contrast-missing-vs-replacing", kGaussianIid, kHalf, "missing", 2000)},
      {"missing-random-lambda", "iid standard Gaussian, lambda ~ U(0,1), missing, n = 2000",
       body("missing-random-lambda", kGaussianIid, kUniform, "missing", 2000)},
      {"exponential-quantile", "iid standard exponential with quantile norming, lambda ~ Beta(2,2), replacing",
       body("exponential-quantile", "process.family = iid\nprocess.marginal = exponential\n",
            "selection.lambda = beta\nselection.alpha = 2\nselection.beta = 2\n", "replacing", 2000)},
  };
}

} // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> catalogue = build();
  return catalogue;
}

std::optional<Preset> find_preset(std::string_view name) {
  const auto& all = presets();
  const auto it = std::find_if(all.begin(), all.end(), [&](const Preset& p) { return p.name == name; });
  if (it == all.end()) {
    return std::nullopt;
  }
  return *it;
}

} // namespace maxrep
