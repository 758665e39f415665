#include "maxrep/config.hpp"

#include "maxrep/errors.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace maxrep {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    out.push_back(trim(item));
  }
  return out;
}

class KeyValues {
public:
  explicit KeyValues(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto end = std::min(text.find('\n', pos), text.size());
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      const std::string content = trim(line);
      if (content.empty()) {
        continue;
      }
      const auto eq = content.find('=');
      if (eq == std::string::npos) {
        throw ConfigParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
      }
      const std::string key = trim(std::string_view(content).substr(0, eq));
      const std::string value = trim(std::string_view(content).substr(eq + 1));
      if (key.empty()) {
        throw ConfigParseError("line " + std::to_string(line_no) + ": empty key");
      }
      if (!entries_.emplace(key, value).second) {
        throw ConfigParseError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      }
    }
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::optional<std::string> take(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
      return std::nullopt;
    }
    used_.insert(key);
    return it->second;
  }

  std::string require(const std::string& key) {
    auto v = take(key);
    if (!v) {
      throw ConfigParseError("missing required key '" + key + "'");
    }
    return *v;
  }

  void reject_unused() const {
    for (const auto& [key, value] : entries_) {
      if (!used_.count(key)) {
        throw ConfigParseError("key '" + key + "' is unknown or unused by this configuration");
      }
    }
  }

private:
  std::map<std::string, std::string> entries_;
  std::set<std::string> used_;
};

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, v);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigParseError(key + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, v);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigParseError(key + ": expected a nonnegative integer, got '" + text + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    out.push_back(parse_double(key, item));
  }
  return out;
}

// "lo:step:hi" or a comma-separated list.
std::vector<double> parse_axis(const std::string& key, const std::string& text) {
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
      throw ConfigParseError(key + ": ranges are written lo:step:hi");
    }
    try {
      return EvalGrid::range(parse_double(key, parts[0]), parse_double(key, parts[1]),
                             parse_double(key, parts[2]));
    } catch (const InvalidParameter&) {
      rethrow_with_field(key);
    }
  }
  return parse_list(key, text);
}

template <typename F>
auto with_field(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const ConfigParseError&) {
    throw;
  } catch (const Error&) {
    rethrow_with_field(field);
  }
}

CovarianceSpec parse_covariance(KeyValues& kv) {
  const std::string kind = kv.take("process.covariance").value_or("iid");
  CovarianceSpec cov;
  std::string field = "process.covariance";
  if (kind == "iid") {
    cov = IidCovariance{};
  } else if (kind == "ar1") {
    field = "process.rho";
    cov = Ar1Covariance{parse_double(field, kv.require(field))};
  } else if (kind == "power") {
    field = "process.gamma";
    const double gamma = parse_double(field, kv.require(field));
    const double scale = parse_double("process.scale", kv.require("process.scale"));
    cov = PowerDecayCovariance{gamma, scale};
    if (gamma > 0.0) {
      field = "process.scale";
    }
  } else if (kind == "mdependent") {
    field = "process.weights";
    const auto m = parse_unsigned("process.m", kv.require("process.m"));
    cov = MovingAverageCovariance{m, parse_list(field, kv.require(field))};
  } else if (kind == "explicit") {
    field = "process.r_values";
    cov = ExplicitCovariance{parse_list(field, kv.require(field))};
  } else {
    throw ConfigParseError("process.covariance: unknown covariance '" + kind + "'");
  }
  with_field(field, [&] { return validate(cov); });
  return cov;
}

ProcessSpec parse_process(KeyValues& kv) {
  const std::string family = kv.require("process.family");
  if (family == "gaussian") {
    return GaussianProcess{parse_covariance(kv)};
  }
  if (family == "chi") {
    const auto d = parse_unsigned("process.d", kv.require("process.d"));
    ProcessSpec p = ChiProcess{d, parse_covariance(kv)};
    with_field("process.d", [&] { return validate(p); });
    return p;
  }
  if (family == "orderstat") {
    const auto d = parse_unsigned("process.d", kv.require("process.d"));
    const auto r = parse_unsigned("process.r", kv.require("process.r"));
    ProcessSpec p = OrderStatProcess{d, r, parse_covariance(kv)};
    with_field("process.r", [&] { return validate(p); });
    return p;
  }
  if (family == "iid") {
    const std::string name = kv.require("process.marginal");
    double alpha = 1.0;
    if (name == "pareto") {
      alpha = parse_double("process.alpha", kv.require("process.alpha"));
    }
    ProcessSpec p = GenericIidProcess{with_field("process.marginal", [&] { return marginal_from_name(name, alpha); })};
    with_field("process.alpha", [&] { return validate(p); });
    return p;
  }
  throw ConfigParseError("process.family: unknown family '" + family + "'");
}

SelectionSpec parse_selection(KeyValues& kv) {
  SelectionSpec sel;
  const std::string law = kv.take("selection.lambda").value_or("point");
  std::string field = "selection.lambda";
  if (law == "point") {
    field = "selection.p";
    sel.lambda_law = PointMassLaw{parse_double(field, kv.require(field))};
  } else if (law == "uniform") {
    sel.lambda_law = Uniform01Law{};
  } else if (law == "beta") {
    field = "selection.alpha";
    sel.lambda_law = BetaLaw{parse_double("selection.alpha", kv.require("selection.alpha")),
                             parse_double("selection.beta", kv.require("selection.beta"))};
  } else if (law == "discrete") {
    field = "selection.probs";
    sel.lambda_law = DiscreteLaw{parse_list("selection.values", kv.require("selection.values")),
                                 parse_list("selection.probs", kv.require("selection.probs"))};
  } else {
    throw ConfigParseError("selection.lambda: unknown law '" + law + "'");
  }
  with_field(field, [&] { return validate(sel.lambda_law); });

  const std::string scheme = kv.take("selection.scheme").value_or("iid");
  if (scheme == "iid") {
    sel.scheme = ConditionallyIid{};
  } else if (scheme == "periodic") {
    PeriodicPattern pattern;
    for (double b : parse_list("selection.pattern", kv.require("selection.pattern"))) {
      if (b != 0.0 && b != 1.0) {
        throw ConfigParseError("selection.pattern: entries must be 0 or 1");
      }
      pattern.bits.push_back(static_cast<std::uint8_t>(b));
    }
    sel.scheme = pattern;
  } else {
    throw ConfigParseError("selection.scheme: unknown scheme '" + scheme + "'");
  }
  with_field("selection.pattern", [&] { return validate(sel); });
  return sel;
}

} // namespace

EvalGrid default_grid() { return EvalGrid::square(EvalGrid::range(-2.0, 0.5, 3.0)); }

ExperimentConfig parse_config(std::string_view text) {
  KeyValues kv(text);
  ExperimentConfig cfg;
  cfg.name = kv.take("name").value_or("experiment");
  cfg.experiment.process = parse_process(kv);
  cfg.experiment.selection = parse_selection(kv);

  const std::string mode = kv.take("experiment.mode").value_or("replacing");
  if (mode == "replacing") {
    cfg.experiment.mode = PerturbationMode::replacing;
  } else if (mode == "missing") {
    cfg.experiment.mode = PerturbationMode::missing;
  } else {
    throw ConfigParseError("experiment.mode: expected 'replacing' or 'missing', got '" + mode + "'");
  }

  cfg.experiment.n = parse_unsigned("experiment.n", kv.require("experiment.n"));
  if (cfg.experiment.n < 1) {
    throw InvalidParameter("experiment.n: must be positive");
  }
  // Explicit sequences are only known to be PSD at their own length; recheck at n.
  std::visit(
      [&](const auto& p) {
        if constexpr (requires { p.cov; }) {
          if (p.cov.template get_if<ExplicitCovariance>() != nullptr) {
            with_field("process.r_values", [&] { return validate(p.cov, cfg.experiment.n); });
          }
        }
      },
      cfg.experiment.process);
  cfg.experiment.replications =
      parse_unsigned("experiment.replications", kv.require("experiment.replications"));
  if (cfg.experiment.replications < 1) {
    throw InvalidParameter("experiment.replications: must be at least 1");
  }
  if (auto seed = kv.take("experiment.seed")) {
    cfg.experiment.seed = parse_unsigned("experiment.seed", *seed);
    cfg.seed_specified = true;
  }

  cfg.grid = default_grid();
  if (auto xs = kv.take("grid.x")) {
    cfg.grid.xs = parse_axis("grid.x", *xs);
  }
  if (auto ys = kv.take("grid.y")) {
    cfg.grid.ys = parse_axis("grid.y", *ys);
  }
  with_field("grid", [&] { return validate(cfg.grid); });

  const std::string choice = kv.take("norming.choice").value_or("auto");
  if (choice == "auto") {
    cfg.norming_choice = NormingChoice::auto_by_family;
  } else if (choice == "quantile") {
    cfg.norming_choice = NormingChoice::quantile;
  } else if (choice == "explicit") {
    cfg.norming_choice = NormingChoice::explicit_values;
    cfg.explicit_a = parse_double("norming.a", kv.require("norming.a"));
    cfg.explicit_b = parse_double("norming.b", kv.require("norming.b"));
  } else {
    throw ConfigParseError("norming.choice: expected auto, quantile or explicit, got '" + choice + "'");
  }

  cfg.output_dir = kv.take("output.dir").value_or("out/" + cfg.name);

  if (auto ks = kv.take("diagnostics.dprime_k")) {
    DPrimeRequest req;
    for (double k : parse_list("diagnostics.dprime_k", *ks)) {
      if (k < 2.0 || k != static_cast<double>(static_cast<std::size_t>(k))) {
        throw InvalidParameter("diagnostics.dprime_k: entries must be integers >= 2");
      }
      req.ks.push_back(static_cast<std::size_t>(k));
    }
    if (auto x = kv.take("diagnostics.dprime_x")) {
      req.x_level = parse_double("diagnostics.dprime_x", *x);
    }
    if (auto r = kv.take("diagnostics.dprime_replications")) {
      req.replications = parse_unsigned("diagnostics.dprime_replications", *r);
      if (req.replications < 1) {
        throw InvalidParameter("diagnostics.dprime_replications: must be at least 1");
      }
    }
    cfg.dprime = req;
  }

  kv.reject_unused();
  // Surfaces the norming's domain errors (e.g. n too small) as configuration problems.
  try {
    resolve_norming(cfg);
  } catch (const DomainError& e) {
    throw InvalidParameter(std::string("experiment.n: ") + e.what());
  } catch (const Error&) {
    rethrow_with_field("norming.choice");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigParseError("cannot read config file '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

Norming resolve_norming(const ExperimentConfig& config) {
  const auto n = config.experiment.n;
  switch (config.norming_choice) {
  case NormingChoice::auto_by_family:
    return auto_norming(config.experiment.process, n);
  case NormingChoice::quantile:
    if (const auto* g = std::get_if<GenericIidProcess>(&config.experiment.process)) {
      return quantile_norming(g->marginal, n);
    }
    throw UnsupportedMarginal("quantile norming needs an iid process with a closed-form quantile");
  case NormingChoice::explicit_values:
    return explicit_norming(config.explicit_a, config.explicit_b, n);
  }
  throw ConfigParseError("unknown norming choice");
}

} // namespace maxrep
