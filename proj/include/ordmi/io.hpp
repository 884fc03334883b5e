// Copyright 2026 The ordmi Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Run configuration (JSON) and result serialization. All writes go through a
// temp-file + rename so a crash never leaves a half-written artifact, and
// existing files are only replaced under force.

#ifndef ORDMI_IO_HPP_
#define ORDMI_IO_HPP_

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "ordmi/pipeline.hpp"
#include "ordmi/sensitivity.hpp"
#include "ordmi/simulation.hpp"

namespace ordmi {

inline constexpr int kOutputDigits = 17;  // round-trips every double exactly

/// Writes `content` to `path` atomically. Refuses to replace an existing file
/// unless `force` is set.
inline void atomic_write(const std::string& path, const std::string& content,
                         bool force) {
  namespace fs = std::filesystem;
  if (!force && fs::exists(path)) {
    throw IoError("'" + path + "' already exists; pass --force to overwrite");
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp + "' for writing");
    out << content;
    if (!out) throw IoError("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename temp file onto '" + path + "'");
  }
}

inline std::string format_double(double v) {
  std::ostringstream s;
  s.precision(kOutputDigits);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------------------
// Run configuration.

enum class RunMode { kAnalyze, kSimulate, kSensitivity };

struct RunConfig {
  RunMode mode = RunMode::kAnalyze;
  AnalysisConfig analysis;
  SimulationConfig simulation;
  ReplicationOptions replication;
  SensitivitySpec sensitivity;
  int sim_replications = 200;
  int pool_rows = 2016;
  std::uint64_t pool_seed = 2016;
  int case_study = 0;  // 0: explicit parameters in the config file
};

namespace detail {

inline Eigen::VectorXd json_vector(const nlohmann::json& j, const char* key) {
  const auto& arr = j.at(key);
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  Eigen::Index i = 0;
  for (const auto& x : arr) v[i++] = x.get<double>();
  return v;
}

inline PriorSpec parse_prior(const nlohmann::json& j) {
  const std::string kind = j.value("kind", "cauchy");
  if (kind == "flat") return PriorSpec::Flat();
  if (kind == "cauchy") {
    return PriorSpec::Cauchy(j.value("location", 0.0), j.value("scale", 2.5));
  }
  if (kind == "ridge") {
    return PriorSpec::Ridge(j.value("scale", 3.0), j.value("lambda", 1.0));
  }
  if (kind == "lasso") {
    return PriorSpec::Lasso(j.value("scale", 3.0), j.value("lambda", 1.0));
  }
  throw InvalidConfigError("unknown prior kind '" + kind + "'");
}

inline LinkFunction parse_link(const nlohmann::json& j) {
  const std::string kind = j.value("kind", "logit");
  if (kind == "logit") return LinkFunction::Logit();
  if (kind == "burr") return LinkFunction::Burr(j.value("c", 0.5));
  throw InvalidConfigError("unknown link kind '" + kind + "'");
}

}  // namespace detail

/// Parses a JSON run configuration. Unknown keys are rejected at the top
/// level so typos cannot silently fall back to defaults.
inline RunConfig parse_config(const nlohmann::json& j) {
  static const std::vector<std::string> known = {
      "mode",        "m",          "seed",         "k_init",
      "alpha_level", "population", "prior_mode",   "linear_prior",
      "omitted_covariate",         "replications", "pool_rows",
      "pool_seed",   "case_study", "generator",    "threads",
      "sensitivity", "methods"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw InvalidConfigError("unknown config key '" + it.key() + "'");
    }
  }
  RunConfig c;
  const std::string mode = j.value("mode", "analyze");
  if (mode == "analyze") {
    c.mode = RunMode::kAnalyze;
  } else if (mode == "simulate") {
    c.mode = RunMode::kSimulate;
  } else if (mode == "sensitivity") {
    c.mode = RunMode::kSensitivity;
  } else {
    throw InvalidConfigError("unknown mode '" + mode + "'");
  }

  c.analysis.m = j.value("m", c.analysis.m);
  c.analysis.seed = j.value("seed", c.analysis.seed);
  c.analysis.k_init = j.value("k_init", c.analysis.k_init);
  c.analysis.alpha = j.value("alpha_level", c.analysis.alpha);
  c.analysis.omitted_covariate =
      j.value("omitted_covariate", c.analysis.omitted_covariate);
  const std::string population = j.value("population", "all");
  if (population == "all") {
    c.analysis.population = Population::kAll;
  } else if (population == "treated") {
    c.analysis.population = Population::kTreated;
  } else {
    throw InvalidConfigError("unknown population '" + population + "'");
  }
  const std::string prior_mode = j.value("prior_mode", "simulation");
  if (prior_mode == "application") {
    c.analysis.outcome_priors.application_mode = true;
  } else if (prior_mode != "simulation") {
    throw InvalidConfigError("unknown prior_mode '" + prior_mode + "'");
  }
  if (j.contains("linear_prior")) {
    const PriorSpec p = detail::parse_prior(j.at("linear_prior"));
    if (c.analysis.outcome_priors.application_mode) {
      c.analysis.outcome_priors.linear_kind = p.kind;
      c.analysis.outcome_priors.linear_scale = p.scale;
      c.analysis.outcome_priors.shrinkage_lambda = p.shrinkage_lambda;
    } else {
      c.analysis.outcome_priors.simulation_prior = p;
    }
  }

  c.sim_replications = j.value("replications", c.sim_replications);
  c.pool_rows = j.value("pool_rows", c.pool_rows);
  c.pool_seed = j.value("pool_seed", c.pool_seed);
  c.case_study = j.value("case_study", c.case_study);
  c.replication.m = c.analysis.m;
  c.replication.k_init = c.analysis.k_init;
  c.replication.threads = j.value("threads", 1);
  if (j.contains("methods")) {
    c.replication.run_bayesian = false;
    c.replication.run_aipw = false;
    for (const auto& m : j.at("methods")) {
      const auto name = m.get<std::string>();
      if (name == "bayes_mi") {
        c.replication.run_bayesian = true;
      } else if (name == "aipw") {
        c.replication.run_aipw = true;
      } else {
        throw InvalidConfigError("unknown method '" + name + "'");
      }
    }
  }

  if (c.case_study != 0) {
    LinkFunction link = LinkFunction::Logit();
    if (j.contains("generator")) link = detail::parse_link(j.at("generator"));
    c.simulation = case_study_config(c.case_study, link);
  } else if (j.contains("generator")) {
    const auto& g = j.at("generator");
    c.simulation.link = detail::parse_link(g);
    c.simulation.n = g.value("n", c.simulation.n);
    c.simulation.resample_alpha = g.value("resample_alpha", false);
    if (g.contains("alpha")) c.simulation.alpha = detail::json_vector(g, "alpha");
    if (g.contains("phi_a")) {
      c.simulation.phi_a = {g.at("phi_a").at(0).get<double>(),
                            g.at("phi_a").at(1).get<double>()};
    }
    if (g.contains("phi_d")) {
      c.simulation.phi_d = {g.at("phi_d").at(0).get<double>(),
                            g.at("phi_d").at(1).get<double>()};
    }
    if (g.contains("zeta")) {
      c.simulation.zeta = {g.at("zeta").at(0).get<double>(),
                           g.at("zeta").at(1).get<double>()};
    }
    if (g.contains("xi_a0")) c.simulation.xi_a[0] = detail::json_vector(g, "xi_a0");
    if (g.contains("xi_a1")) c.simulation.xi_a[1] = detail::json_vector(g, "xi_a1");
    if (g.contains("xi_d0")) c.simulation.xi_d[0] = detail::json_vector(g, "xi_d0");
    if (g.contains("xi_d1")) c.simulation.xi_d[1] = detail::json_vector(g, "xi_d1");
  }

  if (j.contains("sensitivity")) {
    const auto& s = j.at("sensitivity");
    c.sensitivity.mu_z_control = s.value("mu_z_control", 1.0);
    c.sensitivity.m = s.value("m", c.sensitivity.m);
    auto grid = [&](const char* key) -> std::vector<double> {
      if (!s.contains(key)) return {};
      std::vector<double> g;
      for (const auto& x : s.at(key)) g.push_back(x.get<double>());
      return g;
    };
    c.sensitivity.delta_a_grid = grid("delta_a");
    c.sensitivity.delta_d_grid = grid("delta_d");
  }
  c.sensitivity.seed = c.analysis.seed;
  c.sensitivity.population = c.analysis.population;
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfigError("'" + path + "': " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfigError("'" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Result serialization.

inline std::string estimates_csv(const std::vector<EstimandRow>& rows) {
  std::ostringstream out;
  out << "estimand,scope,point,se,lo,hi,df,method\n";
  for (const auto& r : rows) {
    out << r.name << ',' << r.scope << ',' << format_double(r.point) << ','
        << format_double(r.se) << ',' << format_double(r.lo) << ','
        << format_double(r.hi) << ',' << format_double(r.df) << ',' << r.method
        << '\n';
  }
  return out.str();
}

inline std::string draws_csv(const std::vector<EstimandRow>& rows) {
  std::ostringstream out;
  out << "estimand,scope,m,value\n";
  for (const auto& r : rows) {
    for (std::size_t m = 0; m < r.draws.size(); ++m) {
      out << r.name << ',' << r.scope << ',' << m << ','
          << format_double(r.draws[m]) << '\n';
    }
  }
  return out.str();
}

inline std::string metrics_csv(const ReplicationMetrics& metrics) {
  std::ostringstream out;
  out << "estimand,method,coverage,bias,interval_width,rmse,replications\n";
  for (const auto& r : metrics.rows) {
    out << r.estimand << ',' << r.method << ',' << format_double(r.coverage)
        << ',' << format_double(r.bias) << ','
        << format_double(r.interval_width) << ',' << format_double(r.rmse)
        << ',' << r.replications << '\n';
  }
  return out.str();
}

/// Manifest: every tunable that affects the numbers, plus provenance fields.
inline nlohmann::json make_manifest(const RunConfig& config,
                                    const std::string& data_path,
                                    double elapsed_seconds) {
  nlohmann::json m;
  m["library_version"] = "1.0.0";
  m["data"] = data_path;
  m["seed"] = config.analysis.seed;
  m["m"] = config.analysis.m;
  m["k_init"] = config.analysis.k_init;
  m["alpha_level"] = config.analysis.alpha;
  m["population"] =
      config.analysis.population == Population::kTreated ? "treated" : "all";
  m["prior_mode"] = config.analysis.outcome_priors.application_mode
                        ? "application"
                        : "simulation";
  m["omitted_covariate"] = config.analysis.omitted_covariate;
  m["small_sample_threshold"] = config.analysis.small_sample_threshold;
  m["elapsed_seconds"] = elapsed_seconds;
  return m;
}

}  // namespace ordmi

#endif  // ORDMI_IO_HPP_
