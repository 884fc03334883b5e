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
// Batch command-line driver: fit, impute, estimate, analyze, simulate,
// sensitivity.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "ordmi/ordmi.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string data_path;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> m;
  int threads = 1;
  bool force = false;
};

void add_common(CLI::App* cmd, CommonArgs* args, bool needs_data) {
  cmd->add_option("--config", args->config_path, "JSON run configuration");
  auto* data = cmd->add_option("--data", args->data_path, "subject CSV");
  if (needs_data) data->required();
  cmd->add_option("--seed", args->seed, "master seed (overrides config)");
  cmd->add_option("--m", args->m, "imputation count (overrides config)");
  cmd->add_option("--out", args->out, "output directory");
  cmd->add_option("--threads", args->threads, "worker thread count");
  cmd->add_flag("--force", args->force, "overwrite existing output files");
}

ordmi::RunConfig resolve_config(const CommonArgs& args) {
  ordmi::RunConfig config;
  if (!args.config_path.empty()) config = ordmi::load_config(args.config_path);
  if (args.seed) {
    config.analysis.seed = *args.seed;
    config.sensitivity.seed = *args.seed;
  }
  if (args.m) {
    config.analysis.m = *args.m;
    config.replication.m = *args.m;
    config.sensitivity.m = *args.m;
  }
  config.replication.threads = args.threads;
  config.sensitivity.threads = args.threads;
  return config;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
  return (std::filesystem::path(args.out) / name).string();
}

void write_manifest(const CommonArgs& args, const ordmi::RunConfig& config,
                    double elapsed) {
  const nlohmann::json manifest =
      ordmi::make_manifest(config, args.data_path, elapsed);
  ordmi::atomic_write(out_path(args, "manifest.json"), manifest.dump(2) + "\n",
                      args.force);
}

std::string coefficients_csv(const ordmi::PreparedModels& prep) {
  std::ostringstream out;
  out << "model,index,coefficient\n";
  auto emit = [&](const char* model, const ordmi::ModelFit& fit) {
    for (Eigen::Index i = 0; i < fit.coefficients.size(); ++i) {
      out << model << ',' << i << ','
          << ordmi::format_double(fit.coefficients[i]) << '\n';
    }
  };
  emit("propensity", prep.propensity.model);
  emit("adverse_w0", prep.fits0.adverse_fit);
  emit("death_w0", prep.fits0.death_fit);
  emit("adverse_w1", prep.fits1.adverse_fit);
  emit("death_w1", prep.fits1.death_fit);
  return out.str();
}

int run_fit(const CommonArgs& args) {
  const ordmi::RunConfig config = resolve_config(args);
  const ordmi::Dataset data = ordmi::ingest_csv(args.data_path);
  std::cerr << "ingested " << data.n() << " rows (" << data.n_treated()
            << " treated)\n";
  const ordmi::PreparedModels prep = ordmi::prepare_models(data, config.analysis);
  ordmi::atomic_write(out_path(args, "coefficients.csv"),
                      coefficients_csv(prep), args.force);
  std::cerr << "subclasses: " << prep.subclasses.k_final
            << ", spline basis dim: " << prep.spline.basis_dim << "\n";
  return 0;
}

int run_impute(const CommonArgs& args) {
  const ordmi::RunConfig config = resolve_config(args);
  const ordmi::Dataset data = ordmi::ingest_csv(args.data_path);
  const ordmi::PreparedModels prep = ordmi::prepare_models(data, config.analysis);
  const ordmi::ImputationRun run =
      ordmi::run_imputations(prep.fits0, prep.fits1, prep.inputs(data),
                             config.analysis.m, config.analysis.seed);
  std::ostringstream out;
  out << "m,g1,g0,count\n";
  for (const auto& ds : run.datasets) {
    const Eigen::Matrix4d joint =
        ordmi::empirical_joint(ds) * static_cast<double>(data.n());
    for (int k = 0; k < 4; ++k) {
      for (int l = 0; l < 4; ++l) {
        out << ds.m << ',' << (k + 1) << ',' << (l + 1) << ','
            << static_cast<long long>(std::llround(joint(k, l))) << '\n';
      }
    }
  }
  ordmi::atomic_write(out_path(args, "imputations.csv"), out.str(), args.force);
  return 0;
}

int run_estimate_or_analyze(const CommonArgs& args, bool full) {
  const auto start = std::chrono::steady_clock::now();
  const ordmi::RunConfig config = resolve_config(args);
  const ordmi::Dataset data = ordmi::ingest_csv(args.data_path);
  const ordmi::AnalysisResult result =
      ordmi::run_analysis(data, config.analysis);
  ordmi::atomic_write(out_path(args, "estimates.csv"),
                      ordmi::estimates_csv(result.rows), args.force);
  if (full) {
    ordmi::atomic_write(out_path(args, "draws.csv"),
                        ordmi::draws_csv(result.rows), args.force);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    write_manifest(args, config, elapsed);
  }
  return 0;
}

int run_simulate(const CommonArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  ordmi::RunConfig config = resolve_config(args);
  if (config.case_study == 0 && config.simulation.alpha.size() == 0) {
    throw ordmi::InvalidConfigError(
        "simulate requires a config with case_study or generator parameters");
  }
  const Eigen::MatrixXd pool =
      ordmi::make_covariate_pool(config.pool_rows, config.pool_seed);
  const ordmi::ReplicationMetrics metrics =
      ordmi::run_replications(config.simulation, pool, config.sim_replications,
                              config.analysis.seed, config.replication);
  ordmi::atomic_write(out_path(args, "metrics.csv"),
                      ordmi::metrics_csv(metrics), args.force);
  for (const auto& line : metrics.failure_log) std::cerr << line << "\n";
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_manifest(args, config, elapsed);
  std::cerr << "completed " << (metrics.requested - metrics.failed) << "/"
            << metrics.requested << " replications\n";
  return 0;
}

int run_sensitivity_cmd(const CommonArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  const ordmi::RunConfig config = resolve_config(args);
  const ordmi::Dataset data = ordmi::ingest_csv(args.data_path);
  const ordmi::PreparedModels prep = ordmi::prepare_models(data, config.analysis);
  const ordmi::SensitivityGrid grid = ordmi::run_sensitivity(
      prep.fits0, prep.fits1, prep.inputs(data), config.sensitivity);
  std::ostringstream out;
  ordmi::export_heatmap_data(grid, out);
  ordmi::atomic_write(out_path(args, "sensitivity.csv"), out.str(), args.force);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_manifest(args, config, elapsed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Adverse-event and mortality effect estimation via multiply imputed "
      "potential outcomes and a composite ordinal scale"};
  app.require_subcommand(1);

  CommonArgs fit_args, impute_args, estimate_args, analyze_args, simulate_args,
      sensitivity_args;
  auto* fit = app.add_subcommand("fit", "fit propensity and outcome models");
  add_common(fit, &fit_args, true);
  auto* impute = app.add_subcommand("impute", "run the multiple imputations");
  add_common(impute, &impute_args, true);
  auto* estimate =
      app.add_subcommand("estimate", "full analysis, estimates table only");
  add_common(estimate, &estimate_args, true);
  auto* analyze = app.add_subcommand(
      "analyze", "end-to-end analysis with draws and manifest");
  add_common(analyze, &analyze_args, true);
  auto* simulate =
      app.add_subcommand("simulate", "replication study with known truth");
  add_common(simulate, &simulate_args, false);
  auto* sensitivity = app.add_subcommand(
      "sensitivity", "unobserved-covariate sensitivity grid");
  add_common(sensitivity, &sensitivity_args, true);

  CLI11_PARSE(app, argc, argv);
  try {
    if (fit->parsed()) return run_fit(fit_args);
    if (impute->parsed()) return run_impute(impute_args);
    if (estimate->parsed()) return run_estimate_or_analyze(estimate_args, false);
    if (analyze->parsed()) return run_estimate_or_analyze(analyze_args, true);
    if (simulate->parsed()) return run_simulate(simulate_args);
    if (sensitivity->parsed()) return run_sensitivity_cmd(sensitivity_args);
  } catch (const ordmi::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
