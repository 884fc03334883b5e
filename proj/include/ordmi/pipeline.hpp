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
// End-to-end analysis: propensity -> subclasses -> spline -> per-arm outcome
// fits -> M imputations -> finite-sample and super-population estimands ->
// pooled point and interval estimates.

#ifndef ORDMI_PIPELINE_HPP_
#define ORDMI_PIPELINE_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ordmi/data.hpp"
#include "ordmi/design.hpp"
#include "ordmi/estimands.hpp"
#include "ordmi/imputation.hpp"
#include "ordmi/outcome.hpp"
#include "ordmi/pooling.hpp"

namespace ordmi {

struct AnalysisConfig {
  int m = 500;
  std::uint64_t seed = 0;
  int k_init = 6;                      // initial subclass count; knots = k_final - 1
  PriorSpec propensity_prior = PriorSpec::Cauchy(0.0, 2.5);
  OutcomePriorConfig outcome_priors;
  Population population = Population::kAll;
  double alpha = 0.05;
  int omitted_covariate = -1;          // -1: drop the last column for X*
  // Barnard-Rubin correction applies below this sample size, with
  // nu_com = n - p.
  int small_sample_threshold = 200;
};

/// One pooled estimate in the output table.
struct EstimandRow {
  std::string name;   // e.g. "itt_adverse"
  std::string scope;  // "finite_sample" or "superpop"
  double point = kUndefined;
  double se = kUndefined;
  double lo = kUndefined, hi = kUndefined;
  double df = kUndefined;
  std::string method;
  int dropped_draws = 0;  // undefined (NaN) per-imputation values excluded
  std::vector<double> draws;
};

struct AnalysisResult {
  PropensityFit propensity;
  SubclassAssignment subclasses;
  SplineBasis spline;
  ArmOutcomeFits fits0, fits1;
  ImputationRun imputations;
  Eigen::MatrixXd outcome_design;
  std::vector<EstimandRow> rows;
};

namespace detail {

struct EstimandAccessor {
  const char* name;
  double (*get)(const EstimandSet&);
};

inline const std::vector<EstimandAccessor>& estimand_accessors() {
  static const std::vector<EstimandAccessor> table = {
      {"itt_adverse", [](const EstimandSet& e) { return e.itt_adverse; }},
      {"itt_death", [](const EstimandSet& e) { return e.itt_death; }},
      {"itt_composite", [](const EstimandSet& e) { return e.itt_composite; }},
      {"sace", [](const EstimandSet& e) { return e.sace; }},
      {"g1_diff", [](const EstimandSet& e) { return e.p_k_w(0, 0) - e.p_k_w(1, 0); }},
      {"g2_diff", [](const EstimandSet& e) { return e.p_k_w(0, 1) - e.p_k_w(1, 1); }},
      {"g3_diff", [](const EstimandSet& e) { return e.p_k_w(0, 2) - e.p_k_w(1, 2); }},
      {"g4_diff", [](const EstimandSet& e) { return e.p_k_w(0, 3) - e.p_k_w(1, 3); }},
      {"delta_1", [](const EstimandSet& e) { return e.delta[0]; }},
      {"delta_2", [](const EstimandSet& e) { return e.delta[1]; }},
      {"delta_3", [](const EstimandSet& e) { return e.delta[2]; }},
      {"tau10", [](const EstimandSet& e) { return e.tau10; }},
      {"kappa10", [](const EstimandSet& e) { return e.kappa10; }},
      {"tau01", [](const EstimandSet& e) { return e.tau01; }},
      {"kappa01", [](const EstimandSet& e) { return e.kappa01; }},
      {"u10", [](const EstimandSet& e) { return e.u10; }},
      {"kappa_diff", [](const EstimandSet& e) { return e.kappa_diff; }},
      {"kappa_ratio", [](const EstimandSet& e) { return e.kappa_ratio; }},
  };
  return table;
}

inline double sample_sd(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Pools one estimand's per-imputation draws. Percentile intervals for
// finite-sample estimands when M >= 100; Rubin/Barnard-Rubin t otherwise.
// Super-population draws always use mean + percentile quantiles.
inline EstimandRow pool_draws(const std::string& name, const std::string& scope,
                              std::vector<double> draws, double alpha,
                              bool superpop, std::optional<double> nu_com) {
  EstimandRow row;
  row.name = name;
  row.scope = scope;
  std::vector<double> finite;
  finite.reserve(draws.size());
  for (double g : draws) {
    if (std::isfinite(g)) finite.push_back(g);
  }
  row.dropped_draws = static_cast<int>(draws.size() - finite.size());
  row.draws = std::move(draws);
  if (finite.size() < 2) {
    row.method = "undefined";
    return row;
  }
  if (superpop || finite.size() >= 100) {
    double sum = 0.0;
    for (double g : finite) sum += g;
    row.point = sum / static_cast<double>(finite.size());
    row.se = sample_sd(finite, row.point);
    std::tie(row.lo, row.hi) = percentile_interval(finite, alpha);
    row.df = std::numeric_limits<double>::infinity();
    row.method = "percentile";
    return row;
  }
  const std::vector<double> zero_var(finite.size(), 0.0);
  const PooledResult pooled = rubin_pool(finite, zero_var, alpha, nu_com);
  row.point = pooled.point;
  row.se = std::sqrt(pooled.total_var);
  row.lo = pooled.lo;
  row.hi = pooled.hi;
  row.df = pooled.df;
  row.method = nu_com ? "barnard_rubin_t" : "rubin_t";
  return row;
}

}  // namespace detail

/// Covariate matrix with the omitted column dropped (X*).
inline Eigen::MatrixXd drop_covariate(const Eigen::MatrixXd& x, int omitted) {
  const Eigen::Index p = x.cols();
  const Eigen::Index drop = (omitted < 0) ? p - 1 : omitted;
  if (drop < 0 || drop >= p) {
    throw InvalidConfigError("omitted covariate index out of range");
  }
  Eigen::MatrixXd out(x.rows(), p - 1);
  Eigen::Index c = 0;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (j != drop) out.col(c++) = x.col(j);
  }
  return out;
}

namespace detail {

inline Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m,
                                   const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  }
  return out;
}

inline Eigen::VectorXd select_rows(const Eigen::VectorXd& v,
                                   const std::vector<Eigen::Index>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = v[rows[i]];
  }
  return out;
}

}  // namespace detail

/// Stages 1-4: propensity, subclasses, spline, and the two arm model fits.
struct PreparedModels {
  PropensityFit propensity;
  SubclassAssignment subclasses;
  SplineBasis spline;
  ArmOutcomeFits fits0, fits1;
  Eigen::MatrixXd outcome_design;

  ImputationInputs inputs(const Dataset& data) const {
    return ImputationInputs{data.w, data.a_obs, data.d_obs, outcome_design};
  }
};

inline PreparedModels prepare_models(const Dataset& data,
                                     const AnalysisConfig& config) {
  PreparedModels prep;
  prep.propensity = estimate_propensity(data.x, data.w, config.propensity_prior);
  prep.subclasses = subclassify(prep.propensity.scores, data.w, config.k_init);

  // Internal knots sit at the subclass boundaries: k subclasses -> k-1 knots.
  auto [spline, spline_design] = build_spline_basis(
      prep.propensity.logit_scores, prep.subclasses.k_final - 1);
  prep.spline = spline;

  const Eigen::MatrixXd xstar = drop_covariate(data.x, config.omitted_covariate);
  prep.outcome_design = make_outcome_design(spline_design, xstar);

  std::vector<Eigen::Index> arm0, arm1;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    (data.w[i] > 0.5 ? arm1 : arm0).push_back(i);
  }
  const int omitted = config.omitted_covariate < 0
                          ? static_cast<int>(data.x.cols()) - 1
                          : config.omitted_covariate;
  prep.fits0 = fit_arm_models(
      0, detail::select_rows(data.a_obs, arm0), detail::select_rows(data.d_obs, arm0),
      detail::select_rows(spline_design, arm0), detail::select_rows(xstar, arm0),
      spline, config.outcome_priors, omitted);
  prep.fits1 = fit_arm_models(
      1, detail::select_rows(data.a_obs, arm1), detail::select_rows(data.d_obs, arm1),
      detail::select_rows(spline_design, arm1), detail::select_rows(xstar, arm1),
      spline, config.outcome_priors, omitted);
  return prep;
}

/// Runs the whole estimation procedure on an ingested dataset.
inline AnalysisResult run_analysis(const Dataset& data,
                                   const AnalysisConfig& config) {
  AnalysisResult result;
  PreparedModels prep = prepare_models(data, config);
  result.propensity = std::move(prep.propensity);
  result.subclasses = std::move(prep.subclasses);
  result.spline = std::move(prep.spline);
  result.fits0 = std::move(prep.fits0);
  result.fits1 = std::move(prep.fits1);
  result.outcome_design = std::move(prep.outcome_design);

  ImputationInputs inputs{data.w, data.a_obs, data.d_obs, result.outcome_design};
  result.imputations =
      run_imputations(result.fits0, result.fits1, inputs, config.m, config.seed);

  // Finite-sample estimand draws, one per completed dataset.
  std::vector<EstimandSet> fs_sets;
  fs_sets.reserve(result.imputations.datasets.size());
  for (const auto& ds : result.imputations.datasets) {
    fs_sets.push_back(finite_sample_estimands(ds));
  }
  const std::vector<EstimandSet> sp_sets = superpop_estimands(
      result.imputations.theta_a0, result.imputations.theta_d0,
      result.imputations.theta_a1, result.imputations.theta_d1,
      result.outcome_design, data.w, config.population);

  std::optional<double> nu_com;
  if (data.n() < config.small_sample_threshold) {
    nu_com = static_cast<double>(data.n() - result.outcome_design.cols());
  }
  for (const auto& acc : detail::estimand_accessors()) {
    std::vector<double> fs_draws, sp_draws;
    fs_draws.reserve(fs_sets.size());
    sp_draws.reserve(sp_sets.size());
    for (const auto& s : fs_sets) fs_draws.push_back(acc.get(s));
    for (const auto& s : sp_sets) sp_draws.push_back(acc.get(s));
    result.rows.push_back(detail::pool_draws(acc.name, "finite_sample",
                                             std::move(fs_draws), config.alpha,
                                             false, nu_com));
    result.rows.push_back(detail::pool_draws(acc.name, "superpop",
                                             std::move(sp_draws), config.alpha,
                                             true, std::nullopt));
  }
  return result;
}

}  // namespace ordmi

#endif  // ORDMI_PIPELINE_HPP_
