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
// Multiple imputation of the unobserved potential outcomes: per imputation,
// draw model parameters from the Laplace approximation, impute the missing
// adverse event first and then the missing death conditional on it. Observed
// outcomes are copied, never redrawn.

#ifndef ORDMI_IMPUTATION_HPP_
#define ORDMI_IMPUTATION_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "ordmi/glm.hpp"
#include "ordmi/outcome.hpp"
#include "ordmi/rng.hpp"

namespace ordmi {

/// Composite ordinal outcome: {0,0} -> 1, {1,0} -> 2, {0,1} -> 3, {1,1} -> 4.
inline int compose_ordinal(int a, int d) {
  if ((a != 0 && a != 1) || (d != 0 && d != 1)) {
    throw InvalidInputError("compose_ordinal: a and d must be binary");
  }
  if (d == 0) return a == 0 ? 1 : 2;
  return a == 0 ? 3 : 4;
}

/// One imputation's fully filled-in potential-outcome table.
struct CompletedDataset {
  int m = 0;  // imputation index
  Eigen::VectorXi a0, a1, d0, d1;
  Eigen::VectorXi observed_arm;  // W_i: which pair came from the data
};

struct ImputationRun {
  int m_count = 0;
  std::uint64_t seed = 0;
  // Per-imputation parameter draws, rows aligned with datasets.
  Eigen::MatrixXd theta_a0, theta_d0, theta_a1, theta_d1;
  std::vector<CompletedDataset> datasets;
};

/// Observed data plus the shared outcome design [1 | spline | X*].
struct ImputationInputs {
  Eigen::VectorXd treatment;       // W
  Eigen::VectorXd adverse_obs;     // A^obs
  Eigen::VectorXd death_obs;       // D^obs
  Eigen::MatrixXd outcome_design;  // n x d, rows used by both arms' models
};

// Stream tags for seed derivation; distinct tags per (m, arm, purpose) keep
// arm-0 draws untouched by anything on the arm-1 side.
namespace stream {
inline constexpr std::uint64_t kParamArm0 = 10;
inline constexpr std::uint64_t kParamArm1 = 11;
inline constexpr std::uint64_t kImputeArm0 = 20;
inline constexpr std::uint64_t kImputeArm1 = 21;
inline constexpr std::uint64_t kLatentArm0 = 30;
inline constexpr std::uint64_t kLatentArm1 = 31;
}  // namespace stream

/// Optional unobserved-covariate offsets added to the linear predictors at
/// imputation time (sensitivity analysis). `z` holds the per-unit draw of the
/// latent covariate for this imputation.
struct LatentOffset {
  double delta_adverse = 0.0;
  double delta_death = 0.0;
  Eigen::VectorXd z;  // empty means no offset

  bool active() const { return z.size() > 0; }
};

namespace detail {

// Imputes the missing potential outcomes of arm `target` (for units with
// W != target) under drawn parameters theta_a / theta_d. Observed entries for
// W == target are copied from the data.
inline void impute_arm(const ImputationInputs& in, int target,
                       const Eigen::VectorXd& theta_a,
                       const Eigen::VectorXd& theta_d,
                       std::mt19937_64& engine, const LatentOffset& latent,
                       Eigen::VectorXi* a_out, Eigen::VectorXi* d_out) {
  const Eigen::Index n = in.treatment.size();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  a_out->resize(n);
  d_out->resize(n);
  const Eigen::Index d_cols = in.outcome_design.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool observed = (in.treatment[i] > 0.5) == (target == 1);
    if (observed) {
      (*a_out)[i] = static_cast<int>(in.adverse_obs[i]);
      (*d_out)[i] = static_cast<int>(in.death_obs[i]);
      continue;
    }
    double eta_a = in.outcome_design.row(i) * theta_a;
    double eta_d_base = in.outcome_design.row(i) * theta_d.head(d_cols);
    if (latent.active()) {
      eta_a += latent.delta_adverse * latent.z[i];
      eta_d_base += latent.delta_death * latent.z[i];
    }
    const int a = unif(engine) < logistic(eta_a) ? 1 : 0;
    const double eta_d = eta_d_base + theta_d[d_cols] * a;
    const int d = unif(engine) < logistic(eta_d) ? 1 : 0;
    (*a_out)[i] = a;
    (*d_out)[i] = d;
  }
}

}  // namespace detail

/// One completed dataset: parameter draws for both arms, A imputed before D.
/// Arm-0 imputations depend only on (arm-0 fits, design, seed) and vice
/// versa, so changing one arm's outcome data never perturbs the other arm's
/// draws.
inline CompletedDataset impute_once(const ArmOutcomeFits& fits0,
                                    const ArmOutcomeFits& fits1,
                                    const ImputationInputs& in,
                                    std::uint64_t rng_seed, int m_index = 0,
                                    const LatentOffset& latent0 = {},
                                    const LatentOffset& latent1 = {}) {
  const Eigen::VectorXd theta_a0 =
      sample_posterior(fits0.adverse_fit, 1,
                       derive_seed(rng_seed, {stream::kParamArm0, 0}))
          .row(0);
  const Eigen::VectorXd theta_d0 =
      sample_posterior(fits0.death_fit, 1,
                       derive_seed(rng_seed, {stream::kParamArm0, 1}))
          .row(0);
  const Eigen::VectorXd theta_a1 =
      sample_posterior(fits1.adverse_fit, 1,
                       derive_seed(rng_seed, {stream::kParamArm1, 0}))
          .row(0);
  const Eigen::VectorXd theta_d1 =
      sample_posterior(fits1.death_fit, 1,
                       derive_seed(rng_seed, {stream::kParamArm1, 1}))
          .row(0);

  CompletedDataset ds;
  ds.m = m_index;
  ds.observed_arm = in.treatment.cast<int>();
  std::mt19937_64 engine0(derive_seed(rng_seed, {stream::kImputeArm0}));
  std::mt19937_64 engine1(derive_seed(rng_seed, {stream::kImputeArm1}));
  detail::impute_arm(in, 0, theta_a0, theta_d0, engine0, latent0, &ds.a0, &ds.d0);
  detail::impute_arm(in, 1, theta_a1, theta_d1, engine1, latent1, &ds.a1, &ds.d1);
  return ds;
}

/// Runs M imputations with per-m seeds derived from the master seed, storing
/// the parameter draws alongside the completed datasets.
inline ImputationRun run_imputations(const ArmOutcomeFits& fits0,
                                     const ArmOutcomeFits& fits1,
                                     const ImputationInputs& in, int m_count,
                                     std::uint64_t seed) {
  if (m_count < 2) {
    throw InvalidConfigError("run_imputations: M must be >= 2 for pooling");
  }
  ImputationRun run;
  run.m_count = m_count;
  run.seed = seed;
  run.theta_a0.resize(m_count, fits0.adverse_fit.coefficients.size());
  run.theta_d0.resize(m_count, fits0.death_fit.coefficients.size());
  run.theta_a1.resize(m_count, fits1.adverse_fit.coefficients.size());
  run.theta_d1.resize(m_count, fits1.death_fit.coefficients.size());
  run.datasets.reserve(static_cast<std::size_t>(m_count));
  for (int m = 0; m < m_count; ++m) {
    const std::uint64_t m_seed = derive_seed(seed, {static_cast<std::uint64_t>(m)});
    CompletedDataset ds = impute_once(fits0, fits1, in, m_seed, m);
    run.theta_a0.row(m) =
        sample_posterior(fits0.adverse_fit, 1,
                         derive_seed(m_seed, {stream::kParamArm0, 0}))
            .row(0);
    run.theta_d0.row(m) =
        sample_posterior(fits0.death_fit, 1,
                         derive_seed(m_seed, {stream::kParamArm0, 1}))
            .row(0);
    run.theta_a1.row(m) =
        sample_posterior(fits1.adverse_fit, 1,
                         derive_seed(m_seed, {stream::kParamArm1, 0}))
            .row(0);
    run.theta_d1.row(m) =
        sample_posterior(fits1.death_fit, 1,
                         derive_seed(m_seed, {stream::kParamArm1, 1}))
            .row(0);
    run.datasets.push_back(std::move(ds));
  }
  return run;
}

/// Posterior predictive check for one arm: replicate the observed-arm
/// outcomes from the fitted models and compare per-level counts of the
/// composite ordinal outcome against the observed counts.
struct PredictiveCheck {
  std::array<int, 4> observed_counts{};
  Eigen::MatrixXi replicated_counts;   // draws x 4
  std::array<double, 4> tail_prob{};   // two-sided
  bool low_draw_warning = false;
};

inline PredictiveCheck posterior_predictive_check(const ArmOutcomeFits& fits,
                                                  const ImputationInputs& in,
                                                  int arm, int draws,
                                                  std::uint64_t seed) {
  if (draws < 1) throw InvalidConfigError("posterior_predictive_check: draws >= 1");
  PredictiveCheck check;
  check.low_draw_warning = draws < 100;

  std::vector<Eigen::Index> arm_units;
  for (Eigen::Index i = 0; i < in.treatment.size(); ++i) {
    if ((in.treatment[i] > 0.5) == (arm == 1)) arm_units.push_back(i);
  }
  for (Eigen::Index i : arm_units) {
    const int g = compose_ordinal(static_cast<int>(in.adverse_obs[i]),
                                  static_cast<int>(in.death_obs[i]));
    ++check.observed_counts[static_cast<std::size_t>(g - 1)];
  }

  const Eigen::Index d_cols = in.outcome_design.cols();
  check.replicated_counts = Eigen::MatrixXi::Zero(draws, 4);
  for (int r = 0; r < draws; ++r) {
    const std::uint64_t r_seed = derive_seed(seed, {static_cast<std::uint64_t>(r)});
    const Eigen::VectorXd theta_a =
        sample_posterior(fits.adverse_fit, 1, derive_seed(r_seed, {0})).row(0);
    const Eigen::VectorXd theta_d =
        sample_posterior(fits.death_fit, 1, derive_seed(r_seed, {1})).row(0);
    std::mt19937_64 engine(derive_seed(r_seed, {2}));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Eigen::Index i : arm_units) {
      const double p_a = logistic(in.outcome_design.row(i) * theta_a);
      const int a = unif(engine) < p_a ? 1 : 0;
      const double eta_d =
          in.outcome_design.row(i) * theta_d.head(d_cols) + theta_d[d_cols] * a;
      const int d = unif(engine) < logistic(eta_d) ? 1 : 0;
      ++check.replicated_counts(r, compose_ordinal(a, d) - 1);
    }
  }
  for (int level = 0; level < 4; ++level) {
    int at_or_below = 0, at_or_above = 0;
    for (int r = 0; r < draws; ++r) {
      if (check.replicated_counts(r, level) <= check.observed_counts[level])
        ++at_or_below;
      if (check.replicated_counts(r, level) >= check.observed_counts[level])
        ++at_or_above;
    }
    const double lo = static_cast<double>(at_or_below) / draws;
    const double hi = static_cast<double>(at_or_above) / draws;
    check.tail_prob[static_cast<std::size_t>(level)] = std::min(1.0, 2.0 * std::min(lo, hi));
  }
  return check;
}

}  // namespace ordmi

#endif  // ORDMI_IMPUTATION_HPP_
