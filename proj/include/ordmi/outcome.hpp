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
// Per-arm conditional outcome models: adverse event on the propensity spline
// plus linear covariate adjustments, and death on the same design plus the
// adverse-event indicator.

#ifndef ORDMI_OUTCOME_HPP_
#define ORDMI_OUTCOME_HPP_

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "ordmi/glm.hpp"
#include "ordmi/spline.hpp"

namespace ordmi {

/// Priors for the outcome models. Simulation mode applies one prior to every
/// coefficient; application mode uses N(0, spline_sd^2) on the spline block
/// and the adverse-event coefficient, a Ridge or Lasso shrinkage prior on the
/// linear adjustments, and leaves the intercept unpenalized.
struct OutcomePriorConfig {
  bool application_mode = false;
  PriorSpec simulation_prior = PriorSpec::Cauchy(0.0, 2.5);
  double spline_sd = 8.0;
  PriorKind linear_kind = PriorKind::kRidgeNormal;
  double linear_scale = 3.0;
  double shrinkage_lambda = 1.0;
};

/// Fitted outcome models for one treatment arm. The death model design equals
/// the adverse design with the adverse-event indicator appended, so death_fit
/// carries exactly one extra coefficient (its last entry).
struct ArmOutcomeFits {
  int arm = 0;
  ModelFit adverse_fit;
  ModelFit death_fit;
  SplineBasis spline;
  int omitted_covariate = -1;  // column of X dropped to form X*
};

/// Probabilities of the four composite ordinal levels.
struct CellProbabilities {
  std::array<double, 4> p;  // G = 1..4
};

/// Design matrix [1 | spline basis | X*] shared by both outcome models.
inline Eigen::MatrixXd make_outcome_design(const Eigen::MatrixXd& spline_design,
                                           const Eigen::MatrixXd& covariates_star) {
  if (spline_design.rows() != covariates_star.rows()) {
    throw InvalidInputError("make_outcome_design: row mismatch");
  }
  Eigen::MatrixXd design(spline_design.rows(),
                         1 + spline_design.cols() + covariates_star.cols());
  design.col(0).setOnes();
  design.middleCols(1, spline_design.cols()) = spline_design;
  design.rightCols(covariates_star.cols()) = covariates_star;
  return design;
}

namespace detail {

inline std::vector<CoefPenalty> outcome_penalties(const OutcomePriorConfig& cfg,
                                                  Eigen::Index spline_dim,
                                                  Eigen::Index xstar_dim,
                                                  bool with_adverse_term) {
  const Eigen::Index p = 1 + spline_dim + xstar_dim + (with_adverse_term ? 1 : 0);
  std::vector<CoefPenalty> pens(static_cast<std::size_t>(p));
  if (!cfg.application_mode) {
    cfg.simulation_prior.validate();
    for (auto& pen : pens) pen = CoefPenalty::From(cfg.simulation_prior);
    return pens;
  }
  pens[0] = CoefPenalty::None();
  const CoefPenalty spline_pen{PriorKind::kRidgeNormal, 0.0, cfg.spline_sd, 1.0};
  const CoefPenalty linear_pen{cfg.linear_kind, 0.0, cfg.linear_scale,
                               cfg.shrinkage_lambda};
  for (Eigen::Index j = 0; j < spline_dim; ++j) {
    pens[static_cast<std::size_t>(1 + j)] = spline_pen;
  }
  for (Eigen::Index j = 0; j < xstar_dim; ++j) {
    pens[static_cast<std::size_t>(1 + spline_dim + j)] = linear_pen;
  }
  if (with_adverse_term) pens.back() = spline_pen;  // eta ~ N(0, spline_sd^2)
  return pens;
}

}  // namespace detail

/// Fits both conditional models on one arm's subsample: the adverse event on
/// [1, spline, X*] and death on [1, spline, X*, A].
inline ArmOutcomeFits fit_arm_models(int arm,
                                     const Eigen::VectorXd& adverse,
                                     const Eigen::VectorXd& death,
                                     const Eigen::MatrixXd& spline_design,
                                     const Eigen::MatrixXd& covariates_star,
                                     const SplineBasis& spline,
                                     const OutcomePriorConfig& priors = {},
                                     int omitted_covariate = -1) {
  if (adverse.size() == 0) {
    throw InvalidInputError("fit_arm_models: empty arm subsample");
  }
  const Eigen::MatrixXd design = make_outcome_design(spline_design, covariates_star);

  ArmOutcomeFits fits;
  fits.arm = arm;
  fits.spline = spline;
  fits.omitted_covariate = omitted_covariate;
  fits.adverse_fit = fit_map(
      design, adverse,
      detail::outcome_penalties(priors, spline_design.cols(),
                                covariates_star.cols(), false));

  Eigen::MatrixXd death_design(design.rows(), design.cols() + 1);
  death_design.leftCols(design.cols()) = design;
  death_design.col(design.cols()) = adverse;
  fits.death_fit = fit_map(
      death_design, death,
      detail::outcome_penalties(priors, spline_design.cols(),
                                covariates_star.cols(), true));
  return fits;
}

/// Pr(A = 1 | design row) under coefficients theta (logistic inverse link).
inline double adverse_prob(const Eigen::VectorXd& theta,
                           const Eigen::RowVectorXd& design_row) {
  if (theta.size() != design_row.size()) {
    throw InvalidInputError("adverse_prob: dimension mismatch");
  }
  return logistic(design_row * theta);
}

/// Pr(D = 1 | design row, A = a): the last entry of theta is the coefficient
/// on the adverse-event indicator.
inline double death_prob(const Eigen::VectorXd& theta,
                         const Eigen::RowVectorXd& design_row, double a) {
  if (theta.size() != design_row.size() + 1) {
    throw InvalidInputError("death_prob: dimension mismatch");
  }
  const double eta =
      design_row * theta.head(design_row.size()) + theta[theta.size() - 1] * a;
  return logistic(eta);
}

inline double predict_adverse(const ArmOutcomeFits& fit,
                              const Eigen::RowVectorXd& design_row) {
  return adverse_prob(fit.adverse_fit.coefficients, design_row);
}

inline double predict_death(const ArmOutcomeFits& fit,
                            const Eigen::RowVectorXd& design_row, double a) {
  return death_prob(fit.death_fit.coefficients, design_row, a);
}

/// Cell probabilities of the composite ordinal outcome from the marginal
/// adverse probability and the conditional death probabilities:
///   p1 = (1-pA)(1-pD|0), p2 = pA(1-pD|1), p3 = (1-pA)pD|0, p4 = pA pD|1.
inline CellProbabilities ordinal_cell_probs(double p_adverse,
                                            double p_death_given_a0,
                                            double p_death_given_a1) {
  for (double v : {p_adverse, p_death_given_a0, p_death_given_a1}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidInputError("ordinal_cell_probs: probabilities must be in [0,1]");
    }
  }
  return CellProbabilities{{(1.0 - p_adverse) * (1.0 - p_death_given_a0),
                            p_adverse * (1.0 - p_death_given_a1),
                            (1.0 - p_adverse) * p_death_given_a0,
                            p_adverse * p_death_given_a1}};
}

}  // namespace ordmi

#endif  // ORDMI_OUTCOME_HPP_
