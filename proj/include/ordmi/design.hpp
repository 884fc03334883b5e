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
// Propensity-score estimation and quantile subclassification with the
// decrement rule (largest k such that every subclass keeps at least three
// units from each arm).

#ifndef ORDMI_DESIGN_HPP_
#define ORDMI_DESIGN_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "ordmi/errors.hpp"
#include "ordmi/glm.hpp"
#include "ordmi/link.hpp"
#include "ordmi/spline.hpp"

namespace ordmi {

// Estimated propensity scores are clipped this far away from {0,1} before the
// logit transform.
inline constexpr double kScoreClip = 1e-12;

struct PropensityFit {
  ModelFit model;                 // assignment-mechanism parameters
  Eigen::VectorXd scores;         // e-hat(X_i), strictly in (0,1)
  Eigen::VectorXd logit_scores;   // logit(e-hat(X_i))
};

struct SubclassAssignment {
  int k_final = 1;
  std::vector<int> labels;        // in {1..k_final}, monotone in score
  std::vector<double> boundaries; // quantile cut points on the score scale
};

/// Logistic MAP fit of treatment on covariates (intercept prepended).
inline PropensityFit estimate_propensity(const Eigen::MatrixXd& covariates,
                                         const Eigen::VectorXd& treatment,
                                         const PriorSpec& prior = PriorSpec::Cauchy()) {
  const Eigen::Index n = covariates.rows();
  if (treatment.size() != n) {
    throw InvalidInputError("estimate_propensity: treatment length mismatch");
  }
  const double treated = treatment.sum();
  if (treated == 0.0 || treated == static_cast<double>(n)) {
    throw InfeasibleDesignError(
        "estimate_propensity: both treatment arms must be non-empty");
  }
  Eigen::MatrixXd design(n, covariates.cols() + 1);
  design.col(0).setOnes();
  design.rightCols(covariates.cols()) = covariates;

  PropensityFit out;
  out.model = fit_map(design, treatment, prior, LinkFunction::Logit());
  const Eigen::VectorXd eta = design * out.model.coefficients;
  out.scores.resize(n);
  out.logit_scores.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p =
        std::clamp(logistic(eta[i]), kScoreClip, 1.0 - kScoreClip);
    out.scores[i] = p;
    out.logit_scores[i] = logit(p);
  }
  return out;
}

namespace detail {

inline bool subclass_feasible(const std::vector<int>& labels,
                              const Eigen::VectorXd& treatment, int k) {
  std::vector<int> n_treated(static_cast<std::size_t>(k), 0);
  std::vector<int> n_control(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& count = (treatment[static_cast<Eigen::Index>(i)] > 0.5)
                      ? n_treated[static_cast<std::size_t>(labels[i] - 1)]
                      : n_control[static_cast<std::size_t>(labels[i] - 1)];
    ++count;
  }
  for (int b = 0; b < k; ++b) {
    if (n_treated[static_cast<std::size_t>(b)] < 3 ||
        n_control[static_cast<std::size_t>(b)] < 3) {
      return false;
    }
  }
  return true;
}

}  // namespace detail

/// Partitions units into quantile subclasses of the propensity score,
/// decrementing from k_init until every subclass holds >= 3 treated and
/// >= 3 control units. k = 1 always satisfies the rule when each arm has at
/// least 3 units in total.
inline SubclassAssignment subclassify(const Eigen::VectorXd& scores,
                                      const Eigen::VectorXd& treatment,
                                      int k_init = 6) {
  if (k_init < 1) throw InvalidConfigError("subclassify: k_init must be >= 1");
  if (scores.size() != treatment.size()) {
    throw InvalidInputError("subclassify: length mismatch");
  }
  const double treated = treatment.sum();
  const double control = static_cast<double>(treatment.size()) - treated;
  if (treated < 3.0 || control < 3.0) {
    throw InfeasibleDesignError(
        "subclassify: each arm needs at least 3 units in total");
  }
  std::vector<double> sorted(scores.data(), scores.data() + scores.size());
  std::sort(sorted.begin(), sorted.end());

  for (int k = k_init; k >= 1; --k) {
    std::vector<double> boundaries;
    for (int j = 1; j < k; ++j) {
      boundaries.push_back(
          quantile_sorted(sorted, static_cast<double>(j) / k));
    }
    std::vector<int> labels(static_cast<std::size_t>(scores.size()));
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
      const auto it = std::lower_bound(boundaries.begin(), boundaries.end(),
                                       scores[i]);
      labels[static_cast<std::size_t>(i)] =
          1 + static_cast<int>(it - boundaries.begin());
    }
    if (detail::subclass_feasible(labels, treatment, k)) {
      return {k, std::move(labels), std::move(boundaries)};
    }
  }
  // Unreachable: k = 1 is feasible once both arms hold >= 3 units.
  throw InfeasibleDesignError("subclassify: no feasible partition");
}

}  // namespace ordmi

#endif  // ORDMI_DESIGN_HPP_
