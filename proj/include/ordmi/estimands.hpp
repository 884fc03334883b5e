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
// Estimands of the composite ordinal outcome, all derived from the joint
// distribution p_kl = Pr(G(1) = k, G(0) = l). Finite-sample versions use the
// empirical joint of a completed dataset; super-population versions use the
// per-unit product of arm cell probabilities (conditional independence given
// covariates) averaged over units.

#ifndef ORDMI_ESTIMANDS_HPP_
#define ORDMI_ESTIMANDS_HPP_

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "ordmi/imputation.hpp"
#include "ordmi/outcome.hpp"

namespace ordmi {

inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

struct JointOrdinalDistribution {
  Eigen::Matrix4d p;  // p(k-1, l-1) = Pr(G(1) = k, G(0) = l)
};

enum class Population { kAll, kTreated };

/// Every scalar and matrix estimand of the composite ordinal outcome.
/// Undefined quantities (empty always-survivor stratum, zero-mass conditional
/// rows, zero-denominator ratios) carry NaN markers.
struct EstimandSet {
  double itt_adverse = 0.0;
  double itt_death = 0.0;
  double itt_composite = 0.0;
  double sace = kUndefined;
  Eigen::Matrix<double, 2, 4> p_k_w;   // row 0: w=1 marginals, row 1: w=0
  std::array<double, 3> delta{};       // Delta_1..Delta_3 (Delta_4 = 0)
  double tau10 = 0.0, kappa10 = 0.0, tau01 = 0.0, kappa01 = 0.0, u10 = 0.0;
  double kappa_diff = 0.0;
  double kappa_ratio = kUndefined;
  Eigen::Matrix4d pi1, pi0;            // conditional matrices Pi(1), Pi(0)
};

/// Derives all estimands from a joint ordinal distribution.
inline EstimandSet estimands_from_joint(const Eigen::Matrix4d& p) {
  EstimandSet e;
  const Eigen::Vector4d marg1 = p.rowwise().sum();  // Pr(G(1) = k)
  const Eigen::Vector4d marg0 = p.colwise().sum();  // Pr(G(0) = l)
  e.p_k_w.row(0) = marg1.transpose();
  e.p_k_w.row(1) = marg0.transpose();

  // Level coding: 1 = {A=0,D=0}, 2 = {1,0}, 3 = {0,1}, 4 = {1,1}.
  e.itt_adverse = (marg1[1] + marg1[3]) - (marg0[1] + marg0[3]);
  e.itt_death = (marg1[2] + marg1[3]) - (marg0[2] + marg0[3]);
  e.itt_composite = marg0[0] - marg1[0];

  const double survivors =
      p.topLeftCorner<2, 2>().sum();  // Pr(D(1)=0, D(0)=0)
  e.sace = survivors > 1e-12 ? (p(1, 0) - p(0, 1)) / survivors : kUndefined;

  double cum1 = 0.0, cum0 = 0.0;
  for (int j = 0; j < 3; ++j) {
    cum1 += marg1[j];
    cum0 += marg0[j];
    e.delta[static_cast<std::size_t>(j)] = cum1 - cum0;
  }

  e.tau10 = e.kappa10 = e.tau01 = e.kappa01 = 0.0;
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      if (k >= l) e.tau10 += p(k, l);
      if (k > l) e.kappa10 += p(k, l);
      if (k <= l) e.tau01 += p(k, l);
      if (k < l) e.kappa01 += p(k, l);
    }
  }
  e.u10 = (e.kappa10 + e.tau10) / 2.0;
  e.kappa_diff = e.kappa10 - e.kappa01;
  e.kappa_ratio = e.kappa01 > 0.0 ? e.kappa10 / e.kappa01 : kUndefined;

  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      e.pi1(k, l) = marg1[k] > 0.0 ? p(k, l) / marg1[k] : kUndefined;
      e.pi0(k, l) = marg0[k] > 0.0 ? p(l, k) / marg0[k] : kUndefined;
    }
  }
  return e;
}

/// Empirical joint distribution of (G(1), G(0)) pairs in a completed dataset.
inline Eigen::Matrix4d empirical_joint(const CompletedDataset& ds) {
  Eigen::Matrix4d p = Eigen::Matrix4d::Zero();
  const Eigen::Index n = ds.a0.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const int g1 = compose_ordinal(ds.a1[i], ds.d1[i]);
    const int g0 = compose_ordinal(ds.a0[i], ds.d0[i]);
    p(g1 - 1, g0 - 1) += 1.0;
  }
  p /= static_cast<double>(n);
  return p;
}

/// Finite-sample estimands of one completed dataset.
inline EstimandSet finite_sample_estimands(const CompletedDataset& ds) {
  if (ds.a0.size() == 0) {
    throw InvalidInputError("finite_sample_estimands: empty dataset");
  }
  return estimands_from_joint(empirical_joint(ds));
}

namespace detail {

// Per-unit ordinal cells under drawn parameters, combined into a joint by
// conditional independence and averaged over the selected units.
inline Eigen::Matrix4d averaged_joint(const Eigen::VectorXd& theta_a0,
                                      const Eigen::VectorXd& theta_d0,
                                      const Eigen::VectorXd& theta_a1,
                                      const Eigen::VectorXd& theta_d1,
                                      const Eigen::MatrixXd& outcome_design,
                                      const std::vector<Eigen::Index>& units) {
  Eigen::Matrix4d p = Eigen::Matrix4d::Zero();
  for (Eigen::Index i : units) {
    const Eigen::RowVectorXd row = outcome_design.row(i);
    const CellProbabilities c1 = ordinal_cell_probs(
        adverse_prob(theta_a1, row), death_prob(theta_d1, row, 0.0),
        death_prob(theta_d1, row, 1.0));
    const CellProbabilities c0 = ordinal_cell_probs(
        adverse_prob(theta_a0, row), death_prob(theta_d0, row, 0.0),
        death_prob(theta_d0, row, 1.0));
    for (int k = 0; k < 4; ++k) {
      for (int l = 0; l < 4; ++l) {
        p(k, l) += c1.p[static_cast<std::size_t>(k)] *
                   c0.p[static_cast<std::size_t>(l)];
      }
    }
  }
  p /= static_cast<double>(units.size());
  return p;
}

inline std::vector<Eigen::Index> population_units(const Eigen::VectorXd& treatment,
                                                  Population population) {
  std::vector<Eigen::Index> units;
  for (Eigen::Index i = 0; i < treatment.size(); ++i) {
    if (population == Population::kAll || treatment[i] > 0.5) units.push_back(i);
  }
  if (units.empty()) {
    throw InvalidConfigError("superpop estimands: selected population is empty");
  }
  return units;
}

}  // namespace detail

/// Super-population estimands, one EstimandSet per posterior parameter draw.
/// Rows of the four draw matrices are aligned across models per m.
inline std::vector<EstimandSet> superpop_estimands(
    const Eigen::MatrixXd& theta_a0, const Eigen::MatrixXd& theta_d0,
    const Eigen::MatrixXd& theta_a1, const Eigen::MatrixXd& theta_d1,
    const Eigen::MatrixXd& outcome_design, const Eigen::VectorXd& treatment,
    Population population = Population::kAll) {
  const Eigen::Index m_count = theta_a0.rows();
  if (theta_d0.rows() != m_count || theta_a1.rows() != m_count ||
      theta_d1.rows() != m_count) {
    throw InvalidInputError("superpop_estimands: draw counts differ across models");
  }
  const auto units = detail::population_units(treatment, population);
  std::vector<EstimandSet> out;
  out.reserve(static_cast<std::size_t>(m_count));
  for (Eigen::Index m = 0; m < m_count; ++m) {
    out.push_back(estimands_from_joint(detail::averaged_joint(
        theta_a0.row(m), theta_d0.row(m), theta_a1.row(m), theta_d1.row(m),
        outcome_design, units)));
  }
  return out;
}

/// Super-population SACE per draw, ratio-of-averages over units: the average
/// of Pr(A(1)=1, D(1)=0)Pr(D(0)=0) - Pr(A(0)=1, D(0)=0)Pr(D(1)=0) over the
/// average joint-survival probability. NaN when the denominator vanishes.
inline std::vector<double> sace_superpop(
    const Eigen::MatrixXd& theta_a0, const Eigen::MatrixXd& theta_d0,
    const Eigen::MatrixXd& theta_a1, const Eigen::MatrixXd& theta_d1,
    const Eigen::MatrixXd& outcome_design, const Eigen::VectorXd& treatment,
    Population population = Population::kAll) {
  const auto sets = superpop_estimands(theta_a0, theta_d0, theta_a1, theta_d1,
                                       outcome_design, treatment, population);
  std::vector<double> out;
  out.reserve(sets.size());
  for (const auto& s : sets) out.push_back(s.sace);
  return out;
}

}  // namespace ordmi

#endif  // ORDMI_ESTIMANDS_HPP_
