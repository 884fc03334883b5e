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
// Sensitivity of the concordance contrast kappa_10 - kappa_01 to an
// unobserved covariate Z ~ N(mu_z (1 - W), 1) whose effects delta_a, delta_d
// enter the imputation-time linear predictors. The baseline model fits are
// held fixed; only the imputation step sees Z, so the (0, 0) grid cell
// reproduces the baseline analysis exactly.

#ifndef ORDMI_SENSITIVITY_HPP_
#define ORDMI_SENSITIVITY_HPP_

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <thread>
#include <vector>

#include "ordmi/estimands.hpp"
#include "ordmi/imputation.hpp"
#include "ordmi/pooling.hpp"

namespace ordmi {

struct SensitivitySpec {
  double mu_z_control = 1.0;          // latent mean among W = 0 units
  std::vector<double> delta_a_grid;   // empty -> 21 points over [-1, 1]
  std::vector<double> delta_d_grid;
  int m = 50;                         // imputations per grid cell
  std::uint64_t seed = 0;
  int threads = 1;
  // Units entering the contrast; kTreated mirrors an analysis that estimates
  // effects among the treated.
  Population population = Population::kAll;

  static std::vector<double> default_grid() {
    std::vector<double> g(21);
    for (int i = 0; i < 21; ++i) g[static_cast<std::size_t>(i)] = -1.0 + 0.1 * i;
    return g;
  }
};

/// Grid of pooled kappa-contrast estimates. Row i indexes delta_a, column j
/// indexes delta_d.
struct SensitivityGrid {
  std::vector<double> delta_a, delta_d;
  double mu_z_control = 0.0;
  Eigen::MatrixXd estimate;      // pooled kappa_10 - kappa_01
  Eigen::MatrixXd se;            // sqrt((1 + 1/M) B)
  Eigen::MatrixXd standardized;  // estimate / se
};

namespace detail {

// Latent covariate draws are keyed only by (seed, m), never by the grid cell,
// so every cell sees the same Z realizations and differences across cells are
// driven purely by (delta_a, delta_d).
inline Eigen::VectorXd draw_latent(const Eigen::VectorXd& treatment,
                                   double mu_z_control, std::uint64_t m_seed) {
  std::mt19937_64 engine(make_engine(m_seed, {stream::kLatentArm0}));
  std::normal_distribution<double> std_normal(0.0, 1.0);
  Eigen::VectorXd z(treatment.size());
  for (Eigen::Index i = 0; i < treatment.size(); ++i) {
    const double mean = treatment[i] > 0.5 ? 0.0 : mu_z_control;
    z[i] = mean + std_normal(engine);
  }
  return z;
}

}  // namespace detail

/// Evaluates the pooled kappa contrast over the (delta_a, delta_d) grid.
inline SensitivityGrid run_sensitivity(const ArmOutcomeFits& fits0,
                                       const ArmOutcomeFits& fits1,
                                       const ImputationInputs& inputs,
                                       const SensitivitySpec& spec) {
  if (spec.m < 2) throw InvalidConfigError("run_sensitivity: M must be >= 2");
  if (spec.threads < 1) throw InvalidConfigError("run_sensitivity: threads >= 1");
  SensitivityGrid grid;
  grid.delta_a = spec.delta_a_grid.empty() ? SensitivitySpec::default_grid()
                                           : spec.delta_a_grid;
  grid.delta_d = spec.delta_d_grid.empty() ? SensitivitySpec::default_grid()
                                           : spec.delta_d_grid;
  grid.mu_z_control = spec.mu_z_control;
  const auto rows = static_cast<Eigen::Index>(grid.delta_a.size());
  const auto cols = static_cast<Eigen::Index>(grid.delta_d.size());
  grid.estimate.resize(rows, cols);
  grid.se.resize(rows, cols);
  grid.standardized.resize(rows, cols);

  const auto units = detail::population_units(inputs.treatment, spec.population);

  std::vector<std::uint64_t> m_seeds(static_cast<std::size_t>(spec.m));
  std::vector<Eigen::VectorXd> latent(static_cast<std::size_t>(spec.m));
  for (int m = 0; m < spec.m; ++m) {
    const auto mu = static_cast<std::size_t>(m);
    m_seeds[mu] = derive_seed(spec.seed, {static_cast<std::uint64_t>(m)});
    latent[mu] =
        detail::draw_latent(inputs.treatment, spec.mu_z_control, m_seeds[mu]);
  }

  const Eigen::Index cells = rows * cols;
  std::atomic<Eigen::Index> next{0};
  auto worker = [&] {
    for (Eigen::Index cell = next.fetch_add(1); cell < cells;
         cell = next.fetch_add(1)) {
      const Eigen::Index i = cell / cols, j = cell % cols;
      const double da = grid.delta_a[static_cast<std::size_t>(i)];
      const double dd = grid.delta_d[static_cast<std::size_t>(j)];
      std::vector<double> contrasts(static_cast<std::size_t>(spec.m));
      for (int m = 0; m < spec.m; ++m) {
        const auto mu = static_cast<std::size_t>(m);
        LatentOffset offset{da, dd, latent[mu]};
        const CompletedDataset ds =
            impute_once(fits0, fits1, inputs, m_seeds[mu], m, offset, offset);
        Eigen::Matrix4d joint = Eigen::Matrix4d::Zero();
        for (Eigen::Index u : units) {
          joint(compose_ordinal(ds.a1[u], ds.d1[u]) - 1,
                compose_ordinal(ds.a0[u], ds.d0[u]) - 1) += 1.0;
        }
        joint /= static_cast<double>(units.size());
        contrasts[mu] = estimands_from_joint(joint).kappa_diff;
      }
      const std::vector<double> zero_var(contrasts.size(), 0.0);
      const PooledResult pooled = rubin_pool(contrasts, zero_var);
      grid.estimate(i, j) = pooled.point;
      grid.se(i, j) = std::sqrt(pooled.total_var);
      grid.standardized(i, j) =
          grid.se(i, j) > 0.0 ? grid.estimate(i, j) / grid.se(i, j) : 0.0;
    }
  };
  const int workers =
      std::min<Eigen::Index>(spec.threads, cells) > 1
          ? static_cast<int>(std::min<Eigen::Index>(spec.threads, cells))
          : 1;
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return grid;
}

/// Long-format CSV for heatmap plotting, row-major over (delta_a, delta_d),
/// full double precision.
inline void export_heatmap_data(const SensitivityGrid& grid, std::ostream& out) {
  out << "delta_a,delta_d,mu_z_control,estimate,se,standardized\n";
  out.precision(17);
  for (std::size_t i = 0; i < grid.delta_a.size(); ++i) {
    for (std::size_t j = 0; j < grid.delta_d.size(); ++j) {
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(j);
      out << grid.delta_a[i] << ',' << grid.delta_d[j] << ','
          << grid.mu_z_control << ',' << grid.estimate(r, c) << ','
          << grid.se(r, c) << ',' << grid.standardized(r, c) << '\n';
    }
  }
}

}  // namespace ordmi

#endif  // ORDMI_SENSITIVITY_HPP_
