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

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "ordmi/outcome.hpp"

using ordmi::ordinal_cell_probs;

TEST_CASE("ordinal cells form a distribution and match hand values") {
  const auto c = ordinal_cell_probs(0.3, 0.2, 0.6);
  CHECK(c.p[0] == doctest::Approx(0.7 * 0.8));
  CHECK(c.p[1] == doctest::Approx(0.3 * 0.4));
  CHECK(c.p[2] == doctest::Approx(0.7 * 0.2));
  CHECK(c.p[3] == doctest::Approx(0.3 * 0.6));
  CHECK(c.p[0] + c.p[1] + c.p[2] + c.p[3] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(ordinal_cell_probs(1.2, 0.2, 0.2), ordmi::InvalidInputError);
}

TEST_CASE("outcome design layout is [1 | spline | X*]") {
  Eigen::MatrixXd spline(3, 2), xstar(3, 1);
  spline << 1, 2, 3, 4, 5, 6;
  xstar << 7, 8, 9;
  const Eigen::MatrixXd d = ordmi::make_outcome_design(spline, xstar);
  REQUIRE(d.cols() == 4);
  CHECK(d(1, 0) == 1.0);
  CHECK(d(1, 1) == 3.0);
  CHECK(d(1, 2) == 4.0);
  CHECK(d(1, 3) == 8.0);
}

TEST_CASE("death-adverse dependence coefficient is recovered within 3 SE") {
  // Generate one arm's data with a strong A -> D dependence (1.5) and check
  // the fitted coefficient, which is the last entry of the death model.
  std::mt19937_64 engine(2024);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = 2000;
  Eigen::MatrixXd spline_design(n, 1);  // linear score stand-in
  Eigen::MatrixXd xstar(n, 2);
  Eigen::VectorXd a(n), d(n);
  for (int i = 0; i < n; ++i) {
    spline_design(i, 0) = normal(engine);
    xstar(i, 0) = normal(engine);
    xstar(i, 1) = normal(engine);
    const double pa =
        ordmi::logistic(1.0 + 0.3 * spline_design(i, 0) + 0.2 * xstar(i, 0));
    a[i] = unif(engine) < pa ? 1.0 : 0.0;
    const double pd = ordmi::logistic(0.5 - 0.2 * spline_design(i, 0) +
                                      0.1 * xstar(i, 1) + 1.5 * a[i]);
    d[i] = unif(engine) < pd ? 1.0 : 0.0;
  }
  ordmi::SplineBasis basis;
  const auto fits =
      ordmi::fit_arm_models(1, a, d, spline_design, xstar, basis);
  CHECK(fits.adverse_fit.converged);
  CHECK(fits.death_fit.converged);
  REQUIRE(fits.death_fit.coefficients.size() == 5);
  const double eta_hat = fits.death_fit.coefficients[4];
  const double se = std::sqrt(fits.death_fit.covariance(4, 4));
  CHECK(std::abs(eta_hat - 1.5) < 3.0 * se);
}

TEST_CASE("predictions are consistent with the coefficient conventions") {
  Eigen::VectorXd theta_a(3), theta_d(4);
  theta_a << 0.5, -1.0, 0.25;
  theta_d << -0.5, 0.5, 0.0, 2.0;
  Eigen::RowVectorXd row(3);
  row << 1.0, 2.0, -4.0;
  const double eta_a = 0.5 - 2.0 - 1.0;
  CHECK(ordmi::adverse_prob(theta_a, row) ==
        doctest::Approx(ordmi::logistic(eta_a)).epsilon(1e-15));
  const double eta_d0 = -0.5 + 1.0 + 0.0;
  CHECK(ordmi::death_prob(theta_d, row, 0.0) ==
        doctest::Approx(ordmi::logistic(eta_d0)).epsilon(1e-15));
  CHECK(ordmi::death_prob(theta_d, row, 1.0) ==
        doctest::Approx(ordmi::logistic(eta_d0 + 2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(ordmi::adverse_prob(theta_d, row), ordmi::InvalidInputError);
  CHECK_THROWS_AS(ordmi::death_prob(theta_a, row, 1.0), ordmi::InvalidInputError);
}

TEST_CASE("application-mode priors regularize wide designs") {
  // p close to n with collinear columns: the shrinkage priors keep the fit
  // finite where the uniform weakly-informative prior also works but the
  // point is that application mode produces a different, more shrunken fit.
  std::mt19937_64 engine(55);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = 60;
  Eigen::MatrixXd spline_design(n, 2), xstar(n, 6);
  Eigen::VectorXd a(n), d(n);
  for (int i = 0; i < n; ++i) {
    spline_design(i, 0) = normal(engine);
    spline_design(i, 1) = spline_design(i, 0) + 0.01 * normal(engine);
    for (int j = 0; j < 6; ++j) xstar(i, j) = normal(engine);
    a[i] = unif(engine) < 0.4 ? 1.0 : 0.0;
    d[i] = unif(engine) < 0.3 ? 1.0 : 0.0;
  }
  ordmi::SplineBasis basis;
  ordmi::OutcomePriorConfig app;
  app.application_mode = true;
  app.shrinkage_lambda = 9.0;
  const auto fits = ordmi::fit_arm_models(0, a, d, spline_design, xstar, basis, app);
  CHECK(fits.adverse_fit.converged);
  CHECK(fits.death_fit.converged);
  ordmi::OutcomePriorConfig sim;
  const auto sim_fits =
      ordmi::fit_arm_models(0, a, d, spline_design, xstar, basis, sim);
  // Linear adjustments shrink harder under the application priors once
  // lambda / linear_scale^2 = 1 exceeds the Cauchy curvature 2 / 2.5^2.
  CHECK(fits.adverse_fit.coefficients.tail(6).norm() <
        sim_fits.adverse_fit.coefficients.tail(6).norm() + 1e-6);
}

TEST_CASE("empty arm subsample is rejected") {
  ordmi::SplineBasis basis;
  CHECK_THROWS_AS(ordmi::fit_arm_models(0, Eigen::VectorXd(), Eigen::VectorXd(),
                                        Eigen::MatrixXd(0, 1),
                                        Eigen::MatrixXd(0, 1), basis),
                  ordmi::InvalidInputError);
}
