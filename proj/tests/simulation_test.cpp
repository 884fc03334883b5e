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

#include "ordmi/simulation.hpp"

using ordmi::case_study_config;
using ordmi::generate_dataset;
using ordmi::make_covariate_pool;
using ordmi::SimulationConfig;
using ordmi::true_estimands;

namespace {

SimulationConfig small_config(int n) {
  SimulationConfig c = case_study_config(1);
  c.n = n;
  c.resample_alpha = false;
  c.alpha = Eigen::VectorXd::Zero(5);
  c.alpha[0] = 0.4;
  return c;
}

}  // namespace

TEST_CASE("covariate pool marginals") {
  const Eigen::MatrixXd pool = make_covariate_pool(20000, 3);
  REQUIRE(pool.cols() == 5);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(pool.col(j).mean()) < 1e-9);
    const double var = (pool.col(j).array() - pool.col(j).mean()).square().sum() /
                       (pool.rows() - 1);
    CHECK(var == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(pool.col(3).mean() == doctest::Approx(0.50).epsilon(0.05));
  CHECK(pool.col(4).mean() == doctest::Approx(0.40).epsilon(0.03));
  for (Eigen::Index i = 0; i < pool.rows(); ++i) {
    CHECK((pool(i, 3) == 0.0 || pool(i, 3) == 1.0));
    CHECK((pool(i, 4) == 0.0 || pool(i, 4) == 1.0));
  }
  // Deterministic in the seed.
  CHECK((make_covariate_pool(50, 3) - make_covariate_pool(50, 3)).norm() == 0.0);
}

TEST_CASE("zero assignment coefficients balance the arms") {
  SimulationConfig c = small_config(100000);
  c.alpha.setZero();
  const Eigen::MatrixXd pool = make_covariate_pool(2016, 1);
  const auto cohort = generate_dataset(c, pool, 17);
  const double p_treat = cohort.w.mean();
  CHECK(std::abs(p_treat - 0.5) < 0.01);
  // Two-sample covariate balance on the first continuous covariate.
  double m1 = 0, m0 = 0;
  int n1 = 0, n0 = 0;
  for (int i = 0; i < c.n; ++i) {
    if (cohort.w[i] > 0.5) {
      m1 += cohort.x(i, 0);
      ++n1;
    } else {
      m0 += cohort.x(i, 0);
      ++n0;
    }
  }
  m1 /= n1;
  m0 /= n0;
  const double se = std::sqrt(1.0 / n1 + 1.0 / n0);
  CHECK(std::abs(m1 - m0) < 4.0 * se);
}

TEST_CASE("zeta = 0 decouples death from the adverse event") {
  SimulationConfig c = small_config(100000);
  c.zeta = {0.0, 0.0};
  // A pool holding one repeated covariate row makes the conditioning on X
  // exact: with zeta = 0, A(1) and D(1) are then independent outright.
  Eigen::MatrixXd pool(2, 5);
  pool.row(0) << 0.2, -0.4, 0.1, 1.0, 0.0;
  pool.row(1) = pool.row(0);
  const auto cohort = generate_dataset(c, pool, 21);
  long long n11 = 0, n10 = 0, n01 = 0, n00 = 0;
  for (int i = 0; i < c.n; ++i) {
    const int a = cohort.a1[i], d = cohort.d1[i];
    if (a && d) ++n11;
    else if (a) ++n10;
    else if (d) ++n01;
    else ++n00;
  }
  const double total = static_cast<double>(n11 + n10 + n01 + n00);
  const double pa = (n11 + n10) / total, pd = (n11 + n01) / total;
  const double expected = pa * pd * total;
  // Standardized deviation of the joint cell from independence (1% level).
  const double dev = (n11 - expected) / std::sqrt(expected * (1 - pa) * (1 - pd));
  CHECK(std::abs(dev) < 2.58);
}

TEST_CASE("generator frequencies match analytic probabilities") {
  SimulationConfig c = small_config(1000000);
  const Eigen::MatrixXd pool = make_covariate_pool(504, 5);
  const auto cohort = generate_dataset(c, pool, 23);
  // Analytic Pr(A(1) = 1) averaged over the pool.
  double pa1 = 0.0;
  for (Eigen::Index i = 0; i < pool.rows(); ++i) {
    pa1 += ordmi::link_inverse(c.link, c.phi_a[1] + pool.row(i) * c.xi_a[1]);
  }
  pa1 /= static_cast<double>(pool.rows());
  const double freq = cohort.a1.cast<double>().mean();
  const double mc_se = std::sqrt(pa1 * (1 - pa1) / c.n);
  CHECK(std::abs(freq - pa1) < 4.0 * mc_se);
  // W frequency against analytic assignment probability.
  double pw = 0.0;
  for (Eigen::Index i = 0; i < pool.rows(); ++i) {
    pw += ordmi::link_inverse(c.link, pool.row(i) * c.alpha);
  }
  pw /= static_cast<double>(pool.rows());
  CHECK(std::abs(cohort.w.mean() - pw) < 4.0 * std::sqrt(pw * (1 - pw) / c.n));
}

TEST_CASE("dimension mismatch is rejected") {
  SimulationConfig c = small_config(100);
  c.alpha = Eigen::VectorXd::Zero(3);
  const Eigen::MatrixXd pool = make_covariate_pool(100, 1);
  CHECK_THROWS_AS(generate_dataset(c, pool, 1), ordmi::InvalidConfigError);
}

TEST_CASE("degenerate generator gives all mass to level 1 and zero effects") {
  SimulationConfig c = small_config(10);
  c.phi_a = {-40.0, -40.0};
  c.phi_d = {-40.0, -40.0};
  c.zeta = {0.0, 0.0};
  for (int w = 0; w < 2; ++w) {
    c.xi_a[static_cast<std::size_t>(w)].setZero();
    c.xi_d[static_cast<std::size_t>(w)].setZero();
  }
  const Eigen::MatrixXd pool = make_covariate_pool(100, 9);
  const auto truth = true_estimands(c, pool);
  CHECK(truth.p_k_w(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(truth.p_k_w(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(truth.itt_adverse == doctest::Approx(0.0));
  CHECK(truth.itt_death == doctest::Approx(0.0));
  CHECK(truth.itt_composite == doctest::Approx(0.0));
}

TEST_CASE("symmetric arms have null distributional estimands") {
  SimulationConfig c = small_config(10);
  c.phi_a = {0.3, 0.3};
  c.phi_d = {-0.2, -0.2};
  c.zeta = {0.7, 0.7};
  c.xi_a[1] = c.xi_a[0];
  c.xi_d[1] = c.xi_d[0];
  const Eigen::MatrixXd pool = make_covariate_pool(300, 10);
  const auto truth = true_estimands(c, pool);
  for (double delta : truth.delta) CHECK(std::abs(delta) < 1e-12);
  CHECK(std::abs(truth.kappa10 - truth.kappa01) < 1e-12);
  CHECK(truth.u10 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(truth.kappa_ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("case-study truths reproduce the published signs and ordering") {
  const Eigen::MatrixXd pool = make_covariate_pool(2016, 2016);
  const auto t1 = true_estimands(case_study_config(1), pool);
  CHECK(t1.itt_adverse > 0.0);
  CHECK(t1.itt_death > 0.0);
  CHECK(t1.sace < 0.0);
  CHECK(t1.kappa_ratio > 1.0);
  const auto t2 = true_estimands(case_study_config(2), pool);
  CHECK(t2.itt_adverse < 0.0);
  CHECK(t2.itt_death > 0.0);
  CHECK(t2.sace < 0.0);
}

TEST_CASE("AIPW matches difference-in-means under randomization") {
  std::mt19937_64 engine(77);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n = 5000;
  const Eigen::MatrixXd x = make_covariate_pool(n, 12);
  Eigen::VectorXd w(n), a(n), d(n);
  for (int i = 0; i < n; ++i) {
    w[i] = unif(engine) < 0.5 ? 1.0 : 0.0;
    const double pa = ordmi::logistic(-0.5 + 0.4 * x(i, 0) + 0.6 * w[i]);
    a[i] = unif(engine) < pa ? 1.0 : 0.0;
    d[i] = unif(engine) < 0.3 ? 1.0 : 0.0;
  }
  const auto r = ordmi::aipw_estimate(w, a, d, x, ordmi::AipwEstimand::kIttAdverse);
  double m1 = 0, m0 = 0, n1 = 0, n0 = 0;
  for (int i = 0; i < n; ++i) {
    if (w[i] > 0.5) {
      m1 += a[i];
      ++n1;
    } else {
      m0 += a[i];
      ++n0;
    }
  }
  const double dim = m1 / n1 - m0 / n0;
  CHECK(std::abs(r.point - dim) < 2.0 * r.se);
  CHECK(r.lo < r.point);
  CHECK(r.hi > r.point);
}

TEST_CASE("AIPW rejects estimands without a doubly robust form") {
  const Eigen::MatrixXd x = make_covariate_pool(100, 13);
  Eigen::VectorXd w(100), a(100), d(100);
  for (int i = 0; i < 100; ++i) {
    w[i] = i % 2;
    a[i] = (i / 2) % 2;
    d[i] = (i / 4) % 2;
  }
  CHECK_THROWS_AS(ordmi::aipw_estimate(w, a, d, x, ordmi::AipwEstimand::kSace),
                  ordmi::NotSupportedError);
  CHECK_THROWS_AS(ordmi::aipw_estimate(w, a, d, x, ordmi::AipwEstimand::kKappaDiff),
                  ordmi::NotSupportedError);
  CHECK_THROWS_AS(ordmi::aipw_estimate(w, a, d, x, ordmi::AipwEstimand::kKappaRatio),
                  ordmi::NotSupportedError);
}

TEST_CASE("replication harness is deterministic across thread counts") {
  SimulationConfig c = case_study_config(1);
  c.n = 400;
  const Eigen::MatrixXd pool = make_covariate_pool(400, 31);
  ordmi::ReplicationOptions options;
  options.m = 10;
  options.threads = 1;
  const auto serial = ordmi::run_replications(c, pool, 6, 99, options);
  options.threads = 4;
  const auto parallel = ordmi::run_replications(c, pool, 6, 99, options);
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].estimand == parallel.rows[i].estimand);
    CHECK(serial.rows[i].method == parallel.rows[i].method);
    CHECK(serial.rows[i].coverage == parallel.rows[i].coverage);
    CHECK(serial.rows[i].bias == parallel.rows[i].bias);
    CHECK(serial.rows[i].rmse == parallel.rows[i].rmse);
  }
  CHECK(serial.failed == parallel.failed);
  for (const auto& row : serial.rows) {
    CHECK(row.coverage >= 0.0);
    CHECK(row.coverage <= 100.0);
    CHECK(row.interval_width >= 0.0);
    CHECK(row.replications + serial.failed <= 6);
  }
}
