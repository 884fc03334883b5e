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

#include "ordmi/glm.hpp"

using ordmi::fit_map;
using ordmi::LinkFunction;
using ordmi::link_inverse;
using ordmi::logistic;
using ordmi::PriorSpec;

namespace {

// Independent log-posterior evaluation, used both by the grid-search oracle
// and for checking the fitted optimum. No code shared with the fitter.
double log_posterior(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& beta, const PriorSpec& prior) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double eta = x.row(i) * beta;
    // log p = y*eta - log(1 + e^eta), computed stably.
    ll += y[i] * eta - (eta > 0 ? eta + std::log1p(std::exp(-eta))
                                : std::log1p(std::exp(eta)));
  }
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    switch (prior.kind) {
      case ordmi::PriorKind::kFlat:
        break;
      case ordmi::PriorKind::kCauchy: {
        const double z = (beta[j] - prior.location) / prior.scale;
        ll += -std::log1p(z * z);
        break;
      }
      case ordmi::PriorKind::kRidgeNormal:
        ll += -0.5 * prior.shrinkage_lambda * beta[j] * beta[j] /
              (prior.scale * prior.scale);
        break;
      case ordmi::PriorKind::kLassoLaplace:
        ll += -prior.shrinkage_lambda * std::abs(beta[j]) /
              (prior.scale * prior.scale);
        break;
    }
  }
  return ll;
}

// Coordinate-refined grid search over the coefficient space.
Eigen::VectorXd grid_search(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                            const PriorSpec& prior) {
  const Eigen::Index p = x.cols();
  Eigen::VectorXd best = Eigen::VectorXd::Zero(p);
  double width = 8.0;
  for (int round = 0; round < 30; ++round) {
    for (Eigen::Index j = 0; j < p; ++j) {
      Eigen::VectorXd cand = best;
      double best_val = log_posterior(x, y, best, prior);
      for (int g = -20; g <= 20; ++g) {
        cand[j] = best[j] + width * g / 20.0;
        const double v = log_posterior(x, y, cand, prior);
        if (v > best_val) {
          best_val = v;
          best[j] = cand[j];
        }
        cand[j] = best[j];
      }
    }
    width *= 0.5;
  }
  return best;
}

Eigen::MatrixXd random_design(std::mt19937_64* engine, int n, int p) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd x(n, p);
  x.col(0).setOnes();
  for (int i = 0; i < n; ++i) {
    for (int j = 1; j < p; ++j) x(i, j) = normal(*engine);
  }
  return x;
}

Eigen::VectorXd random_response(std::mt19937_64* engine,
                                const Eigen::MatrixXd& x,
                                const Eigen::VectorXd& truth) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd y(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    y[i] = unif(*engine) < logistic(x.row(i) * truth) ? 1.0 : 0.0;
  }
  return y;
}

}  // namespace

TEST_CASE("logistic function is stable and correct") {
  CHECK(logistic(0.0) == doctest::Approx(0.5));
  CHECK(logistic(710.0) == doctest::Approx(1.0));
  CHECK(logistic(-710.0) == doctest::Approx(0.0));
  CHECK(logistic(2.0) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-15));
}

TEST_CASE("Burr link with c = 1 coincides with the logistic") {
  const LinkFunction burr1 = LinkFunction::Burr(1.0);
  for (double x : {-30.0, -3.0, -0.5, 0.0, 0.7, 4.0, 25.0}) {
    CHECK(link_inverse(burr1, x) == doctest::Approx(logistic(x)).epsilon(1e-12));
  }
}

TEST_CASE("Burr link is a proper CDF transform") {
  const LinkFunction burr = LinkFunction::Burr(0.5);
  double prev = 0.0;
  for (double x = -40.0; x <= 40.0; x += 0.25) {
    const double v = link_inverse(burr, x);
    CHECK(v >= prev);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    // Closed form: 1 - (1 + e^x)^{-c}.
    if (x < 30.0) {
      CHECK(v == doctest::Approx(1.0 - std::pow(1.0 + std::exp(x), -0.5))
                     .epsilon(1e-10));
    }
    prev = v;
  }
}

TEST_CASE("MAP fit matches grid-search maximization, flat and Cauchy priors") {
  std::mt19937_64 engine(42);
  std::uniform_int_distribution<int> n_dist(40, 200), p_dist(1, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = n_dist(engine), p = p_dist(engine);
    const Eigen::MatrixXd x = random_design(&engine, n, p);
    Eigen::VectorXd truth(p);
    std::normal_distribution<double> coef(0.0, 0.8);
    for (int j = 0; j < p; ++j) truth[j] = coef(engine);
    const Eigen::VectorXd y = random_response(&engine, x, truth);

    const PriorSpec prior =
        trial % 2 == 0 ? PriorSpec::Cauchy(0.0, 2.5) : PriorSpec::Flat();
    // Flat priors on nearly separated data can push coefficients out of any
    // grid; skip the occasional non-converged flat case via the exception.
    ordmi::ModelFit fit;
    try {
      fit = fit_map(x, y, prior, LinkFunction::Logit(), false);
    } catch (const ordmi::SingularCurvatureError&) {
      CHECK(prior.kind == ordmi::PriorKind::kFlat);
      continue;
    }
    const Eigen::VectorXd oracle = grid_search(x, y, prior);
    for (int j = 0; j < p; ++j) {
      CHECK(std::abs(fit.coefficients[j] - oracle[j]) < 1e-3);
    }
    // The fit should never score below the oracle.
    CHECK(log_posterior(x, y, fit.coefficients, prior) >=
          log_posterior(x, y, oracle, prior) - 1e-9);
  }
}

TEST_CASE("complete separation under a flat prior is rejected") {
  Eigen::MatrixXd x(8, 2);
  Eigen::VectorXd y(8);
  for (int i = 0; i < 8; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = i < 4 ? -1.0 - i : 1.0 + i;
    y[i] = i < 4 ? 0.0 : 1.0;
  }
  CHECK_THROWS_AS(fit_map(x, y, PriorSpec::Flat(), LinkFunction::Logit(), false),
                  ordmi::SingularCurvatureError);
  // The Cauchy prior regularizes the same data into a finite optimum.
  const auto fit = fit_map(x, y, PriorSpec::Cauchy(0.0, 2.5),
                           LinkFunction::Logit(), false);
  CHECK(fit.converged);
  CHECK(std::isfinite(fit.coefficients[1]));
}

TEST_CASE("ridge and lasso shrink relative to the flat fit") {
  std::mt19937_64 engine(11);
  const Eigen::MatrixXd x = random_design(&engine, 150, 3);
  Eigen::VectorXd truth(3);
  truth << 0.3, 1.2, -0.9;
  const Eigen::VectorXd y = random_response(&engine, x, truth);

  const auto flat = fit_map(x, y, PriorSpec::Flat(), LinkFunction::Logit(), false);
  const auto ridge = fit_map(x, y, PriorSpec::Ridge(0.5, 4.0),
                             LinkFunction::Logit(), false);
  const auto lasso = fit_map(x, y, PriorSpec::Lasso(0.5, 4.0),
                             LinkFunction::Logit(), false);
  CHECK(ridge.coefficients.norm() < flat.coefficients.norm());
  CHECK(lasso.coefficients.norm() < flat.coefficients.norm());

  // Unpenalized-intercept variant leaves the intercept less shrunken.
  const auto ridge_free = fit_map(x, y, PriorSpec::Ridge(0.5, 4.0),
                                  LinkFunction::Logit(), true);
  CHECK(std::abs(ridge_free.coefficients[0]) >= std::abs(ridge.coefficients[0]) - 1e-9);
}

TEST_CASE("Burr-link fit recovers generator coefficients at scale") {
  std::mt19937_64 engine(99);
  const int n = 30000;
  const Eigen::MatrixXd x = random_design(&engine, n, 2);
  Eigen::VectorXd truth(2);
  truth << -0.4, 0.8;
  const LinkFunction burr = LinkFunction::Burr(0.5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    y[i] = unif(engine) < link_inverse(burr, x.row(i) * truth) ? 1.0 : 0.0;
  }
  const auto fit = fit_map(x, y, PriorSpec::Flat(), burr, false);
  CHECK(fit.converged);
  CHECK(std::abs(fit.coefficients[0] - truth[0]) < 0.1);
  CHECK(std::abs(fit.coefficients[1] - truth[1]) < 0.1);
}

TEST_CASE("posterior sampler reproduces the Laplace mean and covariance") {
  std::mt19937_64 engine(5);
  const Eigen::MatrixXd x = random_design(&engine, 400, 2);
  Eigen::VectorXd truth(2);
  truth << 0.2, -0.6;
  const Eigen::VectorXd y = random_response(&engine, x, truth);
  const auto fit = fit_map(x, y, PriorSpec::Cauchy(0.0, 2.5),
                           LinkFunction::Logit(), false);

  const int draws = 200000;
  const Eigen::MatrixXd samples = ordmi::sample_posterior(fit, draws, 777);
  REQUIRE(samples.rows() == draws);
  const Eigen::VectorXd mean = samples.colwise().mean();
  Eigen::MatrixXd centered = samples.rowwise() - mean.transpose();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(draws - 1);
  for (int j = 0; j < 2; ++j) {
    const double mc_se = std::sqrt(fit.covariance(j, j) / draws);
    CHECK(std::abs(mean[j] - fit.coefficients[j]) < 5.0 * mc_se);
    for (int k = 0; k < 2; ++k) {
      CHECK(std::abs(cov(j, k) - fit.covariance(j, k)) <
            0.05 * std::sqrt(fit.covariance(j, j) * fit.covariance(k, k)));
    }
  }
}

TEST_CASE("posterior sampling is deterministic in the seed") {
  std::mt19937_64 engine(6);
  const Eigen::MatrixXd x = random_design(&engine, 100, 2);
  const Eigen::VectorXd y = random_response(&engine, x, Eigen::VectorXd::Zero(2));
  const auto fit = fit_map(x, y, PriorSpec::Cauchy(0.0, 2.5),
                           LinkFunction::Logit(), false);
  const Eigen::MatrixXd a = ordmi::sample_posterior(fit, 5, 123);
  const Eigen::MatrixXd b = ordmi::sample_posterior(fit, 5, 123);
  const Eigen::MatrixXd c = ordmi::sample_posterior(fit, 5, 124);
  CHECK((a - b).norm() == 0.0);
  CHECK((a - c).norm() > 0.0);
}

TEST_CASE("input validation") {
  Eigen::MatrixXd x(3, 1);
  x.setOnes();
  Eigen::VectorXd bad(3);
  bad << 0.0, 0.5, 1.0;
  CHECK_THROWS_AS(fit_map(x, bad, PriorSpec::Flat()), ordmi::InvalidInputError);
  Eigen::VectorXd short_y(2);
  short_y << 0.0, 1.0;
  CHECK_THROWS_AS(fit_map(x, short_y, PriorSpec::Flat()), ordmi::InvalidInputError);
  CHECK_THROWS_AS(PriorSpec::Cauchy(0.0, -1.0).validate(), ordmi::InvalidConfigError);
}
