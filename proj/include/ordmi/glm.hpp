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
// Penalized Bernoulli regression: MAP estimation by Newton-Raphson with
// step-halving, and Laplace-approximation posterior sampling around the MAP.

#ifndef ORDMI_GLM_HPP_
#define ORDMI_GLM_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ordmi/errors.hpp"
#include "ordmi/link.hpp"
#include "ordmi/prior.hpp"
#include "ordmi/rng.hpp"

namespace ordmi {

/// MAP fit of one Bernoulli regression model. `covariance` is the inverse of
/// the observed negative log-posterior Hessian at the MAP, i.e. the
/// multivariate-normal approximation used for posterior draws.
struct ModelFit {
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd covariance;
  LinkFunction link;
  bool converged = false;
  int iterations = 0;
};

namespace detail {

// Per-observation Bernoulli log-likelihood contribution with first and second
// derivatives in the linear predictor eta.
inline void bernoulli_terms(const LinkFunction& link, double eta, double y,
                            double* ll, double* d1, double* d2) {
  switch (link.kind) {
    case LinkKind::kLogit: {
      const double p = logistic(eta);
      const double softplus =
          (eta > 0.0) ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
      *ll = y * eta - softplus;
      *d1 = y - p;
      *d2 = -p * (1.0 - p);
      return;
    }
    case LinkKind::kBurr: {
      const double c = link.c;
      const double sig = logistic(eta);
      const double softplus =
          (eta > 0.0) ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
      const double log_q = -c * softplus;           // log(1 - p)
      const double q = std::exp(log_q);
      const double p = -std::expm1(log_q);
      // d/deta log(1-p) = -c*sig ; d/deta log p = c*sig*(1-p)/p
      if (y > 0.5) {
        const double logp = std::log(p);
        const double r = q / p;
        *ll = logp;
        *d1 = c * sig * r;
        *d2 = c * sig * (1.0 - sig) * r - c * c * sig * sig * r / p;
      } else {
        *ll = log_q;
        *d1 = -c * sig;
        *d2 = -c * sig * (1.0 - sig);
      }
      return;
    }
  }
  throw InvalidInputError("bernoulli_terms: unknown link kind");
}

struct Objective {
  // Penalized log-likelihood (log-posterior up to a constant) and its
  // gradient / negative Hessian.
  const Eigen::MatrixXd& x;
  const Eigen::VectorXd& y;
  const std::vector<CoefPenalty>& penalties;
  const LinkFunction& link;

  double value(const Eigen::VectorXd& beta) const {
    const Eigen::VectorXd eta = x * beta;
    double total = 0.0;
    double ll, d1, d2;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      bernoulli_terms(link, eta[i], y[i], &ll, &d1, &d2);
      total += ll;
    }
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
      total -= penalties[static_cast<std::size_t>(j)].value(beta[j]);
    }
    return total;
  }

  void grad_neghess(const Eigen::VectorXd& beta, Eigen::VectorXd* grad,
                    Eigen::MatrixXd* neg_hess) const {
    const Eigen::Index n = x.rows(), p = x.cols();
    const Eigen::VectorXd eta = x * beta;
    Eigen::VectorXd score(n), weight(n);
    double ll, d1, d2;
    for (Eigen::Index i = 0; i < n; ++i) {
      bernoulli_terms(link, eta[i], y[i], &ll, &d1, &d2);
      score[i] = d1;
      weight[i] = -d2;
    }
    *grad = x.transpose() * score;
    *neg_hess = x.transpose() * weight.asDiagonal() * x;
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto& pen = penalties[static_cast<std::size_t>(j)];
      (*grad)[j] -= pen.grad(beta[j]);
      (*neg_hess)(j, j) += pen.hess(beta[j]);
    }
  }
};

}  // namespace detail

/// Maximizes log-likelihood + log-prior over the coefficient vector by
/// Newton-Raphson with step-halving. `penalties` has one entry per design
/// column. The returned covariance is the inverse observed negative Hessian
/// at the optimum; a Hessian singular within tolerance raises
/// SingularCurvatureError with a hint to supply a proper prior.
inline ModelFit fit_map(const Eigen::MatrixXd& design,
                        const Eigen::VectorXd& response,
                        const std::vector<CoefPenalty>& penalties,
                        const LinkFunction& link = LinkFunction::Logit(),
                        int max_iterations = 200,
                        double grad_tol = 1e-9) {
  const Eigen::Index n = design.rows(), p = design.cols();
  if (n < 1 || p < 1) throw InvalidInputError("fit_map: empty design");
  if (response.size() != n) {
    throw InvalidInputError("fit_map: response length does not match design");
  }
  if (!design.allFinite() || !response.allFinite()) {
    throw InvalidInputError("fit_map: NaN or Inf in inputs");
  }
  if (penalties.size() != static_cast<std::size_t>(p)) {
    throw InvalidInputError("fit_map: one penalty per design column required");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (response[i] != 0.0 && response[i] != 1.0) {
      throw InvalidInputError("fit_map: response must be binary");
    }
  }

  detail::Objective obj{design, response, penalties, link};
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double f = obj.value(beta);
  Eigen::VectorXd grad(p);
  Eigen::MatrixXd neg_hess(p, p);

  bool converged = false;
  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    obj.grad_neghess(beta, &grad, &neg_hess);
    if (grad.norm() <= grad_tol) {
      converged = true;
      break;
    }
    // Levenberg damping keeps the step defined when the curvature is
    // indefinite away from the mode (possible under Cauchy penalties).
    Eigen::VectorXd step;
    double damp = 0.0;
    const double scale = neg_hess.diagonal().cwiseAbs().maxCoeff() + 1e-300;
    for (;;) {
      Eigen::MatrixXd h = neg_hess;
      if (damp > 0.0) h.diagonal().array() += damp;
      Eigen::LLT<Eigen::MatrixXd> llt(h);
      if (llt.info() == Eigen::Success) {
        step = llt.solve(grad);
        if (step.allFinite()) break;
      }
      damp = (damp == 0.0) ? 1e-8 * scale : damp * 10.0;
      if (damp > 1e12 * scale) {
        throw SingularCurvatureError(
            "fit_map: curvature is numerically singular; use a proper prior "
            "(e.g. Cauchy or Ridge) for separated or rank-deficient data");
      }
    }
    // Step-halving line search on the penalized log-likelihood.
    double t = 1.0;
    bool improved = false;
    for (int h = 0; h < 60; ++h) {
      const Eigen::VectorXd cand = beta + t * step;
      const double fc = obj.value(cand);
      if (std::isfinite(fc) && fc > f - 1e-14 * std::abs(f)) {
        beta = cand;
        f = fc;
        improved = true;
        break;
      }
      t *= 0.5;
    }
    if (!improved) break;  // no ascent direction left; report non-convergence
  }
  if (!converged) {
    obj.grad_neghess(beta, &grad, &neg_hess);
    converged = grad.norm() <= grad_tol;
  } else {
    obj.grad_neghess(beta, &grad, &neg_hess);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(neg_hess);
  if (es.info() != Eigen::Success) {
    throw NumericalError("fit_map: eigendecomposition of the Hessian failed");
  }
  const double max_ev = es.eigenvalues().cwiseAbs().maxCoeff();
  // The absolute floor catches separation under a flat prior, where the
  // curvature decays to zero in every direction as |beta| grows. It must sit
  // well above the curvature at which the gradient tolerance can already be
  // met (both decay at the same exponential rate along the separating ray).
  if (!(max_ev > 0.0) ||
      es.eigenvalues().minCoeff() <= std::max(1e-12 * max_ev, 1e-8)) {
    throw SingularCurvatureError(
        "fit_map: negative log-posterior Hessian is rank deficient at the "
        "optimum; supply a proper prior (Cauchy, Ridge or Lasso)");
  }

  ModelFit fit;
  fit.coefficients = beta;
  fit.covariance =
      es.eigenvectors() *
      es.eigenvalues().cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose();
  // Exact symmetry, so downstream PSD checks see a clean matrix.
  fit.covariance = ((fit.covariance + fit.covariance.transpose()) / 2.0).eval();
  fit.link = link;
  fit.converged = converged;
  fit.iterations = iter;
  return fit;
}

/// Convenience overload: one PriorSpec applied to all columns. When
/// `unpenalized_intercept` is set, column 0 gets a flat penalty under
/// shrinkage priors (Ridge/Lasso); Cauchy and Flat apply uniformly.
inline ModelFit fit_map(const Eigen::MatrixXd& design,
                        const Eigen::VectorXd& response,
                        const PriorSpec& prior,
                        const LinkFunction& link = LinkFunction::Logit(),
                        bool unpenalized_intercept = true,
                        int max_iterations = 200) {
  prior.validate();
  std::vector<CoefPenalty> penalties(static_cast<std::size_t>(design.cols()),
                                     CoefPenalty::From(prior));
  const bool shrinkage = prior.kind == PriorKind::kRidgeNormal ||
                         prior.kind == PriorKind::kLassoLaplace;
  if (unpenalized_intercept && shrinkage && !penalties.empty()) {
    penalties[0] = CoefPenalty::None();
  }
  return fit_map(design, response, penalties, link, max_iterations);
}

/// Draws `count` i.i.d. multivariate-normal coefficient vectors centered at
/// the MAP with the Laplace-approximation covariance. Deterministic given the
/// seed. Eigenvalues below -1e-8 * max|eigenvalue| raise NumericalError;
/// small negative eigenvalues within tolerance are clamped to zero.
inline Eigen::MatrixXd sample_posterior(const ModelFit& fit, int count,
                                        std::uint64_t rng_seed) {
  if (count < 1) throw InvalidInputError("sample_posterior: count must be >= 1");
  const Eigen::Index p = fit.coefficients.size();
  if (fit.covariance.rows() != p || fit.covariance.cols() != p) {
    throw InvalidInputError("sample_posterior: covariance dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fit.covariance);
  if (es.info() != Eigen::Success) {
    throw NumericalError("sample_posterior: eigendecomposition failed");
  }
  Eigen::VectorXd evals = es.eigenvalues();
  const double max_abs = evals.cwiseAbs().maxCoeff();
  if (evals.minCoeff() < -1e-8 * std::max(max_abs, 1.0)) {
    throw NumericalError("sample_posterior: covariance is not PSD within tolerance");
  }
  const Eigen::MatrixXd scale =
      es.eigenvectors() * evals.cwiseMax(0.0).cwiseSqrt().asDiagonal();

  std::mt19937_64 engine(rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd draws(count, p);
  Eigen::VectorXd z(p);
  for (int m = 0; m < count; ++m) {
    for (Eigen::Index j = 0; j < p; ++j) z[j] = normal(engine);
    draws.row(m) = (fit.coefficients + scale * z).transpose();
  }
  return draws;
}

}  // namespace ordmi

#endif  // ORDMI_GLM_HPP_
