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
// Natural cubic spline basis on the logit propensity score, in truncated-power
// form with linear tails beyond the boundary knots.

#ifndef ORDMI_SPLINE_HPP_
#define ORDMI_SPLINE_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "ordmi/errors.hpp"

namespace ordmi {

/// Linear-interpolation sample quantile of a sorted vector.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw InvalidInputError("quantile of empty vector");
  if (sorted.size() == 1) return sorted[0];
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// Natural cubic spline basis over a knot set. With K >= 1 distinct internal
/// knots the basis has K + 2 columns: two affine hat terms on the boundary
/// interval plus K truncated-power curvature terms, each with zero second
/// derivative outside the boundary knots. The constant function lies in the
/// span of the two affine columns; no explicit intercept column is emitted.
/// With no distinct internal knot the basis degenerates to the single linear
/// column x.
struct SplineBasis {
  std::vector<double> internal_knots;  // strictly increasing
  double boundary_lo = 0.0;
  double boundary_hi = 1.0;
  int basis_dim = 1;

  /// Evaluates all basis columns at x.
  Eigen::RowVectorXd evaluate(double x) const {
    Eigen::RowVectorXd row(basis_dim);
    if (internal_knots.empty()) {
      row[0] = x;
      return row;
    }
    const double span = boundary_hi - boundary_lo;
    row[0] = (boundary_hi - x) / span;
    row[1] = (x - boundary_lo) / span;
    // Full knot sequence xi_1..xi_m: boundary_lo, internal..., boundary_hi.
    const std::size_t k = internal_knots.size();
    const double xi_m = boundary_hi;
    const double xi_m1 = internal_knots[k - 1];
    const double d_last = truncated_cubic_ratio(x, xi_m1, xi_m);
    for (std::size_t j = 0; j < k; ++j) {
      const double xi_j = (j == 0) ? boundary_lo : internal_knots[j - 1];
      row[static_cast<Eigen::Index>(2 + j)] =
          truncated_cubic_ratio(x, xi_j, xi_m) - d_last;
    }
    return row;
  }

  Eigen::MatrixXd evaluate(const Eigen::VectorXd& xs) const {
    Eigen::MatrixXd out(xs.size(), basis_dim);
    for (Eigen::Index i = 0; i < xs.size(); ++i) out.row(i) = evaluate(xs[i]);
    return out;
  }

 private:
  static double truncated_cubic_ratio(double x, double knot, double upper) {
    const double a = std::max(x - knot, 0.0);
    const double b = std::max(x - upper, 0.0);
    return (a * a * a - b * b * b) / (upper - knot);
  }
};

/// Builds a natural cubic basis on the logit propensity scores with internal
/// knots at equally spaced quantiles (i/(K+1) for i = 1..K) and boundary
/// knots at the data range. Tied quantiles are deduplicated with the basis
/// dimension reduced accordingly; if no distinct internal knot survives the
/// basis falls back to the linear term.
inline std::pair<SplineBasis, Eigen::MatrixXd> build_spline_basis(
    const Eigen::VectorXd& logit_scores, int n_internal_knots = 5) {
  if (logit_scores.size() < 2) {
    throw InvalidInputError("build_spline_basis: need at least 2 points");
  }
  if (n_internal_knots < 0) {
    throw InvalidConfigError("build_spline_basis: negative knot count");
  }
  std::vector<double> sorted(logit_scores.data(),
                             logit_scores.data() + logit_scores.size());
  std::sort(sorted.begin(), sorted.end());

  SplineBasis basis;
  basis.boundary_lo = sorted.front();
  basis.boundary_hi = sorted.back();

  std::vector<double> knots;
  for (int i = 1; i <= n_internal_knots; ++i) {
    knots.push_back(quantile_sorted(
        sorted, static_cast<double>(i) / (n_internal_knots + 1)));
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::erase_if(knots, [&](double t) {
    return t <= basis.boundary_lo || t >= basis.boundary_hi;
  });

  basis.internal_knots = knots;
  basis.basis_dim =
      knots.empty() ? 1 : static_cast<int>(knots.size()) + 2;
  if (logit_scores.size() < basis.basis_dim + 1) {
    throw InvalidInputError(
        "build_spline_basis: fewer points than basis dimension + 1");
  }
  return {basis, basis.evaluate(logit_scores)};
}

}  // namespace ordmi

#endif  // ORDMI_SPLINE_HPP_
