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
// Combination of per-imputation estimates: Rubin's rules with the nu_M
// degrees of freedom, the Barnard-Rubin small-sample adjustment, and
// percentile intervals.

#ifndef ORDMI_POOLING_HPP_
#define ORDMI_POOLING_HPP_

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "ordmi/errors.hpp"

namespace ordmi {

enum class PoolMethod { kRubinT, kBarnardRubinT, kPercentile };

struct PooledResult {
  double point = 0.0;
  double within_var = 0.0;   // U-bar
  double between_var = 0.0;  // B
  double total_var = 0.0;    // T = U-bar + (1 + 1/M) B
  double df = std::numeric_limits<double>::infinity();
  double lo = 0.0, hi = 0.0;
  double alpha = 0.05;
  PoolMethod method = PoolMethod::kRubinT;
  bool degenerate = false;   // T == 0; interval collapsed to the point
};

/// Rubin's rules over M per-imputation estimates and sampling variances
/// (variances are all zero for finite-sample estimands). When nu_com is
/// supplied the Barnard-Rubin degrees of freedom are used; B = 0 yields
/// infinite df and normal quantiles.
inline PooledResult rubin_pool(const std::vector<double>& estimates,
                               const std::vector<double>& variances,
                               double alpha = 0.05,
                               std::optional<double> nu_com = std::nullopt) {
  const std::size_t m = estimates.size();
  if (m < 2) throw InvalidConfigError("rubin_pool: M must be >= 2");
  if (variances.size() != m) {
    throw InvalidInputError("rubin_pool: estimate/variance length mismatch");
  }
  PooledResult r;
  r.alpha = alpha;
  double sum = 0.0, var_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (variances[i] < 0.0) throw InvalidInputError("rubin_pool: negative variance");
    sum += estimates[i];
    var_sum += variances[i];
  }
  const double md = static_cast<double>(m);
  r.point = sum / md;
  r.within_var = var_sum / md;
  double ss = 0.0;
  for (double g : estimates) ss += (g - r.point) * (g - r.point);
  r.between_var = ss / (md - 1.0);
  r.total_var = r.within_var + (1.0 + 1.0 / md) * r.between_var;

  if (r.total_var <= 0.0) {
    r.degenerate = true;
    r.lo = r.hi = r.point;
    return r;
  }

  double quantile;
  if (r.between_var <= 0.0) {
    r.df = std::numeric_limits<double>::infinity();
    quantile = boost::math::quantile(boost::math::normal_distribution<double>(),
                                     1.0 - alpha / 2.0);
  } else {
    const double rel = (1.0 + 1.0 / md) * r.between_var;
    const double nu_m = (md - 1.0) * (r.total_var / rel) * (r.total_var / rel);
    r.df = nu_m;
    if (nu_com) {
      const double nc = *nu_com;
      const double nu_obs =
          ((nc + 1.0) / (nc + 3.0)) * nc * (1.0 - rel / r.total_var);
      r.df = 1.0 / (1.0 / nu_m + 1.0 / nu_obs);
      r.method = PoolMethod::kBarnardRubinT;
    }
    quantile = boost::math::quantile(
        boost::math::students_t_distribution<double>(r.df), 1.0 - alpha / 2.0);
  }
  const double half = quantile * std::sqrt(r.total_var);
  r.lo = r.point - half;
  r.hi = r.point + half;
  return r;
}

/// Empirical alpha/2 and 1 - alpha/2 quantiles (linear interpolation).
/// `warning` (when non-null) is set if the draw count is thin for the
/// requested level (< 2/alpha draws).
inline std::pair<double, double> percentile_interval(std::vector<double> draws,
                                                     double alpha = 0.05,
                                                     bool* warning = nullptr) {
  if (draws.size() < 2) {
    throw InvalidInputError("percentile_interval: need at least 2 draws");
  }
  if (warning != nullptr) {
    *warning = static_cast<double>(draws.size()) < 2.0 / alpha;
  }
  std::sort(draws.begin(), draws.end());
  auto q = [&](double p) {
    const double h = p * static_cast<double>(draws.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, draws.size() - 1);
    return draws[lo] + (h - static_cast<double>(lo)) * (draws[hi] - draws[lo]);
  };
  return {q(alpha / 2.0), q(1.0 - alpha / 2.0)};
}

}  // namespace ordmi

#endif  // ORDMI_POOLING_HPP_
