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

#include <algorithm>
#include <cmath>
#include <random>

#include "ordmi/pooling.hpp"

using ordmi::percentile_interval;
using ordmi::rubin_pool;

TEST_CASE("hand example: point, variances, and degrees of freedom") {
  const auto r = rubin_pool({0.1, 0.3}, {0.01, 0.01});
  CHECK(r.point == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.within_var == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(r.between_var == doctest::Approx(0.02).epsilon(1e-12));
  // T = 0.01 + (1 + 1/2) * 0.02 = 0.04
  CHECK(std::abs(r.total_var - 0.04) < 1e-10);
  // nu_M = (M-1) (T / ((1+1/M)B))^2 = 1 * (0.04/0.03)^2 = 16/9
  CHECK(std::abs(r.df - 16.0 / 9.0) < 1e-10);
  CHECK(r.lo < r.point);
  CHECK(r.hi > r.point);
}

TEST_CASE("hand example with small-sample degrees of freedom") {
  const auto r = rubin_pool({0.1, 0.3}, {0.01, 0.01}, 0.05, 10.0);
  // nu_obs = (11/13) * 10 * (1 - 0.03/0.04) = 55/26,
  // adjusted df = 1 / (9/16 + 26/55) = 880/911.
  CHECK(std::abs(r.df - 880.0 / 911.0) < 1e-10);
  CHECK(r.method == ordmi::PoolMethod::kBarnardRubinT);
  // The adjusted df is always no larger than both components.
  CHECK(r.df <= 16.0 / 9.0);
  CHECK(r.df <= 55.0 / 26.0);
}

TEST_CASE("zero between-imputation variance gives normal quantiles") {
  const auto r = rubin_pool({0.5, 0.5, 0.5}, {0.04, 0.04, 0.04});
  CHECK(std::isinf(r.df));
  CHECK(r.total_var == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(r.lo == doctest::Approx(0.5 - 1.959963984540054 * 0.2).epsilon(1e-9));
  CHECK(r.hi == doctest::Approx(0.5 + 1.959963984540054 * 0.2).epsilon(1e-9));
}

TEST_CASE("all-identical estimates with zero variance collapse the interval") {
  const auto r = rubin_pool({0.3, 0.3}, {0.0, 0.0});
  CHECK(r.degenerate);
  CHECK(r.lo == r.point);
  CHECK(r.hi == r.point);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(rubin_pool({0.1}, {0.01}), ordmi::InvalidConfigError);
  CHECK_THROWS_AS(rubin_pool({0.1, 0.2}, {0.01}), ordmi::InvalidInputError);
  CHECK_THROWS_AS(rubin_pool({0.1, 0.2}, {0.01, -0.01}), ordmi::InvalidInputError);
}

TEST_CASE("interval width grows with between-imputation spread") {
  const auto narrow = rubin_pool({0.19, 0.21, 0.20, 0.20}, {0.01, 0.01, 0.01, 0.01});
  const auto wide = rubin_pool({0.1, 0.3, 0.15, 0.25}, {0.01, 0.01, 0.01, 0.01});
  CHECK(wide.hi - wide.lo > narrow.hi - narrow.lo);
}

TEST_CASE("percentile interval matches direct quantile computation") {
  std::mt19937_64 engine(7);
  std::normal_distribution<double> normal(1.0, 2.0);
  std::vector<double> draws(5000);
  for (auto& d : draws) d = normal(engine);

  bool warning = true;
  const auto [lo, hi] = percentile_interval(draws, 0.05, &warning);
  CHECK_FALSE(warning);

  // Independent oracle: direct order statistics with interpolation.
  std::vector<double> sorted = draws;
  std::sort(sorted.begin(), sorted.end());
  auto oracle = [&](double p) {
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto i = static_cast<std::size_t>(h);
    return sorted[i] + (h - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
  };
  CHECK(lo == doctest::Approx(oracle(0.025)).epsilon(1e-12));
  CHECK(hi == doctest::Approx(oracle(0.975)).epsilon(1e-12));
  // Sanity: roughly N(1, 2) tails.
  CHECK(lo == doctest::Approx(1.0 - 1.96 * 2.0).epsilon(0.05));
  CHECK(hi == doctest::Approx(1.0 + 1.96 * 2.0).epsilon(0.05));
}

TEST_CASE("percentile interval warns on thin draw counts") {
  bool warning = false;
  percentile_interval({0.1, 0.2, 0.3}, 0.05, &warning);
  CHECK(warning);
}

TEST_CASE("percentile interval is order invariant") {
  std::vector<double> draws = {5, 1, 4, 2, 3, 9, 0, 8, 7, 6};
  auto a = percentile_interval(draws, 0.1);
  std::reverse(draws.begin(), draws.end());
  auto b = percentile_interval(draws, 0.1);
  CHECK(a == b);
}
