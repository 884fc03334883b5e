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

#ifndef ORDMI_LINK_HPP_
#define ORDMI_LINK_HPP_

#include <cmath>

#include "ordmi/errors.hpp"

namespace ordmi {

enum class LinkKind { kLogit, kBurr };

/// Inverse-link family for binary models. Burr: F_c(x) = 1 - (1 + e^x)^{-c},
/// strictly increasing onto (0,1); c = 1 recovers the logistic.
struct LinkFunction {
  LinkKind kind = LinkKind::kLogit;
  double c = 1.0;  // Burr shape, ignored for logit

  static LinkFunction Logit() { return {LinkKind::kLogit, 1.0}; }
  static LinkFunction Burr(double c) { return {LinkKind::kBurr, c}; }
};

/// Numerically stable logistic: exact limits at +-inf of the linear predictor,
/// no overflow for |x| large.
inline double logistic(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double logit(double p) { return std::log(p) - std::log1p(-p); }

/// Evaluates the inverse link g^{-1}(x), returning a probability in (0,1).
inline double link_inverse(const LinkFunction& link, double x) {
  if (!std::isfinite(x)) {
    throw InvalidInputError("link_inverse: non-finite linear predictor");
  }
  switch (link.kind) {
    case LinkKind::kLogit:
      return logistic(x);
    case LinkKind::kBurr: {
      if (!(link.c > 0.0)) {
        throw InvalidInputError("link_inverse: Burr shape c must be positive");
      }
      // 1 - (1 + e^x)^{-c} = -expm1(-c * log1p(e^x)), stable for x << 0.
      const double log1pex = (x > 0.0) ? x + std::log1p(std::exp(-x))
                                       : std::log1p(std::exp(x));
      return -std::expm1(-link.c * log1pex);
    }
  }
  throw InvalidInputError("link_inverse: unknown link kind");
}

}  // namespace ordmi

#endif  // ORDMI_LINK_HPP_
