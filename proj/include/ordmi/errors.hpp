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

#ifndef ORDMI_ERRORS_HPP_
#define ORDMI_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ordmi {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or non-finite inputs (NaN design entries, dimension mismatch, ...).
class InvalidInputError : public Error {
 public:
  explicit InvalidInputError(const std::string& msg) : Error(msg) {}
};

/// Bad run configuration (M < 2, empty grids, missing arms, ...).
class InvalidConfigError : public Error {
 public:
  explicit InvalidConfigError(const std::string& msg) : Error(msg) {}
};

/// The negative log-posterior Hessian is singular at the optimum. Under a
/// flat prior this typically means separation or rank deficiency; the fix is
/// a proper prior.
class SingularCurvatureError : public Error {
 public:
  explicit SingularCurvatureError(const std::string& msg) : Error(msg) {}
};

/// Design cannot support the requested partition (an arm with < 3 units,
/// a single-arm sample, ...).
class InfeasibleDesignError : public Error {
 public:
  explicit InfeasibleDesignError(const std::string& msg) : Error(msg) {}
};

/// Numerical failure (non-PSD covariance beyond tolerance, ...).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

/// Requested estimator/estimand combination has no supported method.
class NotSupportedError : public Error {
 public:
  explicit NotSupportedError(const std::string& msg) : Error(msg) {}
};

/// File I/O failure, with path context in the message.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

/// Input-file schema violation (missing column, bad value), with location.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& msg) : Error(msg) {}
};

}  // namespace ordmi

#endif  // ORDMI_ERRORS_HPP_
