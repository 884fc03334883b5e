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

#ifndef ORDMI_DATA_HPP_
#define ORDMI_DATA_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ordmi/errors.hpp"

namespace ordmi {

/// Subject-level table: treatment indicator, observed adverse-event and death
/// indicators, and covariates. Continuous covariates are standardized once at
/// ingestion (mean 0, SD 1); binary columns are left untouched.
struct Dataset {
  std::vector<std::string> ids;
  Eigen::VectorXd w;       // treatment
  Eigen::VectorXd a_obs;   // observed adverse event
  Eigen::VectorXd d_obs;   // observed death
  Eigen::MatrixXd x;       // covariates, standardized where continuous
  std::vector<std::string> covariate_names;
  std::vector<bool> is_binary;
  std::vector<double> original_means;  // pre-standardization, per column
  std::vector<double> original_sds;

  Eigen::Index n() const { return w.size(); }
  Eigen::Index n_covariates() const { return x.cols(); }
  Eigen::Index n_treated() const { return static_cast<Eigen::Index>(w.sum()); }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline double parse_binary(const std::string& s, const std::string& column,
                           std::size_t row) {
  if (s == "0") return 0.0;
  if (s == "1") return 1.0;
  throw SchemaError("column '" + column + "' must be 0/1; got '" + s +
                    "' on data row " + std::to_string(row));
}

}  // namespace detail

/// Standardizes continuous covariate columns in place, recording the original
/// means and SDs. Columns whose values are all in {0,1} are treated as binary
/// and left alone.
inline void standardize_covariates(Dataset* data) {
  const Eigen::Index n = data->n(), p = data->x.cols();
  data->is_binary.assign(static_cast<std::size_t>(p), true);
  data->original_means.assign(static_cast<std::size_t>(p), 0.0);
  data->original_sds.assign(static_cast<std::size_t>(p), 1.0);
  for (Eigen::Index j = 0; j < p; ++j) {
    bool binary = true;
    for (Eigen::Index i = 0; i < n && binary; ++i) {
      const double v = data->x(i, j);
      binary = (v == 0.0 || v == 1.0);
    }
    data->is_binary[static_cast<std::size_t>(j)] = binary;
    if (binary) continue;
    const double mean = data->x.col(j).mean();
    const double sd = std::sqrt(
        (data->x.col(j).array() - mean).square().sum() / std::max<double>(n - 1, 1));
    data->original_means[static_cast<std::size_t>(j)] = mean;
    data->original_sds[static_cast<std::size_t>(j)] = sd;
    if (sd > 0.0) {
      data->x.col(j) = (data->x.col(j).array() - mean) / sd;
    } else {
      data->x.col(j).array() -= mean;
    }
  }
}

/// Reads a subject CSV with header `id,w,a,d,<covariate columns...>`.
/// Schema violations name the offending column; value errors cite the row.
inline Dataset ingest_csv(const std::string& path, bool standardize = true) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  std::string line;
  if (!std::getline(in, line)) throw SchemaError("'" + path + "': empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_csv_line(line);
  const std::vector<std::string> required = {"id", "w", "a", "d"};
  for (std::size_t j = 0; j < required.size(); ++j) {
    if (header.size() <= j || header[j] != required[j]) {
      throw SchemaError("'" + path + "': missing or misplaced column '" +
                        required[j] + "'");
    }
  }
  if (header.size() < 5) {
    throw SchemaError("'" + path + "': at least one covariate column required");
  }
  for (std::size_t j = 4; j < header.size(); ++j) {
    if (header[j].empty()) {
      throw SchemaError("'" + path + "': empty covariate column name at position " +
                        std::to_string(j + 1));
    }
  }

  Dataset data;
  data.covariate_names.assign(header.begin() + 4, header.end());
  const std::size_t p = data.covariate_names.size();

  std::vector<std::string> ids;
  std::vector<double> w, a, d;
  std::vector<std::vector<double>> xs;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size()) {
      throw SchemaError("'" + path + "': data row " + std::to_string(row) +
                        " has " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(header.size()));
    }
    ids.push_back(fields[0]);
    w.push_back(detail::parse_binary(fields[1], "w", row));
    a.push_back(detail::parse_binary(fields[2], "a", row));
    d.push_back(detail::parse_binary(fields[3], "d", row));
    std::vector<double> xr(p);
    for (std::size_t j = 0; j < p; ++j) {
      try {
        xr[j] = std::stod(fields[4 + j]);
      } catch (const std::exception&) {
        throw SchemaError("'" + path + "': non-numeric value '" + fields[4 + j] +
                          "' in column '" + data.covariate_names[j] +
                          "' on data row " + std::to_string(row));
      }
      if (!std::isfinite(xr[j])) {
        throw SchemaError("'" + path + "': non-finite covariate in column '" +
                          data.covariate_names[j] + "' on data row " +
                          std::to_string(row));
      }
    }
    xs.push_back(std::move(xr));
  }
  if (row == 0) throw SchemaError("'" + path + "': no data rows");

  const auto n = static_cast<Eigen::Index>(row);
  data.ids = std::move(ids);
  data.w = Eigen::Map<Eigen::VectorXd>(w.data(), n);
  data.a_obs = Eigen::Map<Eigen::VectorXd>(a.data(), n);
  data.d_obs = Eigen::Map<Eigen::VectorXd>(d.data(), n);
  data.x.resize(n, static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      data.x(i, static_cast<Eigen::Index>(j)) = xs[static_cast<std::size_t>(i)][j];
    }
  }
  if (standardize) standardize_covariates(&data);
  return data;
}

}  // namespace ordmi

#endif  // ORDMI_DATA_HPP_
