/*
 * Copyright 2026 The ftrbf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ftrbf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class NormScheme { None, MinMax01, ZScore };

const char* norm_scheme_name(NormScheme s);
NormScheme parse_norm_scheme(const std::string& name);

/// Per-feature affine map x' = (x - offset) / scale.
struct Normalization {
  NormScheme scheme = NormScheme::None;
  std::vector<double> offset;
  std::vector<double> scale;

  Matrix apply(const Matrix& x) const;
  Matrix invert(const Matrix& x) const;

  std::string to_json() const;
  static Normalization from_json(const std::string& text);
};

struct Dataset {
  Matrix inputs;   // N x K1
  Vector targets;  // N
  std::vector<std::string> feature_names;
  std::string target_name;
  Normalization normalization;

  Eigen::Index rows() const { return inputs.rows(); }
  Eigen::Index features() const { return inputs.cols(); }
};

enum class Delimiter { Auto, Comma, Whitespace };

Delimiter parse_delimiter(const std::string& name);

struct LoadOptions {
  Delimiter delimiter = Delimiter::Auto;
  /// Column holding the target; negative counts from the end (-1 = last).
  int target_column = -1;
  bool header = false;
};

/// Reads a numeric table. Blank lines and lines starting with '#' are
/// skipped. Any unparsable or non-finite field fails with its row and column.
Dataset load_delimited(const std::filesystem::path& path,
                       const LoadOptions& opts = {});

/// Writes inputs followed by the target as the last column.
void write_delimited(const Dataset& ds, const std::filesystem::path& path,
                     Delimiter delimiter = Delimiter::Comma, bool header = true);

/// Fits the scheme on `ds` and returns the transformed copy; targets are
/// left untouched. MinMax01 rejects constant features.
Dataset normalize(const Dataset& ds, NormScheme scheme);

/// Applies a stored record (e.g. from the training split) to other data.
Dataset apply_normalization(const Dataset& ds, const Normalization& record);

struct SplitSpec {
  Eigen::Index train_size = 0;
  std::uint64_t seed = 0;
};

/// Uniform random permutation by seed; the first train_size rows train.
std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

enum class SincSampling { Uniform, Grid };

/// y = sin(x)/x on [-5, 5] plus Gaussian noise. Grid mode places the inputs
/// on an even grid including both endpoints.
Dataset synthetic_sinc(Eigen::Index n, double noise_std, std::uint64_t seed,
                       SincSampling sampling = SincSampling::Uniform);

/// Row of the benchmark table: UCI dataset settings.
struct DatasetPreset {
  std::string name;
  double width = 0.0;
  Eigen::Index train_size = 0;
  Eigen::Index test_size = 0;
  Eigen::Index n_features = 0;
};

/// ABA, ASN, HOUSING, CON, ENERGY or WQW (case-insensitive).
DatasetPreset table1_preset(const std::string& name);
const std::vector<DatasetPreset>& all_presets();

/// Random subset of `count` rows (order preserved); all rows when count
/// is zero or at least rows().
Matrix subsample_rows(const Matrix& x, Eigen::Index count, std::uint64_t seed);

}  // namespace ftrbf
