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

#include "ftrbf/data_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ftrbf/error.hpp"

namespace ftrbf {

const char* norm_scheme_name(NormScheme s) {
  switch (s) {
    case NormScheme::None: return "none";
    case NormScheme::MinMax01: return "minmax01";
    case NormScheme::ZScore: return "zscore";
  }
  return "?";
}

NormScheme parse_norm_scheme(const std::string& name) {
  if (name == "none") return NormScheme::None;
  if (name == "minmax01") return NormScheme::MinMax01;
  if (name == "zscore") return NormScheme::ZScore;
  fail(ErrorCode::InvalidArgument,
       "unknown normalization '" + name + "' (minmax01|zscore|none)");
}

Delimiter parse_delimiter(const std::string& name) {
  if (name == "auto") return Delimiter::Auto;
  if (name == "comma" || name == ",") return Delimiter::Comma;
  if (name == "whitespace" || name == "space" || name == "tab")
    return Delimiter::Whitespace;
  fail(ErrorCode::InvalidArgument,
       "unknown delimiter '" + name + "' (auto|comma|whitespace)");
}

Matrix Normalization::apply(const Matrix& x) const {
  if (scheme == NormScheme::None && offset.empty()) return x;
  require(static_cast<Eigen::Index>(offset.size()) == x.cols() &&
              scale.size() == offset.size(),
          ErrorCode::DimensionMismatch,
          "normalization record does not match the feature count");
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const auto jj = static_cast<std::size_t>(j);
    out.col(j) = (x.col(j).array() - offset[jj]) / scale[jj];
  }
  return out;
}

Matrix Normalization::invert(const Matrix& x) const {
  if (scheme == NormScheme::None && offset.empty()) return x;
  require(static_cast<Eigen::Index>(offset.size()) == x.cols() &&
              scale.size() == offset.size(),
          ErrorCode::DimensionMismatch,
          "normalization record does not match the feature count");
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const auto jj = static_cast<std::size_t>(j);
    out.col(j) = x.col(j).array() * scale[jj] + offset[jj];
  }
  return out;
}

std::string Normalization::to_json() const {
  nlohmann::json j = {{"scheme", norm_scheme_name(scheme)},
                      {"offset", offset},
                      {"scale", scale}};
  return j.dump(2);
}

Normalization Normalization::from_json(const std::string& text) {
  Normalization n;
  try {
    const auto j = nlohmann::json::parse(text);
    n.scheme = parse_norm_scheme(j.at("scheme").get<std::string>());
    n.offset = j.at("offset").get<std::vector<double>>();
    n.scale = j.at("scale").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("bad normalization record: ") + e.what());
  }
  require(n.offset.size() == n.scale.size(), ErrorCode::Parse,
          "normalization record offset/scale lengths differ");
  return n;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line,
                                           Delimiter delim) {
  if (delim == Delimiter::Auto)
    delim = line.find(',') != std::string_view::npos ? Delimiter::Comma
                                                     : Delimiter::Whitespace;
  std::vector<std::string_view> out;
  if (delim == Delimiter::Comma) {
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = line.find(',', start);
      out.push_back(trim(line.substr(start, pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
  } else {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      out.push_back(line.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

bool skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

}  // namespace

Dataset load_delimited(const std::filesystem::path& path,
                       const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "'");

  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  std::size_t n_cols = 0;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = opts.header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skippable(line)) continue;
    const auto fields = split_fields(line, opts.delimiter);
    if (header_pending) {
      for (auto f : fields) names.emplace_back(f);
      n_cols = fields.size();
      header_pending = false;
      continue;
    }
    const std::size_t row_no = rows.size() + 1;
    if (n_cols == 0) n_cols = fields.size();
    if (fields.size() != n_cols) {
      std::ostringstream os;
      os << path.string() << ": row " << row_no << " (line " << line_no
         << ") has " << fields.size() << " fields, expected " << n_cols;
      fail(ErrorCode::Parse, os.str());
    }
    std::vector<double> row(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) {
      const auto tok = fields[c];
      double v = 0.0;
      const auto* first = tok.data();
      const auto* last = tok.data() + tok.size();
      if (!tok.empty() && *first == '+') ++first;
      const auto res = std::from_chars(first, last, v);
      if (tok.empty() || res.ec != std::errc() || res.ptr != last ||
          !std::isfinite(v)) {
        std::ostringstream os;
        os << path.string() << ": row " << row_no << " (line " << line_no
           << "), column " << (c + 1) << ": invalid numeric field '" << tok
           << "'";
        fail(ErrorCode::Parse, os.str());
      }
      row[c] = v;
    }
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), ErrorCode::Parse,
          path.string() + ": no data rows found");
  require(n_cols >= 2, ErrorCode::Parse,
          path.string() + ": need at least one feature and a target column");

  const int nc = static_cast<int>(n_cols);
  const int tc = opts.target_column < 0 ? nc + opts.target_column
                                        : opts.target_column;
  if (tc < 0 || tc >= nc) {
    std::ostringstream os;
    os << "target column " << opts.target_column << " is out of range for "
       << n_cols << " columns";
    fail(ErrorCode::InvalidArgument, os.str());
  }

  Dataset ds;
  const auto n = static_cast<Eigen::Index>(rows.size());
  ds.inputs.resize(n, nc - 1);
  ds.targets.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    Eigen::Index f = 0;
    for (int c = 0; c < nc; ++c) {
      if (c == tc)
        ds.targets(i) = r[static_cast<std::size_t>(c)];
      else
        ds.inputs(i, f++) = r[static_cast<std::size_t>(c)];
    }
  }
  if (!names.empty()) {
    if (names.size() != n_cols) {
      fail(ErrorCode::Parse, path.string() +
                                 ": header field count differs from the data");
    }
    for (int c = 0; c < nc; ++c) {
      if (c == tc)
        ds.target_name = names[static_cast<std::size_t>(c)];
      else
        ds.feature_names.push_back(names[static_cast<std::size_t>(c)]);
    }
  }
  return ds;
}

void write_delimited(const Dataset& ds, const std::filesystem::path& path,
                     Delimiter delimiter, bool header) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
  const char* sep = delimiter == Delimiter::Whitespace ? " " : ",";
  if (header) {
    for (Eigen::Index j = 0; j < ds.features(); ++j) {
      const auto jj = static_cast<std::size_t>(j);
      out << (jj < ds.feature_names.size() ? ds.feature_names[jj]
                                           : "x" + std::to_string(j + 1))
          << sep;
    }
    out << (ds.target_name.empty() ? "y" : ds.target_name) << '\n';
  }
  char buf[64];
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.features(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", ds.inputs(i, j));
      out << buf << sep;
    }
    std::snprintf(buf, sizeof buf, "%.17g", ds.targets(i));
    out << buf << '\n';
  }
  if (!out) fail(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

Dataset normalize(const Dataset& ds, NormScheme scheme) {
  Normalization rec;
  rec.scheme = scheme;
  const Eigen::Index k = ds.features();
  rec.offset.assign(static_cast<std::size_t>(k), 0.0);
  rec.scale.assign(static_cast<std::size_t>(k), 1.0);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    const auto col = ds.inputs.col(j);
    if (scheme == NormScheme::MinMax01) {
      const double lo = col.minCoeff();
      const double hi = col.maxCoeff();
      if (!(hi > lo)) {
        fail(ErrorCode::InvalidArgument,
             "feature " + std::to_string(j + 1) +
                 " is constant; min-max scaling is undefined");
      }
      rec.offset[jj] = lo;
      rec.scale[jj] = hi - lo;
    } else if (scheme == NormScheme::ZScore) {
      const double mean = col.mean();
      const double var =
          ds.rows() > 1
              ? (col.array() - mean).square().sum() / static_cast<double>(ds.rows() - 1)
              : 0.0;
      if (!(var > 0.0)) {
        fail(ErrorCode::InvalidArgument,
             "feature " + std::to_string(j + 1) +
                 " is constant; z-score scaling is undefined");
      }
      rec.offset[jj] = mean;
      rec.scale[jj] = std::sqrt(var);
    }
  }
  return apply_normalization(ds, rec);
}

Dataset apply_normalization(const Dataset& ds, const Normalization& record) {
  Dataset out = ds;
  out.inputs = record.apply(ds.inputs);
  out.normalization = record;
  return out;
}

namespace {

Dataset take_rows(const Dataset& ds, const std::vector<Eigen::Index>& idx) {
  Dataset out;
  const auto n = static_cast<Eigen::Index>(idx.size());
  out.inputs.resize(n, ds.features());
  out.targets.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.inputs.row(i) = ds.inputs.row(idx[static_cast<std::size_t>(i)]);
    out.targets(i) = ds.targets(idx[static_cast<std::size_t>(i)]);
  }
  out.feature_names = ds.feature_names;
  out.target_name = ds.target_name;
  out.normalization = ds.normalization;
  return out;
}

std::vector<Eigen::Index> permutation(Eigen::Index n, std::uint64_t seed) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  if (spec.train_size < 1 || spec.train_size >= ds.rows()) {
    std::ostringstream os;
    os << "train_size must lie in [1, " << ds.rows() << "), got "
       << spec.train_size;
    fail(ErrorCode::InvalidArgument, os.str());
  }
  const auto idx = permutation(ds.rows(), spec.seed);
  const auto cut = idx.begin() + spec.train_size;
  return {take_rows(ds, {idx.begin(), cut}), take_rows(ds, {cut, idx.end()})};
}

Dataset synthetic_sinc(Eigen::Index n, double noise_std, std::uint64_t seed,
                       SincSampling sampling) {
  require(n >= 2, ErrorCode::InvalidArgument, "sinc data needs n >= 2");
  require(noise_std >= 0.0, ErrorCode::InvalidArgument,
          "noise_std must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  Dataset ds;
  ds.inputs.resize(n, 1);
  ds.targets.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x =
        sampling == SincSampling::Grid
            ? -5.0 + 10.0 * static_cast<double>(i) / static_cast<double>(n - 1)
            : unif(rng);
    ds.inputs(i, 0) = x;
    ds.targets(i) = x == 0.0 ? 1.0 : std::sin(x) / x;
  }
  if (noise_std > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_std);
    for (Eigen::Index i = 0; i < n; ++i) ds.targets(i) += noise(rng);
  }
  ds.feature_names = {"x"};
  ds.target_name = "y";
  return ds;
}

const std::vector<DatasetPreset>& all_presets() {
  static const std::vector<DatasetPreset> presets = {
      {"ABA", 0.1, 2000, 2177, 7},    {"ASN", 0.5, 751, 752, 5},
      {"HOUSING", 2.0, 400, 106, 13}, {"CON", 0.5, 500, 530, 9},
      {"ENERGY", 0.5, 600, 168, 7},   {"WQW", 1.0, 2000, 2898, 12},
  };
  return presets;
}

DatasetPreset table1_preset(const std::string& name) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (const auto& p : all_presets())
    if (p.name == up) return p;
  fail(ErrorCode::InvalidArgument,
       "unknown preset '" + name + "' (ABA|ASN|HOUSING|CON|ENERGY|WQW)");
}

Matrix subsample_rows(const Matrix& x, Eigen::Index count, std::uint64_t seed) {
  if (count <= 0 || count >= x.rows()) return x;
  auto idx = permutation(x.rows(), seed);
  idx.resize(static_cast<std::size_t>(count));
  std::sort(idx.begin(), idx.end());
  Matrix out(count, x.cols());
  for (Eigen::Index i = 0; i < count; ++i)
    out.row(i) = x.row(idx[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace ftrbf
