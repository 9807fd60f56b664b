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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>

#include "ftrbf/data_io.hpp"
#include "ftrbf/error.hpp"

using namespace ftrbf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("ftrbf_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::multiset<std::vector<double>> row_set(const Dataset& ds) {
  std::multiset<std::vector<double>> out;
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    std::vector<double> r(ds.inputs.row(i).begin(), ds.inputs.row(i).end());
    r.push_back(ds.targets(i));
    out.insert(r);
  }
  return out;
}

}  // namespace

TEST_CASE("load_delimited") {
  TempDir tmp;
  SUBCASE("header and comma") {
    const auto p = tmp.write("a.csv", "f1,f2,y\n1,2,3\n4,5,6\n# comment\n\n7,8,9\n");
    LoadOptions o;
    o.header = true;
    const auto ds = load_delimited(p, o);
    CHECK(ds.rows() == 3);
    CHECK(ds.features() == 2);
    CHECK(ds.feature_names == std::vector<std::string>{"f1", "f2"});
    CHECK(ds.target_name == "y");
    CHECK(ds.targets(2) == 9);
    CHECK(ds.inputs(1, 1) == 5);
  }
  SUBCASE("whitespace, target in the middle") {
    const auto p = tmp.write("b.txt", "1 10\t2\n3  30 4\r\n");
    LoadOptions o;
    o.target_column = 1;
    const auto ds = load_delimited(p, o);
    CHECK(ds.targets(0) == 10);
    CHECK(ds.targets(1) == 30);
    CHECK(ds.inputs(1, 1) == 4);
  }
  SUBCASE("NaN is rejected with the row named") {
    const auto p = tmp.write("c.csv", "1,2\n3,NaN\n");
    const auto msg = error_of([&] { load_delimited(p); });
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
  SUBCASE("other failures") {
    CHECK_THROWS_AS(load_delimited(tmp.path / "missing.csv"), Error);
    const auto ragged = tmp.write("d.csv", "1,2,3\n4,5\n");
    CHECK(error_of([&] { load_delimited(ragged); }).find("row 2") != std::string::npos);
    const auto text = tmp.write("e.csv", "1,2\n3,abc\n");
    CHECK_THROWS_AS(load_delimited(text), Error);
    const auto inf = tmp.write("f.csv", "1,inf\n");
    CHECK_THROWS_AS(load_delimited(inf), Error);
    const auto one = tmp.write("g.csv", "1\n2\n");
    CHECK_THROWS_AS(load_delimited(one), Error);
    const auto ok = tmp.write("h.csv", "1,2\n");
    LoadOptions o;
    o.target_column = 5;
    CHECK_THROWS_AS(load_delimited(ok, o), Error);
    CHECK_THROWS_AS(load_delimited(tmp.write("i.csv", "# only comments\n")), Error);
  }
  SUBCASE("load, write, load is idempotent") {
    const auto p = tmp.write("j.csv", "a,b,t\n0.1,2e-3,-4\n1.5,7,0.25\n");
    LoadOptions o;
    o.header = true;
    const auto first = load_delimited(p, o);
    write_delimited(first, tmp.path / "k.csv");
    const auto second = load_delimited(tmp.path / "k.csv", o);
    CHECK(second.inputs == first.inputs);
    CHECK(second.targets == first.targets);
    CHECK(second.feature_names == first.feature_names);
    write_delimited(second, tmp.path / "l.csv");
    std::ifstream a(tmp.path / "k.csv"), b(tmp.path / "l.csv");
    CHECK(std::string(std::istreambuf_iterator<char>(a), {}) ==
          std::string(std::istreambuf_iterator<char>(b), {}));
  }
}

TEST_CASE("normalize") {
  Dataset ds;
  ds.inputs.resize(3, 2);
  ds.inputs << 0, 1, 5, 3, 10, 2;
  ds.targets = Eigen::Vector3d(1, 2, 3);

  SUBCASE("minmax01") {
    const auto n = normalize(ds, NormScheme::MinMax01);
    CHECK(n.inputs.col(0) == Eigen::Vector3d(0, 0.5, 1));
    CHECK(n.inputs.col(1) == Eigen::Vector3d(0, 1, 0.5));
    CHECK(n.targets == ds.targets);
    CHECK((n.normalization.invert(n.inputs) - ds.inputs).norm() <= 1e-12);
  }
  SUBCASE("none is the identity") {
    const auto n = normalize(ds, NormScheme::None);
    CHECK(n.inputs == ds.inputs);
  }
  SUBCASE("zscore") {
    const auto n = normalize(ds, NormScheme::ZScore);
    CHECK(std::abs(n.inputs.col(0).mean()) <= 1e-15);
    const double var = n.inputs.col(0).squaredNorm() / 2;
    CHECK(var == doctest::Approx(1.0));
    CHECK((n.normalization.invert(n.inputs) - ds.inputs).norm() <= 1e-12);
  }
  SUBCASE("a stored record reproduces the same affine map") {
    const auto n = normalize(ds, NormScheme::MinMax01);
    Dataset fresh;
    fresh.inputs.resize(2, 2);
    fresh.inputs << 2.5, 1.5, -5, 4;
    fresh.targets = Eigen::Vector2d(0, 0);
    const auto m = apply_normalization(fresh, n.normalization);
    CHECK(m.inputs(0, 0) == doctest::Approx(0.25));
    CHECK(m.inputs(1, 0) == doctest::Approx(-0.5));
    CHECK(m.inputs(0, 1) == doctest::Approx(0.25));
    const auto back = Normalization::from_json(n.normalization.to_json());
    CHECK(back.apply(fresh.inputs) == m.inputs);
  }
  SUBCASE("constant feature") {
    ds.inputs.col(1).setConstant(3);
    CHECK_THROWS_AS(normalize(ds, NormScheme::MinMax01), Error);
  }
  SUBCASE("round trip on random data") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd(3, 7);
    Dataset r;
    r.inputs.resize(50, 4);
    for (Eigen::Index i = 0; i < r.inputs.size(); ++i) r.inputs.data()[i] = nd(rng);
    r.targets = Vector::Zero(50);
    for (auto s : {NormScheme::MinMax01, NormScheme::ZScore}) {
      const auto n = normalize(r, s);
      CHECK((n.normalization.invert(n.inputs) - r.inputs).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  CHECK(parse_norm_scheme("minmax01") == NormScheme::MinMax01);
  CHECK_THROWS_AS(parse_norm_scheme("robust"), Error);
}

TEST_CASE("split") {
  const auto ds = synthetic_sinc(60, 0.1, 3);
  const auto [tr, te] = split(ds, {40, 9});
  CHECK(tr.rows() == 40);
  CHECK(te.rows() == 20);
  auto all = row_set(tr);
  for (const auto& r : row_set(te)) all.insert(r);
  CHECK(all == row_set(ds));
  const auto [tr2, te2] = split(ds, {40, 9});
  CHECK(tr2.inputs == tr.inputs);
  CHECK(te2.targets == te.targets);
  const auto [tr3, te3] = split(ds, {40, 10});
  CHECK(tr3.inputs != tr.inputs);
  CHECK_THROWS_AS(split(ds, {60, 1}), Error);
  CHECK_THROWS_AS(split(ds, {0, 1}), Error);

  Dataset housing;
  housing.inputs = Matrix::Zero(506, 13);
  housing.targets = Vector::LinSpaced(506, 0, 505);
  const auto p = table1_preset("HOUSING");
  const auto [htr, hte] = split(housing, {p.train_size, 1});
  CHECK(htr.rows() == 400);
  CHECK(hte.rows() == 106);
}

TEST_CASE("synthetic_sinc") {
  const auto grid = synthetic_sinc(101, 0.0, 1, SincSampling::Grid);
  CHECK(grid.inputs(50, 0) == 0.0);
  CHECK(grid.targets(50) == 1.0);
  const auto clean = synthetic_sinc(200, 0.0, 4);
  for (Eigen::Index i = 0; i < 200; ++i) {
    const double x = clean.inputs(i, 0);
    CHECK(x >= -5.0);
    CHECK(x <= 5.0);
    CHECK(clean.targets(i) == doctest::Approx(std::sin(x) / x).epsilon(1e-15));
  }
  const auto a = synthetic_sinc(200, 0.05, 7);
  const auto b = synthetic_sinc(200, 0.05, 7);
  CHECK(a.inputs == b.inputs);
  CHECK(a.targets == b.targets);
  CHECK(a.targets != synthetic_sinc(200, 0.05, 8).targets);
  CHECK_THROWS_AS(synthetic_sinc(1, 0.0, 1), Error);
  CHECK_THROWS_AS(synthetic_sinc(10, -1.0, 1), Error);
}

TEST_CASE("table 1 presets") {
  struct Row {
    const char* name;
    double width;
    Eigen::Index train, test, features;
  };
  for (const Row& r : {Row{"ABA", 0.1, 2000, 2177, 7}, Row{"ASN", 0.5, 751, 752, 5},
                       Row{"HOUSING", 2, 400, 106, 13}, Row{"CON", 0.5, 500, 530, 9},
                       Row{"ENERGY", 0.5, 600, 168, 7}, Row{"WQW", 1, 2000, 2898, 12}}) {
    const auto p = table1_preset(r.name);
    CHECK(p.width == r.width);
    CHECK(p.train_size == r.train);
    CHECK(p.test_size == r.test);
    CHECK(p.n_features == r.features);
  }
  CHECK(table1_preset("asn").name == "ASN");
  CHECK(all_presets().size() == 6);
  CHECK_THROWS_AS(table1_preset("IRIS"), Error);
}

TEST_CASE("subsample_rows") {
  const Matrix x = Matrix::Random(10, 2);
  CHECK(subsample_rows(x, 0, 1) == x);
  CHECK(subsample_rows(x, 10, 1) == x);
  const Matrix s = subsample_rows(x, 4, 1);
  CHECK(s.rows() == 4);
  CHECK(subsample_rows(x, 4, 1) == s);
}
