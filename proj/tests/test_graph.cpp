// Copyright 2026 The qgssl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "qgssl/error.hpp"
#include "qgssl/graph.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace qgssl {
namespace {

using testing::TempDir;

void expect_graph_invariants(const SimilarityGraph& g) {
  const auto& w = g.weights();
  const Eigen::Index n = w.rows();
  EXPECT_EQ(w, w.transpose());
  EXPECT_EQ(w.diagonal().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GE(w.minCoeff(), 0.0);
  EXPECT_GT(g.degrees().minCoeff(), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    EXPECT_NEAR(g.transition().row(i).sum(), 1.0, 1e-10);
    EXPECT_NEAR(g.laplacian().row(i).sum(), 0.0, 1e-10);
  }
  EXPECT_NEAR(g.stationary().sum(), 1.0, 1e-12);
  const Eigen::MatrixXd p_from_w = g.degrees().cwiseInverse().asDiagonal() * w;
  EXPECT_LE((p_from_w - g.transition()).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::MatrixXd q = g.rank_one();
  for (Eigen::Index i = 0; i < n; ++i) {
    EXPECT_LE((q.row(i).transpose() - g.stationary()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

Dataset points(const Eigen::MatrixXd& x) {
  std::vector<int> labels(static_cast<std::size_t>(x.rows()), 0);
  Dataset d = oracle::toy_dataset(labels, std::vector<bool>(labels.size(), true), 1);
  d.features = x;
  return d;
}

// --- loading -------------------------------------------------------------

TEST(LoadDataset, IrisShape) {
  const Dataset d = load_dataset(testing::data_path("iris"));
  EXPECT_EQ(d.size(), 150u);
  EXPECT_EQ(d.features.cols(), 4);
  EXPECT_EQ(d.class_count, 3);
  EXPECT_EQ(d.labeled_count(), 150u);
  d.validate();
}

TEST(LoadDataset, SingleRowSingleClass) {
  TempDir tmp;
  const auto csv = tmp.write("one.csv", "x,y\n1.5,a\n");
  DatasetSchema schema;
  schema.name = "one";
  schema.label_column = "y";
  const Dataset d = load_dataset(csv, schema);
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(d.class_count, 1);
  EXPECT_EQ(d.features(0, 0), 1.5);
}

TEST(LoadDataset, GermanCreditOneHotWidth) {
  // Count numeric columns and distinct categories straight from the file.
  const auto path = testing::data_path("german_credit");
  const DatasetSchema schema =
      DatasetSchema::from_json_file(path.parent_path() / "german_credit.schema.json");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  std::vector<std::set<std::string>> seen(header.size());
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t c = 0; std::getline(ss, cell, ','); ++c) seen[c].insert(cell);
  }
  long expected = 0;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == schema.label_column) continue;
    const bool categorical = std::count(schema.categorical_columns.begin(),
                                        schema.categorical_columns.end(), header[c]) > 0;
    expected += categorical ? static_cast<long>(seen[c].size()) : 1;
  }
  const Dataset d = load_dataset(path);
  EXPECT_EQ(d.features.cols(), expected);
  EXPECT_EQ(d.size(), 1000u);
  EXPECT_EQ(d.class_count, 2);
}

TEST(LoadDataset, Errors) {
  TempDir tmp;
  DatasetSchema schema;
  schema.label_column = "y";
  EXPECT_THROW(load_dataset(tmp.path() / "missing.csv", schema), DataError);
  const auto bad = tmp.write("bad.csv", "x,y\n1,a\nfoo,b\n");
  EXPECT_THROW(load_dataset(bad, schema), DataError);
  schema.class_order = {"a"};
  const auto unknown = tmp.write("unk.csv", "x,y\n1,a\n2,b\n");
  EXPECT_THROW(load_dataset(unknown, schema), DataError);
}

TEST(LoadDataset, PreservesRowOrderAndEncodesCategoricals) {
  TempDir tmp;
  const auto csv = tmp.write("c.csv", "color,v,y\nred,1,n\nblue,2,y\nred,3,n\n");
  DatasetSchema schema;
  schema.label_column = "y";
  schema.categorical_columns = {"color"};
  const Dataset d = load_dataset(csv, schema);
  ASSERT_EQ(d.features.cols(), 3);
  EXPECT_EQ(d.labels, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(d.features.col(2), Eigen::Vector3d(1, 2, 3));
  // categories sorted: blue, red
  EXPECT_EQ(d.features.col(0), Eigen::Vector3d(0, 1, 0));
  EXPECT_EQ(d.features.col(1), Eigen::Vector3d(1, 0, 1));
}

// --- standardization -----------------------------------------------------

TEST(Standardize, SymmetricThreePoints) {
  Eigen::MatrixXd x(3, 1);
  x << 1, 2, 3;
  const auto s = standardize_features(x);
  EXPECT_NEAR(s.values(0, 0), -1.0, 1e-12);
  EXPECT_NEAR(s.values(1, 0), 0.0, 1e-12);
  EXPECT_NEAR(s.values(2, 0), 1.0, 1e-12);
}

TEST(Standardize, HandComputedAndIdempotent) {
  Eigen::MatrixXd x(3, 2);
  x << 0, 5, 0, 5, 10, 5;
  const auto s = standardize_features(x);
  EXPECT_EQ(s.dropped_columns, std::vector<int>{1});
  ASSERT_EQ(s.values.cols(), 1);
  const double mean = 10.0 / 3.0;
  const double sd = std::sqrt((2 * mean * mean + (10 - mean) * (10 - mean)) / 2.0);
  EXPECT_NEAR(s.values(0, 0), -mean / sd, 1e-12);
  EXPECT_NEAR(s.values(2, 0), (10 - mean) / sd, 1e-12);
  const auto again = standardize_features(s.values);
  EXPECT_LE((again.values - s.values).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Standardize, Errors) {
  EXPECT_THROW(standardize_features(Eigen::MatrixXd::Ones(3, 2)), std::invalid_argument);
  EXPECT_THROW(standardize_features(Eigen::MatrixXd::Ones(1, 2)), std::invalid_argument);
}

TEST(Standardize, IrisColumnsHaveUnitSampleStd) {
  Dataset d = load_dataset(testing::data_path("iris"));
  EXPECT_TRUE(standardize(d).empty());
  const Eigen::Index n = d.features.rows();
  for (Eigen::Index c = 0; c < d.features.cols(); ++c) {
    const double mean = d.features.col(c).mean();
    const double var = (d.features.col(c).array() - mean).square().sum() / double(n - 1);
    EXPECT_NEAR(mean, 0.0, 1e-10);
    EXPECT_NEAR(std::sqrt(var), 1.0, 1e-10);
  }
}

// --- masking -------------------------------------------------------------

TEST(MaskLabels, IrisStratified) {
  const Dataset d = load_dataset(testing::data_path("iris"));
  const Dataset m = mask_labels(d, 0.30, 7);
  EXPECT_EQ(m.labeled_count(), 45u);
  std::vector<int> per_class(3, 0);
  for (int i : m.labeled_indices()) ++per_class[static_cast<std::size_t>(m.labels[i])];
  EXPECT_EQ(per_class, (std::vector<int>{15, 15, 15}));
  EXPECT_EQ(mask_labels(d, 0.30, 7).labeled_mask, m.labeled_mask);
  EXPECT_NE(mask_labels(d, 0.30, 8).labeled_mask, m.labeled_mask);
}

TEST(MaskLabels, FullAndInvalidRates) {
  const Dataset d = load_dataset(testing::data_path("iris"));
  const Dataset full = mask_labels(d, 1.0, 3);
  EXPECT_EQ(full.labeled_count(), d.size());
  EXPECT_THROW(mask_labels(d, 0.001, 0), std::invalid_argument);
  EXPECT_THROW(mask_labels(d, 0.0, 0), std::invalid_argument);
  EXPECT_THROW(mask_labels(d, 1.5, 0), std::invalid_argument);
}

// --- kNN graph -----------------------------------------------------------

TEST(KnnGraph, TwoClustersAreBlockDiagonal) {
  Eigen::MatrixXd x(6, 2);
  x << 0, 0, 0.1, 0, 0, 0.1, 10, 10, 10.1, 10, 10, 10.1;
  const SimilarityGraph g = build_knn_graph(points(x), 2);
  expect_graph_invariants(g);
  EXPECT_EQ(g.weights().block(0, 3, 3, 3).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(g.weights().block(0, 0, 3, 3).sum(), 0.0);
}

TEST(KnnGraph, TwoNodes) {
  Eigen::MatrixXd x(2, 1);
  x << 0, 1;
  const SimilarityGraph g = build_knn_graph(points(x), 1);
  EXPECT_GT(g.weights()(0, 1), 0.0);
  EXPECT_EQ(g.weights()(0, 1), g.weights()(1, 0));
  expect_graph_invariants(g);
}

TEST(KnnGraph, KernelMatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd x(12, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = nd(rng);
  const int k = 4;
  const SimilarityGraph g = build_knn_graph(points(x), k);
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) dist(i, j) = (x.row(i) - x.row(j)).norm();
  }
  std::vector<double> sigma(static_cast<std::size_t>(n));
  std::vector<std::vector<Eigen::Index>> nbrs(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) idx.push_back(j);
    }
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return dist(i, a) < dist(i, b); });
    idx.resize(k);
    sigma[static_cast<std::size_t>(i)] = dist(i, idx[(k + 1) / 2 - 1]);
    nbrs[static_cast<std::size_t>(i)] = idx;
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j : nbrs[static_cast<std::size_t>(i)]) {
      w(i, j) = std::exp(-dist(i, j) * dist(i, j) /
                         (sigma[static_cast<std::size_t>(i)] * sigma[static_cast<std::size_t>(j)]));
    }
  }
  w = w.cwiseMax(w.transpose()).eval();
  EXPECT_LE((w - g.weights()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(KnnGraph, PermutationEquivariant) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd x(8, 2);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = nd(rng);
  std::vector<int> perm(8);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd xp(8, 2);
  for (int i = 0; i < 8; ++i) xp.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
  const auto w = build_knn_graph(points(x), 3).weights();
  const auto wp = build_knn_graph(points(xp), 3).weights();
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      EXPECT_NEAR(wp(i, j), w(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]),
                  1e-14);
    }
  }
}

TEST(KnnGraph, IrisInvariants) {
  Dataset d = load_dataset(testing::data_path("iris"));
  standardize(d);
  for (auto scaling : {KernelScaling::kSelfTuning, KernelScaling::kGlobal}) {
    expect_graph_invariants(build_knn_graph(d, 10, scaling));
  }
}

TEST(KnnGraph, DuplicatePointsStillGetPositiveScale) {
  Eigen::MatrixXd x(4, 1);
  x << 0, 0, 0, 1;
  const SimilarityGraph g = build_knn_graph(points(x), 2);
  expect_graph_invariants(g);
  EXPECT_TRUE(g.weights().allFinite());
}

TEST(KnnGraph, Errors) {
  Eigen::MatrixXd x(3, 1);
  x << 0, 1, 2;
  EXPECT_THROW(build_knn_graph(points(x), 0), std::invalid_argument);
  EXPECT_THROW(build_knn_graph(points(x), 3), std::invalid_argument);
  EXPECT_THROW(build_knn_graph(points(Eigen::MatrixXd::Zero(3, 1)), 1), std::invalid_argument);
  EXPECT_EQ(parse_kernel_scaling(to_string(KernelScaling::kGlobal)), KernelScaling::kGlobal);
  EXPECT_THROW(parse_kernel_scaling("cosine"), std::invalid_argument);
}

TEST(SimilarityGraph, RejectsBadWeights) {
  Eigen::Matrix2d asym;
  asym << 0, 1, 0.5, 0;
  EXPECT_THROW(SimilarityGraph::from_weights(asym), std::invalid_argument);
  Eigen::Matrix2d diag;
  diag << 1, 1, 1, 0;
  EXPECT_THROW(SimilarityGraph::from_weights(diag), std::invalid_argument);
  Eigen::Matrix3d isolated = Eigen::Matrix3d::Zero();
  isolated(0, 1) = isolated(1, 0) = 1.0;
  EXPECT_THROW(SimilarityGraph::from_weights(isolated), std::invalid_argument);
  Eigen::Matrix2d neg;
  neg << 0, -1, -1, 0;
  EXPECT_THROW(SimilarityGraph::from_weights(neg), std::invalid_argument);
}

// --- spectral radius -----------------------------------------------------

TEST(SpectralRadius, SpecExamples) {
  EXPECT_NEAR(spectral_radius(Eigen::MatrixXd::Identity(4, 4)).value, 1.0, 1e-12);
  EXPECT_NEAR(spectral_radius(Eigen::Vector2d(0.5, 0.2).asDiagonal().toDenseMatrix()).value, 0.5,
              1e-10);
}

TEST(SpectralRadius, StochasticMinusRankOneAgainstEigenSolver) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd w = oracle::random_connected_weights(5, rng);
    w(0, 2) = w(2, 0) = 0.5;  // odd cycle, so -1 is not an eigenvalue of P
    const auto g = SimilarityGraph::from_weights(w);
    const Eigen::MatrixXd m = g.transition() - g.rank_one();
    const double exact = m.eigenvalues().cwiseAbs().maxCoeff();
    EXPECT_LT(exact, 1.0);
    // The singular-value estimate bounds the eigenvalue radius from above.
    EXPECT_GE(spectral_radius(m).value, exact - 1e-9);
  }
}

TEST(SpectralRadius, NonConvergenceIsFlagged) {
  const Eigen::MatrixXd m = Eigen::Vector3d(1.0, 0.999999, 0.5).asDiagonal().toDenseMatrix();
  const auto est = spectral_radius(m, 1e-15, 2);
  EXPECT_FALSE(est.converged);
  EXPECT_GT(est.value, 0.5);
}

}  // namespace
}  // namespace qgssl
