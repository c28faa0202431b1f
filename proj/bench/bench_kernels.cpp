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

// Serial reference kernels against their OpenMP counterparts.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "qgssl/graph.hpp"
#include "qgssl/kernels.hpp"
#include "qgssl/qsim.hpp"

namespace {

using namespace qgssl;
namespace k = qgssl::kernels;

Eigen::MatrixXd random_points(Eigen::Index n, Eigen::Index d) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  return x;
}

std::vector<Complex> random_state(int qubits) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::vector<Complex> a(std::size_t{1} << qubits);
  for (auto& v : a) v = {g(rng), g(rng)};
  return a;
}

template <auto Fn>
void BM_Distances(benchmark::State& state) {
  const Eigen::MatrixXd x = random_points(state.range(0), 16);
  Eigen::MatrixXd out;
  for (auto _ : state) {
    Fn(x, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Distances<k::serial::pairwise_sq_distances>)->Arg(256)->Arg(1024);
BENCHMARK(BM_Distances<k::omp::pairwise_sq_distances>)->Arg(256)->Arg(1024);

struct IplFixture {
  SimilarityGraph graph;
  Eigen::MatrixXd u, source, out;
  explicit IplFixture(Eigen::Index n) {
    Dataset d;
    d.features = random_points(n, 8);
    d.labels.assign(static_cast<std::size_t>(n), 0);
    d.labeled_mask.assign(static_cast<std::size_t>(n), true);
    d.class_count = 1;
    graph = build_knn_graph(d, 10);
    u = random_points(n, 4);
    source = random_points(n, 4);
  }
};

template <auto Fn>
void BM_IplStep(benchmark::State& state) {
  IplFixture f(state.range(0));
  for (auto _ : state) {
    Fn(f.graph.transition_sparse(), f.graph.stationary(), 1.0, -0.2, f.u, f.source, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
}
BENCHMARK(BM_IplStep<k::serial::ipl_step>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_IplStep<k::omp::ipl_step>)->Arg(1000)->Arg(4000);

template <auto Fn>
void BM_Apply1q(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  auto amps = random_state(q);
  const auto gate = gates::ry(0.3);
  for (auto _ : state) {
    for (int t = 0; t < q; ++t) Fn(amps, t, gate);
    benchmark::DoNotOptimize(amps.data());
  }
}
BENCHMARK(BM_Apply1q<k::serial::apply_1q>)->Arg(10)->Arg(14);
BENCHMARK(BM_Apply1q<k::omp::apply_1q>)->Arg(10)->Arg(14);

template <auto Fn>
void BM_Cnot(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  auto amps = random_state(q);
  for (auto _ : state) {
    for (int t = 0; t < q; ++t) Fn(amps, t, (t + 1) % q);
    benchmark::DoNotOptimize(amps.data());
  }
}
BENCHMARK(BM_Cnot<k::serial::apply_cnot>)->Arg(10)->Arg(14);
BENCHMARK(BM_Cnot<k::omp::apply_cnot>)->Arg(10)->Arg(14);

template <auto Fn>
void BM_LeadingBlock(benchmark::State& state) {
  const Eigen::MatrixXd block = random_points(state.range(0), state.range(0));
  auto amps = random_state(12);
  for (auto _ : state) {
    Fn(amps, block);
    benchmark::DoNotOptimize(amps.data());
  }
}
BENCHMARK(BM_LeadingBlock<k::serial::apply_leading_block>)->Arg(150)->Arg(1000);
BENCHMARK(BM_LeadingBlock<k::omp::apply_leading_block>)->Arg(150)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
