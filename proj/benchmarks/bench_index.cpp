// Copyright 2026 The ISEC Authors
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

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "isec/ann_index.hpp"
#include "isec/embedding.hpp"

namespace {

std::vector<isec::EmbeddingVector> unit_vectors(std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<isec::EmbeddingVector> out(n);
  for (auto& v : out) {
    v.values.resize(dim);
    double norm = 0.0;
    for (double& x : v.values) {
      x = gauss(rng);
      norm += x * x;
    }
    for (double& x : v.values) x /= std::sqrt(norm);
  }
  return out;
}

void BM_HnswBuild(benchmark::State& state) {
  const auto vectors = unit_vectors(static_cast<std::size_t>(state.range(0)), 256);
  for (auto _ : state) {
    benchmark::DoNotOptimize(isec::AnnIndex::build(vectors, isec::IndexParams{}));
  }
}
BENCHMARK(BM_HnswBuild)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Search(benchmark::State& state) {
  const auto vectors = unit_vectors(2000, 256);
  isec::IndexParams params;
  params.mode = state.range(0) == 0 ? isec::IndexMode::hnsw : isec::IndexMode::exact;
  const auto index = isec::AnnIndex::build(vectors, params);
  std::uint32_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.search(q, 10));
    q = (q + 1) % 2000;
  }
  state.SetLabel(isec::to_string(params.mode));
}
BENCHMARK(BM_Search)->Arg(0)->Arg(1);

void BM_EmbedLabel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(isec::embed_ngram_hash("santiago del estero"));
  }
}
BENCHMARK(BM_EmbedLabel);

}  // namespace
