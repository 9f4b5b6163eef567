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

#include "isec/cost_model.hpp"
#include "isec/ingestion.hpp"
#include "isec/scoring.hpp"

namespace {

const isec::Dataset& catalog() {
  static const isec::Dataset data =
      isec::read_dataset(std::string(ISEC_BENCH_DATA_DIR) + "/iso1832_catalog.csv", "code");
  return data;
}

const isec::CostConfig& qwerty() {
  static const isec::CostConfig cfg = isec::load_config(std::string(ISEC_BENCH_DATA_DIR) + "/case3_config.json");
  return cfg;
}

// Hybrid pipeline on the 1,000-code catalog, index build included.
void BM_RankHybrid(benchmark::State& state) {
  isec::IndexParams params;
  params.K = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(isec::rank_taxonomy(catalog().taxonomy, qwerty(), params, nullptr, 1));
  }
}
BENCHMARK(BM_RankHybrid)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_RankBruteForce(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(isec::rank_all_pairs(catalog().taxonomy, qwerty(), nullptr, 1));
  }
}
BENCHMARK(BM_RankBruteForce)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
BENCHMARK_MAIN();
