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

#include <random>
#include <string>
#include <vector>

#include "isec/cost_model.hpp"
#include "isec/edit_engine.hpp"

namespace {

std::vector<std::u32string> random_labels(std::size_t n, std::size_t len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick('a', 'z');
  std::vector<std::u32string> out(n, std::u32string(len, U'a'));
  for (auto& s : out) {
    for (auto& c : s) c = static_cast<char32_t>(pick(rng));
  }
  return out;
}

void BM_Align(benchmark::State& state) {
  const auto labels = random_labels(64, static_cast<std::size_t>(state.range(0)), 1);
  isec::CostConfig cfg;
  cfg.set_sub(U'a', U's', 0.5);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = labels[i % labels.size()];
    const auto& b = labels[(i + 1) % labels.size()];
    benchmark::DoNotOptimize(isec::align(a, b, cfg));
    ++i;
  }
}
BENCHMARK(BM_Align)->Arg(4)->Arg(10)->Arg(32);

void BM_WeightedDistance(benchmark::State& state) {
  const auto labels = random_labels(64, static_cast<std::size_t>(state.range(0)), 2);
  const isec::CostConfig cfg;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(isec::weighted_distance(labels[i % 64], labels[(i + 7) % 64], cfg));
    ++i;
  }
}
BENCHMARK(BM_WeightedDistance)->Arg(10)->Arg(32);

}  // namespace
