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

#pragma once

#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "isec/cost_model.hpp"
#include "isec/ingestion.hpp"
#include "isec/scoring.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return ISEC_TEST_DATA_DIR; }

inline isec::Dataset case1() {
  return isec::read_dataset(data_dir() / "case1_provinces.csv", "label", std::string("count"));
}

inline isec::CostConfig case1_config() { return isec::load_config(data_dir() / "case1_config.json"); }

inline isec::Dataset iso_catalog() { return isec::read_dataset(data_dir() / "iso1832_catalog.csv", "code"); }

inline isec::CostConfig case3_config() { return isec::load_config(data_dir() / "case3_config.json"); }

// Distinct random lowercase labels of length [min_len, max_len].
inline std::vector<std::string> random_labels(std::size_t n, std::uint64_t seed, std::size_t min_len = 3,
                                              std::size_t max_len = 9, const std::string& alphabet = "abcdefgh") {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::set<std::string> seen;
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string s(len(rng), ' ');
    for (char& c : s) c = alphabet[pick(rng)];
    if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

}  // namespace fixtures
