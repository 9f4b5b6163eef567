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
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

namespace isec {

using Cost = double;

/// Operation-specific character cost tables plus the scalar scoring
/// parameters. Immutable once validated; share freely between workers.
///
/// Transposition overrides are keyed by unordered pair: (a,b) and (b,a) name
/// the same entry. Substitution overrides are directional unless
/// `symmetric_subs` is set, in which case (a,b) also answers (b,a).
struct CostConfig {
  std::map<std::pair<char32_t, char32_t>, Cost> sub_overrides;
  std::map<char32_t, Cost> ins_overrides;
  std::map<char32_t, Cost> del_overrides;
  std::map<std::pair<char32_t, char32_t>, Cost> trans_overrides;  // key: (min, max)
  Cost default_cost = 1.0;
  bool symmetric_subs = true;
  double k = 0.0;
  double alpha = 0.5;

  bool operator==(const CostConfig&) const = default;

  /// Throws ValidationError when any invariant fails.
  void validate() const;

  /// True when every edit cost is direction-independent, so that
  /// total_cost(a,b) == total_cost(b,a) for all label pairs.
  bool is_symmetric() const;

  void set_sub(char32_t from, char32_t to, Cost cost);
  void set_trans(char32_t a, char32_t b, Cost cost);
};

Cost lookup_sub(const CostConfig& cfg, char32_t from, char32_t to);
Cost lookup_ins(const CostConfig& cfg, char32_t c);
Cost lookup_del(const CostConfig& cfg, char32_t c);
Cost lookup_trans(const CostConfig& cfg, char32_t a, char32_t b);

/// Largest cost any single edit operation can have under `cfg`.
Cost max_operation_cost(const CostConfig& cfg);

CostConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const CostConfig& cfg);

CostConfig parse_config(std::string_view text);
CostConfig load_config(const std::filesystem::path& path);
void save_config(const CostConfig& cfg, const std::filesystem::path& path);

}  // namespace isec
