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

#include "isec/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "isec/errors.hpp"
#include "isec/text.hpp"

namespace isec {

namespace {

std::pair<char32_t, char32_t> unordered_key(char32_t a, char32_t b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

void check_cost(Cost c, const std::string& what) {
  if (!std::isfinite(c) || c < 0.0) {
    throw ValidationError(what + ": cost must be a finite value >= 0");
  }
}

char32_t single_char(const nlohmann::json& j, const char* field, const std::string& where) {
  if (!j.contains(field) || !j.at(field).is_string()) {
    throw ParseError(where + ": missing string field \"" + field + "\"");
  }
  Label32 text;
  try {
    text = utf8_decode(j.at(field).get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  if (text.size() != 1) {
    throw ValidationError(where + ": field \"" + field + "\" must be exactly one character");
  }
  return text.front();
}

Cost cost_field(const nlohmann::json& j, const std::string& where) {
  if (!j.contains("cost") || !j.at("cost").is_number()) {
    throw ParseError(where + ": missing numeric field \"cost\"");
  }
  return j.at("cost").get<double>();
}

double number_field(const nlohmann::json& j, const char* field, double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j.at(field).is_number()) throw ParseError(std::string("\"") + field + "\" must be a number");
  return j.at(field).get<double>();
}

const nlohmann::json& array_field(const nlohmann::json& j, const char* field) {
  static const nlohmann::json kEmpty = nlohmann::json::array();
  if (!j.contains(field)) return kEmpty;
  if (!j.at(field).is_array()) throw ParseError(std::string("\"") + field + "\" must be an array");
  return j.at(field);
}

}  // namespace

void CostConfig::set_sub(char32_t from, char32_t to, Cost cost) {
  sub_overrides[{from, to}] = cost;
}

void CostConfig::set_trans(char32_t a, char32_t b, Cost cost) {
  trans_overrides[unordered_key(a, b)] = cost;
}

void CostConfig::validate() const {
  check_cost(default_cost, "default_cost");
  if (!std::isfinite(k) || k < 0.0) throw ValidationError("k must be >= 0");
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1.0) {
    throw ValidationError("alpha must lie in [0, 1]");
  }
  for (const auto& [key, cost] : sub_overrides) {
    if (key.first == key.second) throw ValidationError("substitution override maps a character to itself");
    check_cost(cost, "substitution " + utf8_encode(key.first) + "->" + utf8_encode(key.second));
    if (symmetric_subs && key.first > key.second) {
      auto mirror = sub_overrides.find({key.second, key.first});
      if (mirror != sub_overrides.end()) {
        throw ValidationError("substitution " + utf8_encode(key.first) + "<->" + utf8_encode(key.second) +
                              " given twice under symmetric_subs");
      }
    }
  }
  for (const auto& [key, cost] : trans_overrides) {
    if (key.first >= key.second) throw ValidationError("transposition override needs two distinct characters");
    check_cost(cost, "transposition");
  }
  for (const auto& [c, cost] : ins_overrides) check_cost(cost, "insertion " + utf8_encode(c));
  for (const auto& [c, cost] : del_overrides) check_cost(cost, "deletion " + utf8_encode(c));
}

bool CostConfig::is_symmetric() const {
  if (!symmetric_subs) {
    for (const auto& [key, cost] : sub_overrides) {
      if (lookup_sub(*this, key.second, key.first) != cost) return false;
    }
  }
  std::set<char32_t> chars;
  for (const auto& [c, _] : ins_overrides) chars.insert(c);
  for (const auto& [c, _] : del_overrides) chars.insert(c);
  return std::all_of(chars.begin(), chars.end(),
                     [&](char32_t c) { return lookup_ins(*this, c) == lookup_del(*this, c); });
}

Cost lookup_sub(const CostConfig& cfg, char32_t from, char32_t to) {
  if (cfg.sub_overrides.empty()) return cfg.default_cost;
  if (auto it = cfg.sub_overrides.find({from, to}); it != cfg.sub_overrides.end()) return it->second;
  if (cfg.symmetric_subs) {
    if (auto it = cfg.sub_overrides.find({to, from}); it != cfg.sub_overrides.end()) return it->second;
  }
  return cfg.default_cost;
}

Cost lookup_ins(const CostConfig& cfg, char32_t c) {
  auto it = cfg.ins_overrides.find(c);
  return it == cfg.ins_overrides.end() ? cfg.default_cost : it->second;
}

Cost lookup_del(const CostConfig& cfg, char32_t c) {
  auto it = cfg.del_overrides.find(c);
  return it == cfg.del_overrides.end() ? cfg.default_cost : it->second;
}

Cost lookup_trans(const CostConfig& cfg, char32_t a, char32_t b) {
  if (cfg.trans_overrides.empty()) return cfg.default_cost;
  auto it = cfg.trans_overrides.find(unordered_key(a, b));
  return it == cfg.trans_overrides.end() ? cfg.default_cost : it->second;
}

Cost max_operation_cost(const CostConfig& cfg) {
  Cost m = cfg.default_cost;
  for (const auto& [_, c] : cfg.sub_overrides) m = std::max(m, c);
  for (const auto& [_, c] : cfg.ins_overrides) m = std::max(m, c);
  for (const auto& [_, c] : cfg.del_overrides) m = std::max(m, c);
  for (const auto& [_, c] : cfg.trans_overrides) m = std::max(m, c);
  return m;
}

CostConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("cost config must be a JSON object");
  static const std::set<std::string> kKnown = {"default_cost", "k",          "alpha",     "symmetric_subs",
                                               "substitutions", "insertions", "deletions", "transpositions"};
  for (const auto& [key, _] : j.items()) {
    if (!kKnown.contains(key)) throw ParseError("unknown cost config field \"" + key + "\"");
  }

  CostConfig cfg;
  cfg.default_cost = number_field(j, "default_cost", 1.0);
  cfg.k = number_field(j, "k", 0.0);
  cfg.alpha = number_field(j, "alpha", 0.5);
  if (j.contains("symmetric_subs")) {
    if (!j.at("symmetric_subs").is_boolean()) throw ParseError("\"symmetric_subs\" must be a boolean");
    cfg.symmetric_subs = j.at("symmetric_subs").get<bool>();
  }

  std::size_t idx = 0;
  for (const auto& row : array_field(j, "substitutions")) {
    const std::string where = "substitutions[" + std::to_string(idx++) + "]";
    const char32_t from = single_char(row, "from", where);
    const char32_t to = single_char(row, "to", where);
    if (!cfg.sub_overrides.emplace(std::pair{from, to}, cost_field(row, where)).second) {
      throw ValidationError(where + ": duplicate substitution key");
    }
  }
  idx = 0;
  for (const auto& row : array_field(j, "insertions")) {
    const std::string where = "insertions[" + std::to_string(idx++) + "]";
    if (!cfg.ins_overrides.emplace(single_char(row, "char", where), cost_field(row, where)).second) {
      throw ValidationError(where + ": duplicate insertion key");
    }
  }
  idx = 0;
  for (const auto& row : array_field(j, "deletions")) {
    const std::string where = "deletions[" + std::to_string(idx++) + "]";
    if (!cfg.del_overrides.emplace(single_char(row, "char", where), cost_field(row, where)).second) {
      throw ValidationError(where + ": duplicate deletion key");
    }
  }
  idx = 0;
  for (const auto& row : array_field(j, "transpositions")) {
    const std::string where = "transpositions[" + std::to_string(idx++) + "]";
    const char32_t a = single_char(row, "a", where);
    const char32_t b = single_char(row, "b", where);
    if (a == b) throw ValidationError(where + ": transposition needs two distinct characters");
    if (!cfg.trans_overrides.emplace(unordered_key(a, b), cost_field(row, where)).second) {
      throw ValidationError(where + ": duplicate transposition key");
    }
  }
  cfg.validate();
  return cfg;
}

nlohmann::json config_to_json(const CostConfig& cfg) {
  nlohmann::json j;
  j["default_cost"] = cfg.default_cost;
  j["k"] = cfg.k;
  j["alpha"] = cfg.alpha;
  j["symmetric_subs"] = cfg.symmetric_subs;
  auto subs = nlohmann::json::array();
  for (const auto& [key, cost] : cfg.sub_overrides) {
    subs.push_back({{"from", utf8_encode(key.first)}, {"to", utf8_encode(key.second)}, {"cost", cost}});
  }
  auto ins = nlohmann::json::array();
  for (const auto& [c, cost] : cfg.ins_overrides) ins.push_back({{"char", utf8_encode(c)}, {"cost", cost}});
  auto del = nlohmann::json::array();
  for (const auto& [c, cost] : cfg.del_overrides) del.push_back({{"char", utf8_encode(c)}, {"cost", cost}});
  auto trans = nlohmann::json::array();
  for (const auto& [key, cost] : cfg.trans_overrides) {
    trans.push_back({{"a", utf8_encode(key.first)}, {"b", utf8_encode(key.second)}, {"cost", cost}});
  }
  j["substitutions"] = std::move(subs);
  j["insertions"] = std::move(ins);
  j["deletions"] = std::move(del);
  j["transpositions"] = std::move(trans);
  return j;
}

CostConfig parse_config(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("cost config: ") + e.what());
  }
  return config_from_json(j);
}

CostConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open cost config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void save_config(const CostConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << config_to_json(cfg).dump(2) << '\n';
}

}  // namespace isec
