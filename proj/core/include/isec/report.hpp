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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isec/ann_index.hpp"
#include "isec/cost_model.hpp"
#include "isec/embedding.hpp"
#include "isec/ingestion.hpp"
#include "isec/scoring.hpp"

namespace isec {

enum class ReportFormat { csv, json };

ReportFormat report_format_from_string(const std::string& text);

/// Everything that determines a ranking besides the input labels.
struct RunConfig {
  CostConfig cost;
  IndexParams index;
  NgramParams embedder;
  NormalizationPolicy policy;
};

nlohmann::json run_config_to_json(const RunConfig& config);

/// 16 hex digits over the canonical JSON of the run configuration.
std::string config_fingerprint(const RunConfig& config);

struct RunSummary {
  std::size_t n = 0;
  std::size_t k_requested = 0;
  std::size_t k_effective = 0;
  std::string index_mode;
  std::size_t morph_evaluations = 0;
  std::size_t brute_force_pairs = 0;
  std::size_t unique_pairs = 0;
  std::size_t ann_distance_evaluations = 0;
  std::size_t ann_visited_nodes = 0;
  std::size_t ann_build_evaluations = 0;
  double index_seconds = 0.0;
  double scoring_seconds = 0.0;

  /// brute_force_pairs / morph_evaluations.
  double evaluation_ratio() const;
  /// brute_force_pairs / unique_pairs.
  double dedup_ratio() const;
};

RunSummary run_summary(const Instrumentation& inst);

/// Counters and ratios only; wall-clock fields are left out so that files
/// embedding the summary stay byte-identical across runs.
nlohmann::json summary_to_json(const RunSummary& summary);
void print_summary(std::ostream& out, const RunSummary& summary);

nlohmann::json path_to_json(const PathSummary& path, const std::string& source, const std::string& target);
nlohmann::json pair_to_json(const PairScore& score, const Taxonomy& tax, std::optional<std::size_t> rank);

struct RankingDocument {
  const std::vector<PairScore>* pairs = nullptr;
  const Taxonomy* taxonomy = nullptr;
  const RunConfig* config = nullptr;
  const RunSummary* summary = nullptr;
  const DuplicateReport* duplicates = nullptr;
  const std::vector<PairScore>* collisions = nullptr;
  std::vector<std::string> warnings;
};

/// Columns: rank,label_i,label_j,isec,fmn,dsn,cm,cp,cmp,flags.
void write_ranking_csv(std::ostream& out, const std::vector<PairScore>& pairs, const Taxonomy& tax,
                       std::size_t top_m = 0);
/// Full document including path details, configuration, fingerprint and summary.
nlohmann::json ranking_to_json(const RankingDocument& doc, std::size_t top_m = 0);

/// Writes the ranking in `format`; top_m = 0 keeps every pair.
void write_ranking(const RankingDocument& doc, std::ostream& out, ReportFormat format, std::size_t top_m = 0);
void write_ranking(const RankingDocument& doc, const std::filesystem::path& path, ReportFormat format,
                   std::size_t top_m = 0);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace isec
