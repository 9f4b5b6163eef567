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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isec/embedding.hpp"
#include "isec/scoring.hpp"

#include <nlohmann/json.hpp>

namespace isec {

struct NormalizationPolicy {
  bool trim = true;
  bool case_fold = false;
  bool nfc = true;
  bool collapse_whitespace = true;

  bool operator==(const NormalizationPolicy&) const = default;
};

nlohmann::json policy_to_json(const NormalizationPolicy& policy);

/// Applies the policy: NFC, whitespace trimming and collapsing, then case
/// folding (re-composed to NFC). Idempotent.
std::string normalize_label(std::string_view raw, const NormalizationPolicy& policy);

/// RFC-4180 records. Quoted fields may contain commas, doubled quotes and
/// line breaks. Throws ParseError on an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Raw spellings that collapsed onto one normalized label.
struct DuplicateGroup {
  std::string label;
  std::vector<std::string> raw_variants;  // sorted, distinct
  std::vector<std::uint64_t> raw_counts;  // aligned with raw_variants
};

struct DuplicateReport {
  std::vector<DuplicateGroup> groups;
};

nlohmann::json duplicates_to_json(const DuplicateReport& report);

struct LabelCounts {
  std::vector<std::string> labels;         // distinct, byte order
  std::vector<std::uint64_t> frequencies;  // aligned with labels
  DuplicateReport duplicates;
  std::size_t rows = 0;                    // data rows ingested
  std::size_t skipped_empty = 0;           // rows whose label normalized to ""
  NormalizationPolicy policy;
};

/// Counts normalized labels in a CSV document with a header row. Frequencies
/// are occurrence counts, or sums of `freq_column` when given.
LabelCounts count_labels(std::string_view csv_text, const std::string& label_column,
                         const std::optional<std::string>& freq_column, const NormalizationPolicy& policy);

struct Dataset {
  Taxonomy taxonomy;
  DuplicateReport duplicates;
  std::size_t rows = 0;
  std::size_t skipped_empty = 0;
  NormalizationPolicy policy;
  std::vector<std::string> warnings;
};

struct EmbeddingSource {
  NgramParams ngram;
  std::optional<std::filesystem::path> precomputed;
  MissingPolicy missing = MissingPolicy::fail;
};

Dataset build_dataset(LabelCounts counts, const EmbeddingSource& embeddings = {});

Dataset read_dataset(const std::filesystem::path& path, const std::string& label_column,
                     const std::optional<std::string>& freq_column = std::nullopt,
                     const NormalizationPolicy& policy = {}, const EmbeddingSource& embeddings = {});

}  // namespace isec
