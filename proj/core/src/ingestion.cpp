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

#include "isec/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "isec/errors.hpp"
#include "isec/text.hpp"

namespace isec {

nlohmann::json policy_to_json(const NormalizationPolicy& policy) {
  return {{"trim", policy.trim},
          {"case_fold", policy.case_fold},
          {"nfc", policy.nfc},
          {"collapse_whitespace", policy.collapse_whitespace}};
}

std::string normalize_label(std::string_view raw, const NormalizationPolicy& policy) {
  std::string out = policy.nfc ? nfc(raw) : std::string(raw);
  if (policy.collapse_whitespace) out = collapse_whitespace(out);
  if (policy.trim) out = trim(out);
  if (policy.case_fold) {
    out = case_fold(out);
    if (policy.nfc) out = nfc(out);
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t i = 0;

  // Skip a UTF-8 byte-order mark.
  if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty() && !field_started) {
          in_quotes = true;
          field_started = true;
        } else {
          field.push_back(c);
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw ParseError("CSV: unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

nlohmann::json duplicates_to_json(const DuplicateReport& report) {
  auto groups = nlohmann::json::array();
  for (const DuplicateGroup& g : report.groups) {
    auto variants = nlohmann::json::array();
    for (std::size_t v = 0; v < g.raw_variants.size(); ++v) {
      variants.push_back({{"raw", g.raw_variants[v]}, {"count", g.raw_counts[v]}});
    }
    groups.push_back({{"label", g.label}, {"variants", std::move(variants)}});
  }
  return groups;
}

namespace {

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (trim(header[c]) == name) return c;
  }
  throw IngestionError("missing column \"" + name + "\"");
}

std::uint64_t parse_count(std::string_view cell, std::size_t row, const std::string& column) {
  const std::string text = trim(cell);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw IngestionError("non-numeric value \"" + std::string(cell) + "\" in column \"" + column + "\"", row);
  }
  return value;
}

}  // namespace

LabelCounts count_labels(std::string_view csv_text, const std::string& label_column,
                         const std::optional<std::string>& freq_column, const NormalizationPolicy& policy) {
  std::vector<std::vector<std::string>> records;
  try {
    records = parse_csv(csv_text);
  } catch (const ParseError& e) {
    throw IngestionError(e.what());
  }
  if (records.empty()) throw IngestionError("empty dataset (no header row)");
  const std::vector<std::string>& header = records.front();
  const std::size_t label_idx = column_index(header, label_column);
  constexpr std::size_t kNoColumn = static_cast<std::size_t>(-1);
  const std::size_t freq_idx = freq_column ? column_index(header, *freq_column) : kNoColumn;

  std::map<std::string, std::uint64_t> totals;
  std::map<std::string, std::map<std::string, std::uint64_t>> raw_by_label;
  LabelCounts out;
  out.policy = policy;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() == 1 && rec.front().empty()) continue;  // blank line
    const std::size_t row = r;
    if (label_idx >= rec.size() || (freq_idx != kNoColumn && freq_idx >= rec.size())) {
      throw IngestionError("too few fields", row);
    }
    std::string label;
    try {
      label = normalize_label(rec[label_idx], policy);
    } catch (const std::invalid_argument& e) {
      throw IngestionError(e.what(), row);
    }
    const std::uint64_t weight = freq_idx != kNoColumn ? parse_count(rec[freq_idx], row, *freq_column) : 1;
    if (label.empty()) {
      ++out.skipped_empty;
      continue;
    }
    ++out.rows;
    totals[label] += weight;
    raw_by_label[label][rec[label_idx]] += weight;
  }
  if (totals.empty()) throw IngestionError("empty dataset (no labelled rows)");

  for (const auto& [label, total] : totals) {
    if (total == 0) throw IngestionError("label \"" + label + "\" has total frequency 0");
    out.labels.push_back(label);
    out.frequencies.push_back(total);
    const auto& raws = raw_by_label[label];
    if (raws.size() > 1) {
      DuplicateGroup g{label, {}, {}};
      for (const auto& [raw, count] : raws) {
        g.raw_variants.push_back(raw);
        g.raw_counts.push_back(count);
      }
      out.duplicates.groups.push_back(std::move(g));
    }
  }
  return out;
}

Dataset build_dataset(LabelCounts counts, const EmbeddingSource& embeddings) {
  if (counts.labels.size() < 2) {
    throw IngestionError("dataset has " + std::to_string(counts.labels.size()) +
                         " distinct label(s); at least two are required");
  }
  Dataset ds;
  if (embeddings.precomputed) {
    EmbeddingLoad load =
        load_embeddings(*embeddings.precomputed, counts.labels, embeddings.missing, embeddings.ngram);
    std::vector<EmbeddingVector> vecs;
    vecs.reserve(counts.labels.size());
    for (const std::string& l : counts.labels) vecs.push_back(std::move(load.vectors.at(l)));
    ds.taxonomy = Taxonomy::from_embeddings(std::move(counts.labels), std::move(counts.frequencies), std::move(vecs));
    ds.warnings = std::move(load.warnings);
  } else {
    ds.taxonomy = Taxonomy::from_labels(std::move(counts.labels), std::move(counts.frequencies), embeddings.ngram);
  }
  ds.duplicates = std::move(counts.duplicates);
  ds.rows = counts.rows;
  ds.skipped_empty = counts.skipped_empty;
  ds.policy = counts.policy;
  return ds;
}

Dataset read_dataset(const std::filesystem::path& path, const std::string& label_column,
                     const std::optional<std::string>& freq_column, const NormalizationPolicy& policy,
                     const EmbeddingSource& embeddings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return build_dataset(count_labels(buf.str(), label_column, freq_column, policy), embeddings);
}

}  // namespace isec
