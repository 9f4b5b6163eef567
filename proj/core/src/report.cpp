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

#include "isec/report.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>

#include "isec/errors.hpp"
#include "isec/hash.hpp"
#include "isec/text.hpp"

namespace isec {

ReportFormat report_format_from_string(const std::string& text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "json") return ReportFormat::json;
  throw ValidationError("unknown format \"" + text + "\" (expected csv or json)");
}

nlohmann::json run_config_to_json(const RunConfig& config) {
  return {{"cost", config_to_json(config.cost)},
          {"index",
           {{"M", config.index.M},
            {"ef_construction", config.index.ef_construction},
            {"ef_search", config.index.ef_search},
            {"K", config.index.K},
            {"mode", to_string(config.index.mode)},
            {"seed", config.index.seed}}},
          {"embedder",
           {{"dim", config.embedder.dim},
            {"n_lo", config.embedder.n_lo},
            {"n_hi", config.embedder.n_hi},
            {"seed", config.embedder.seed}}},
          {"normalization", policy_to_json(config.policy)}};
}

std::string config_fingerprint(const RunConfig& config) {
  return hex64(fnv1a64(run_config_to_json(config).dump()));
}

double RunSummary::evaluation_ratio() const {
  return morph_evaluations == 0 ? 0.0
                                : static_cast<double>(brute_force_pairs) / static_cast<double>(morph_evaluations);
}

double RunSummary::dedup_ratio() const {
  return unique_pairs == 0 ? 0.0 : static_cast<double>(brute_force_pairs) / static_cast<double>(unique_pairs);
}

RunSummary run_summary(const Instrumentation& inst) {
  RunSummary s;
  s.n = inst.n;
  s.k_requested = inst.k_requested;
  s.k_effective = inst.k_effective;
  s.index_mode = inst.index_mode;
  s.morph_evaluations = inst.morph_evaluations.load();
  s.brute_force_pairs = inst.brute_force_pairs();
  s.unique_pairs = inst.unique_pairs;
  s.ann_distance_evaluations = inst.ann_distance_evaluations.load();
  s.ann_visited_nodes = inst.ann_visited_nodes.load();
  s.ann_build_evaluations = inst.ann_build_evaluations;
  s.index_seconds = inst.index_seconds;
  s.scoring_seconds = inst.scoring_seconds;
  return s;
}

nlohmann::json summary_to_json(const RunSummary& s) {
  return {{"n", s.n},
          {"k_requested", s.k_requested},
          {"k_effective", s.k_effective},
          {"index_mode", s.index_mode},
          {"morph_evaluations", s.morph_evaluations},
          {"brute_force_pairs", s.brute_force_pairs},
          {"evaluation_ratio", s.evaluation_ratio()},
          {"unique_pairs", s.unique_pairs},
          {"dedup_ratio", s.dedup_ratio()},
          {"ann_distance_evaluations", s.ann_distance_evaluations},
          {"ann_visited_nodes", s.ann_visited_nodes},
          {"ann_build_evaluations", s.ann_build_evaluations}};
}

void print_summary(std::ostream& out, const RunSummary& s) {
  out << "labels:                  " << s.n << '\n'
      << "index mode:              " << s.index_mode << " (K=" << s.k_effective;
  if (s.k_effective != s.k_requested) out << ", requested " << s.k_requested;
  out << ")\n"
      << "morphological evals:     " << s.morph_evaluations << '\n'
      << "brute-force pairs:       " << s.brute_force_pairs << '\n'
      << "evaluation ratio:        " << std::fixed << std::setprecision(2) << s.evaluation_ratio() << "x\n"
      << "unique pairs scored:     " << s.unique_pairs << " (dedup ratio " << s.dedup_ratio() << ")\n"
      << "ANN distance evals:      " << s.ann_distance_evaluations << " search, " << s.ann_build_evaluations
      << " build\n"
      << "ANN visited nodes:       " << s.ann_visited_nodes << '\n'
      << "index build:             " << std::setprecision(3) << s.index_seconds << " s\n"
      << "scoring:                 " << s.scoring_seconds << " s\n";
  out.unsetf(std::ios::floatfield);
  out << std::setprecision(6);
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

nlohmann::json path_to_json(const PathSummary& path, const std::string& source, const std::string& target) {
  auto ops = nlohmann::json::array();
  for (const EditOp& op : path.ops) {
    nlohmann::json o = {{"kind", to_string(op.kind)}, {"cost", op.cost}, {"src_pos", op.src_pos},
                        {"dst_pos", op.dst_pos}};
    if (op.kind != EditKind::insertion) o["from"] = utf8_encode(op.from);
    if (op.kind != EditKind::deletion) o["to"] = utf8_encode(op.to);
    ops.push_back(std::move(o));
  }
  return {{"source", source},
          {"target", target},
          {"total_cost", path.total_cost},
          {"n_ops", path.n_ops},
          {"cm", path.cm},
          {"cp", path.cp},
          {"counts",
           {{"substitution", path.n_substitutions},
            {"deletion", path.n_deletions},
            {"insertion", path.n_insertions},
            {"transposition", path.n_transpositions}}},
          {"ops", std::move(ops)}};
}

nlohmann::json pair_to_json(const PairScore& s, const Taxonomy& tax, std::optional<std::size_t> rank) {
  const std::string& li = tax.label(s.i);
  const std::string& lj = tax.label(s.j);
  nlohmann::json j = {{"i", s.i},
                      {"j", s.j},
                      {"label_i", li},
                      {"label_j", lj},
                      {"isec", s.isec},
                      {"fmn", s.fmn},
                      {"dsn", s.dsn},
                      {"cm", s.cm},
                      {"cp", s.cp},
                      {"cmp", s.cmp},
                      {"similarity", s.similarity},
                      {"frequency_i", tax.frequency(s.i)},
                      {"frequency_j", tax.frequency(s.j)},
                      {"flags", flag_names(s.flags)},
                      {"path", s.path_reversed ? path_to_json(s.path, lj, li) : path_to_json(s.path, li, lj)}};
  if (rank) j["rank"] = *rank;
  return j;
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::size_t shown(std::size_t total, std::size_t top_m) { return top_m == 0 ? total : std::min(total, top_m); }

}  // namespace

void write_ranking_csv(std::ostream& out, const std::vector<PairScore>& pairs, const Taxonomy& tax,
                       std::size_t top_m) {
  out << "rank,label_i,label_j,isec,fmn,dsn,cm,cp,cmp,flags\n";
  const std::size_t rows = shown(pairs.size(), top_m);
  for (std::size_t r = 0; r < rows; ++r) {
    const PairScore& s = pairs[r];
    std::string flags;
    for (const std::string& f : flag_names(s.flags)) flags += (flags.empty() ? "" : "|") + f;
    out << (r + 1) << ',' << csv_field(tax.label(s.i)) << ',' << csv_field(tax.label(s.j)) << ','
        << format_double(s.isec) << ',' << format_double(s.fmn) << ',' << format_double(s.dsn) << ','
        << format_double(s.cm) << ',' << format_double(s.cp) << ',' << format_double(s.cmp) << ','
        << csv_field(flags) << '\n';
  }
}

nlohmann::json ranking_to_json(const RankingDocument& doc, std::size_t top_m) {
  if (!doc.pairs || !doc.taxonomy) throw std::invalid_argument("ranking document needs pairs and a taxonomy");
  nlohmann::json j;
  j["schema_version"] = 1;
  if (doc.config) {
    j["config_fingerprint"] = config_fingerprint(*doc.config);
    j["config"] = run_config_to_json(*doc.config);
  }
  if (doc.summary) j["summary"] = summary_to_json(*doc.summary);
  auto pairs = nlohmann::json::array();
  const std::size_t rows = shown(doc.pairs->size(), top_m);
  for (std::size_t r = 0; r < rows; ++r) pairs.push_back(pair_to_json((*doc.pairs)[r], *doc.taxonomy, r + 1));
  j["total_pairs"] = doc.pairs->size();
  j["pairs"] = std::move(pairs);
  j["duplicates"] = doc.duplicates ? duplicates_to_json(*doc.duplicates) : nlohmann::json::array();
  auto collisions = nlohmann::json::array();
  if (doc.collisions) {
    for (const PairScore& s : *doc.collisions) collisions.push_back(pair_to_json(s, *doc.taxonomy, std::nullopt));
  }
  j["collisions"] = std::move(collisions);
  j["warnings"] = doc.warnings;
  return j;
}

void write_ranking(const RankingDocument& doc, std::ostream& out, ReportFormat format, std::size_t top_m) {
  if (format == ReportFormat::csv) {
    write_ranking_csv(out, *doc.pairs, *doc.taxonomy, top_m);
  } else {
    out << ranking_to_json(doc, top_m).dump(2) << '\n';
  }
}

void write_ranking(const RankingDocument& doc, const std::filesystem::path& path, ReportFormat format,
                   std::size_t top_m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_ranking(doc, out, format, top_m);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace isec
