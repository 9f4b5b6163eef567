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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "isec/ann_index.hpp"
#include "isec/edit_engine.hpp"
#include "isec/perturb_sim.hpp"
#include "isec/report.hpp"
#include "isec/scoring.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome classical_reduction() {
  std::mt19937_64 rng(2024);
  const isec::CostConfig cfg;  // unit costs, k = 0
  std::size_t mismatches = 0;
  const std::size_t trials = 10000;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::string a = oracle::random_string(rng, 12, "abcde");
    const std::string b = oracle::random_string(rng, 12, "abcde");
    if (a.empty() && b.empty()) {  // outside the aligner's domain
      --t;
      continue;
    }
    const isec::PathSummary path = isec::align(a, b, cfg);
    if (path.total_cost != static_cast<double>(oracle::osa_distance(a, b))) ++mismatches;
  }
  return {mismatches == 0, std::to_string(trials) + " pairs, " + std::to_string(mismatches) + " mismatches"};
}

Outcome spot_values() {
  const double got = isec::isec_pair(0.0, 0.5, 1.0, 0.4);
  bool ok = std::abs(got - std::pow(2.0, 0.4)) <= 1e-9;
  std::string detail = "isec(0,0.5,1,0.4)=" + fmt(got, 12);
  for (double alpha : {0.0, 0.5, 1.0}) {
    const double unit = isec::isec_pair(0.0, 1.0, 1.0, alpha);
    ok = ok && std::abs(unit - 1.0) <= 1e-12;
    detail += ", isec(0,1,1," + fmt(alpha) + ")=" + fmt(unit, 12);
  }
  return {ok, detail};
}

Outcome monotonicity() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t violations = 0;
  const std::size_t tuples = 1000;
  for (std::size_t t = 0; t < tuples; ++t) {
    double alpha = unit(rng);
    while (alpha <= 0.0) alpha = unit(rng);
    const double fmn = 6.0 * unit(rng);
    const double dsn = 1e-6 + (0.9 - 1e-6) * unit(rng);
    const double cmp = 1e-3 + 10.0 * unit(rng);
    const double base = isec::isec_pair(fmn, dsn, cmp, alpha);

    const double up_fmn = isec::isec_pair(fmn + 0.1 + unit(rng), dsn, cmp, alpha);
    const double up_dsn = isec::isec_pair(fmn, dsn + (1.0 - dsn) * (0.1 + 0.9 * unit(rng)), cmp, alpha);
    const double up_cmp = isec::isec_pair(fmn, dsn, cmp * (1.1 + unit(rng)), alpha);
    if (!(up_fmn > base)) ++violations;
    if (!(up_dsn < base)) ++violations;
    if (!(up_cmp < base)) ++violations;
  }
  return {violations == 0, std::to_string(tuples) + " tuples, " + std::to_string(violations) + " violations"};
}

bool same_ranking(const std::vector<isec::PairScore>& a, const std::vector<isec::PairScore>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (a[r].i != b[r].i || a[r].j != b[r].j || a[r].isec != b[r].isec || a[r].flags != b[r].flags) return false;
  }
  return true;
}

Outcome hybrid_equals_brute_force() {
  const auto labels = fixtures::random_labels(200, 99, 3, 10, "abcdefghij");
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> freq(1, 5000);
  std::vector<std::uint64_t> frequencies(labels.size());
  for (auto& f : frequencies) f = freq(rng);
  const auto tax = isec::Taxonomy::from_labels(labels, frequencies);
  isec::CostConfig cfg;
  cfg.alpha = 0.4;
  cfg.k = 0.5;
  cfg.set_sub(U'a', U'b', 0.5);

  isec::IndexParams params;
  params.mode = isec::IndexMode::exact;
  params.K = tax.size() - 1;
  const isec::Ranking hybrid = isec::rank_taxonomy(tax, cfg, params);
  const isec::Ranking brute = isec::rank_all_pairs(tax, cfg);

  // A second brute force assembled here from per-pair scores.
  std::vector<isec::PairScore> manual;
  for (std::uint32_t i = 0; i < tax.size(); ++i) {
    for (std::uint32_t j = i + 1; j < tax.size(); ++j) {
      isec::PairScore s = isec::score_pair(tax, i, j, cfg);
      if (s.flags & isec::kFlagDuplicateCollision) continue;
      manual.push_back(s);
    }
  }
  std::sort(manual.begin(), manual.end(), [](const isec::PairScore& a, const isec::PairScore& b) {
    if (a.isec != b.isec) return a.isec > b.isec;
    if (a.dsn != b.dsn) return a.dsn < b.dsn;
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  });

  const bool ok = same_ranking(hybrid.pairs, brute.pairs) && same_ranking(hybrid.pairs, manual) &&
                  hybrid.pairs.size() == 200 * 199 / 2;
  return {ok, std::to_string(hybrid.pairs.size()) + " pairs compared in order"};
}

Outcome ann_recall() {
  const std::size_t n = 2000, dim = 256, k = 10;
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> raw(n, std::vector<double>(dim));
  std::vector<isec::EmbeddingVector> vectors(n);
  for (std::size_t i = 0; i < n; ++i) {
    double norm = 0.0;
    for (double& v : raw[i]) {
      v = gauss(rng);
      norm += v * v;
    }
    for (double& v : raw[i]) v /= std::sqrt(norm);
    vectors[i].values = raw[i];
  }
  isec::IndexParams params;
  params.ef_search = 64;
  params.K = k;
  const auto index = isec::AnnIndex::build(vectors, params);

  std::size_t hits = 0;
  for (std::uint32_t q = 0; q < n; ++q) {
    const auto truth = oracle::top_k(raw, q, k);
    const std::set<std::uint32_t> expected(truth.begin(), truth.end());
    for (const auto& nb : index.search(q, k)) hits += expected.count(nb.id);
  }
  const double recall = static_cast<double>(hits) / static_cast<double>(n * k);
  return {recall >= 0.90, "recall@10=" + fmt(recall) + " over " + std::to_string(n) + " queries"};
}

Outcome speedup() {
  const isec::Dataset data = fixtures::iso_catalog();
  const isec::CostConfig cfg = fixtures::case3_config();
  isec::IndexParams params;
  params.K = 10;

  isec::Instrumentation inst;
  const auto t0 = Clock::now();
  const isec::Ranking hybrid = isec::rank_taxonomy(data.taxonomy, cfg, params, &inst, 1);
  const double hybrid_s = seconds_since(t0);

  isec::Instrumentation brute_inst;
  const auto t1 = Clock::now();
  const isec::Ranking brute = isec::rank_all_pairs(data.taxonomy, cfg, &brute_inst, 1);
  const double brute_s = seconds_since(t1);

  const std::size_t evals = inst.morph_evaluations.load();
  const std::size_t brute_pairs = inst.brute_force_pairs();
  const double ratio = static_cast<double>(brute_pairs) / static_cast<double>(evals);
  const double wall = brute_s / hybrid_s;
  const bool ok = data.taxonomy.size() == 1000 && evals == 10000 && brute_pairs == 499500 &&
                  brute_inst.morph_evaluations.load() >= brute_pairs && wall >= 10.0;
  return {ok, "N=" + std::to_string(data.taxonomy.size()) + " evaluations " + std::to_string(evals) + " vs " +
                  std::to_string(brute_pairs) + " (" + fmt(ratio) + "x), wall-clock hybrid " + fmt(hybrid_s, 3) +
                  " s vs brute force " + fmt(brute_s, 3) + " s (" + fmt(wall, 3) + "x)"};
}

Outcome abbreviation_fragility() {
  const isec::Dataset data = fixtures::case1();
  const isec::Ranking ranking = isec::rank_taxonomy(data.taxonomy, fixtures::case1_config(), isec::IndexParams{});
  const std::set<std::string> abbreviations = {"caba", "cba", "pba", "gba", "ba"};
  bool ok = data.taxonomy.size() == 30 && ranking.pairs.size() >= 5;
  std::string detail = "top-5:";
  for (std::size_t r = 0; r < std::min<std::size_t>(5, ranking.pairs.size()); ++r) {
    const auto& p = ranking.pairs[r];
    const std::string& a = data.taxonomy.label(p.i);
    const std::string& b = data.taxonomy.label(p.j);
    ok = ok && abbreviations.contains(a) && abbreviations.contains(b);
    detail += " " + a + "/" + b;
  }
  return {ok, detail};
}

Outcome catalog_transposition_pair() {
  const auto t0 = Clock::now();
  const isec::Dataset data = fixtures::iso_catalog();
  const isec::CostConfig cfg = fixtures::case3_config();
  isec::IndexParams params;
  params.K = 10;
  const isec::Ranking ranking = isec::rank_taxonomy(data.taxonomy, cfg, params);
  const double elapsed = seconds_since(t0);

  const auto a = data.taxonomy.find("AAGX110216");
  const auto b = data.taxonomy.find("AGAX110216");
  if (!a || !b) return {false, "injected codes missing from the catalog"};
  const std::pair<std::uint32_t, std::uint32_t> key = std::minmax(*a, *b);
  std::size_t rank = 0;
  for (std::size_t r = 0; r < ranking.pairs.size(); ++r) {
    if (ranking.pairs[r].i == key.first && ranking.pairs[r].j == key.second) {
      rank = r + 1;
      break;
    }
  }
  const std::size_t ranked = ranking.pairs.size();
  const bool top = rank != 0 && static_cast<double>(rank) <= 0.01 * static_cast<double>(ranked);
  const bool ok = cfg.alpha == 0.4 && top && elapsed < 300.0;
  return {ok, "AAGX110216/AGAX110216 rank " + (rank ? std::to_string(rank) : std::string("none")) + " of " +
                  std::to_string(ranked) + " ranked pairs (" +
                  fmt(100.0 * static_cast<double>(rank) / static_cast<double>(ranked), 3) + "%), run " +
                  fmt(elapsed, 3) + " s"};
}

isec::TypoModel keyboard_model() {
  isec::TypoModel model;
  isec::load_keyboard(model, fixtures::data_dir() / "qwerty.json");
  return model;
}

Outcome simulator_validation() {
  const isec::Dataset data = fixtures::case1();
  const isec::CostConfig cfg = fixtures::case1_config();
  const isec::Ranking ranking = isec::rank_taxonomy(data.taxonomy, cfg, isec::IndexParams{});
  const auto result =
      isec::validate_ranking(data.taxonomy, cfg, keyboard_model(), 100000, 0.0, ranking.pairs);
  const auto& c = result.correlation;
  if (!c.spearman || !c.ci_low || !c.ci_high) return {false, "correlation undefined"};
  // Cross-check the library's rho against the naive oracle on the same vectors.
  const double naive = oracle::spearman(c.isec, c.confusion);
  const bool ok = *c.spearman > 0.0 && *c.ci_low > 0.0 && std::abs(naive - *c.spearman) < 1e-9;
  return {ok, "trials=" + std::to_string(result.stats.trials) + " pairs=" + std::to_string(c.pairs) +
                  " spearman=" + fmt(*c.spearman) + " 95% CI [" + fmt(*c.ci_low) + ", " + fmt(*c.ci_high) + "]"};
}

int run_cli(const std::string& args) {
  const std::string command = std::string("\"") + ISEC_CLI_PATH + "\" " + args + " 2>/dev/null";
  return std::system(command.c_str());
}

Outcome determinism() {
  // In process: ranking files and ConfusionStats.
  auto render = [] {
    const isec::Dataset data = fixtures::iso_catalog();
    isec::RunConfig run;
    run.cost = fixtures::case3_config();
    run.index.K = 10;
    isec::Instrumentation inst;
    const isec::Ranking ranking = isec::rank_taxonomy(data.taxonomy, run.cost, run.index, &inst);
    const isec::RunSummary summary = isec::run_summary(inst);
    isec::RankingDocument doc;
    doc.pairs = &ranking.pairs;
    doc.collisions = &ranking.collisions;
    doc.taxonomy = &data.taxonomy;
    doc.config = &run;
    doc.summary = &summary;
    doc.duplicates = &data.duplicates;
    doc.warnings = ranking.warnings;
    std::ostringstream csv, json;
    isec::write_ranking(doc, csv, isec::ReportFormat::csv);
    isec::write_ranking(doc, json, isec::ReportFormat::json);
    return csv.str() + json.str();
  };
  const bool files_equal = render() == render();

  const isec::Dataset case1 = fixtures::case1();
  const isec::CostConfig cfg = fixtures::case1_config();
  const isec::TypoModel model = keyboard_model();
  const auto s1 = isec::simulate(case1.taxonomy, cfg, model, 6000, 0.0);
  const auto s2 = isec::simulate(case1.taxonomy, cfg, model, 6000, 0.0);
  const bool stats_equal = s1 == s2;

  // Through the CLI.
  const fs::path dir = fs::temp_directory_path() / "isec_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path data_dir = fixtures::data_dir();
  const std::string analyze = "analyze --input \"" + (data_dir / "iso1832_catalog.csv").string() +
                              "\" --label-col code --matrix \"" + (data_dir / "case3_config.json").string() +
                              "\" --top-k 10 --seed 42";
  const std::string sim = "simulate --input \"" + (data_dir / "case1_provinces.csv").string() +
                          "\" --freq-col count --matrix \"" + (data_dir / "case1_config.json").string() +
                          "\" --trials 6000 --seed 42";
  bool cli_ok = true;
  for (int run = 0; run < 2; ++run) {
    const std::string tag = std::to_string(run);
    cli_ok = cli_ok && run_cli(analyze + " --format csv -o \"" + (dir / ("rank" + tag + ".csv")).string() + "\"") == 0;
    cli_ok = cli_ok && run_cli(analyze + " --format json -o \"" + (dir / ("rank" + tag + ".json")).string() + "\"") == 0;
    cli_ok = cli_ok && run_cli(sim + " -o \"" + (dir / ("sim" + tag + ".json")).string() + "\"") == 0;
  }
  bool cli_equal = cli_ok;
  for (const char* name : {"rank", "sim"}) {
    for (const char* ext : {".csv", ".json"}) {
      const fs::path first = dir / (std::string(name) + "0" + ext);
      if (!fs::exists(first)) continue;
      const std::string a = slurp(first);
      cli_equal = cli_equal && !a.empty() && a == slurp(dir / (std::string(name) + "1" + ext));
    }
  }
  fs::remove_all(dir);

  const bool ok = files_equal && stats_equal && cli_equal;
  return {ok, std::string("in-process ranking files ") + (files_equal ? "identical" : "differ") +
                  ", ConfusionStats " + (stats_equal ? "identical" : "differ") + ", CLI outputs " +
                  (cli_equal ? "identical" : "differ or failed")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"classical reduction", classical_reduction},
      {"isec spot values", spot_values},
      {"monotonicity", monotonicity},
      {"hybrid equals brute force at full K", hybrid_equals_brute_force},
      {"HNSW recall@10", ann_recall},
      {"speedup", speedup},
      {"abbreviation fragility", abbreviation_fragility},
      {"catalog transposition pair", catalog_transposition_pair},
      {"simulator validation", simulator_validation},
      {"determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    const auto t0 = Clock::now();
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << name << ": " << outcome.detail << " ["
              << fmt(seconds_since(t0), 3) << " s]" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
