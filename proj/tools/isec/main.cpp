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

// isec: rank label pairs by structural confusion risk.
//
//   isec analyze  --input data.csv --label-col name [--matrix cfg.json] ...
//   isec align    SOURCE TARGET [--matrix cfg.json]
//   isec simulate --input data.csv --trials T --delta D --seed S --out stats.json
//   isec serve    --port 8080

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "isec/ann_index.hpp"
#include "isec/cost_model.hpp"
#include "isec/edit_engine.hpp"
#include "isec/errors.hpp"
#include "isec/ingestion.hpp"
#include "isec/perturb_sim.hpp"
#include "isec/report.hpp"
#include "isec/scoring.hpp"
#include "isec/service.hpp"

namespace {

namespace fs = std::filesystem;
using isec::CostConfig;

struct Shared {
  std::string matrix;
  std::optional<double> alpha;
  std::optional<double> k_penalty;
  std::size_t top_k = 10;
  std::string index_mode = "hnsw";
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string format = "csv";
  std::size_t workers = 0;
};

struct Ingest {
  std::string input;
  std::string label_col = "label";
  std::string freq_col;
  bool case_fold = false;
  bool no_trim = false;
  std::string embeddings;
  bool embedding_fallback = false;
};

void add_cost_flags(CLI::App* app, Shared& s) {
  app->add_option("--matrix", s.matrix, "Cost configuration JSON")->check(CLI::ExistingFile);
  app->add_option("--alpha", s.alpha, "Semantic weight in [0, 1]; overrides the matrix file");
  app->add_option("--k-penalty", s.k_penalty, "Penalty on summed operation cost; overrides the matrix file");
}

void add_run_flags(CLI::App* app, Shared& s) {
  add_cost_flags(app, s);
  app->add_option("--top-k", s.top_k, "Semantic neighbors scored per label");
  app->add_option("--index-mode", s.index_mode, "hnsw, exact, or brute (score every pair)")
      ->check(CLI::IsMember({"hnsw", "exact", "brute"}));
  app->add_option("--seed", s.seed, "RNG seed");
  app->add_option("--workers", s.workers, "Worker threads (0 = all cores)");
}

void add_ingest_flags(CLI::App* app, Ingest& in) {
  app->add_option("--input", in.input, "UTF-8 CSV with a header row")->required()->check(CLI::ExistingFile);
  app->add_option("--label-col", in.label_col, "Label column name");
  app->add_option("--freq-col", in.freq_col, "Column with pre-aggregated counts");
  app->add_flag("--case-fold", in.case_fold, "Merge labels that differ only by case");
  app->add_flag("--no-trim", in.no_trim, "Keep leading and trailing whitespace");
  app->add_option("--embeddings", in.embeddings, "Precomputed vectors, one 'label<TAB>v1 v2 ...' row per label")
      ->check(CLI::ExistingFile);
  app->add_flag("--embedding-fallback", in.embedding_fallback,
                "Hash-embed labels missing from --embeddings instead of failing");
}

CostConfig cost_config(const Shared& s) {
  CostConfig cfg = s.matrix.empty() ? CostConfig{} : isec::load_config(s.matrix);
  if (s.alpha) cfg.alpha = *s.alpha;
  if (s.k_penalty) cfg.k = *s.k_penalty;
  cfg.validate();
  return cfg;
}

isec::Dataset load(const Ingest& in) {
  isec::NormalizationPolicy policy;
  policy.case_fold = in.case_fold;
  policy.trim = !in.no_trim;
  isec::EmbeddingSource source;
  if (!in.embeddings.empty()) source.precomputed = in.embeddings;
  source.missing = in.embedding_fallback ? isec::MissingPolicy::hash_fallback : isec::MissingPolicy::fail;
  std::optional<std::string> freq;
  if (!in.freq_col.empty()) freq = in.freq_col;
  isec::Dataset ds = isec::read_dataset(in.input, in.label_col, freq, policy, source);
  for (const std::string& w : ds.warnings) std::cerr << "warning: " << w << '\n';
  return ds;
}

// Writes to `path`, or stdout when it is empty or "-".
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  write(out);
  if (!out) throw std::runtime_error("write failed for " + path);
}

int run_analyze(const Shared& s, const Ingest& in, std::size_t top_m) {
  const CostConfig cfg = cost_config(s);
  const isec::Dataset ds = load(in);
  isec::RunConfig run{cfg, {}, {}, ds.policy};
  run.index.K = s.top_k;
  if (s.seed) run.index.seed = *s.seed;
  isec::Instrumentation inst;
  isec::Ranking ranking;
  if (s.index_mode == "brute") {
    ranking = isec::rank_all_pairs(ds.taxonomy, cfg, &inst, s.workers);
  } else {
    run.index.mode = isec::index_mode_from_string(s.index_mode);
    ranking = isec::rank_taxonomy(ds.taxonomy, cfg, run.index, &inst, s.workers);
  }
  for (const std::string& w : ranking.warnings) std::cerr << "warning: " << w << '\n';
  const isec::RunSummary summary = isec::run_summary(inst);

  isec::RankingDocument doc;
  doc.pairs = &ranking.pairs;
  doc.taxonomy = &ds.taxonomy;
  doc.config = &run;
  doc.summary = &summary;
  doc.duplicates = &ds.duplicates;
  doc.collisions = &ranking.collisions;
  doc.warnings = ranking.warnings;
  const isec::ReportFormat format = isec::report_format_from_string(s.format);
  emit(s.output, [&](std::ostream& out) { isec::write_ranking(doc, out, format, top_m); });

  std::cerr << "config fingerprint:      " << isec::config_fingerprint(run) << '\n';
  isec::print_summary(std::cerr, summary);
  if (!ranking.collisions.empty()) {
    std::cerr << "case-only collisions:    " << ranking.collisions.size() << " (listed in JSON output)\n";
  }
  return 0;
}

int run_align(const Shared& s, const std::string& source, const std::string& target) {
  const CostConfig cfg = cost_config(s);
  const isec::PathSummary path = isec::align(source, target, cfg);
  nlohmann::json j = isec::path_to_json(path, source, target);
  if (path.n_ops > 0) j["cmp"] = isec::cmp(path, cfg.k);
  j["k"] = cfg.k;
  emit(s.output, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
  return 0;
}

int run_simulate(const Shared& s, const Ingest& in, std::size_t trials, double delta, const std::string& model_path,
                 const std::string& keyboard) {
  const CostConfig cfg = cost_config(s);
  const isec::Dataset ds = load(in);
  isec::TypoModel model;
  if (!model_path.empty()) {
    std::ifstream f(model_path);
    if (!f) throw std::runtime_error("cannot open " + model_path);
    model = isec::typo_model_from_json(nlohmann::json::parse(f));
  }
  if (!keyboard.empty() && model.adjacency.empty()) isec::load_keyboard(model, keyboard);
  if (s.seed) model.seed = *s.seed;

  isec::IndexParams params;
  params.K = s.top_k;
  params.seed = model.seed;
  isec::Ranking ranking;
  if (s.index_mode == "brute") {
    ranking = isec::rank_all_pairs(ds.taxonomy, cfg, nullptr, s.workers);
  } else {
    params.mode = isec::index_mode_from_string(s.index_mode);
    ranking = isec::rank_taxonomy(ds.taxonomy, cfg, params, nullptr, s.workers);
  }
  const isec::ValidationResult result =
      isec::validate_ranking(ds.taxonomy, cfg, model, trials, delta, ranking.pairs, s.workers);
  const nlohmann::json j = {{"model", isec::typo_model_to_json(model)},
                            {"cost", isec::config_to_json(cfg)},
                            {"stats", isec::stats_to_json(result.stats, ds.taxonomy)},
                            {"correlation", isec::correlation_to_json(result.correlation, ranking.pairs, ds.taxonomy)}};
  emit(s.output, [&](std::ostream& out) { out << j.dump(2) << '\n'; });

  const auto& c = result.correlation;
  std::cerr << "pairs correlated:        " << c.pairs << '\n';
  if (c.degenerate) {
    std::cerr << "spearman:                degenerate (no variance)\n";
  } else {
    std::cerr << "spearman:                " << *c.spearman;
    if (c.ci_low) std::cerr << "  95% CI [" << *c.ci_low << ", " << *c.ci_high << "]";
    std::cerr << '\n';
  }
  return 0;
}

isec::Service* g_service = nullptr;

void handle_signal(int) {
  if (g_service) g_service->stop();
}

int run_serve(const std::string& host, int port, const isec::ServiceOptions& options) {
  isec::Service service(options);
  const int bound = service.bind(host, port);
  if (bound < 0) {
    std::cerr << "error: cannot bind " << host << ':' << port << '\n';
    return 1;
  }
  g_service = &service;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cerr << "isec serving on http://" << host << ':' << bound << " (" << service.dataset_count()
            << " stored datasets in " << options.workdir.string() << ")\n";
  const bool ok = service.run();
  g_service = nullptr;
  return ok ? 0 : 1;
}

std::string default_keyboard() {
#ifdef ISEC_DEFAULT_KEYBOARD
  if (fs::exists(ISEC_DEFAULT_KEYBOARD)) return ISEC_DEFAULT_KEYBOARD;
#endif
  // Installed layout: <prefix>/bin/isec next to <prefix>/share/isec.
  std::error_code ec;
  const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    const fs::path installed = exe.parent_path().parent_path() / "share" / "isec" / "qwerty.json";
    if (fs::exists(installed, ec)) return installed.string();
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank label pairs by structural confusion risk"};
  app.require_subcommand(1);

  Shared shared;
  Ingest ingest;

  auto* analyze = app.add_subcommand("analyze", "Rank the label pairs of a dataset");
  add_ingest_flags(analyze, ingest);
  add_run_flags(analyze, shared);
  std::size_t top_m = 0;
  analyze->add_option("-o,--output", shared.output, "Output file (default stdout)");
  analyze->add_option("--format", shared.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  analyze->add_option("--top-m", top_m, "Keep only the first M pairs (0 = all)");

  auto* align = app.add_subcommand("align", "Print the cheapest weighted edit path between two labels");
  std::string source;
  std::string target;
  align->add_option("source", source)->required();
  align->add_option("target", target)->required();
  add_cost_flags(align, shared);
  align->add_option("-o,--output", shared.output, "Output file (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "Inject typos and correlate confusion with the ranking");
  add_ingest_flags(simulate, ingest);
  add_run_flags(simulate, shared);
  std::size_t trials = 0;
  double delta = 0.0;
  std::string model_path;
  std::string keyboard = default_keyboard();
  simulate->add_option("--trials", trials, "Total perturbation trials (>= 100 per label)")->required();
  simulate->add_option("--delta", delta, "Margin under which the nearest labels count as tied");
  simulate->add_option("--model", model_path, "Typo model JSON")->check(CLI::ExistingFile);
  simulate->add_option("--keyboard", keyboard, "Keyboard adjacency JSON (cost-config shape)");
  simulate->add_option("-o,--out,--output", shared.output, "Output file (default stdout)");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string workdir = "isec-data";
  std::size_t max_upload_mb = 50;
  isec::ServiceOptions service_options;
  std::string serve_keyboard = default_keyboard();
  serve->add_option("--port", port, "TCP port (0 picks a free one)");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--workdir", workdir, "Directory where datasets are stored");
  serve->add_option("--max-upload-mb", max_upload_mb, "Upload size cap in megabytes");
  serve->add_option("--cors-origin", service_options.cors_origin, "Allowed browser origin");
  serve->add_option("--keyboard", serve_keyboard, "Default keyboard adjacency for simulations");
  serve->add_option("--workers", service_options.workers, "Worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return run_analyze(shared, ingest, top_m);
    if (*align) return run_align(shared, source, target);
    if (*simulate) return run_simulate(shared, ingest, trials, delta, model_path, keyboard);
    if (*serve) {
      service_options.workdir = workdir;
      service_options.max_upload_bytes = max_upload_mb * 1024 * 1024;
      if (!serve_keyboard.empty()) service_options.keyboard = serve_keyboard;
      return run_serve(host, port, service_options);
    }
  } catch (const isec::IngestionError& e) {
    std::cerr << "ingestion error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
