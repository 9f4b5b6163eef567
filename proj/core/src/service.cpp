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

#include "isec/service.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "isec/ann_index.hpp"
#include "isec/cost_model.hpp"
#include "isec/errors.hpp"
#include "isec/hash.hpp"
#include "isec/ingestion.hpp"
#include "isec/perturb_sim.hpp"
#include "isec/report.hpp"
#include "isec/scoring.hpp"

namespace isec {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct HttpError : std::runtime_error {
  HttpError(int status, std::string code, const std::string& message, json detail)
      : std::runtime_error(message), status(status), code(std::move(code)), detail(std::move(detail)) {}
  int status;
  std::string code;
  json detail;
};

[[noreturn]] void fail(int status, std::string code, const std::string& message, json detail = json::object()) {
  throw HttpError(status, std::move(code), message, std::move(detail));
}

json error_body(const std::string& code, const std::string& message, const json& detail) {
  return {{"code", code}, {"message", message}, {"detail", detail}};
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

std::string status_code_name(int status) {
  switch (status) {
    case 400:
      return "bad_request";
    case 404:
      return "not_found";
    case 405:
      return "method_not_allowed";
    case 413:
      return "payload_too_large";
    case 422:
      return "unprocessable";
    default:
      return status >= 500 ? "internal_error" : "http_error";
  }
}

std::string random_id(const char* prefix) {
  static std::mutex mutex;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mutex);
  return prefix + hex64(rng()).substr(0, 12);
}

// Request options --------------------------------------------------------

// Text fields of a multipart form, or query parameters.
std::optional<std::string> option(const httplib::Request& req, const std::string& name) {
  if (req.is_multipart_form_data() && req.has_file(name)) {
    const auto part = req.get_file_value(name);
    if (part.filename.empty()) return part.content;
  }
  if (req.has_param(name)) return req.get_param_value(name);
  return std::nullopt;
}

bool parse_bool(const std::string& name, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  fail(400, "invalid_option", "option \"" + name + "\" must be a boolean", {{"option", name}, {"value", text}});
}

std::uint64_t parse_uint(const std::string& name, const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(400, "invalid_option", "option \"" + name + "\" must be a non-negative integer",
         {{"option", name}, {"value", text}});
  }
  return v;
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) fail(400, "invalid_json", "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    fail(400, "invalid_json", "request body is not valid JSON", {{"parser", e.what()}});
  }
}

template <typename T>
std::optional<T> body_field(const json& body, const char* name) {
  if (!body.contains(name) || body.at(name).is_null()) return std::nullopt;
  try {
    return body.at(name).get<T>();
  } catch (const json::exception&) {
    fail(422, "invalid_config", std::string("field \"") + name + "\" has the wrong type", {{"field", name}});
  }
}

std::size_t body_count(const json& body, const char* name, std::size_t fallback) {
  if (!body.contains(name)) return fallback;
  const json& v = body.at(name);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    fail(422, "invalid_config", std::string("field \"") + name + "\" must be a non-negative integer",
         {{"field", name}});
  }
  return v.get<std::size_t>();
}

// Cost config from the "config" member plus top-level alpha / k overrides.
CostConfig cost_from_body(const json& body) {
  try {
    CostConfig cfg = body.contains("config") ? config_from_json(body.at("config")) : CostConfig{};
    if (auto alpha = body_field<double>(body, "alpha")) cfg.alpha = *alpha;
    if (auto k = body_field<double>(body, "k")) cfg.k = *k;
    cfg.validate();
    return cfg;
  } catch (const HttpError&) {
    throw;
  } catch (const std::exception& e) {
    fail(422, "invalid_config", e.what());
  }
}

// Persistence -------------------------------------------------------------

constexpr char kBlobMagic[8] = {'I', 'S', 'E', 'C', 'E', 'M', 'B', '1'};

std::string embedding_blob(const Taxonomy& tax) {
  const std::uint64_t n = tax.size();
  const std::uint64_t dim = n ? tax.embedding(0).dim() : 0;
  std::string out(sizeof kBlobMagic + 16 + n * dim * sizeof(double), '\0');
  char* p = out.data();
  std::memcpy(p, kBlobMagic, sizeof kBlobMagic);
  p += sizeof kBlobMagic;
  std::memcpy(p, &n, 8);
  std::memcpy(p + 8, &dim, 8);
  p += 16;
  for (std::size_t l = 0; l < n; ++l) {
    std::memcpy(p, tax.embedding(l).values.data(), dim * sizeof(double));
    p += dim * sizeof(double);
  }
  return out;
}

std::vector<EmbeddingVector> read_blob(const std::string& blob, std::size_t expected_n) {
  if (blob.size() < sizeof kBlobMagic + 16 || std::memcmp(blob.data(), kBlobMagic, sizeof kBlobMagic) != 0) {
    throw std::runtime_error("embedding blob has a bad header");
  }
  std::uint64_t n = 0;
  std::uint64_t dim = 0;
  std::memcpy(&n, blob.data() + 8, 8);
  std::memcpy(&dim, blob.data() + 16, 8);
  if (n != expected_n || blob.size() != 24 + n * dim * sizeof(double)) {
    throw std::runtime_error("embedding blob does not match the dataset");
  }
  std::vector<EmbeddingVector> out(n);
  const char* p = blob.data() + 24;
  for (auto& v : out) {
    v.values.resize(dim);
    std::memcpy(v.values.data(), p, dim * sizeof(double));
    p += dim * sizeof(double);
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view data) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

NormalizationPolicy policy_from_json(const json& j) {
  NormalizationPolicy p;
  p.trim = j.at("trim").get<bool>();
  p.case_fold = j.at("case_fold").get<bool>();
  p.nfc = j.at("nfc").get<bool>();
  p.collapse_whitespace = j.at("collapse_whitespace").get<bool>();
  return p;
}

// Datasets and jobs -------------------------------------------------------

struct LastRanking {
  CostConfig cfg;
  std::size_t K = 0;
  Ranking ranking;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> ranked;      // -> index in pairs
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> collisions;  // -> index in collisions
};

struct StoredDataset {
  std::string id;
  std::string label_column;
  std::optional<std::string> freq_column;
  bool precomputed_embeddings = false;
  NgramParams embedder;
  IndexParams index_params;
  Dataset data;
  std::optional<AnnIndex> index;  // built once at upload
  std::string index_fingerprint;
  std::string embedding_fingerprint;

  std::mutex mutex;  // serializes recomputation and guards `last`
  std::optional<LastRanking> last;

  json meta() const {
    return {{"id", id},
            {"label_column", label_column},
            {"freq_column", freq_column ? json(*freq_column) : json(nullptr)},
            {"normalization", policy_to_json(data.policy)},
            {"embedder",
             {{"dim", embedder.dim}, {"n_lo", embedder.n_lo}, {"n_hi", embedder.n_hi}, {"seed", embedder.seed}}},
            {"precomputed_embeddings", precomputed_embeddings},
            {"index",
             {{"M", index_params.M},
              {"ef_construction", index_params.ef_construction},
              {"ef_search", index_params.ef_search},
              {"mode", to_string(index_params.mode)},
              {"seed", index_params.seed}}},
            {"n", data.taxonomy.size()},
            {"rows", data.rows},
            {"skipped_empty", data.skipped_empty},
            {"index_fingerprint", index_fingerprint},
            {"embedding_fingerprint", embedding_fingerprint}};
  }
};

struct Job {
  std::string id;
  std::string dataset_id;
  std::size_t trials = 0;
  std::atomic<std::size_t> labels_done{0};
  std::atomic<std::size_t> labels_total{0};
  std::mutex mutex;
  std::string status = "queued";
  json result;
  json error;

  json to_json() {
    std::lock_guard lock(mutex);
    const std::size_t total = labels_total.load();
    json j = {{"id", id},
              {"dataset_id", dataset_id},
              {"status", status},
              {"trials", trials},
              {"progress", total == 0 ? 0.0 : static_cast<double>(labels_done.load()) / static_cast<double>(total)}};
    if (status == "done") j["result"] = result;
    if (status == "failed") j["error"] = error;
    return j;
  }
};

}  // namespace

struct Service::Impl {
  ServiceOptions options;
  httplib::Server server;

  mutable std::shared_mutex registry_mutex;
  std::map<std::string, std::shared_ptr<StoredDataset>> datasets;
  std::map<std::string, std::shared_ptr<Job>> jobs;

  std::mutex threads_mutex;
  std::vector<std::jthread> threads;

  explicit Impl(ServiceOptions opts) : options(std::move(opts)) {
    fs::create_directories(datasets_dir());
    reload();
    configure();
  }

  ~Impl() {
    server.stop();
    std::lock_guard lock(threads_mutex);
    threads.clear();  // joins
  }

  fs::path datasets_dir() const { return options.workdir / "datasets"; }

  std::shared_ptr<StoredDataset> dataset(const std::string& id) const {
    std::shared_lock lock(registry_mutex);
    auto it = datasets.find(id);
    if (it == datasets.end()) fail(404, "dataset_not_found", "no dataset with id " + id, {{"dataset_id", id}});
    return it->second;
  }

  // Builds the index and fingerprints once per dataset; /rank reuses them.
  static void finish_dataset(StoredDataset& ds) {
    IndexParams p = ds.index_params;
    p.K = 1;
    ds.index.emplace(AnnIndex::build(ds.data.taxonomy.embeddings(), p));
    ds.index_fingerprint = hex64(ds.index->fingerprint());
    ds.embedding_fingerprint = hex64(fnv1a64(embedding_blob(ds.data.taxonomy)));
  }

  void persist(const StoredDataset& ds, std::string_view csv) const {
    const fs::path dir = datasets_dir() / ds.id;
    fs::create_directories(dir);
    write_file(dir / "source.csv", csv);
    write_file(dir / "embeddings.bin", embedding_blob(ds.data.taxonomy));
    write_file(dir / "meta.json", ds.meta().dump(2) + "\n");
  }

  void reload() {
    for (const auto& entry : fs::directory_iterator(datasets_dir())) {
      if (!entry.is_directory()) continue;
      try {
        const json meta = json::parse(read_file(entry.path() / "meta.json"));
        auto ds = std::make_shared<StoredDataset>();
        ds->id = meta.at("id").get<std::string>();
        ds->label_column = meta.at("label_column").get<std::string>();
        if (!meta.at("freq_column").is_null()) ds->freq_column = meta.at("freq_column").get<std::string>();
        ds->precomputed_embeddings = meta.at("precomputed_embeddings").get<bool>();
        const json& e = meta.at("embedder");
        ds->embedder.dim = e.at("dim").get<std::size_t>();
        ds->embedder.n_lo = e.at("n_lo").get<std::size_t>();
        ds->embedder.n_hi = e.at("n_hi").get<std::size_t>();
        ds->embedder.seed = e.at("seed").get<std::uint64_t>();
        const json& ix = meta.at("index");
        ds->index_params.M = ix.at("M").get<std::size_t>();
        ds->index_params.ef_construction = ix.at("ef_construction").get<std::size_t>();
        ds->index_params.ef_search = ix.at("ef_search").get<std::size_t>();
        ds->index_params.mode = index_mode_from_string(ix.at("mode").get<std::string>());
        ds->index_params.seed = ix.at("seed").get<std::uint64_t>();

        LabelCounts counts = count_labels(read_file(entry.path() / "source.csv"), ds->label_column,
                                          ds->freq_column, policy_from_json(meta.at("normalization")));
        std::vector<EmbeddingVector> vectors =
            read_blob(read_file(entry.path() / "embeddings.bin"), counts.labels.size());
        ds->data.duplicates = std::move(counts.duplicates);
        ds->data.rows = counts.rows;
        ds->data.skipped_empty = counts.skipped_empty;
        ds->data.policy = counts.policy;
        ds->data.taxonomy =
            Taxonomy::from_embeddings(std::move(counts.labels), std::move(counts.frequencies), std::move(vectors));
        finish_dataset(*ds);
        if (ds->index_fingerprint != meta.at("index_fingerprint").get<std::string>()) {
          std::cerr << "isec serve: index fingerprint changed for dataset " << ds->id << "\n";
        }
        datasets.emplace(ds->id, std::move(ds));
      } catch (const std::exception& e) {
        std::cerr << "isec serve: skipping " << entry.path().string() << ": " << e.what() << "\n";
      }
    }
  }

  void configure() {
    server.set_payload_max_length(options.max_upload_bytes);
    server.set_default_headers({{"Access-Control-Allow-Origin", options.cors_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    // Fills in a JSON error body for failures raised inside httplib itself,
    // such as 413 or unmatched routes.
    server.set_error_handler([this](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
      std::string message = httplib::status_message(res.status);
      json detail = json::object();
      if (res.status == 413) {
        message = "request body exceeds the upload limit";
        detail["max_bytes"] = options.max_upload_bytes;
      }
      res.set_content(error_body(status_code_name(res.status), message, detail).dump(2) + "\n",
                      "application/json");
      return httplib::Server::HandlerResponse::Handled;
    });

    route_post(R"(/datasets)", [this](const auto& req, auto& res) { create_dataset(req, res); });
    route_get(R"(/datasets)", [this](const auto& req, auto& res) { list_datasets(req, res); });
    route_get(R"(/datasets/([^/]+))", [this](const auto& req, auto& res) {
      send_json(res, 200, dataset_json(*dataset(req.matches[1])));
    });
    route_post(R"(/datasets/([^/]+)/rank)", [this](const auto& req, auto& res) { rank(req, res); });
    route_get(R"(/datasets/([^/]+)/pairs/([^/]+)/([^/]+))", [this](const auto& req, auto& res) { pair(req, res); });
    route_post(R"(/datasets/([^/]+)/simulate)", [this](const auto& req, auto& res) { simulate(req, res); });
    route_get(R"(/jobs/([^/]+))", [this](const auto& req, auto& res) {
      std::shared_ptr<Job> job;
      {
        std::shared_lock lock(registry_mutex);
        auto it = jobs.find(req.matches[1]);
        if (it == jobs.end()) fail(404, "job_not_found", "no job with id " + std::string(req.matches[1]));
        job = it->second;
      }
      send_json(res, 200, job->to_json());
    });
  }

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static httplib::Server::Handler guarded(Handler handler) {
    return [handler = std::move(handler)](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const HttpError& e) {
        send_json(res, e.status, error_body(e.code, e.what(), e.detail));
      } catch (const std::exception& e) {
        send_json(res, 500, error_body("internal_error", e.what(), json::object()));
      }
    };
  }

  void route_get(const char* pattern, Handler h) { server.Get(pattern, guarded(std::move(h))); }
  void route_post(const char* pattern, Handler h) { server.Post(pattern, guarded(std::move(h))); }

  json dataset_json(const StoredDataset& ds) const {
    json j = ds.meta();
    j["duplicates"] = duplicates_to_json(ds.data.duplicates);
    j["warnings"] = ds.data.warnings;
    return j;
  }

  void list_datasets(const httplib::Request&, httplib::Response& res) const {
    json out = json::array();
    std::shared_lock lock(registry_mutex);
    for (const auto& [id, ds] : datasets) {
      out.push_back({{"id", id}, {"n", ds->data.taxonomy.size()}, {"index_fingerprint", ds->index_fingerprint}});
    }
    send_json(res, 200, {{"datasets", out}});
  }

  // POST /datasets ----------------------------------------------------------

  void create_dataset(const httplib::Request& req, httplib::Response& res) {
    std::string csv;
    std::optional<std::string> embeddings_text;
    if (req.is_multipart_form_data()) {
      if (!req.has_file("file")) fail(400, "missing_file", "multipart field \"file\" with the CSV is required");
      csv = req.get_file_value("file").content;
      if (req.has_file("embeddings")) embeddings_text = req.get_file_value("embeddings").content;
    } else {
      csv = req.body;
    }

    auto ds = std::make_shared<StoredDataset>();
    ds->label_column = option(req, "label_col").value_or("label");
    ds->freq_column = option(req, "freq_col");
    if (ds->freq_column && ds->freq_column->empty()) ds->freq_column.reset();
    NormalizationPolicy policy;
    if (auto v = option(req, "case_fold")) policy.case_fold = parse_bool("case_fold", *v);
    if (auto v = option(req, "no_trim")) policy.trim = !parse_bool("no_trim", *v);
    if (auto v = option(req, "trim")) policy.trim = parse_bool("trim", *v);
    if (auto v = option(req, "M")) ds->index_params.M = parse_uint("M", *v);
    if (auto v = option(req, "ef_construction")) ds->index_params.ef_construction = parse_uint("ef_construction", *v);
    if (auto v = option(req, "ef_search")) ds->index_params.ef_search = parse_uint("ef_search", *v);
    if (auto v = option(req, "seed")) ds->index_params.seed = parse_uint("seed", *v);
    if (auto v = option(req, "index_mode")) {
      try {
        ds->index_params.mode = index_mode_from_string(*v);
      } catch (const std::exception& e) {
        fail(400, "invalid_option", e.what(), {{"option", "index_mode"}, {"value", *v}});
      }
    }
    ds->index_params.K = 1;
    try {
      ds->index_params.validate();
    } catch (const std::exception& e) {
      fail(400, "invalid_option", e.what());
    }

    try {
      LabelCounts counts = count_labels(csv, ds->label_column, ds->freq_column, policy);
      if (counts.labels.size() < 2) {
        throw IngestionError("dataset has " + std::to_string(counts.labels.size()) +
                             " distinct label(s); at least two are required");
      }
      if (embeddings_text) {
        EmbeddingLoad load = parse_embeddings(*embeddings_text, counts.labels, MissingPolicy::fail, ds->embedder);
        std::vector<EmbeddingVector> vecs;
        for (const std::string& l : counts.labels) vecs.push_back(std::move(load.vectors.at(l)));
        ds->precomputed_embeddings = true;
        ds->data.warnings = std::move(load.warnings);
        ds->data.duplicates = std::move(counts.duplicates);
        ds->data.rows = counts.rows;
        ds->data.skipped_empty = counts.skipped_empty;
        ds->data.policy = counts.policy;
        ds->data.taxonomy =
            Taxonomy::from_embeddings(std::move(counts.labels), std::move(counts.frequencies), std::move(vecs));
      } else {
        ds->data = build_dataset(std::move(counts), {ds->embedder, std::nullopt, MissingPolicy::fail});
      }
    } catch (const IngestionError& e) {
      json detail = {{"label_col", ds->label_column}};
      if (e.row() != 0) detail["row"] = e.row();
      fail(400, "ingestion_error", e.what(), detail);
    } catch (const std::exception& e) {
      fail(400, "ingestion_error", e.what(), {{"label_col", ds->label_column}});
    }

    finish_dataset(*ds);
    {
      std::unique_lock lock(registry_mutex);
      do {
        ds->id = random_id("ds_");
      } while (datasets.contains(ds->id));
      persist(*ds, csv);
      datasets.emplace(ds->id, ds);
    }
    send_json(res, 201, dataset_json(*ds));
  }

  // POST /datasets/{id}/rank --------------------------------------------------

  void rank(const httplib::Request& req, httplib::Response& res) {
    auto ds = dataset(req.matches[1]);
    const json body = parse_body(req);
    const CostConfig cfg = cost_from_body(body);
    const std::size_t K = body_count(body, "K", 10);
    if (K < 1) fail(422, "invalid_config", "K must be >= 1", {{"field", "K"}});
    const std::size_t page = body_count(body, "page", 1);
    const std::size_t page_size = body_count(body, "page_size", 50);
    if (page < 1 || page_size < 1) fail(422, "invalid_config", "page and page_size must be >= 1");

    std::lock_guard lock(ds->mutex);
    Instrumentation inst;
    LastRanking last;
    last.cfg = cfg;
    last.K = K;
    last.ranking = rank_taxonomy(ds->data.taxonomy, cfg, *ds->index, K, &inst, options.workers);
    for (std::size_t p = 0; p < last.ranking.pairs.size(); ++p) {
      last.ranked.emplace(std::pair{last.ranking.pairs[p].i, last.ranking.pairs[p].j}, p);
    }
    for (std::size_t p = 0; p < last.ranking.collisions.size(); ++p) {
      last.collisions.emplace(std::pair{last.ranking.collisions[p].i, last.ranking.collisions[p].j}, p);
    }

    const Taxonomy& tax = ds->data.taxonomy;
    const RunSummary summary = run_summary(inst);
    RunConfig run{cfg, ds->index_params, ds->embedder, ds->data.policy};
    run.index.K = K;
    json summary_json = summary_to_json(summary);
    summary_json["scoring_seconds"] = summary.scoring_seconds;

    const auto& pairs = last.ranking.pairs;
    const std::size_t first = std::min(pairs.size(), (page - 1) * page_size);
    const std::size_t last_row = std::min(pairs.size(), first + page_size);
    json page_pairs = json::array();
    for (std::size_t r = first; r < last_row; ++r) page_pairs.push_back(pair_to_json(pairs[r], tax, r + 1));
    json collisions = json::array();
    for (const PairScore& s : last.ranking.collisions) collisions.push_back(pair_to_json(s, tax, std::nullopt));

    json out = {{"dataset_id", ds->id},
                {"index_fingerprint", ds->index_fingerprint},
                {"config_fingerprint", config_fingerprint(run)},
                {"config", run_config_to_json(run)},
                {"summary", summary_json},
                {"total_pairs", pairs.size()},
                {"page", page},
                {"page_size", page_size},
                {"pages", (pairs.size() + page_size - 1) / page_size},
                {"pairs", page_pairs},
                {"collisions", collisions},
                {"warnings", last.ranking.warnings}};
    ds->last = std::move(last);
    send_json(res, 200, out);
  }

  // GET /datasets/{id}/pairs/{i}/{j} -----------------------------------------

  void pair(const httplib::Request& req, httplib::Response& res) {
    auto ds = dataset(req.matches[1]);
    const std::size_t n = ds->data.taxonomy.size();
    auto label_id = [&](const std::string& text) -> std::uint32_t {
      std::uint64_t v = 0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc{} || ptr != text.data() + text.size() || v >= n) {
        fail(404, "label_not_found", "no label with id " + text, {{"id", text}, {"n", n}});
      }
      return static_cast<std::uint32_t>(v);
    };
    std::uint32_t i = label_id(req.matches[2]);
    std::uint32_t j = label_id(req.matches[3]);
    if (i == j) fail(404, "pair_not_found", "a label does not pair with itself", {{"i", i}, {"j", j}});
    if (i > j) std::swap(i, j);

    std::lock_guard lock(ds->mutex);
    if (!ds->last) {
      fail(404, "not_ranked", "dataset has not been ranked yet",
           {{"hint", "POST /datasets/" + ds->id + "/rank before inspecting pairs"}});
    }
    const LastRanking& last = *ds->last;
    const PairScore* score = nullptr;
    std::optional<std::size_t> rank;
    if (auto it = last.ranked.find({i, j}); it != last.ranked.end()) {
      score = &last.ranking.pairs[it->second];
      rank = it->second + 1;
    } else if (auto c = last.collisions.find({i, j}); c != last.collisions.end()) {
      score = &last.ranking.collisions[c->second];
    }
    if (!score) {
      fail(404, "pair_not_scored", "pair was not among the Top-K semantic candidates of the last ranking",
           {{"i", i},
            {"j", j},
            {"K", last.K},
            {"hint", "raise K above " + std::to_string(last.K) + " and rank again to score more distant pairs"}});
    }
    json out = pair_to_json(*score, ds->data.taxonomy, rank);
    out["K"] = last.K;
    out["decomposition"] = {{"numerator", 1.0 + score->fmn},
                            {"dsn_term", std::pow(score->dsn, last.cfg.alpha)},
                            {"cmp_term", std::pow(score->cmp, 1.0 - last.cfg.alpha)},
                            {"alpha", last.cfg.alpha},
                            {"k", last.cfg.k}};
    send_json(res, 200, out);
  }

  // POST /datasets/{id}/simulate ---------------------------------------------

  void simulate(const httplib::Request& req, httplib::Response& res) {
    auto ds = dataset(req.matches[1]);
    const json body = parse_body(req);
    const CostConfig cfg = cost_from_body(body);
    const std::size_t K = body_count(body, "K", 10);
    if (K < 1) fail(422, "invalid_config", "K must be >= 1", {{"field", "K"}});
    if (!body.contains("trials")) fail(422, "invalid_config", "field \"trials\" is required", {{"field", "trials"}});
    const std::size_t trials = body_count(body, "trials", 0);
    const std::size_t n = ds->data.taxonomy.size();
    if (trials == 0) fail(422, "invalid_config", "trials must be > 0", {{"field", "trials"}});
    if (trials < 100 * n) {
      fail(422, "invalid_config", "trials must be at least 100 per label",
           {{"field", "trials"}, {"minimum", 100 * n}});
    }
    const double delta = body_field<double>(body, "delta").value_or(0.0);
    if (!(delta >= 0.0)) fail(422, "invalid_config", "delta must be >= 0", {{"field", "delta"}});
    TypoModel model;
    try {
      model = body.contains("model") ? typo_model_from_json(body.at("model")) : TypoModel{};
      if (model.adjacency.empty() && options.keyboard) load_keyboard(model, *options.keyboard);
      if (auto seed = body_field<std::uint64_t>(body, "seed")) model.seed = *seed;
      model.validate();
    } catch (const HttpError&) {
      throw;
    } catch (const std::exception& e) {
      fail(422, "invalid_model", e.what());
    }
    const bool async = body_field<bool>(body, "async").value_or(trials > options.sync_trial_limit);

    auto job = std::make_shared<Job>();
    job->dataset_id = ds->id;
    job->trials = trials;
    auto work = [this, ds, cfg, K, trials, delta, model, job] {
      {
        std::lock_guard lock(job->mutex);
        job->status = "running";
      }
      try {
        const Taxonomy& tax = ds->data.taxonomy;
        const Ranking ranking = rank_taxonomy(tax, cfg, *ds->index, K, nullptr, options.workers);
        ConfusionStats stats = isec::simulate(tax, cfg, model, trials, delta, options.workers,
                                              [&job](std::size_t done, std::size_t total) {
                                                job->labels_total = total;
                                                job->labels_done = std::max(job->labels_done.load(), done);
                                              });
        const CorrelationReport corr = correlate(ranking.pairs, stats, 1000, model.seed);
        json result = {{"dataset_id", ds->id},
                       {"K", K},
                       {"model", typo_model_to_json(model)},
                       {"stats", stats_to_json(stats, tax)},
                       {"correlation", correlation_to_json(corr, ranking.pairs, tax)},
                       {"warnings", ranking.warnings}};
        std::lock_guard lock(job->mutex);
        job->result = std::move(result);
        job->status = "done";
      } catch (const std::exception& e) {
        std::lock_guard lock(job->mutex);
        job->error = error_body("simulation_failed", e.what(), json::object());
        job->status = "failed";
      }
    };

    if (!async) {
      work();
      const json j = job->to_json();
      if (j.at("status") == "failed") {
        send_json(res, 500, j.at("error"));
      } else {
        send_json(res, 200, j.at("result"));
      }
      return;
    }
    {
      std::unique_lock lock(registry_mutex);
      do {
        job->id = random_id("job_");
      } while (jobs.contains(job->id));
      jobs.emplace(job->id, job);
    }
    {
      std::lock_guard lock(threads_mutex);
      threads.emplace_back(std::move(work));
    }
    send_json(res, 202, {{"job_id", job->id}, {"status", "queued"}, {"poll", "/jobs/" + job->id}});
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Service::~Service() = default;

int Service::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::run() { return impl_->server.listen_after_bind(); }

void Service::stop() { impl_->server.stop(); }

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

std::size_t Service::dataset_count() const {
  std::shared_lock lock(impl_->registry_mutex);
  return impl_->datasets.size();
}

}  // namespace isec
