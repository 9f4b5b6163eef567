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

#include "isec/perturb_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "isec/errors.hpp"
#include "isec/hash.hpp"
#include "isec/parallel.hpp"
#include "isec/stats.hpp"
#include "isec/text.hpp"

namespace isec {

namespace {

constexpr double kDistanceEps = 1e-9;

// Portable draws: std:: distributions differ between standard libraries.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

std::size_t sample_pmf(std::mt19937_64& rng, std::span<const double> pmf) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    acc += pmf[i];
    if (u < acc) return i;
  }
  // Rounding left u above the accumulated mass; take the last nonzero bucket.
  for (std::size_t i = pmf.size(); i-- > 0;) {
    if (pmf[i] > 0.0) return i;
  }
  return 0;
}

constexpr std::array<const char*, kTypoEventKinds> kEventNames = {
    "adjacent_substitution", "random_substitution", "deletion", "insertion", "transposition"};

}  // namespace

const char* to_string(TypoEvent event) { return kEventNames[static_cast<std::size_t>(event)]; }

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::recovered:
      return "recovered";
    case Outcome::misassigned:
      return "misassigned";
    case Outcome::indeterminate:
      return "indeterminate";
  }
  return "unknown";
}

void TypoModel::validate() const {
  double sum = 0.0;
  for (double p : probabilities) {
    if (!std::isfinite(p) || p < 0.0) throw ValidationError("typo model: probabilities must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("typo model: event probabilities must sum to 1");
  double mass = 0.0;
  for (double p : events_pmf) {
    if (!std::isfinite(p) || p < 0.0) throw ValidationError("typo model: events_per_label must be >= 0");
    mass += p;
  }
  if (events_pmf.empty() || std::abs(mass - 1.0) > 1e-9) {
    throw ValidationError("typo model: events_per_label must sum to 1");
  }
  for (const auto& [c, neighbors] : adjacency) {
    for (char32_t n : neighbors) {
      auto it = adjacency.find(n);
      if (it == adjacency.end() || !std::binary_search(it->second.begin(), it->second.end(), c)) {
        throw ValidationError("typo model: keyboard adjacency is not symmetric");
      }
    }
  }
}

void add_adjacent(TypoModel& model, char32_t a, char32_t b) {
  if (a == b) return;
  for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
    auto& list = model.adjacency[x];
    auto it = std::lower_bound(list.begin(), list.end(), y);
    if (it == list.end() || *it != y) list.insert(it, y);
  }
}

void keyboard_from_json(TypoModel& model, const nlohmann::json& j) {
  const CostConfig layout = config_from_json(j);
  for (const auto& [key, _] : layout.sub_overrides) add_adjacent(model, key.first, key.second);
}

void load_keyboard(TypoModel& model, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open keyboard file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("keyboard file: ") + e.what());
  }
  keyboard_from_json(model, j);
}

TypoModel typo_model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("typo model must be a JSON object");
  TypoModel model;
  if (j.contains("probabilities")) {
    const auto& p = j.at("probabilities");
    if (!p.is_object()) throw ParseError("typo model: \"probabilities\" must be an object");
    for (const auto& [key, _] : p.items()) {
      if (std::find(kEventNames.begin(), kEventNames.end(), key) == kEventNames.end()) {
        throw ParseError("typo model: unknown event \"" + key + "\"");
      }
    }
    for (std::size_t e = 0; e < kTypoEventKinds; ++e) {
      model.probabilities[e] = p.contains(kEventNames[e]) ? p.at(kEventNames[e]).get<double>() : 0.0;
    }
  }
  if (j.contains("events_per_label")) {
    const auto& e = j.at("events_per_label");
    if (e.is_number_unsigned()) {
      model.events_pmf.assign(e.get<std::size_t>() + 1, 0.0);
      model.events_pmf.back() = 1.0;
    } else {
      model.events_pmf = e.get<std::vector<double>>();
    }
  }
  if (j.contains("seed")) model.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("keyboard")) keyboard_from_json(model, j.at("keyboard"));
  model.validate();
  return model;
}

nlohmann::json typo_model_to_json(const TypoModel& model) {
  nlohmann::json probs = nlohmann::json::object();
  for (std::size_t e = 0; e < kTypoEventKinds; ++e) probs[kEventNames[e]] = model.probabilities[e];
  std::size_t adjacent_pairs = 0;
  for (const auto& [_, n] : model.adjacency) adjacent_pairs += n.size();
  return {{"probabilities", probs},
          {"events_per_label", model.events_pmf},
          {"seed", model.seed},
          {"keyboard_pairs", adjacent_pairs / 2}};
}

Perturbation perturb(std::u32string_view label, const TypoModel& model, std::mt19937_64& rng, const CostConfig& cfg) {
  Perturbation out{Label32(label), {}};
  const std::size_t events = sample_pmf(rng, model.events_pmf);
  for (std::size_t e = 0; e < events; ++e) {
    auto kind = static_cast<TypoEvent>(sample_pmf(rng, model.probabilities));
    Label32& text = out.text;
    std::optional<EditOp> op;

    if (kind == TypoEvent::adjacent_substitution) {
      std::vector<std::size_t> sites;
      for (std::size_t p = 0; p < text.size(); ++p) {
        if (model.adjacency.contains(text[p])) sites.push_back(p);
      }
      if (sites.empty()) {
        kind = TypoEvent::random_substitution;
      } else {
        const std::size_t p = sites[pick(rng, sites.size())];
        const auto& keys = model.adjacency.at(text[p]);
        const char32_t c = keys[pick(rng, keys.size())];
        op = EditOp{EditKind::substitution, text[p], c, lookup_sub(cfg, text[p], c), p, p};
      }
    }
    switch (kind) {
      case TypoEvent::adjacent_substitution:
        break;
      case TypoEvent::random_substitution: {
        if (text.empty()) break;
        const std::size_t p = pick(rng, text.size());
        std::vector<char32_t> choices;
        for (char32_t c : model.alphabet) {
          if (c != text[p]) choices.push_back(c);
        }
        if (choices.empty()) break;
        const char32_t c = choices[pick(rng, choices.size())];
        op = EditOp{EditKind::substitution, text[p], c, lookup_sub(cfg, text[p], c), p, p};
        break;
      }
      case TypoEvent::deletion: {
        if (text.empty()) break;
        const std::size_t p = pick(rng, text.size());
        op = EditOp{EditKind::deletion, text[p], 0, lookup_del(cfg, text[p]), p, p};
        break;
      }
      case TypoEvent::insertion: {
        if (model.alphabet.empty()) break;
        const std::size_t p = pick(rng, text.size() + 1);
        const char32_t c = model.alphabet[pick(rng, model.alphabet.size())];
        op = EditOp{EditKind::insertion, 0, c, lookup_ins(cfg, c), p, p};
        break;
      }
      case TypoEvent::transposition: {
        std::vector<std::size_t> sites;
        for (std::size_t p = 0; p + 1 < text.size(); ++p) {
          if (text[p] != text[p + 1]) sites.push_back(p);
        }
        if (sites.empty()) break;
        const std::size_t p = sites[pick(rng, sites.size())];
        op = EditOp{EditKind::transposition, text[p], text[p + 1], lookup_trans(cfg, text[p], text[p + 1]), p, p};
        break;
      }
    }
    if (op) {
      text = apply_ops(text, {*op});
      out.events.push_back(*op);
    }
  }
  return out;
}

Classification classify_back(std::u32string_view perturbed, std::uint32_t source, const Taxonomy& tax,
                             const CostConfig& cfg, double delta) {
  if (tax.size() < 2) throw ValidationError("classify: taxonomy needs at least two labels");
  std::vector<Cost> dist(tax.size());
  for (std::size_t l = 0; l < tax.size(); ++l) dist[l] = weighted_distance(perturbed, tax.text(l), cfg);

  Classification c;
  c.nearest = static_cast<std::uint32_t>(std::min_element(dist.begin(), dist.end()) - dist.begin());
  c.best_distance = dist[c.nearest];
  c.runner_up_distance = std::numeric_limits<Cost>::infinity();
  for (std::size_t l = 0; l < dist.size(); ++l) {
    if (l != c.nearest) c.runner_up_distance = std::min(c.runner_up_distance, dist[l]);
    if (dist[l] <= c.best_distance + delta + kDistanceEps) c.candidates.push_back(static_cast<std::uint32_t>(l));
  }
  if (c.candidates.size() > 1) {
    c.outcome = Outcome::indeterminate;
  } else {
    c.outcome = c.nearest == source ? Outcome::recovered : Outcome::misassigned;
  }
  return c;
}

double ConfusionStats::pair_confusion_rate(std::uint32_t i, std::uint32_t j) const {
  auto count = [](const auto& table, std::uint32_t a, std::uint32_t b) -> std::size_t {
    auto it = table.find({a, b});
    return it == table.end() ? 0 : it->second;
  };
  const std::size_t denom = per_label.at(i).trials + per_label.at(j).trials;
  if (denom == 0) return 0.0;
  const std::size_t confused = count(misassigned, i, j) + count(misassigned, j, i) + count(indeterminate, i, j) +
                               count(indeterminate, j, i);
  return static_cast<double>(confused) / static_cast<double>(denom);
}

ConfusionStats simulate(const Taxonomy& tax, const CostConfig& cfg, const TypoModel& model_in, std::size_t trials,
                        double delta, std::size_t workers, const SimulationProgress& progress) {
  if (trials == 0) throw ValidationError("simulate: trials must be > 0");
  if (!(delta >= 0.0)) throw ValidationError("simulate: delta must be >= 0");
  model_in.validate();
  cfg.validate();
  TypoModel model = model_in;
  if (model.alphabet.empty()) {
    std::set<char32_t> chars;
    for (std::size_t l = 0; l < tax.size(); ++l) chars.insert(tax.text(l).begin(), tax.text(l).end());
    model.alphabet.assign(chars.begin(), chars.end());
  }

  const std::size_t n = tax.size();
  ConfusionStats stats;
  stats.trials = trials;
  stats.delta = delta;
  stats.seed = model.seed;
  stats.per_label.resize(n);

  struct Partial {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> misassigned;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> indeterminate;
  };
  std::vector<Partial> partials(n);
  std::atomic<std::size_t> done{0};
  parallel_for(
      n,
      [&](std::size_t l) {
        const auto source = static_cast<std::uint32_t>(l);
        std::mt19937_64 rng(splitmix64(model.seed ^ splitmix64(l + 1)));
        LabelOutcomes& out = stats.per_label[l];
        out.trials = trials / n + (l < trials % n ? 1 : 0);
        for (std::size_t t = 0; t < out.trials; ++t) {
          const Perturbation p = perturb(tax.text(l), model, rng, cfg);
          const Classification c = classify_back(p.text, source, tax, cfg, delta);
          switch (c.outcome) {
            case Outcome::recovered:
              ++out.recovered;
              break;
            case Outcome::misassigned:
              ++out.misassigned;
              ++partials[l].misassigned[{source, c.nearest}];
              break;
            case Outcome::indeterminate:
              ++out.indeterminate;
              for (std::uint32_t other : c.candidates) {
                if (other != source) ++partials[l].indeterminate[{source, other}];
              }
              break;
          }
        }
        const std::size_t finished = ++done;
        if (progress) progress(finished, n);
      },
      workers);

  for (const Partial& p : partials) {
    for (const auto& [key, v] : p.misassigned) stats.misassigned[key] += v;
    for (const auto& [key, v] : p.indeterminate) stats.indeterminate[key] += v;
  }
  return stats;
}

CorrelationReport correlate(const std::vector<PairScore>& pairs, const ConfusionStats& stats,
                            std::size_t bootstrap_resamples, std::uint64_t seed) {
  CorrelationReport report;
  report.pairs = pairs.size();
  report.isec.reserve(pairs.size());
  report.confusion.reserve(pairs.size());
  for (const PairScore& s : pairs) {
    report.isec.push_back(s.isec);
    report.confusion.push_back(stats.pair_confusion_rate(s.i, s.j));
  }
  report.spearman = spearman(report.isec, report.confusion);
  report.degenerate = !report.spearman.has_value();
  if (!report.degenerate) {
    if (auto ci = bootstrap_spearman(report.isec, report.confusion, bootstrap_resamples, 0.95, seed)) {
      report.ci_low = ci->low;
      report.ci_high = ci->high;
      report.bootstrap_resamples = ci->resamples_used;
    }
  }
  return report;
}

ValidationResult validate_ranking(const Taxonomy& tax, const CostConfig& cfg, const TypoModel& model,
                                  std::size_t trials, double delta, const std::vector<PairScore>& pairs,
                                  std::size_t workers) {
  if (trials < 100 * tax.size()) {
    throw ValidationError("validate: trials must be >= 100 * n (" + std::to_string(100 * tax.size()) + ")");
  }
  ValidationResult result;
  result.stats = simulate(tax, cfg, model, trials, delta, workers);
  result.correlation = correlate(pairs, result.stats, 1000, model.seed);
  return result;
}

nlohmann::json stats_to_json(const ConfusionStats& stats, const Taxonomy& tax) {
  auto labels = nlohmann::json::array();
  for (std::size_t l = 0; l < stats.per_label.size(); ++l) {
    const LabelOutcomes& o = stats.per_label[l];
    labels.push_back({{"id", l},
                      {"label", tax.label(l)},
                      {"trials", o.trials},
                      {"recovered", o.recovered},
                      {"misassigned", o.misassigned},
                      {"indeterminate", o.indeterminate}});
  }
  auto mis = nlohmann::json::array();
  for (const auto& [key, v] : stats.misassigned) {
    mis.push_back({{"source", tax.label(key.first)}, {"assigned", tax.label(key.second)}, {"count", v}});
  }
  auto ind = nlohmann::json::array();
  for (const auto& [key, v] : stats.indeterminate) {
    ind.push_back({{"source", tax.label(key.first)}, {"tied_with", tax.label(key.second)}, {"count", v}});
  }
  return {{"trials", stats.trials}, {"delta", stats.delta},       {"seed", stats.seed},
          {"per_label", labels},    {"misassigned", mis},          {"indeterminate", ind}};
}

nlohmann::json correlation_to_json(const CorrelationReport& report, const std::vector<PairScore>& pairs,
                                   const Taxonomy& tax) {
  auto points = nlohmann::json::array();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    points.push_back({{"label_i", tax.label(pairs[p].i)},
                      {"label_j", tax.label(pairs[p].j)},
                      {"isec", report.isec[p]},
                      {"confusion_rate", report.confusion[p]}});
  }
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"pairs", report.pairs},
          {"spearman", opt(report.spearman)},
          {"ci95_low", opt(report.ci_low)},
          {"ci95_high", opt(report.ci_high)},
          {"bootstrap_resamples", report.bootstrap_resamples},
          {"degenerate", report.degenerate},
          {"points", std::move(points)}};
}

}  // namespace isec
