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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isec/cost_model.hpp"
#include "isec/edit_engine.hpp"
#include "isec/scoring.hpp"

namespace isec {

enum class TypoEvent { adjacent_substitution, random_substitution, deletion, insertion, transposition };

inline constexpr std::size_t kTypoEventKinds = 5;
const char* to_string(TypoEvent event);

/// Stochastic typing-noise channel.
struct TypoModel {
  /// Indexed by TypoEvent; must sum to 1.
  std::array<double, kTypoEventKinds> probabilities{0.35, 0.10, 0.25, 0.15, 0.15};
  /// Symmetric keyboard neighborhood; neighbors sorted ascending.
  std::map<char32_t, std::vector<char32_t>> adjacency;
  /// Probability of applying 0, 1, 2, ... events to one label.
  std::vector<double> events_pmf{0.0, 1.0};
  /// Characters drawn for random substitutions and insertions, sorted. When
  /// empty the simulator uses the taxonomy's own alphabet.
  std::vector<char32_t> alphabet;
  std::uint64_t seed = 42;

  void validate() const;
};

/// Adds the undirected pair a <-> b to the adjacency map.
void add_adjacent(TypoModel& model, char32_t a, char32_t b);

/// Reads keyboard neighbors from a file with the cost-config shape: every
/// `substitutions` entry marks its two characters as adjacent.
void load_keyboard(TypoModel& model, const std::filesystem::path& path);
void keyboard_from_json(TypoModel& model, const nlohmann::json& j);

TypoModel typo_model_from_json(const nlohmann::json& j);
nlohmann::json typo_model_to_json(const TypoModel& model);

struct Perturbation {
  Label32 text;
  std::vector<EditOp> events;  // in application order, positions relative to the string at that step
};

/// Samples the event count, then each event kind and site. Event costs come
/// from `cfg`. An event with no admissible site (e.g. deleting from an empty
/// string) is skipped.
Perturbation perturb(std::u32string_view label, const TypoModel& model, std::mt19937_64& rng, const CostConfig& cfg);

enum class Outcome { recovered, misassigned, indeterminate };
const char* to_string(Outcome outcome);

struct Classification {
  Outcome outcome = Outcome::recovered;
  std::uint32_t nearest = 0;
  std::vector<std::uint32_t> candidates;  // every label within delta of the nearest distance
  Cost best_distance = 0.0;
  Cost runner_up_distance = 0.0;
};

/// Nearest-label correction by weighted edit distance from the perturbed
/// string. A gap of at most `delta` between the two closest labels is
/// indeterminate.
Classification classify_back(std::u32string_view perturbed, std::uint32_t source, const Taxonomy& tax,
                             const CostConfig& cfg, double delta);

struct LabelOutcomes {
  std::size_t trials = 0;
  std::size_t recovered = 0;
  std::size_t misassigned = 0;
  std::size_t indeterminate = 0;

  bool operator==(const LabelOutcomes&) const = default;
};

struct ConfusionStats {
  std::size_t trials = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::vector<LabelOutcomes> per_label;  // by label id
  /// (source, target) -> trials from source that were assigned to target.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> misassigned;
  /// (source, other) -> indeterminate trials from source whose candidate set held other.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> indeterminate;

  bool operator==(const ConfusionStats&) const = default;

  /// Share of trials from i or j that ended confused between the two.
  double pair_confusion_rate(std::uint32_t i, std::uint32_t j) const;
};

/// Runs `trials` perturb/classify rounds spread evenly over the labels.
/// Each label draws from its own generator seeded from model.seed, so the
/// result does not depend on the worker count.
/// Called from worker threads after each source label completes.
using SimulationProgress = std::function<void(std::size_t labels_done, std::size_t labels_total)>;

ConfusionStats simulate(const Taxonomy& tax, const CostConfig& cfg, const TypoModel& model, std::size_t trials,
                        double delta, std::size_t workers = 0, const SimulationProgress& progress = {});

struct CorrelationReport {
  std::size_t pairs = 0;
  std::optional<double> spearman;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::size_t bootstrap_resamples = 0;
  bool degenerate = false;  // no variance in isec or in confusion
  std::vector<double> isec;
  std::vector<double> confusion;
};

CorrelationReport correlate(const std::vector<PairScore>& pairs, const ConfusionStats& stats,
                            std::size_t bootstrap_resamples = 1000, std::uint64_t seed = 42);

struct ValidationResult {
  ConfusionStats stats;
  CorrelationReport correlation;
};

/// Requires trials >= 100 * n. Scores `pairs` against the empirical
/// confusion of a fresh simulation.
ValidationResult validate_ranking(const Taxonomy& tax, const CostConfig& cfg, const TypoModel& model,
                                  std::size_t trials, double delta, const std::vector<PairScore>& pairs,
                                  std::size_t workers = 0);

nlohmann::json stats_to_json(const ConfusionStats& stats, const Taxonomy& tax);
nlohmann::json correlation_to_json(const CorrelationReport& report, const std::vector<PairScore>& pairs,
                                   const Taxonomy& tax);

}  // namespace isec
