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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isec/ann_index.hpp"
#include "isec/cost_model.hpp"
#include "isec/edit_engine.hpp"
#include "isec/embedding.hpp"
#include "isec/text.hpp"

namespace isec {

/// Lower bound for CMP when an override makes a path free.
inline constexpr double kCmpFloor = 1e-6;

/// log10 of the mean pair frequency. Throws DomainError for counts < 1.
double fmn(std::uint64_t f_i, std::uint64_t f_j);

/// (1 + fmn) / (dsn^alpha * cmp^(1 - alpha)).
/// Throws DomainError unless dsn > 0, cmp > 0, fmn >= 0 and alpha in [0, 1].
double isec_pair(double fmn, double dsn, double cmp, double alpha);

/// Distinct normalized labels in byte order, with counts and one embedding
/// each. Label ids are positions in that order, so they do not depend on
/// the order the labels were supplied in.
class Taxonomy {
 public:
  /// `frequencies` may be empty (every label gets 1). Throws ValidationError
  /// on duplicates, fewer than two labels, zero counts or empty labels.
  static Taxonomy from_labels(std::vector<std::string> labels, std::vector<std::uint64_t> frequencies = {},
                              const NgramParams& embedder = {});
  /// Takes precomputed vectors aligned with `labels`.
  static Taxonomy from_embeddings(std::vector<std::string> labels, std::vector<std::uint64_t> frequencies,
                                  std::vector<EmbeddingVector> embeddings);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t id) const { return labels_.at(id); }
  const Label32& text(std::size_t id) const { return text_.at(id); }
  std::uint64_t frequency(std::size_t id) const { return frequencies_.at(id); }
  const EmbeddingVector& embedding(std::size_t id) const { return embeddings_.at(id); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<EmbeddingVector>& embeddings() const noexcept { return embeddings_; }
  std::optional<std::uint32_t> find(const std::string& label) const;
  /// True when the two labels coincide after case folding.
  bool fold_equal(std::size_t a, std::size_t b) const { return folded_.at(a) == folded_.at(b); }

 private:
  std::vector<std::string> labels_;
  std::vector<Label32> text_;
  std::vector<std::string> folded_;
  std::vector<std::uint64_t> frequencies_;
  std::vector<EmbeddingVector> embeddings_;
};

enum PairFlag : std::uint32_t {
  kFlagNone = 0,
  kFlagDsnClamped = 1u << 0,          // raw semantic distance fell below the floor
  kFlagCmpClamped = 1u << 1,          // zero-cost path, CMP raised to the floor
  kFlagAsymmetric = 1u << 2,          // isec(i,j) != isec(j,i); the max is reported
  kFlagDuplicateCollision = 1u << 3,  // labels coincide under case folding
};

std::vector<std::string> flag_names(std::uint32_t flags);

/// One scored unordered pair. `i < j` always; `path` transforms label i into
/// label j unless `path_reversed` is set.
struct PairScore {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  double similarity = 0.0;  // cosine of the embeddings
  double fmn = 0.0;
  double dsn = 0.0;
  double cm = 0.0;
  double cp = 0.0;
  double cmp = 0.0;
  double isec = 0.0;
  PathSummary path;
  bool path_reversed = false;
  std::uint32_t flags = kFlagNone;
};

/// Scores the directed pair source -> target.
PairScore score_pair(const Taxonomy& tax, std::uint32_t source, std::uint32_t target, const CostConfig& cfg);

/// Counters collected while ranking. Atomic fields are updated by parallel
/// workers.
struct Instrumentation {
  std::size_t n = 0;
  std::size_t k_requested = 0;
  std::size_t k_effective = 0;
  std::string index_mode;
  std::atomic<std::size_t> morph_evaluations{0};
  std::atomic<std::size_t> ann_distance_evaluations{0};
  std::atomic<std::size_t> ann_visited_nodes{0};
  std::size_t ann_build_evaluations = 0;
  std::size_t unique_pairs = 0;
  double index_seconds = 0.0;
  double scoring_seconds = 0.0;

  std::size_t brute_force_pairs() const { return n < 2 ? 0 : n * (n - 1) / 2; }
};

struct Ranking {
  std::vector<PairScore> pairs;
  // Pairs whose labels only differ by case; kept out of `pairs`.
  std::vector<PairScore> collisions;
  std::vector<std::string> warnings;
};

/// Orders pairs by isec descending, then dsn ascending, then (i, j).
void sort_ranking(std::vector<PairScore>& pairs);

/// Two-stage ranking: Top-K semantic neighbors per label from `index`, then
/// weighted alignment and ISEC for each retrieved pair. Directed results are
/// merged into unordered pairs keeping the larger isec. For asymmetric cost
/// configurations the opposite direction of each retrieved pair is scored
/// too. K is clamped to n - 1 with a warning.
Ranking rank_taxonomy(const Taxonomy& tax, const CostConfig& cfg, const AnnIndex& index, std::size_t K,
                      Instrumentation* stats = nullptr, std::size_t workers = 0);

/// Builds the index from `params` and ranks.
Ranking rank_taxonomy(const Taxonomy& tax, const CostConfig& cfg, const IndexParams& params,
                      Instrumentation* stats = nullptr, std::size_t workers = 0);

/// Every unordered pair, scored in both directions when costs are
/// asymmetric.
Ranking rank_all_pairs(const Taxonomy& tax, const CostConfig& cfg, Instrumentation* stats = nullptr,
                       std::size_t workers = 0);

}  // namespace isec
