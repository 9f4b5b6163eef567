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
#include <span>
#include <string>
#include <vector>

#include "isec/embedding.hpp"

namespace isec {

enum class IndexMode { hnsw, exact };

const char* to_string(IndexMode mode);
IndexMode index_mode_from_string(const std::string& text);

struct IndexParams {
  std::size_t M = 16;
  std::size_t ef_construction = 200;
  std::size_t ef_search = 64;
  std::size_t K = 10;
  IndexMode mode = IndexMode::hnsw;
  std::uint64_t seed = 42;

  /// Throws ValidationError unless K >= 1, ef_search >= K and M >= 2.
  void validate() const;
};

struct Neighbor {
  std::uint32_t id;
  double similarity;

  bool operator==(const Neighbor&) const = default;
};

/// Descending similarity, ties by ascending id, never contains the query.
using NeighborList = std::vector<Neighbor>;

/// Per-search instrumentation. `distance_evaluations` counts vector
/// comparisons; `visited_nodes` counts nodes whose neighbor lists were
/// expanded (every stored vector in exact mode).
struct SearchStats {
  std::size_t distance_evaluations = 0;
  std::size_t visited_nodes = 0;
};

/// Top-K cosine retrieval over a fixed set of vectors. Exact mode scans all
/// vectors; hnsw mode walks a layered navigable small-world graph built once
/// with a seeded level generator. Immutable after build; search is safe to
/// call concurrently.
class AnnIndex {
 public:
  static AnnIndex build(std::span<const EmbeddingVector> vectors, const IndexParams& params);

  NeighborList search(std::uint32_t query, std::size_t k, SearchStats* stats = nullptr) const;

  std::size_t size() const noexcept { return count_; }
  std::size_t dim() const noexcept { return dim_; }
  const IndexParams& params() const noexcept { return params_; }

  /// Distance evaluations spent while building the graph (0 in exact mode).
  std::size_t build_distance_evaluations() const noexcept { return build_evaluations_; }
  int max_level() const noexcept { return max_level_; }

  /// Hash over stored vectors and graph links; stable for a fixed build.
  std::uint64_t fingerprint() const;

 private:
  struct Candidate {
    float distance;
    std::uint32_t id;
  };

  AnnIndex() = default;

  float distance(std::uint32_t a, std::uint32_t b) const;
  const float* row(std::uint32_t id) const { return unit_.data() + static_cast<std::size_t>(id) * dim_; }

  std::vector<Candidate> search_layer(std::uint32_t query, std::uint32_t entry, std::size_t ef, int level,
                                      SearchStats& stats) const;
  std::vector<std::uint32_t> select_neighbors(std::uint32_t base, std::vector<Candidate> candidates,
                                              std::size_t max_count) const;
  void insert(std::uint32_t id, int level, SearchStats& stats);
  std::size_t max_degree(int level) const { return level == 0 ? 2 * params_.M : params_.M; }

  NeighborList search_exact(std::uint32_t query, std::size_t k, SearchStats& stats) const;

  IndexParams params_;
  std::size_t count_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> unit_;                    // L2-normalized rows (hnsw)
  // Nonzero coordinates of rows sparse enough to beat the dense kernel;
  // sparse_begin_[id] == sparse_begin_[id + 1] marks a dense row.
  std::vector<std::uint32_t> sparse_begin_;
  std::vector<std::uint32_t> sparse_index_;
  std::vector<float> sparse_value_;
  std::vector<EmbeddingVector> raw_;           // exact mode keeps the input vectors
  std::vector<int> levels_;
  std::vector<std::vector<std::vector<std::uint32_t>>> links_;  // [node][level] -> neighbors
  std::uint32_t entry_point_ = 0;
  int max_level_ = -1;
  std::size_t build_evaluations_ = 0;
};

}  // namespace isec
