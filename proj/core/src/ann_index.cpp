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

#include "isec/ann_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <queue>
#include <random>

#include "isec/errors.hpp"
#include "isec/hash.hpp"

namespace isec {

namespace {

// Per-thread visited marks keyed by an epoch so searches never clear memory.
struct VisitedSet {
  std::vector<std::uint32_t> marks;
  std::uint32_t epoch = 0;

  void reset(std::size_t n) {
    if (marks.size() < n) marks.assign(n, 0);
    if (++epoch == 0) {
      std::fill(marks.begin(), marks.end(), 0);
      epoch = 1;
    }
  }
  bool insert(std::uint32_t id) {
    if (marks[id] == epoch) return false;
    marks[id] = epoch;
    return true;
  }
};

VisitedSet& visited_for_thread() {
  thread_local VisitedSet set;
  return set;
}

bool sim_order(const Neighbor& a, const Neighbor& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.id < b.id;
}

}  // namespace

const char* to_string(IndexMode mode) { return mode == IndexMode::hnsw ? "hnsw" : "exact"; }

IndexMode index_mode_from_string(const std::string& text) {
  if (text == "hnsw") return IndexMode::hnsw;
  if (text == "exact") return IndexMode::exact;
  throw ValidationError("unknown index mode \"" + text + "\" (expected hnsw or exact)");
}

void IndexParams::validate() const {
  if (K < 1) throw ValidationError("index: K must be >= 1");
  if (mode == IndexMode::hnsw && ef_search < K) throw ValidationError("index: ef_search must be >= K");
  if (M < 2) throw ValidationError("index: M must be >= 2");
  if (ef_construction < 1) throw ValidationError("index: ef_construction must be >= 1");
}

AnnIndex AnnIndex::build(std::span<const EmbeddingVector> vectors, const IndexParams& params) {
  params.validate();
  if (vectors.empty()) throw ValidationError("index: no vectors");
  AnnIndex index;
  index.params_ = params;
  index.count_ = vectors.size();
  index.dim_ = vectors.front().dim();
  for (const EmbeddingVector& v : vectors) {
    if (v.dim() != index.dim_) throw ValidationError("index: dimension mismatch");
    if (v.norm() == 0.0) throw DomainError("index: zero-norm vector");
  }

  if (params.mode == IndexMode::exact) {
    index.raw_.assign(vectors.begin(), vectors.end());
    return index;
  }

  index.unit_.resize(index.count_ * index.dim_);
  for (std::size_t i = 0; i < index.count_; ++i) {
    const double n = vectors[i].norm();
    for (std::size_t d = 0; d < index.dim_; ++d) {
      index.unit_[i * index.dim_ + d] = static_cast<float>(vectors[i].values[d] / n);
    }
  }

  index.sparse_begin_.assign(index.count_ + 1, 0);
  for (std::size_t i = 0; i < index.count_; ++i) {
    const float* r = index.row(static_cast<std::uint32_t>(i));
    std::size_t nnz = 0;
    for (std::size_t d = 0; d < index.dim_; ++d) nnz += r[d] != 0.0f;
    if (nnz * 4 <= index.dim_) {
      for (std::size_t d = 0; d < index.dim_; ++d) {
        if (r[d] != 0.0f) {
          index.sparse_index_.push_back(static_cast<std::uint32_t>(d));
          index.sparse_value_.push_back(r[d]);
        }
      }
    }
    index.sparse_begin_[i + 1] = static_cast<std::uint32_t>(index.sparse_index_.size());
  }

  std::mt19937_64 rng(params.seed);
  const double level_mult = 1.0 / std::log(static_cast<double>(params.M));
  index.levels_.resize(index.count_);
  index.links_.resize(index.count_);
  for (std::size_t i = 0; i < index.count_; ++i) {
    // Uniform in (0, 1] from the top 53 bits; avoids implementation-defined distributions.
    const double u = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    index.levels_[i] = static_cast<int>(std::floor(-std::log(u) * level_mult));
    index.links_[i].resize(static_cast<std::size_t>(index.levels_[i]) + 1);
  }

  SearchStats stats;
  for (std::size_t i = 0; i < index.count_; ++i) {
    index.insert(static_cast<std::uint32_t>(i), index.levels_[i], stats);
  }
  index.build_evaluations_ = stats.distance_evaluations;
  return index;
}

namespace {

using Lane = float __attribute__((vector_size(16)));

Lane load_lane(const float* p) {
  Lane v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

// Four independent vector accumulators; a plain float loop would not be
// vectorized because that reassociates the reduction.
float dot_product(const float* x, const float* y, std::size_t n) {
  Lane a0 = {};
  Lane a1 = {};
  Lane a2 = {};
  Lane a3 = {};
  std::size_t d = 0;
  for (; d + 16 <= n; d += 16) {
    a0 += load_lane(x + d) * load_lane(y + d);
    a1 += load_lane(x + d + 4) * load_lane(y + d + 4);
    a2 += load_lane(x + d + 8) * load_lane(y + d + 8);
    a3 += load_lane(x + d + 12) * load_lane(y + d + 12);
  }
  const Lane s = (a0 + a1) + (a2 + a3);
  float sum = (s[0] + s[1]) + (s[2] + s[3]);
  for (; d < n; ++d) sum += x[d] * y[d];
  return sum;
}

}  // namespace

float AnnIndex::distance(std::uint32_t a, std::uint32_t b) const {
  // Iterate the sparser row against the other row's dense form. The sum is
  // symmetric in (a, b) so graph construction stays order-independent.
  std::uint32_t sa = sparse_begin_[a + 1] - sparse_begin_[a];
  std::uint32_t sb = sparse_begin_[b + 1] - sparse_begin_[b];
  if (sa == 0 && sb == 0) return 1.0f - dot_product(row(a), row(b), dim_);
  if (sb != 0 && (sa == 0 || sb < sa || (sb == sa && b < a))) {
    std::swap(a, b);
    std::swap(sa, sb);
  }
  const float* dense = row(b);
  const std::uint32_t begin = sparse_begin_[a];
  float dot = 0.0f;
  for (std::uint32_t k = begin; k < begin + sa; ++k) dot += sparse_value_[k] * dense[sparse_index_[k]];
  return 1.0f - dot;
}

std::vector<AnnIndex::Candidate> AnnIndex::search_layer(std::uint32_t query, std::uint32_t entry, std::size_t ef,
                                                        int level, SearchStats& stats) const {
  auto closer = [](const Candidate& a, const Candidate& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
  };
  auto farther = [&](const Candidate& a, const Candidate& b) { return closer(b, a); };
  // `frontier` pops the closest candidate; `found` pops the farthest kept result.
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(farther)> frontier(farther);
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(closer)> found(closer);

  VisitedSet& visited = visited_for_thread();
  visited.reset(count_);
  visited.insert(entry);
  ++stats.distance_evaluations;
  const Candidate start{distance(query, entry), entry};
  frontier.push(start);
  found.push(start);

  while (!frontier.empty()) {
    const Candidate current = frontier.top();
    if (closer(found.top(), current) && found.size() >= ef) break;
    frontier.pop();
    ++stats.visited_nodes;
    for (std::uint32_t next : links_[current.id][static_cast<std::size_t>(level)]) {
      if (!visited.insert(next)) continue;
      ++stats.distance_evaluations;
      const Candidate cand{distance(query, next), next};
      if (found.size() < ef || closer(cand, found.top())) {
        frontier.push(cand);
        found.push(cand);
        if (found.size() > ef) found.pop();
      }
    }
  }

  std::vector<Candidate> out;
  out.reserve(found.size());
  while (!found.empty()) {
    out.push_back(found.top());
    found.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> AnnIndex::select_neighbors(std::uint32_t /*base*/, std::vector<Candidate> candidates,
                                                      std::size_t max_count) const {
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
  });
  // Diversity heuristic: keep a candidate only if it is closer to the base
  // than to every neighbor already kept; top up with the nearest pruned ones.
  std::vector<std::uint32_t> kept;
  std::vector<std::uint32_t> pruned;
  for (const Candidate& c : candidates) {
    if (kept.size() >= max_count) break;
    bool diverse = true;
    for (std::uint32_t k : kept) {
      if (distance(c.id, k) < c.distance) {
        diverse = false;
        break;
      }
    }
    (diverse ? kept : pruned).push_back(c.id);
  }
  for (std::size_t i = 0; i < pruned.size() && kept.size() < max_count; ++i) kept.push_back(pruned[i]);
  return kept;
}

void AnnIndex::insert(std::uint32_t id, int level, SearchStats& stats) {
  if (max_level_ < 0) {
    entry_point_ = id;
    max_level_ = level;
    return;
  }

  std::uint32_t entry = entry_point_;
  for (int l = max_level_; l > level; --l) {
    entry = search_layer(id, entry, 1, l, stats).front().id;
  }
  for (int l = std::min(level, max_level_); l >= 0; --l) {
    std::vector<Candidate> candidates = search_layer(id, entry, params_.ef_construction, l, stats);
    entry = candidates.front().id;
    const auto lvl = static_cast<std::size_t>(l);
    std::vector<std::uint32_t> chosen = select_neighbors(id, candidates, params_.M);
    links_[id][lvl] = chosen;
    for (std::uint32_t other : chosen) {
      auto& back = links_[other][lvl];
      back.push_back(id);
      if (back.size() > max_degree(l)) {
        std::vector<Candidate> pool;
        pool.reserve(back.size());
        for (std::uint32_t n : back) pool.push_back({distance(other, n), n});
        stats.distance_evaluations += back.size();
        back = select_neighbors(other, std::move(pool), max_degree(l));
      }
    }
  }
  if (level > max_level_) {
    max_level_ = level;
    entry_point_ = id;
  }
}

NeighborList AnnIndex::search_exact(std::uint32_t query, std::size_t k, SearchStats& stats) const {
  NeighborList all;
  all.reserve(count_ - 1);
  for (std::uint32_t i = 0; i < count_; ++i) {
    if (i == query) continue;
    all.push_back({i, cosine_similarity(raw_[query], raw_[i])});
  }
  stats.distance_evaluations += all.size();
  stats.visited_nodes += all.size();
  const std::size_t keep = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), sim_order);
  all.resize(keep);
  return all;
}

NeighborList AnnIndex::search(std::uint32_t query, std::size_t k, SearchStats* stats) const {
  if (query >= count_) throw ValidationError("index: unknown label id " + std::to_string(query));
  if (k < 1) throw ValidationError("index: K must be >= 1");
  SearchStats local;
  SearchStats& s = stats ? *stats : local;
  if (params_.mode == IndexMode::exact) return search_exact(query, k, s);

  std::uint32_t entry = entry_point_;
  for (int l = max_level_; l > 0; --l) {
    entry = search_layer(query, entry, 1, l, s).front().id;
  }
  // One extra slot because the query itself is always the nearest hit.
  const std::size_t ef = std::max(params_.ef_search, k + 1);
  std::vector<Candidate> found = search_layer(query, entry, ef, 0, s);

  NeighborList out;
  out.reserve(k);
  for (const Candidate& c : found) {
    if (c.id == query) continue;
    out.push_back({c.id, 1.0 - static_cast<double>(c.distance)});
  }
  std::sort(out.begin(), out.end(), sim_order);
  if (out.size() > k) out.resize(k);
  return out;
}

std::uint64_t AnnIndex::fingerprint() const {
  std::uint64_t h = fnv1a64(to_string(params_.mode));
  auto mix = [&h](const void* data, std::size_t bytes) {
    h = fnv1a64(std::string_view(static_cast<const char*>(data), bytes), h);
  };
  mix(&count_, sizeof count_);
  mix(&dim_, sizeof dim_);
  if (params_.mode == IndexMode::exact) {
    for (const EmbeddingVector& v : raw_) mix(v.values.data(), v.values.size() * sizeof(double));
    return h;
  }
  mix(unit_.data(), unit_.size() * sizeof(float));
  for (const auto& node : links_) {
    for (const auto& layer : node) {
      const std::size_t n = layer.size();
      mix(&n, sizeof n);
      mix(layer.data(), layer.size() * sizeof(std::uint32_t));
    }
  }
  return h;
}

}  // namespace isec
