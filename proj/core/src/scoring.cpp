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

#include "isec/scoring.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include "isec/errors.hpp"
#include "isec/parallel.hpp"

namespace isec {

double fmn(std::uint64_t f_i, std::uint64_t f_j) {
  if (f_i < 1 || f_j < 1) throw DomainError("fmn: frequencies must be >= 1");
  return std::log10((static_cast<double>(f_i) + static_cast<double>(f_j)) / 2.0);
}

double isec_pair(double fmn_value, double dsn_value, double cmp_value, double alpha) {
  if (!(dsn_value > 0.0)) throw DomainError("isec: DSN must be > 0");
  if (!(cmp_value > 0.0)) throw DomainError("isec: CMP must be > 0");
  if (!(fmn_value >= 0.0)) throw DomainError("isec: FMN must be >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("isec: alpha must lie in [0, 1]");
  return (1.0 + fmn_value) / (std::pow(dsn_value, alpha) * std::pow(cmp_value, 1.0 - alpha));
}

Taxonomy Taxonomy::from_embeddings(std::vector<std::string> labels, std::vector<std::uint64_t> frequencies,
                                   std::vector<EmbeddingVector> embeddings) {
  if (labels.size() < 2) throw ValidationError("taxonomy needs at least two labels");
  if (frequencies.empty()) frequencies.assign(labels.size(), 1);
  if (frequencies.size() != labels.size() || embeddings.size() != labels.size()) {
    throw ValidationError("taxonomy: labels, frequencies and embeddings differ in length");
  }
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });

  Taxonomy tax;
  tax.labels_.reserve(labels.size());
  for (std::size_t idx : order) {
    if (labels[idx].empty()) throw ValidationError("taxonomy: empty label");
    if (!tax.labels_.empty() && tax.labels_.back() == labels[idx]) {
      throw ValidationError("taxonomy: duplicate label \"" + labels[idx] + "\"");
    }
    if (frequencies[idx] < 1) throw ValidationError("taxonomy: frequency of \"" + labels[idx] + "\" is 0");
    if (!tax.embeddings_.empty() && embeddings[idx].dim() != tax.embeddings_.front().dim()) {
      throw ValidationError("taxonomy: embedding dimension mismatch at \"" + labels[idx] + "\"");
    }
    tax.labels_.push_back(std::move(labels[idx]));
    tax.text_.push_back(utf8_decode(tax.labels_.back()));
    tax.folded_.push_back(case_fold(tax.labels_.back()));
    tax.frequencies_.push_back(frequencies[idx]);
    tax.embeddings_.push_back(std::move(embeddings[idx]));
  }
  return tax;
}

Taxonomy Taxonomy::from_labels(std::vector<std::string> labels, std::vector<std::uint64_t> frequencies,
                               const NgramParams& embedder) {
  std::vector<EmbeddingVector> embeddings;
  embeddings.reserve(labels.size());
  for (const std::string& label : labels) {
    if (label.empty()) throw ValidationError("taxonomy: empty label");
    embeddings.push_back(embed_ngram_hash(label, embedder));
  }
  return from_embeddings(std::move(labels), std::move(frequencies), std::move(embeddings));
}

std::optional<std::uint32_t> Taxonomy::find(const std::string& label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<std::uint32_t>(it - labels_.begin());
}

std::vector<std::string> flag_names(std::uint32_t flags) {
  std::vector<std::string> out;
  if (flags & kFlagDsnClamped) out.emplace_back("dsn-clamped");
  if (flags & kFlagCmpClamped) out.emplace_back("cmp-clamped");
  if (flags & kFlagAsymmetric) out.emplace_back("asymmetric");
  if (flags & kFlagDuplicateCollision) out.emplace_back("duplicate-collision");
  return out;
}

PairScore score_pair(const Taxonomy& tax, std::uint32_t source, std::uint32_t target, const CostConfig& cfg) {
  if (source == target) throw DomainError("score_pair: identity pair");
  PairScore s;
  s.i = std::min(source, target);
  s.j = std::max(source, target);
  s.path_reversed = source > target;
  s.path = align(tax.text(source), tax.text(target), cfg);
  s.similarity = cosine_similarity(tax.embedding(source), tax.embedding(target));
  const double raw = (1.0 - s.similarity) / 2.0;
  s.dsn = std::clamp(raw, kDsnFloor, 1.0);
  if (raw < kDsnFloor) s.flags |= kFlagDsnClamped;
  s.fmn = fmn(tax.frequency(source), tax.frequency(target));
  s.cm = s.path.cm;
  s.cp = s.path.cp;
  s.cmp = cmp(s.path, cfg.k);
  if (s.cmp < kCmpFloor) {
    s.cmp = kCmpFloor;
    s.flags |= kFlagCmpClamped;
  }
  s.isec = isec_pair(s.fmn, s.dsn, s.cmp, cfg.alpha);
  if (tax.fold_equal(source, target)) s.flags |= kFlagDuplicateCollision;
  return s;
}

void sort_ranking(std::vector<PairScore>& pairs) {
  std::sort(pairs.begin(), pairs.end(), [](const PairScore& a, const PairScore& b) {
    if (a.isec != b.isec) return a.isec > b.isec;
    if (a.dsn != b.dsn) return a.dsn < b.dsn;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Keeps the larger isec; equal scores keep the direction from the lower id.
void merge_into(std::map<std::pair<std::uint32_t, std::uint32_t>, PairScore>& merged, PairScore score) {
  auto [it, inserted] = merged.try_emplace({score.i, score.j}, score);
  if (inserted) return;
  PairScore& kept = it->second;
  const bool differs = kept.isec != score.isec;
  if (score.isec > kept.isec || (score.isec == kept.isec && !score.path_reversed && kept.path_reversed)) {
    const std::uint32_t flags = kept.flags;
    kept = std::move(score);
    kept.flags |= flags;
  }
  if (differs) kept.flags |= kFlagAsymmetric;
}

void finish(Ranking& ranking, std::vector<PairScore> scored) {
  for (PairScore& s : scored) {
    if (s.flags & kFlagDuplicateCollision) {
      ranking.collisions.push_back(std::move(s));
    } else {
      ranking.pairs.push_back(std::move(s));
    }
  }
  sort_ranking(ranking.pairs);
  sort_ranking(ranking.collisions);
}

}  // namespace

Ranking rank_taxonomy(const Taxonomy& tax, const CostConfig& cfg, const AnnIndex& index, std::size_t K,
                      Instrumentation* stats, std::size_t workers) {
  cfg.validate();
  if (index.size() != tax.size()) throw ValidationError("rank: index and taxonomy sizes differ");
  Instrumentation local;
  Instrumentation& inst = stats ? *stats : local;
  Ranking ranking;
  const std::size_t n = tax.size();
  if (K < 1) throw ValidationError("rank: K must be >= 1");
  std::size_t k_eff = K;
  if (K > n - 1) {
    k_eff = n - 1;
    ranking.warnings.push_back("K=" + std::to_string(K) + " exceeds n-1; clamped to " + std::to_string(k_eff));
  }
  inst.n = n;
  inst.k_requested = K;
  inst.k_effective = k_eff;
  inst.index_mode = to_string(index.params().mode);
  inst.ann_build_evaluations = index.build_distance_evaluations();

  const bool symmetric = cfg.is_symmetric();
  const auto start = Clock::now();
  std::vector<std::vector<PairScore>> per_label(n);
  parallel_for(
      n,
      [&](std::size_t q) {
        SearchStats ss;
        const NeighborList neighbors = index.search(static_cast<std::uint32_t>(q), k_eff, &ss);
        inst.ann_distance_evaluations += ss.distance_evaluations;
        inst.ann_visited_nodes += ss.visited_nodes;
        auto& out = per_label[q];
        for (const Neighbor& nb : neighbors) {
          out.push_back(score_pair(tax, static_cast<std::uint32_t>(q), nb.id, cfg));
          ++inst.morph_evaluations;
          if (!symmetric) {
            out.push_back(score_pair(tax, nb.id, static_cast<std::uint32_t>(q), cfg));
            ++inst.morph_evaluations;
          }
        }
      },
      workers);

  std::map<std::pair<std::uint32_t, std::uint32_t>, PairScore> merged;
  for (auto& scores : per_label) {
    for (PairScore& s : scores) merge_into(merged, std::move(s));
  }
  std::vector<PairScore> scored;
  scored.reserve(merged.size());
  for (auto& [_, s] : merged) scored.push_back(std::move(s));
  inst.unique_pairs = scored.size();
  finish(ranking, std::move(scored));
  inst.scoring_seconds = seconds_since(start);
  return ranking;
}

Ranking rank_taxonomy(const Taxonomy& tax, const CostConfig& cfg, const IndexParams& params, Instrumentation* stats,
                      std::size_t workers) {
  const auto start = Clock::now();
  const AnnIndex index = AnnIndex::build(tax.embeddings(), params);
  const double build_seconds = seconds_since(start);
  Instrumentation local;
  Instrumentation& inst = stats ? *stats : local;
  Ranking r = rank_taxonomy(tax, cfg, index, params.K, &inst, workers);
  inst.index_seconds = build_seconds;
  return r;
}

Ranking rank_all_pairs(const Taxonomy& tax, const CostConfig& cfg, Instrumentation* stats, std::size_t workers) {
  cfg.validate();
  Instrumentation local;
  Instrumentation& inst = stats ? *stats : local;
  const std::size_t n = tax.size();
  inst.n = n;
  inst.k_requested = n - 1;
  inst.k_effective = n - 1;
  inst.index_mode = "brute-force";
  const bool symmetric = cfg.is_symmetric();
  const auto start = Clock::now();

  std::vector<std::vector<PairScore>> per_label(n);
  parallel_for(
      n,
      [&](std::size_t a) {
        auto& out = per_label[a];
        for (std::size_t b = a + 1; b < n; ++b) {
          PairScore s = score_pair(tax, static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), cfg);
          ++inst.morph_evaluations;
          if (!symmetric) {
            PairScore back = score_pair(tax, static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(a), cfg);
            ++inst.morph_evaluations;
            if (back.isec != s.isec) {
              const std::uint32_t flags = s.flags | back.flags | kFlagAsymmetric;
              if (back.isec > s.isec) s = std::move(back);
              s.flags = flags;
            }
          }
          out.push_back(std::move(s));
        }
      },
      workers);

  std::vector<PairScore> scored;
  for (auto& scores : per_label) {
    for (PairScore& s : scores) scored.push_back(std::move(s));
  }
  inst.unique_pairs = scored.size();
  Ranking ranking;
  finish(ranking, std::move(scored));
  inst.scoring_seconds = seconds_since(start);
  return ranking;
}

}  // namespace isec
