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
#include <string>
#include <string_view>
#include <vector>

#include "isec/cost_model.hpp"
#include "isec/text.hpp"

namespace isec {

enum class EditKind { substitution, deletion, insertion, transposition };

const char* to_string(EditKind kind);

/// One weighted edit. Positions refer to the source string (`src_pos`) and
/// the target string (`dst_pos`) at the point the edit applies.
///
///   substitution:  source[src_pos] = from  ->  target[dst_pos] = to
///   deletion:      source[src_pos] = from  removed
///   insertion:     target[dst_pos] = to    inserted before source[src_pos]
///   transposition: source[src_pos..+1] = (from, to) -> (to, from)
struct EditOp {
  EditKind kind;
  char32_t from = 0;
  char32_t to = 0;
  Cost cost = 0.0;
  std::size_t src_pos = 0;
  std::size_t dst_pos = 0;

  bool operator==(const EditOp&) const = default;
};

/// Minimal-cost edit script between two labels and the aggregate costs
/// derived from it.
struct PathSummary {
  std::vector<EditOp> ops;
  Cost total_cost = 0.0;
  std::size_t n_ops = 0;
  double cm = 0.0;  // mean operation cost
  double cp = 0.0;  // summed cost of insertions, deletions and substitutions
  std::size_t n_substitutions = 0;
  std::size_t n_deletions = 0;
  std::size_t n_insertions = 0;
  std::size_t n_transpositions = 0;
};

/// Builds the summary fields (totals, counts, cm, cp) from an ordered op list.
PathSummary summarize(std::vector<EditOp> ops);

/// Optimal-String-Alignment weighted Damerau-Levenshtein alignment.
///
/// The returned path has globally minimal total cost. Among equal-cost paths
/// the one with the fewest operations wins; remaining ties are broken by the
/// backtrace order substitution, deletion, insertion, transposition, which
/// makes cm and cp deterministic. Throws DomainError when both inputs are
/// empty.
PathSummary align(std::u32string_view source, std::u32string_view target, const CostConfig& cfg);
PathSummary align(std::string_view source_utf8, std::string_view target_utf8, const CostConfig& cfg);

/// Minimal total cost only; rolling rows, no witness.
Cost weighted_distance(std::u32string_view source, std::u32string_view target, const CostConfig& cfg);

/// Replays an op list (as produced by align or perturb) against `source`.
Label32 apply_ops(std::u32string_view source, const std::vector<EditOp>& ops);

/// Penalized mean cost cm + k * cp. Throws DomainError on an empty path.
double cmp(const PathSummary& path, double k);

}  // namespace isec
