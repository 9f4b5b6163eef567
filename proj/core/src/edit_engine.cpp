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

#include "isec/edit_engine.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "isec/errors.hpp"

namespace isec {

namespace {

// Tolerance for treating two accumulated path costs as tied.
constexpr double kTieEps = 1e-9;

enum class Step : unsigned char { none, match, substitution, deletion, insertion, transposition };

// `penalty` tracks the running cp so that, among paths of equal cost and
// length, the one spending less on transpositions wins. That key is
// direction-independent, so cm and cp agree for (a,b) and (b,a) whenever the
// costs are symmetric.
struct Cell {
  Cost cost;
  std::uint32_t n_ops;
  Cost penalty;
};

bool better(const Cell& candidate, const Cell& incumbent) {
  if (candidate.cost < incumbent.cost - kTieEps) return true;
  if (candidate.cost > incumbent.cost + kTieEps) return false;
  if (candidate.n_ops != incumbent.n_ops) return candidate.n_ops < incumbent.n_ops;
  return candidate.penalty > incumbent.penalty + kTieEps;
}

bool transposable(std::u32string_view a, std::u32string_view b, std::size_t i, std::size_t j) {
  return i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] && a[i - 1] != a[i - 2];
}

}  // namespace

const char* to_string(EditKind kind) {
  switch (kind) {
    case EditKind::substitution:
      return "substitution";
    case EditKind::deletion:
      return "deletion";
    case EditKind::insertion:
      return "insertion";
    case EditKind::transposition:
      return "transposition";
  }
  return "unknown";
}

PathSummary summarize(std::vector<EditOp> ops) {
  PathSummary s;
  s.ops = std::move(ops);
  s.n_ops = s.ops.size();
  for (const EditOp& op : s.ops) {
    s.total_cost += op.cost;
    switch (op.kind) {
      case EditKind::substitution:
        ++s.n_substitutions;
        s.cp += op.cost;
        break;
      case EditKind::deletion:
        ++s.n_deletions;
        s.cp += op.cost;
        break;
      case EditKind::insertion:
        ++s.n_insertions;
        s.cp += op.cost;
        break;
      case EditKind::transposition:
        ++s.n_transpositions;
        break;
    }
  }
  s.cm = s.n_ops > 0 ? s.total_cost / static_cast<double>(s.n_ops) : 0.0;
  return s;
}

PathSummary align(std::u32string_view a, std::u32string_view b, const CostConfig& cfg) {
  if (a.empty() && b.empty()) throw DomainError("align: both labels are empty");

  const std::size_t rows = a.size() + 1;
  const std::size_t cols = b.size() + 1;
  thread_local std::vector<Cell> table;
  thread_local std::vector<Step> steps;
  table.assign(rows * cols, Cell{0.0, 0, 0.0});
  steps.assign(rows * cols, Step::none);
  auto at = [cols](std::size_t i, std::size_t j) { return i * cols + j; };

  for (std::size_t i = 1; i < rows; ++i) {
    const Cell& up = table[at(i - 1, 0)];
    const Cost c = lookup_del(cfg, a[i - 1]);
    table[at(i, 0)] = {up.cost + c, up.n_ops + 1, up.penalty + c};
    steps[at(i, 0)] = Step::deletion;
  }
  for (std::size_t j = 1; j < cols; ++j) {
    const Cell& left = table[at(0, j - 1)];
    const Cost c = lookup_ins(cfg, b[j - 1]);
    table[at(0, j)] = {left.cost + c, left.n_ops + 1, left.penalty + c};
    steps[at(0, j)] = Step::insertion;
  }

  for (std::size_t i = 1; i < rows; ++i) {
    for (std::size_t j = 1; j < cols; ++j) {
      const Cell& diag = table[at(i - 1, j - 1)];
      Cell best;
      Step step;
      if (a[i - 1] == b[j - 1]) {
        best = diag;
        step = Step::match;
      } else {
        const Cost c = lookup_sub(cfg, a[i - 1], b[j - 1]);
        best = {diag.cost + c, diag.n_ops + 1, diag.penalty + c};
        step = Step::substitution;
      }
      const Cell& up = table[at(i - 1, j)];
      const Cost del_cost = lookup_del(cfg, a[i - 1]);
      if (Cell del{up.cost + del_cost, up.n_ops + 1, up.penalty + del_cost}; better(del, best)) {
        best = del;
        step = Step::deletion;
      }
      const Cell& left = table[at(i, j - 1)];
      const Cost ins_cost = lookup_ins(cfg, b[j - 1]);
      if (Cell ins{left.cost + ins_cost, left.n_ops + 1, left.penalty + ins_cost}; better(ins, best)) {
        best = ins;
        step = Step::insertion;
      }
      if (transposable(a, b, i, j)) {
        const Cell& back = table[at(i - 2, j - 2)];
        if (Cell tr{back.cost + lookup_trans(cfg, a[i - 2], a[i - 1]), back.n_ops + 1, back.penalty};
            better(tr, best)) {
          best = tr;
          step = Step::transposition;
        }
      }
      table[at(i, j)] = best;
      steps[at(i, j)] = step;
    }
  }

  std::vector<EditOp> ops;
  std::size_t i = a.size();
  std::size_t j = b.size();
  while (i > 0 || j > 0) {
    switch (steps[at(i, j)]) {
      case Step::match:
        --i;
        --j;
        break;
      case Step::substitution:
        ops.push_back({EditKind::substitution, a[i - 1], b[j - 1], lookup_sub(cfg, a[i - 1], b[j - 1]), i - 1, j - 1});
        --i;
        --j;
        break;
      case Step::deletion:
        ops.push_back({EditKind::deletion, a[i - 1], 0, lookup_del(cfg, a[i - 1]), i - 1, j});
        --i;
        break;
      case Step::insertion:
        ops.push_back({EditKind::insertion, 0, b[j - 1], lookup_ins(cfg, b[j - 1]), i, j - 1});
        --j;
        break;
      case Step::transposition:
        ops.push_back({EditKind::transposition, a[i - 2], a[i - 1], lookup_trans(cfg, a[i - 2], a[i - 1]), i - 2,
                       j - 2});
        i -= 2;
        j -= 2;
        break;
      case Step::none:
        i = 0;
        j = 0;
        break;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return summarize(std::move(ops));
}

PathSummary align(std::string_view source_utf8, std::string_view target_utf8, const CostConfig& cfg) {
  return align(utf8_decode(source_utf8), utf8_decode(target_utf8), cfg);
}

Cost weighted_distance(std::u32string_view a, std::u32string_view b, const CostConfig& cfg) {
  const std::size_t cols = b.size() + 1;
  thread_local std::vector<Cost> prev2;
  thread_local std::vector<Cost> prev;
  thread_local std::vector<Cost> cur;
  prev2.assign(cols, 0.0);
  prev.assign(cols, 0.0);
  cur.assign(cols, 0.0);
  for (std::size_t j = 1; j < cols; ++j) prev[j] = prev[j - 1] + lookup_ins(cfg, b[j - 1]);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = prev[0] + lookup_del(cfg, a[i - 1]);
    for (std::size_t j = 1; j < cols; ++j) {
      Cost best = a[i - 1] == b[j - 1] ? prev[j - 1] : prev[j - 1] + lookup_sub(cfg, a[i - 1], b[j - 1]);
      best = std::min(best, prev[j] + lookup_del(cfg, a[i - 1]));
      best = std::min(best, cur[j - 1] + lookup_ins(cfg, b[j - 1]));
      if (transposable(a, b, i, j)) best = std::min(best, prev2[j - 2] + lookup_trans(cfg, a[i - 2], a[i - 1]));
      cur[j] = best;
    }
    std::swap(prev2, prev);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

Label32 apply_ops(std::u32string_view source, const std::vector<EditOp>& ops) {
  Label32 out;
  out.reserve(source.size() + ops.size());
  std::size_t cursor = 0;
  for (const EditOp& op : ops) {
    while (cursor < op.src_pos && cursor < source.size()) out.push_back(source[cursor++]);
    switch (op.kind) {
      case EditKind::substitution:
        out.push_back(op.to);
        ++cursor;
        break;
      case EditKind::deletion:
        ++cursor;
        break;
      case EditKind::insertion:
        out.push_back(op.to);
        break;
      case EditKind::transposition:
        out.push_back(op.to);
        out.push_back(op.from);
        cursor += 2;
        break;
    }
  }
  while (cursor < source.size()) out.push_back(source[cursor++]);
  return out;
}

double cmp(const PathSummary& path, double k) {
  if (path.n_ops == 0) throw DomainError("cmp: empty edit path (identity pair)");
  if (k < 0.0) throw DomainError("cmp: k must be >= 0");
  return path.cm + k * path.cp;
}

}  // namespace isec
