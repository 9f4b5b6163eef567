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

#include "isec/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "isec/errors.hpp"
#include "isec/hash.hpp"
#include "isec/text.hpp"

namespace isec {

double EmbeddingVector::norm() const {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum);
}

std::vector<std::string> char_ngrams(std::string_view label, std::size_t n_lo, std::size_t n_hi) {
  Label32 marked;
  marked.push_back(U'\x02');
  marked += utf8_decode(label);
  marked.push_back(U'\x03');
  std::vector<std::string> grams;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    if (n > marked.size()) break;
    for (std::size_t i = 0; i + n <= marked.size(); ++i) {
      grams.push_back(utf8_encode(std::u32string_view(marked).substr(i, n)));
    }
  }
  return grams;
}

EmbeddingVector embed_ngram_hash(std::string_view label, const NgramParams& params) {
  if (label.empty()) throw DomainError("embed: empty label");
  if (params.dim < 8) throw ValidationError("embed: dimension must be >= 8");
  if (params.n_lo < 1 || params.n_hi < params.n_lo) throw ValidationError("embed: invalid n-gram range");

  EmbeddingVector out;
  out.values.assign(params.dim, 0.0);
  for (const std::string& gram : char_ngrams(label, params.n_lo, params.n_hi)) {
    out.values[seeded_hash(gram, params.seed) % params.dim] += 1.0;
  }
  const double n = out.norm();
  for (double& v : out.values) v /= n;
  return out;
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) throw ValidationError("cosine: dimension mismatch");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) throw DomainError("cosine: zero-norm vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double dsn_raw(const EmbeddingVector& a, const EmbeddingVector& b) {
  return (1.0 - cosine_similarity(a, b)) / 2.0;
}

double dsn(const EmbeddingVector& a, const EmbeddingVector& b) {
  return std::clamp(dsn_raw(a, b), kDsnFloor, 1.0);
}

EmbeddingLoad parse_embeddings(std::string_view text, const std::vector<std::string>& labels, MissingPolicy policy,
                               NgramParams fallback) {
  const std::set<std::string> wanted(labels.begin(), labels.end());
  EmbeddingLoad result;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError("embeddings line " + std::to_string(line_no) + ": missing TAB separator");
    }
    std::string label(line.substr(0, tab));
    std::string_view rest = line.substr(tab + 1);
    EmbeddingVector vec;
    while (!rest.empty()) {
      while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
      if (rest.empty()) break;
      std::size_t end = rest.find(' ');
      if (end == std::string_view::npos) end = rest.size();
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + end, v);
      if (ec != std::errc() || ptr != rest.data() + end || !std::isfinite(v)) {
        throw ParseError("embeddings line " + std::to_string(line_no) + ": bad number \"" +
                         std::string(rest.substr(0, end)) + "\"");
      }
      vec.values.push_back(v);
      rest.remove_prefix(end);
    }
    if (vec.values.empty()) throw ParseError("embeddings line " + std::to_string(line_no) + ": empty vector");
    if (dim == 0) {
      dim = vec.dim();
    } else if (vec.dim() != dim) {
      throw ValidationError("embeddings line " + std::to_string(line_no) + ": dimension " +
                            std::to_string(vec.dim()) + " differs from " + std::to_string(dim));
    }
    if (!wanted.contains(label)) continue;
    if (vec.norm() == 0.0) throw ValidationError("embeddings line " + std::to_string(line_no) + ": zero vector");
    if (!result.vectors.emplace(label, std::move(vec)).second) {
      throw ValidationError("embeddings line " + std::to_string(line_no) + ": duplicate label \"" + label + "\"");
    }
  }

  for (const std::string& label : wanted) {
    if (!result.vectors.contains(label)) result.missing.push_back(label);
  }
  if (!result.missing.empty()) {
    if (policy == MissingPolicy::fail) {
      throw ValidationError("embeddings missing for " + std::to_string(result.missing.size()) +
                            " label(s), first: \"" + result.missing.front() + "\"");
    }
    if (dim != 0) fallback.dim = dim;
    for (const std::string& label : result.missing) {
      result.vectors.emplace(label, embed_ngram_hash(label, fallback));
      result.warnings.push_back("no precomputed embedding for \"" + label + "\"; using n-gram hash embedding");
    }
  }
  return result;
}

EmbeddingLoad load_embeddings(const std::filesystem::path& path, const std::vector<std::string>& labels,
                              MissingPolicy policy, NgramParams fallback) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open embeddings file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_embeddings(buf.str(), labels, policy, fallback);
}

}  // namespace isec
