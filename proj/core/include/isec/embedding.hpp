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
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace isec {

/// Lower bound applied to the semantic distance of distinct labels so that
/// the scoring denominator never vanishes.
inline constexpr double kDsnFloor = 1e-6;

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const noexcept { return values.size(); }
  double norm() const;

  bool operator==(const EmbeddingVector&) const = default;
};

struct NgramParams {
  std::size_t dim = 256;
  std::size_t n_lo = 2;
  std::size_t n_hi = 4;
  std::uint64_t seed = 0x15ECULL;

  bool operator==(const NgramParams&) const = default;
};

/// Character n-gram bag of the label (with start/end boundary markers),
/// feature-hashed into `dim` buckets and L2-normalized.
EmbeddingVector embed_ngram_hash(std::string_view label, const NgramParams& params = {});

/// The n-grams embed_ngram_hash counts, as UTF-8 strings. \x02 and \x03 mark
/// the label boundaries.
std::vector<std::string> char_ngrams(std::string_view label, std::size_t n_lo, std::size_t n_hi);

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

/// (1 - cos) / 2 without the floor.
double dsn_raw(const EmbeddingVector& a, const EmbeddingVector& b);

/// Normalized semantic distance in [kDsnFloor, 1].
double dsn(const EmbeddingVector& a, const EmbeddingVector& b);

enum class MissingPolicy { fail, hash_fallback };

struct EmbeddingLoad {
  std::map<std::string, EmbeddingVector> vectors;
  std::vector<std::string> missing;   // labels with no row in the file
  std::vector<std::string> warnings;
};

/// Reads `label<TAB>v1 v2 ... vD` rows and maps them onto `labels`.
/// Missing labels either raise ValidationError or are hash-embedded at the
/// file's dimension, depending on `policy`.
EmbeddingLoad load_embeddings(const std::filesystem::path& path, const std::vector<std::string>& labels,
                              MissingPolicy policy = MissingPolicy::fail, NgramParams fallback = {});
EmbeddingLoad parse_embeddings(std::string_view text, const std::vector<std::string>& labels,
                               MissingPolicy policy = MissingPolicy::fail, NgramParams fallback = {});

}  // namespace isec
