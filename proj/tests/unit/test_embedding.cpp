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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "isec/embedding.hpp"
#include "isec/errors.hpp"
#include "oracles.hpp"

namespace {

using isec::EmbeddingVector;

EmbeddingVector vec(std::vector<double> v) { return EmbeddingVector{std::move(v)}; }

TEST(Embedding, Deterministic) {
  EXPECT_EQ(isec::embed_ngram_hash("abc"), isec::embed_ngram_hash("abc"));
  EXPECT_EQ(isec::embed_ngram_hash("abc").dim(), 256u);
}

TEST(Embedding, NearbyLabelsAreSimilarButDistinct) {
  const double hashed = isec::cosine_similarity(isec::embed_ngram_hash("abc"), isec::embed_ngram_hash("abd"));
  const double exact = oracle::bag_cosine(oracle::ngram_bag("abc", 2, 4), oracle::ngram_bag("abd", 2, 4));
  EXPECT_GT(exact, 0.0);
  EXPECT_LT(exact, 1.0);
  EXPECT_GT(hashed, 0.0);
  EXPECT_LT(hashed, 1.0);
}

TEST(Embedding, NgramsMatchOracleBag) {
  const auto grams = isec::char_ngrams("caba", 2, 4);
  std::map<std::string, int> bag;
  for (const auto& g : grams) ++bag[g];
  EXPECT_EQ(bag, oracle::ngram_bag("caba", 2, 4));
}

TEST(Embedding, UnitNorm) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const std::string s = oracle::random_string(rng, 20, "abcdefghij ");
    if (s.empty()) continue;
    EXPECT_NEAR(isec::embed_ngram_hash(s).norm(), 1.0, 1e-9);
  }
}

TEST(Embedding, SeedChangesVectors) {
  isec::NgramParams other;
  other.seed = 99;
  EXPECT_NE(isec::embed_ngram_hash("cordoba"), isec::embed_ngram_hash("cordoba", other));
}

TEST(Dsn, Examples) {
  const auto a = vec({1, 0, 0});
  EXPECT_EQ(isec::dsn_raw(a, a), 0.0);
  EXPECT_EQ(isec::dsn(a, a), isec::kDsnFloor);
  EXPECT_NEAR(isec::dsn(a, vec({0, 1, 0})), 0.5, 1e-15);
  EXPECT_NEAR(isec::dsn(a, vec({-1, 0, 0})), 1.0, 1e-15);
}

TEST(Dsn, SymmetricBoundedScaleInvariant) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int t = 0; t < 500; ++t) {
    EmbeddingVector a, b;
    for (int i = 0; i < 16; ++i) {
      a.values.push_back(g(rng));
      b.values.push_back(g(rng));
    }
    const double d = isec::dsn(a, b);
    EXPECT_NEAR(d, isec::dsn(b, a), 1e-12);
    EXPECT_GE(d, isec::kDsnFloor);
    EXPECT_LE(d, 1.0);
    EmbeddingVector scaled = b;
    for (double& x : scaled.values) x *= 3.7;
    EXPECT_NEAR(isec::dsn(a, scaled), d, 1e-12);
  }
}

std::string rows(const std::vector<std::string>& labels, std::size_t dim) {
  std::ostringstream out;
  for (std::size_t l = 0; l < labels.size(); ++l) {
    out << labels[l] << '\t';
    for (std::size_t i = 0; i < dim; ++i) out << (i == 0 ? "" : " ") << (i == l ? 1.0 : 0.01 * (i % 7));
    out << '\n';
  }
  return out.str();
}

TEST(EmbeddingFile, CoversAllLabels) {
  const std::vector<std::string> labels = {"alpha", "beta", "gamma"};
  const auto load = isec::parse_embeddings(rows(labels, 384), labels);
  EXPECT_EQ(load.vectors.size(), 3u);
  EXPECT_EQ(load.vectors.at("beta").dim(), 384u);
  EXPECT_TRUE(load.warnings.empty());
}

TEST(EmbeddingFile, MissingLabelFallsBack) {
  const std::vector<std::string> labels = {"alpha", "beta", "gamma"};
  const std::string text = rows({"alpha", "beta"}, 384);
  EXPECT_THROW(isec::parse_embeddings(text, labels), isec::ValidationError);
  const auto load = isec::parse_embeddings(text, labels, isec::MissingPolicy::hash_fallback);
  ASSERT_EQ(load.vectors.size(), 3u);
  EXPECT_EQ(load.vectors.at("gamma").dim(), 384u);
  EXPECT_EQ(load.missing, std::vector<std::string>{"gamma"});
  EXPECT_FALSE(load.warnings.empty());
}

TEST(EmbeddingFile, DimensionMismatch) {
  const std::vector<std::string> labels = {"alpha", "beta"};
  const std::string text = rows({"alpha"}, 384) + rows({"beta"}, 383);
  EXPECT_THROW(isec::parse_embeddings(text, labels), isec::ValidationError);
}

TEST(EmbeddingFile, RejectsMalformedRows) {
  const std::vector<std::string> labels = {"a", "b"};
  EXPECT_ANY_THROW(isec::parse_embeddings("a\t1 x\nb\t1 0\n", labels));
  EXPECT_ANY_THROW(isec::parse_embeddings("a\t0 0\nb\t1 0\n", labels));
  EXPECT_ANY_THROW(isec::parse_embeddings("a\t1 0\na\t0 1\nb\t1 0\n", labels));
}

}  // namespace
