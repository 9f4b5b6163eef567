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

#include <random>

#include "isec/edit_engine.hpp"
#include "isec/errors.hpp"
#include "isec/text.hpp"
#include "oracles.hpp"

namespace {

using isec::CostConfig;
using isec::EditKind;

TEST(Align, SingleInsertion) {
  const auto p = isec::align("cba", "caba", CostConfig{});
  ASSERT_EQ(p.ops.size(), 1u);
  EXPECT_EQ(p.ops[0].kind, EditKind::insertion);
  EXPECT_EQ(p.ops[0].to, U'a');
  EXPECT_EQ(p.total_cost, 1.0);
  EXPECT_EQ(p.n_ops, 1u);
  EXPECT_EQ(p.cm, 1.0);
  EXPECT_EQ(p.cp, 1.0);
}

TEST(Align, SingleTransposition) {
  const auto p = isec::align("AAGX110216", "AGAX110216", CostConfig{});
  ASSERT_EQ(p.ops.size(), 1u);
  EXPECT_EQ(p.ops[0].kind, EditKind::transposition);
  EXPECT_EQ(p.ops[0].src_pos, 1u);
  EXPECT_EQ(p.total_cost, 1.0);
  EXPECT_EQ(p.cm, 1.0);
  EXPECT_EQ(p.cp, 0.0);
}

TEST(Align, KittenSitting) {
  const auto p = isec::align("kitten", "sitting", CostConfig{});
  EXPECT_EQ(p.total_cost, 3.0);
  EXPECT_EQ(p.n_ops, 3u);
  EXPECT_EQ(p.cm, 1.0);
  EXPECT_EQ(p.cp, 3.0);
  EXPECT_EQ(oracle::osa_distance("kitten", "sitting"), 3);
}

TEST(Align, EmptyInputs) {
  EXPECT_THROW(isec::align("", "", CostConfig{}), isec::DomainError);
  const auto p = isec::align("", "abc", CostConfig{});
  EXPECT_EQ(p.n_insertions, 3u);
  EXPECT_EQ(p.total_cost, 3.0);
  const auto q = isec::align("ab", "", CostConfig{});
  EXPECT_EQ(q.n_deletions, 2u);
}

TEST(Align, IdenticalLabelsHaveEmptyPath) {
  const auto p = isec::align("same", "same", CostConfig{});
  EXPECT_EQ(p.n_ops, 0u);
  EXPECT_EQ(p.total_cost, 0.0);
  EXPECT_THROW(isec::cmp(p, 0.0), isec::DomainError);
}

TEST(Align, EqualCostPrefersFewerOperations) {
  // sub(a,b) = 2 costs the same as delete + insert; one op wins.
  CostConfig cfg;
  cfg.set_sub(U'a', U'b', 2.0);
  const auto p = isec::align("xa", "xb", cfg);
  EXPECT_EQ(p.total_cost, 2.0);
  ASSERT_EQ(p.n_ops, 1u);
  EXPECT_EQ(p.ops[0].kind, EditKind::substitution);
}

TEST(Align, OverridesAreUsed) {
  CostConfig cfg;
  cfg.set_sub(U'G', U'T', 0.35);
  const auto p = isec::align("AGC", "ATC", cfg);
  EXPECT_DOUBLE_EQ(p.total_cost, 0.35);
  cfg.set_trans(U'A', U'G', 0.3);
  EXPECT_DOUBLE_EQ(isec::align("AGX", "GAX", cfg).total_cost, 0.3);
}

TEST(Align, UnicodeScalarsAreSingleEdits) {
  const auto p = isec::align("Córdoba", "Cordoba", CostConfig{});
  EXPECT_EQ(p.total_cost, 1.0);
  EXPECT_EQ(p.n_substitutions, 1u);
}

TEST(Cmp, Examples) {
  isec::PathSummary p;
  p.n_ops = 1;
  p.cm = 1.0;
  p.cp = 1.0;
  EXPECT_EQ(isec::cmp(p, 0.0), 1.0);
  p.cp = 0.0;
  EXPECT_EQ(isec::cmp(p, 5.0), 1.0);
  const auto kitten = isec::align("kitten", "sitting", CostConfig{});
  EXPECT_EQ(isec::cmp(kitten, 1.0), 4.0);
  EXPECT_THROW(isec::cmp(kitten, -1.0), isec::DomainError);
}

TEST(AlignProperty, ClassicalReduction) {
  std::mt19937_64 rng(101);
  const CostConfig unit;
  for (int t = 0; t < 3000; ++t) {
    const std::string a = oracle::random_string(rng, 12, "abcd");
    const std::string b = oracle::random_string(rng, 12, "abcd");
    if (a.empty() && b.empty()) continue;
    ASSERT_EQ(isec::align(a, b, unit).total_cost, oracle::osa_distance(a, b)) << a << " / " << b;
  }
}

CostConfig random_config(std::mt19937_64& rng, const std::string& alphabet, bool symmetric) {
  std::uniform_real_distribution<double> cost(0.05, 2.0);
  std::bernoulli_distribution coin(0.5);
  CostConfig cfg;
  cfg.symmetric_subs = symmetric;
  cfg.default_cost = cost(rng);
  for (char a : alphabet) {
    if (coin(rng)) cfg.ins_overrides[static_cast<char32_t>(a)] = cost(rng);
    if (coin(rng)) cfg.del_overrides[static_cast<char32_t>(a)] = cost(rng);
    for (char b : alphabet) {
      if (a == b) continue;
      if (coin(rng) && !(symmetric && cfg.sub_overrides.contains({static_cast<char32_t>(b), static_cast<char32_t>(a)}))) {
        cfg.set_sub(a, b, cost(rng));
      }
      if (a < b && coin(rng)) cfg.set_trans(a, b, cost(rng));
    }
  }
  cfg.validate();
  return cfg;
}

oracle::Weights weights_of(const CostConfig& cfg) {
  return {[&cfg](char a, char b) { return isec::lookup_sub(cfg, a, b); },
          [&cfg](char c) { return isec::lookup_ins(cfg, c); },
          [&cfg](char c) { return isec::lookup_del(cfg, c); },
          [&cfg](char a, char b) { return isec::lookup_trans(cfg, a, b); }};
}

TEST(AlignProperty, WeightedMatchesRecursiveOracle) {
  std::mt19937_64 rng(7);
  for (int c = 0; c < 40; ++c) {
    const CostConfig cfg = random_config(rng, "abcd", c % 2 == 0);
    const auto w = weights_of(cfg);
    for (int t = 0; t < 50; ++t) {
      const std::string a = oracle::random_string(rng, 9, "abcd");
      const std::string b = oracle::random_string(rng, 9, "abcd");
      if (a.empty() && b.empty()) continue;
      const double expected = oracle::weighted_osa(a, b, w);
      ASSERT_NEAR(isec::align(a, b, cfg).total_cost, expected, 1e-9) << a << " / " << b;
      ASSERT_NEAR(isec::weighted_distance(isec::utf8_decode(a), isec::utf8_decode(b), cfg), expected, 1e-9);
    }
  }
}

TEST(AlignProperty, WitnessReplaysAndSums) {
  std::mt19937_64 rng(11);
  for (int c = 0; c < 20; ++c) {
    const CostConfig cfg = random_config(rng, "abcde", c % 2 == 1);
    for (int t = 0; t < 50; ++t) {
      const std::string a = oracle::random_string(rng, 10, "abcde");
      const std::string b = oracle::random_string(rng, 10, "abcde");
      if (a.empty() && b.empty()) continue;
      const auto p = isec::align(a, b, cfg);
      ASSERT_EQ(isec::utf8_encode(isec::apply_ops(isec::utf8_decode(a), p.ops)), b);
      double sum = 0, cp = 0;
      for (const auto& op : p.ops) {
        sum += op.cost;
        if (op.kind != EditKind::transposition) cp += op.cost;
      }
      ASSERT_NEAR(sum, p.total_cost, 1e-9);
      ASSERT_NEAR(cp, p.cp, 1e-9);
      ASSERT_LE(p.cp, p.total_cost + 1e-12);
      ASSERT_EQ(p.n_ops, p.n_substitutions + p.n_deletions + p.n_insertions + p.n_transpositions);
      if (p.n_ops > 0) ASSERT_NEAR(p.cm, p.total_cost / static_cast<double>(p.n_ops), 1e-12);
    }
  }
}

TEST(AlignProperty, CpLinearity) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::string a = oracle::random_string(rng, 8, "abc");
    const std::string b = oracle::random_string(rng, 8, "abc");
    if (a.empty() && b.empty()) continue;
    auto ops = isec::align(a, b, CostConfig{}).ops;
    const auto base = isec::summarize(ops);
    auto with_ins = ops;
    with_ins.push_back({EditKind::insertion, 0, U'z', 0.7, a.size(), b.size()});
    EXPECT_NEAR(isec::summarize(with_ins).cp, base.cp + 0.7, 1e-12);
    auto with_trans = ops;
    with_trans.push_back({EditKind::transposition, U'x', U'y', 0.4, 0, 0});
    EXPECT_NEAR(isec::summarize(with_trans).cp, base.cp, 1e-12);
    EXPECT_NEAR(isec::summarize(with_trans).total_cost, base.total_cost + 0.4, 1e-12);
  }
}

TEST(AlignProperty, LowerCostNeverIncreasesTotal) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int c = 0; c < 30; ++c) {
    const CostConfig cfg = random_config(rng, "abcd", true);
    CostConfig lower = cfg;
    // Lower one random entry of each table.
    if (!lower.sub_overrides.empty()) lower.sub_overrides.begin()->second *= frac(rng);
    lower.ins_overrides[U'a'] = isec::lookup_ins(cfg, U'a') * frac(rng);
    lower.del_overrides[U'c'] = isec::lookup_del(cfg, U'c') * frac(rng);
    lower.set_trans(U'b', U'd', isec::lookup_trans(cfg, U'b', U'd') * frac(rng));
    for (int t = 0; t < 40; ++t) {
      const std::string a = oracle::random_string(rng, 8, "abcd");
      const std::string b = oracle::random_string(rng, 8, "abcd");
      if (a.empty() && b.empty()) continue;
      ASSERT_LE(isec::align(a, b, lower).total_cost, isec::align(a, b, cfg).total_cost + 1e-12);
    }
  }
}

TEST(AlignProperty, CostSymmetry) {
  std::mt19937_64 rng(23);
  for (int c = 0; c < 20; ++c) {
    CostConfig cfg = random_config(rng, "abcd", true);
    for (auto& [ch, v] : cfg.ins_overrides) cfg.del_overrides[ch] = v;
    for (auto& [ch, v] : cfg.del_overrides) cfg.ins_overrides[ch] = v;
    ASSERT_TRUE(cfg.is_symmetric());
    for (int t = 0; t < 50; ++t) {
      const std::string a = oracle::random_string(rng, 9, "abcd");
      const std::string b = oracle::random_string(rng, 9, "abcd");
      if (a.empty() && b.empty()) continue;
      const auto ab = isec::align(a, b, cfg);
      const auto ba = isec::align(b, a, cfg);
      ASSERT_NEAR(ab.total_cost, ba.total_cost, 1e-9);
      ASSERT_NEAR(ab.cm, ba.cm, 1e-9);
      ASSERT_NEAR(ab.cp, ba.cp, 1e-9);
    }
  }
}

}  // namespace
