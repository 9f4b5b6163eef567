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

#include "fixtures.hpp"
#include "isec/edit_engine.hpp"
#include "isec/errors.hpp"
#include "isec/perturb_sim.hpp"
#include "isec/text.hpp"

namespace {

using isec::CostConfig;
using isec::Outcome;
using isec::Taxonomy;
using isec::TypoEvent;
using isec::TypoModel;

TypoModel only(TypoEvent e) {
  TypoModel m;
  m.probabilities.fill(0.0);
  m.probabilities[static_cast<std::size_t>(e)] = 1.0;
  return m;
}

TEST(Perturb, DeletionAtStartOfCba) {
  const TypoModel m = only(TypoEvent::deletion);
  std::mt19937_64 rng(1);
  bool saw_front = false;
  for (int t = 0; t < 60; ++t) {
    const auto p = isec::perturb(U"cba", m, rng, CostConfig{});
    ASSERT_EQ(p.events.size(), 1u);
    ASSERT_EQ(p.text.size(), 2u);
    if (p.events[0].src_pos == 0) {
      EXPECT_EQ(p.text, U"ba");
      saw_front = true;
    }
  }
  EXPECT_TRUE(saw_front);
}

TEST(Perturb, TranspositionOfIsoCode) {
  const TypoModel m = only(TypoEvent::transposition);
  std::mt19937_64 rng(2);
  bool seen = false;
  for (int t = 0; t < 200; ++t) {
    const auto p = isec::perturb(U"AAGX110216", m, rng, CostConfig{});
    ASSERT_EQ(p.events.size(), 1u);
    ASSERT_EQ(isec::apply_ops(U"AAGX110216", p.events), p.text);
    if (p.events[0].src_pos == 1) {
      EXPECT_EQ(p.text, U"AGAX110216");
      seen = true;
    }
  }
  EXPECT_TRUE(seen);
}

TEST(Perturb, ZeroEventsIsIdentity) {
  TypoModel m;
  m.events_pmf = {1.0};
  std::mt19937_64 rng(3);
  const auto p = isec::perturb(U"cordoba", m, rng, CostConfig{});
  EXPECT_EQ(p.text, U"cordoba");
  EXPECT_TRUE(p.events.empty());
}

TEST(Perturb, AdjacentSubstitutionUsesKeyboard) {
  TypoModel m = only(TypoEvent::adjacent_substitution);
  isec::load_keyboard(m, fixtures::data_dir() / "qwerty.json");
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const auto p = isec::perturb(U"g", m, rng, CostConfig{});
    ASSERT_EQ(p.text.size(), 1u);
    const auto& near = m.adjacency.at(U'g');
    EXPECT_NE(std::find(near.begin(), near.end(), p.text[0]), near.end());
  }
}

TEST(TypoModel, Validation) {
  TypoModel m;
  m.probabilities = {0.5, 0.5, 0.5, 0, 0};
  EXPECT_THROW(m.validate(), isec::ValidationError);
  EXPECT_THROW(isec::typo_model_from_json({{"probabilities", {{"teleport", 1.0}}}}), isec::ParseError);
  const auto parsed = isec::typo_model_from_json({{"probabilities", {{"deletion", 1.0}}}, {"seed", 5}});
  EXPECT_EQ(parsed.probabilities[2], 1.0);
  EXPECT_EQ(parsed.seed, 5u);
}

TEST(ClassifyBack, NoOpIsRecovered) {
  const auto ds = fixtures::case1();
  const auto src = *ds.taxonomy.find("cba");
  const auto c = isec::classify_back(U"cba", src, ds.taxonomy, CostConfig{}, 0.0);
  EXPECT_EQ(c.outcome, Outcome::recovered);
}

TEST(ClassifyBack, CbaToBaIsNeverRecovered) {
  const auto ds = fixtures::case1();
  const auto src = *ds.taxonomy.find("cba");
  const auto ba = *ds.taxonomy.find("ba");
  const auto c = isec::classify_back(U"ba", src, ds.taxonomy, CostConfig{}, 0.0);
  EXPECT_NE(c.outcome, Outcome::recovered);
  EXPECT_EQ(c.best_distance, 0.0);
  EXPECT_EQ(c.nearest, ba);
  EXPECT_EQ(isec::weighted_distance(U"ba", U"ba", CostConfig{}), 0.0);
}

TEST(ClassifyBack, EquidistantIsIndeterminate) {
  const auto tax = Taxonomy::from_labels({"cat", "cut", "dog"});
  const auto c = isec::classify_back(U"cot", 0, tax, CostConfig{}, 0.0);
  EXPECT_EQ(c.outcome, Outcome::indeterminate);
  EXPECT_EQ(c.candidates.size(), 2u);
}

TEST(Simulate, DeltaSweepNeverLowersIndeterminacy) {
  const auto ds = fixtures::case1();
  std::size_t previous = 0;
  for (double delta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto s = isec::simulate(ds.taxonomy, CostConfig{}, TypoModel{}, 3000, delta);
    std::size_t ind = 0;
    for (const auto& o : s.per_label) ind += o.indeterminate;
    EXPECT_GE(ind, previous) << "delta " << delta;
    previous = ind;
  }
}

TEST(Simulate, ConservationAndReproducibility) {
  const auto ds = fixtures::case1();
  const auto a = isec::simulate(ds.taxonomy, CostConfig{}, TypoModel{}, 3001, 0.0);
  std::size_t total = 0;
  for (const auto& o : a.per_label) {
    EXPECT_EQ(o.recovered + o.misassigned + o.indeterminate, o.trials);
    total += o.trials;
  }
  EXPECT_EQ(total, 3001u);
  EXPECT_EQ(a, isec::simulate(ds.taxonomy, CostConfig{}, TypoModel{}, 3001, 0.0, 1));
  TypoModel other;
  other.seed = 7;
  EXPECT_NE(a, isec::simulate(ds.taxonomy, CostConfig{}, other, 3001, 0.0));
  EXPECT_THROW(isec::simulate(ds.taxonomy, CostConfig{}, TypoModel{}, 0, 0.0), isec::ValidationError);
}

TEST(Simulate, PerturbationCompressesDistanceBoundedly) {
  const auto ds = fixtures::case1();
  const CostConfig cfg;
  const double bound = isec::max_operation_cost(cfg);
  std::mt19937_64 rng(12);
  const TypoModel m;
  const auto& tax = ds.taxonomy;
  for (std::size_t i = 0; i < tax.size(); ++i) {
    for (std::size_t j = 0; j < tax.size(); ++j) {
      if (i == j) continue;
      const double d = isec::weighted_distance(tax.text(i), tax.text(j), cfg);
      double sum = 0;
      const int trials = 20;
      for (int t = 0; t < trials; ++t) {
        sum += isec::weighted_distance(isec::perturb(tax.text(i), m, rng, cfg).text, tax.text(j), cfg);
      }
      ASSERT_LE(sum / trials, d + bound + 1e-12);
    }
  }
}

TEST(Validate, DistantLabelsAreDegenerate) {
  const auto labels = fixtures::random_labels(12, 3, 20, 20, "abcdefghijklmnopqrstuvwxyz");
  const auto tax = Taxonomy::from_labels(labels);
  const auto ranking = isec::rank_all_pairs(tax, CostConfig{});
  const auto r = isec::validate_ranking(tax, CostConfig{}, TypoModel{}, 1200, 0.0, ranking.pairs);
  EXPECT_TRUE(r.correlation.degenerate);
  EXPECT_FALSE(r.correlation.spearman.has_value());
}

TEST(Validate, RequiresEnoughTrials) {
  const auto ds = fixtures::case1();
  EXPECT_THROW(isec::validate_ranking(ds.taxonomy, CostConfig{}, TypoModel{}, 2999, 0.0, {}),
               isec::ValidationError);
}

TEST(Validate, AbbreviationSetCorrelatesPositively) {
  const auto ds = fixtures::case1();
  const auto cfg = fixtures::case1_config();
  TypoModel m;
  isec::load_keyboard(m, fixtures::data_dir() / "qwerty.json");
  const auto ranking = isec::rank_taxonomy(ds.taxonomy, cfg, isec::IndexParams{});
  const auto r = isec::validate_ranking(ds.taxonomy, cfg, m, 10000, 0.0, ranking.pairs);
  ASSERT_TRUE(r.correlation.spearman.has_value());
  EXPECT_GT(*r.correlation.spearman, 0.0);
}

}  // namespace
