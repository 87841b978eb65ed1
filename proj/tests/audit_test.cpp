// Copyright 2026 The axpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "axp/audit.hpp"

#include <cmath>
#include <map>
#include <random>

#include "axp/mining.hpp"
#include "gtest/gtest.h"
#include "support/brute_force.hpp"

namespace axp {
namespace {

using testing::and_model;
using testing::projection_model;

std::vector<Instance> cube(std::size_t n) {
  std::vector<Instance> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    out.push_back(Instance::from_mask(m, n));
  }
  return out;
}

TEST(CriticalFeaturesTest, HandExamples) {
  for (const auto& x : cube(3)) {
    EXPECT_EQ(critical_features(projection_model(3), x), (FeatureSet{0}));
    EXPECT_TRUE(critical_features(testing::constant_model(3), x).empty());
  }
  // brute force: (1,1) has the single AXP {x0, x1}
  EXPECT_EQ(testing::axp_intersection(testing::all_axps(and_model(), Instance{1, 1}), 2),
            0b11u);
  EXPECT_EQ(critical_features(and_model(), Instance{1, 1}), (FeatureSet{0, 1}));
}

TEST(CriticalFeaturesTest, EqualsIntersectionOfAllAxps) {
  std::mt19937_64 rng(31);
  testing::RandomModelSpec spec;
  spec.max_inputs = 8;
  for (int trial = 0; trial < 80; ++trial) {
    const auto model = testing::random_model(rng, spec);
    const auto x = testing::random_instance(rng, model.input_width());
    const auto axps = testing::all_axps(model, x);
    EXPECT_EQ(testing::to_mask(critical_features(model, x)),
              testing::axp_intersection(axps, model.input_width()));
  }
}

TEST(AuditBiasTest, IndependentModelIsUnbiased) {
  const NeuralModel model(FeatureSchema::generic(3),
                          {Layer::from_rows({{0, 1, 1}}, {-0.5})});
  const auto data = cube(3);
  const auto report = audit_bias(model, data, 0);
  EXPECT_EQ(report.unbiased, 8u);
  EXPECT_EQ(report.biased_negative + report.biased_positive, 0u);
  EXPECT_DOUBLE_EQ(report.unbiased_ratio(), 1.0);
}

TEST(AuditBiasTest, ProjectionOnProtectedIsFullyBiased) {
  const auto data = cube(3);
  const auto report = audit_bias(projection_model(3), data, 0);
  EXPECT_EQ(report.unbiased, 0u);
  EXPECT_EQ(report.biased_negative, 4u);
  EXPECT_EQ(report.biased_positive, 4u);
  EXPECT_EQ(report.biased_instances.size(), 8u);
  EXPECT_EQ(report.total(), data.size());
}

TEST(AuditBiasTest, AmbiguousInstancesAreCountedSeparately) {
  const auto model = testing::single_neuron({1, 1}, -1.0);
  const auto data = cube(2);
  const auto report = audit_bias(model, data, 0);
  // (1,0) and (0,1) sit on the threshold; (0,0) and (1,1) need one of the
  // neighbors for their oracle calls, so they are ambiguous as well
  EXPECT_EQ(report.total(), 4u);
  EXPECT_EQ(report.ambiguous, 4u);
  EXPECT_EQ(report.ambiguous_instances, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(AuditBiasTest, ReferenceCountsPartitionTheDataset) {
  // Reference counts reported for the survey model (1,257 instances).
  BiasAuditReport report;
  report.unbiased = 864;
  report.biased_negative = 290;
  report.biased_positive = 103;
  EXPECT_EQ(report.total(), 1257u);
  // 864 / 1257 = 0.687350...; a two-digit 68.73% truncates it
  EXPECT_NEAR(report.unbiased_ratio(), 864.0 / 1257.0, 1e-15);
  EXPECT_EQ(std::floor(10000.0 * report.unbiased_ratio()), 6873.0);
}

TEST(AuditBiasProperty, PartitionAndCriticalityConsistency) {
  std::mt19937_64 rng(64);
  testing::RandomModelSpec spec;
  spec.max_inputs = 10;
  for (int trial = 0; trial < 30; ++trial) {
    const auto model = testing::random_model(rng, spec);
    std::vector<Instance> data;
    for (int k = 0; k < 25; ++k) {
      data.push_back(testing::random_instance(rng, model.input_width()));
    }
    const std::size_t p = rng() % model.input_width();
    const auto report = audit_bias(model, data, p, {2});
    EXPECT_EQ(report.total(), data.size());
    const auto impact = feature_impact(model, data, {3});
    const auto& row = impact.rows[p];
    EXPECT_EQ(row.critical_negative, report.biased_negative);
    EXPECT_EQ(row.critical_positive, report.biased_positive);
    EXPECT_EQ(row.non_influenced, report.unbiased);
  }
}

TEST(FeatureImpactTest, ProjectionOverTheCube) {
  const auto data = cube(3);
  const auto table = feature_impact(projection_model(3), data);
  ASSERT_EQ(table.rows.size(), 3u);
  EXPECT_EQ(table.rows[0].critical_negative + table.rows[0].critical_positive, 8u);
  EXPECT_EQ(table.rows[0].non_influenced, 0u);
  for (std::size_t v = 1; v < 3; ++v) {
    EXPECT_EQ(table.rows[v].non_influenced, 8u);
  }
}

TEST(FeatureImpactTest, ConstantModelInfluencesNothing) {
  const auto data = cube(3);
  const auto table = feature_impact(testing::constant_model(3), data);
  for (const auto& row : table.rows) {
    EXPECT_EQ(row.non_influenced, 8u);
    EXPECT_EQ(row.critical_negative + row.critical_positive, 0u);
  }
}

TEST(FeatureImpactTest, RowsSumToAuditedCountAndThreadsDoNotMatter) {
  std::mt19937_64 rng(12);
  testing::RandomModelSpec spec;
  spec.min_inputs = 10;
  spec.max_inputs = 12;
  const auto model = testing::random_model(rng, spec);
  std::vector<Instance> data;
  for (int k = 0; k < 60; ++k) {
    data.push_back(testing::random_instance(rng, model.input_width()));
  }
  const auto serial = feature_impact(model, data, {1});
  const auto parallel = feature_impact(model, data, {4});
  for (std::size_t v = 0; v < serial.rows.size(); ++v) {
    const auto& r = serial.rows[v];
    EXPECT_EQ(r.non_influenced + r.critical_negative + r.critical_positive,
              serial.audited());
    EXPECT_EQ(r.critical_negative, parallel.rows[v].critical_negative);
    EXPECT_EQ(r.critical_positive, parallel.rows[v].critical_positive);
  }
  ASSERT_EQ(serial.instances.size(), parallel.instances.size());
  for (std::size_t i = 0; i < serial.instances.size(); ++i) {
    EXPECT_EQ(serial.instances[i].critical, parallel.instances[i].critical);
  }
}

TEST(MiningTest, SingletonsMatchImpactCounts) {
  std::mt19937_64 rng(21);
  testing::RandomModelSpec spec;
  spec.min_inputs = 6;
  spec.max_inputs = 10;
  const auto model = testing::random_model(rng, spec);
  std::vector<Instance> data;
  for (int k = 0; k < 80; ++k) {
    data.push_back(testing::random_instance(rng, model.input_width()));
  }
  const auto table = feature_impact(model, data);
  MiningOptions options;
  options.min_count = 1;
  const auto report = mine_combinations(table, options);
  for (const auto& c : report.combinations) {
    if (c.features.size() != 1) continue;
    const auto& row = table.rows[c.features[0]];
    EXPECT_EQ(c.count, c.outcome == Decision::kPositive ? row.critical_positive
                                                        : row.critical_negative);
  }
  // and every nonzero singleton shows up
  std::size_t nonzero = 0;
  for (const auto& row : table.rows) {
    nonzero += (row.critical_negative > 0) + (row.critical_positive > 0);
  }
  std::size_t singletons = 0;
  for (const auto& c : report.combinations) singletons += c.features.size() == 1;
  EXPECT_EQ(singletons, nonzero);
}

TEST(MiningTest, ProjectionOnlyMinesItsFeature) {
  const auto data = cube(3);
  const auto table = feature_impact(projection_model(3), data);
  MiningOptions options;
  options.min_count = 1;
  const auto report = mine_combinations(table, options);
  ASSERT_EQ(report.combinations.size(), 2u);  // {x0} for each outcome
  for (const auto& c : report.combinations) {
    EXPECT_EQ(c.features, (FeatureSet{0}));
    EXPECT_EQ(c.count, 4u);
    EXPECT_DOUBLE_EQ(c.whole_ratio, 0.5);
    EXPECT_DOUBLE_EQ(c.specific_ratio, 1.0);
  }
}

TEST(MiningTest, RatiosFollowCounts) {
  // 105 of 647 positive predictions in a 1,257-instance audit.
  FeatureImpactTable table;
  table.rows.assign(19, {});
  for (std::size_t i = 0; i < 1257; ++i) {
    InstanceCriticality inst;
    inst.index = i;
    inst.decision = i < 647 ? Decision::kPositive : Decision::kNegative;
    if (i < 105) inst.critical = {1, 15};
    table.instances.push_back(inst);
  }
  MiningOptions options;
  options.outcome = Decision::kPositive;
  options.min_count = 100;
  const auto report = mine_combinations(table, options);
  const auto it = std::find_if(report.combinations.begin(), report.combinations.end(),
                               [](const Combination& c) {
                                 return c.features == FeatureSet{1, 15};
                               });
  ASSERT_NE(it, report.combinations.end());
  EXPECT_EQ(it->count, 105u);
  EXPECT_NEAR(100.0 * it->whole_ratio, 8.35, 0.01);
  EXPECT_NEAR(100.0 * it->specific_ratio, 16.23, 0.01);
}

TEST(MiningTest, DefaultMinCountIsFivePercentOfTheClass) {
  EXPECT_EQ(default_min_count(647), 33u);
  EXPECT_EQ(default_min_count(610), 31u);
  EXPECT_EQ(default_min_count(0), 1u);
  EXPECT_EQ(default_min_count(20), 1u);
}

TEST(MiningTest, RejectsBadBounds) {
  FeatureImpactTable table;
  MiningOptions options;
  options.max_size = 0;
  EXPECT_THROW(mine_combinations(table, options), ConfigError);
  options.max_size = 2;
  options.top_k = 0;
  EXPECT_THROW(mine_combinations(table, options), ConfigError);
}

TEST(MiningTest, TopKRestrictsCandidates) {
  FeatureImpactTable table;
  table.rows.assign(5, {});
  const std::vector<FeatureSet> sets = {{0, 1}, {0, 1, 2}, {0, 3}, {0, 1, 3}, {4}};
  for (std::size_t i = 0; i < sets.size(); ++i) {
    table.instances.push_back({i, Decision::kNegative, sets[i]});
  }
  MiningOptions options;
  options.min_count = 1;
  options.top_k = 2;
  const auto report = mine_combinations(table, options);
  ASSERT_EQ(report.outcomes.size(), 2u);
  EXPECT_EQ(report.outcomes[0].candidates, (FeatureSet{0, 1}));
  for (const auto& c : report.combinations) {
    for (std::size_t v : c.features) EXPECT_TRUE(v == 0 || v == 1);
  }
}

// Counts equal brute force over enumerated AXPs, and support is
// anti-monotone.
TEST(MiningProperty, MatchesEnumeratedAxps) {
  std::mt19937_64 rng(808);
  testing::RandomModelSpec spec;
  spec.min_inputs = 4;
  spec.max_inputs = 8;
  for (int trial = 0; trial < 15; ++trial) {
    const auto model = testing::random_model(rng, spec);
    const std::size_t n = model.input_width();
    std::vector<Instance> data;
    for (int k = 0; k < 40; ++k) data.push_back(testing::random_instance(rng, n));
    const auto table = feature_impact(model, data);
    MiningOptions options;
    options.max_size = 3;
    options.min_count = 1;
    const auto report = mine_combinations(table, options);

    // brute force: count S for x iff S lies inside every AXP of x
    std::map<std::pair<int, std::uint64_t>, std::size_t> expected;
    for (const auto& x : data) {
      const auto common = testing::axp_intersection(testing::all_axps(model, x), n);
      const int outcome = to_label(predict(model, x));
      for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
        if (std::popcount(s) <= 3 && (s & common) == s) ++expected[{outcome, s}];
      }
    }
    std::map<std::pair<int, std::uint64_t>, std::size_t> mined;
    for (const auto& c : report.combinations) {
      mined[{to_label(c.outcome), testing::to_mask(c.features)}] = c.count;
    }
    EXPECT_EQ(mined, expected) << "trial " << trial;

    for (const auto& [key, count] : mined) {
      const auto [outcome, mask] = key;
      for (std::size_t v = 0; v < n; ++v) {
        if (!((mask >> v) & 1U) || std::popcount(mask) == 1) continue;
        const auto sub = mined.find({outcome, mask & ~(std::uint64_t{1} << v)});
        ASSERT_NE(sub, mined.end());
        EXPECT_LE(count, sub->second);
      }
    }
  }
}

}  // namespace
}  // namespace axp
