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

#include "axp/model.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "axp/model_io.hpp"
#include "axp/survey.hpp"
#include "gtest/gtest.h"
#include "support/brute_force.hpp"

namespace axp {
namespace {

using testing::and_model;
using testing::constant_model;
using testing::single_neuron;
using testing::xor_like_model;

TEST(LogitTest, ZeroWeightsGiveTheBias) {
  const auto model = constant_model();
  for (std::uint64_t m = 0; m < 4; ++m) {
    EXPECT_EQ(logit(model, Instance::from_mask(m, 2)), -1.0);
  }
}

TEST(LogitTest, SingleNeuron) {
  EXPECT_DOUBLE_EQ(logit(and_model(), Instance{1, 1}), 0.5);
}

TEST(LogitTest, OneHiddenLayer) {
  // relu(1) + relu(-1) - 0.5
  EXPECT_DOUBLE_EQ(logit(xor_like_model(), Instance{1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(logit(xor_like_model(), Instance{0, 0}), -0.5);
  EXPECT_DOUBLE_EQ(logit(xor_like_model(), Instance{1, 1}), -0.5);
}

TEST(LogitTest, DimensionMismatchIsSchemaError) {
  EXPECT_THROW(logit(and_model(), Instance{1, 0, 1}), SchemaError);
}

TEST(PredictTest, AndGate) {
  EXPECT_EQ(predict(and_model(), Instance{1, 1}), Decision::kPositive);
  EXPECT_EQ(predict(and_model(), Instance{1, 0}), Decision::kNegative);
}

TEST(PredictTest, ConstantModelIsNegativeEverywhere) {
  for (std::uint64_t m = 0; m < 4; ++m) {
    EXPECT_EQ(predict(constant_model(), Instance::from_mask(m, 2)),
              Decision::kNegative);
  }
}

TEST(PredictTest, ZeroLogitIsAmbiguous) {
  const auto model = single_neuron({1, 1}, -1.0);
  EXPECT_THROW(predict(model, Instance{1, 0}), AmbiguityError);
  EXPECT_EQ(predict(model, Instance{1, 1}), Decision::kPositive);
}

TEST(PredictTest, MarginBoundary) {
  // exactly at the margin is outside it
  const auto model = single_neuron({0}, kAmbiguityMargin);
  EXPECT_EQ(predict(model, Instance{0}), Decision::kPositive);
  const auto inside = single_neuron({0}, kAmbiguityMargin / 2);
  EXPECT_THROW(predict(inside, Instance{0}), AmbiguityError);
}

TEST(PredictTest, ThresholdConsistencyOnRandomModels) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto model = testing::random_model(rng);
    for (int k = 0; k < 20; ++k) {
      const auto x = testing::random_instance(rng, model.input_width());
      const double z = logit(model, x);
      if (is_ambiguous(z)) continue;
      EXPECT_EQ(predict(model, x) == Decision::kPositive, z >= 0.0);
    }
  }
}

TEST(PredictTest, NonnegativeWeightsAreMonotone) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> w(0.0, 2.0), b(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> weights(6);
    for (double& v : weights) v = w(rng);
    const auto model = single_neuron(weights, b(rng));
    for (std::uint64_t m = 0; m < 64; ++m) {
      const auto x = Instance::from_mask(m, 6);
      for (std::size_t i = 0; i < 6; ++i) {
        if (x[i]) continue;
        auto y = x;
        y.set(i, true);
        EXPECT_GE(logit(model, y), logit(model, x));
      }
    }
  }
}

TEST(PredictTest, DeterministicAcrossThreads) {
  std::mt19937_64 rng(3);
  const auto model = testing::random_model(rng);
  const auto x = testing::random_instance(rng, model.input_width());
  const double expected = logit(model, x);
  std::vector<double> seen(8);
  {
    std::vector<std::jthread> workers;
    for (std::size_t t = 0; t < seen.size(); ++t) {
      workers.emplace_back([&, t] { seen[t] = logit(model, x); });
    }
  }
  for (double v : seen) EXPECT_EQ(v, expected);
}

TEST(NeuralModelTest, RejectsBrokenShapes) {
  const auto schema = FeatureSchema::generic(2);
  // hidden width 2 but output layer reads 3 inputs
  EXPECT_THROW(NeuralModel(schema, {Layer::from_rows({{1, 1}, {1, 1}}, {0, 0}),
                                    Layer::from_rows({{1, 1, 1}}, {0})}),
               SchemaError);
  EXPECT_THROW(NeuralModel(schema, {Layer::from_rows({{1, 1}, {1, 1}}, {0, 0})}),
               SchemaError);
  EXPECT_THROW(NeuralModel(schema, {Layer::from_rows({{1, 1}}, {0, 0})}),
               SchemaError);
  EXPECT_THROW(
      NeuralModel(schema, {Layer::from_rows(
                              {{std::numeric_limits<double>::quiet_NaN(), 1}},
                              {0})}),
      SchemaError);
  EXPECT_THROW(NeuralModel(schema, {}), SchemaError);
}

TEST(FeatureSchemaTest, Invariants) {
  EXPECT_THROW(FeatureSchema({"a", "a"}, {"q", "q"}), SchemaError);
  EXPECT_THROW(FeatureSchema({"a", ""}, {"q", "q"}), SchemaError);
  EXPECT_THROW(FeatureSchema({"a", "b"}, {"q"}), SchemaError);
  EXPECT_THROW(FeatureSchema({"a", "b"}, {"q", "q"}, 2), SchemaError);
  const FeatureSchema ok({"a", "b"}, {"q", "r"}, 1);
  EXPECT_EQ(ok.resolve("b"), 1u);
  EXPECT_EQ(ok.resolve("0"), 0u);
  EXPECT_EQ(ok.resolve("x1"), 1u);
  EXPECT_THROW(ok.resolve("gender"), ConfigError);
  EXPECT_THROW(ok.resolve("5"), ConfigError);
}

TEST(ModelIoTest, LoadsSurveyShapedDocument) {
  nlohmann::json doc;
  const auto schema = survey::schema();
  doc["n"] = 19;
  doc["feature_names"] = schema.names();
  doc["questions"] = schema.questions();
  doc["protected_index"] = 1;
  doc["layers"] = {
      {{"weights", std::vector<std::vector<double>>(16, std::vector<double>(19, 0.25))},
       {"bias", std::vector<double>(16, -1.0)}},
      {{"weights", {std::vector<double>(16, 0.5)}}, {"bias", {-0.1}}}};
  doc["activation"] = "relu";
  doc["output_rule"] = "logit_ge_0";
  const auto model = model_from_json(doc);
  EXPECT_EQ(model.input_width(), 19u);
  EXPECT_EQ(model.hidden_layer_count(), 1u);
  EXPECT_EQ(model.schema().protected_index(), std::optional<std::size_t>(1));
}

TEST(ModelIoTest, OutputWidthMismatchIsDimensionError) {
  const std::string text = R"({
    "n": 2, "feature_names": ["a", "b"], "questions": ["qa", "qb"],
    "layers": [
      {"weights": [[1, 0], [0, 1], [1, 1]], "bias": [0, 0, 0]},
      {"weights": [[1, 1]], "bias": [0]}
    ],
    "activation": "relu", "output_rule": "logit_ge_0"})";
  EXPECT_THROW(parse_model(text), SchemaError);
}

TEST(ModelIoTest, ParseFailures) {
  EXPECT_THROW(parse_model("{not json"), ParseError);
  EXPECT_THROW(parse_model(R"({"n": 1})"), ParseError);
  EXPECT_THROW(parse_model(R"({"n": 1, "feature_names": ["a"],
      "layers": [{"weights": [[1]], "bias": [0]}], "activation": "tanh"})"),
               ParseError);
  EXPECT_THROW(parse_model(R"({"n": 2, "feature_names": ["a"],
      "layers": [{"weights": [[1]], "bias": [0]}]})"),
               SchemaError);
  EXPECT_THROW(load_model("/nonexistent/model.json"), ParseError);
}

TEST(ModelIoTest, RoundTripPreservesLogitsBitForBit) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    testing::RandomModelSpec spec;
    spec.max_inputs = 19;
    spec.max_units = 16;
    const auto model = testing::random_model(rng, spec);
    const auto reloaded = parse_model(dump_model(model));
    for (std::size_t l = 0; l < model.layers().size(); ++l) {
      EXPECT_EQ(model.layers()[l].weights, reloaded.layers()[l].weights);
      EXPECT_EQ(model.layers()[l].bias, reloaded.layers()[l].bias);
    }
    for (int k = 0; k < 100; ++k) {
      const auto x = testing::random_instance(rng, model.input_width());
      EXPECT_EQ(logit(model, x), logit(reloaded, x));
    }
  }
}

}  // namespace
}  // namespace axp
