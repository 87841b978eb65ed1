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

// Portable weights document (JSON):
//
//   {
//     "n": 19,
//     "feature_names": ["age_over_31", ...],
//     "questions": ["Is the applicant older than 31?", ...],
//     "protected_index": 1,                      // optional
//     "layers": [ {"weights": [[...], ...], "bias": [...]}, ... ],
//     "activation": "relu",
//     "output_rule": "logit_ge_0"
//   }
//
// `weights` holds one row per unit of the layer (shape [out][in]). Numbers are
// written with the shortest decimal that parses back to the same double.

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "axp/error.hpp"
#include "axp/model.hpp"
#include "axp/types.hpp"

namespace axp {

inline NeuralModel model_from_json(const nlohmann::json& doc) {
  using nlohmann::json;
  try {
    if (!doc.is_object()) throw ParseError("weights document must be an object");
    const auto n = doc.at("n").get<std::size_t>();
    auto names = doc.at("feature_names").get<std::vector<std::string>>();
    std::vector<std::string> questions =
        doc.contains("questions")
            ? doc.at("questions").get<std::vector<std::string>>()
            : names;
    if (names.size() != n) {
      throw SchemaError("n = " + std::to_string(n) + " but " +
                        std::to_string(names.size()) + " feature names");
    }
    std::optional<std::size_t> protected_index;
    if (doc.contains("protected_index") && !doc.at("protected_index").is_null()) {
      protected_index = doc.at("protected_index").get<std::size_t>();
    }
    if (doc.contains("activation") &&
        doc.at("activation").get<std::string>() != "relu") {
      throw ParseError("unsupported activation '" +
                       doc.at("activation").get<std::string>() + "'");
    }
    if (doc.contains("output_rule") &&
        doc.at("output_rule").get<std::string>() != "logit_ge_0") {
      throw ParseError("unsupported output rule '" +
                       doc.at("output_rule").get<std::string>() + "'");
    }
    std::vector<Layer> layers;
    for (const json& entry : doc.at("layers")) {
      const auto rows =
          entry.at("weights").get<std::vector<std::vector<double>>>();
      auto bias = entry.at("bias").get<std::vector<double>>();
      layers.push_back(Layer::from_rows(rows, std::move(bias)));
    }
    return NeuralModel(
        FeatureSchema(std::move(names), std::move(questions), protected_index),
        std::move(layers));
  } catch (const json::exception& e) {
    throw ParseError(std::string("weights document: ") + e.what());
  }
}

inline nlohmann::json model_to_json(const NeuralModel& model) {
  using nlohmann::json;
  const auto& schema = model.schema();
  json doc;
  doc["n"] = schema.size();
  doc["feature_names"] = schema.names();
  doc["questions"] = schema.questions();
  if (schema.protected_index()) doc["protected_index"] = *schema.protected_index();
  json layers = json::array();
  for (const Layer& layer : model.layers()) {
    json rows = json::array();
    for (std::size_t r = 0; r < layer.outputs; ++r) {
      rows.push_back(std::vector<double>(
          layer.weights.begin() + static_cast<std::ptrdiff_t>(r * layer.inputs),
          layer.weights.begin() +
              static_cast<std::ptrdiff_t>((r + 1) * layer.inputs)));
    }
    layers.push_back({{"weights", rows}, {"bias", layer.bias}});
  }
  doc["layers"] = layers;
  doc["activation"] = "relu";
  doc["output_rule"] = "logit_ge_0";
  return doc;
}

inline NeuralModel parse_model(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("weights document: ") + e.what());
  }
  return model_from_json(doc);
}

inline NeuralModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

inline std::string dump_model(const NeuralModel& model) {
  return model_to_json(model).dump(2) + "\n";
}

inline void save_model(const NeuralModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write model file '" + path + "'");
  out << dump_model(model);
}

}  // namespace axp
