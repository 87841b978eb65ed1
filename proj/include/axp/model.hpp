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

// Feedforward ReLU classifier over Boolean features and its exact forward
// evaluation. The same evaluation routine backs predict() and every leaf of
// the counterexample search, so the two never disagree on a decision.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "axp/error.hpp"
#include "axp/types.hpp"

namespace axp {

// |logit| below this margin is too close to the threshold to explain soundly.
inline constexpr double kAmbiguityMargin = 1e-9;

// Dense affine map. `weights` is row-major with one row per output unit.
struct Layer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  Layer() = default;
  Layer(std::size_t in, std::size_t out, std::vector<double> w,
        std::vector<double> b)
      : inputs(in), outputs(out), weights(std::move(w)), bias(std::move(b)) {}

  // Builds a layer from nested rows (rows.size() outputs).
  static Layer from_rows(const std::vector<std::vector<double>>& rows,
                         std::vector<double> b) {
    Layer layer;
    layer.outputs = rows.size();
    layer.inputs = rows.empty() ? 0 : rows.front().size();
    for (const auto& row : rows) {
      if (row.size() != layer.inputs) {
        throw SchemaError("ragged weight matrix");
      }
      layer.weights.insert(layer.weights.end(), row.begin(), row.end());
    }
    layer.bias = std::move(b);
    return layer;
  }

  double weight(std::size_t out, std::size_t in) const {
    return weights[out * inputs + in];
  }
};

class NeuralModel {
 public:
  NeuralModel(FeatureSchema schema, std::vector<Layer> layers)
      : schema_(std::move(schema)), layers_(std::move(layers)) {
    validate();
  }

  const FeatureSchema& schema() const { return schema_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t input_width() const { return schema_.size(); }
  std::size_t hidden_layer_count() const { return layers_.size() - 1; }

 private:
  void validate() const {
    if (layers_.empty()) throw SchemaError("model has no layers");
    std::size_t width = schema_.size();
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const Layer& layer = layers_[l];
      const std::string where = "layer " + std::to_string(l);
      if (layer.inputs != width) {
        throw SchemaError(where + " expects " + std::to_string(layer.inputs) +
                          " inputs but receives " + std::to_string(width));
      }
      if (layer.outputs == 0) throw SchemaError(where + " has no units");
      if (layer.weights.size() != layer.inputs * layer.outputs) {
        throw SchemaError(where + " weight count does not match its shape");
      }
      if (layer.bias.size() != layer.outputs) {
        throw SchemaError(where + " bias length " +
                          std::to_string(layer.bias.size()) + " != width " +
                          std::to_string(layer.outputs));
      }
      for (double w : layer.weights) {
        if (!std::isfinite(w)) throw SchemaError(where + " has a non-finite weight");
      }
      for (double b : layer.bias) {
        if (!std::isfinite(b)) throw SchemaError(where + " has a non-finite bias");
      }
      width = layer.outputs;
    }
    if (width != 1) {
      throw SchemaError("final layer must have exactly one output, has " +
                        std::to_string(width));
    }
  }

  FeatureSchema schema_;
  std::vector<Layer> layers_;
};

namespace detail {

// acc = bias[r] + sum_c w[r][c] * in[c], summed in column order.
inline void affine(const Layer& layer, std::span<const double> in,
                   std::vector<double>& out) {
  out.assign(layer.outputs, 0.0);
  for (std::size_t r = 0; r < layer.outputs; ++r) {
    double acc = layer.bias[r];
    const double* row = layer.weights.data() + r * layer.inputs;
    for (std::size_t c = 0; c < layer.inputs; ++c) acc += row[c] * in[c];
    out[r] = acc;
  }
}

}  // namespace detail

// Pre-threshold output of the network.
inline double logit(const NeuralModel& model, const Instance& x) {
  if (x.size() != model.input_width()) {
    throw SchemaError("instance has " + std::to_string(x.size()) +
                      " features, model expects " +
                      std::to_string(model.input_width()));
  }
  std::vector<double> act(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) act[i] = x[i] ? 1.0 : 0.0;
  std::vector<double> next;
  const auto& layers = model.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    detail::affine(layers[l], act, next);
    if (l + 1 < layers.size()) {
      for (double& v : next) v = v > 0.0 ? v : 0.0;
    }
    act.swap(next);
  }
  return act[0];
}

inline bool is_ambiguous(double value) {
  return std::abs(value) < kAmbiguityMargin;
}

// Positive iff logit >= 0. Throws AmbiguityError inside the margin.
inline Decision predict(const NeuralModel& model, const Instance& x) {
  const double z = logit(model, x);
  if (is_ambiguous(z)) {
    throw AmbiguityError("logit " + std::to_string(z) + " of instance " +
                             x.to_string() + " is within the ambiguity margin",
                         z);
  }
  return z >= 0.0 ? Decision::kPositive : Decision::kNegative;
}

}  // namespace axp
