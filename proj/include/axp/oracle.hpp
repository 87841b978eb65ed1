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

// Decision procedure for "does some completion of a partial assignment get a
// decision other than d?".
//
// exists_counterexample() is a complete depth-first branch-and-bound over the
// free features. Every node bounds the logit over all of its completions by
// interval propagation and is pruned when the interval cannot cross zero.
// Leaves are evaluated with logit(), the same routine predict() uses, so a
// reported counterexample is always a real one.
//
// exhaustive_oracle() enumerates every completion and serves as the
// independent reference for testing.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "axp/error.hpp"
#include "axp/model.hpp"
#include "axp/types.hpp"

namespace axp {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return lo <= v && v <= hi; }
};

struct OracleAnswer {
  bool flips = false;
  // Set whenever flips is true: a completion with a different decision.
  std::optional<Instance> witness;
};

inline constexpr std::size_t kDefaultEnumerationCap = 22;

namespace detail {

inline void check_partial(const NeuralModel& model,
                          const PartialAssignment& partial) {
  if (partial.size() != model.input_width()) {
    throw SchemaError("partial assignment has " +
                      std::to_string(partial.size()) +
                      " features, model expects " +
                      std::to_string(model.input_width()));
  }
}

// True when a completion with logit `z` gets a decision other than d.
inline bool is_flip(double z, Decision d) {
  return d == Decision::kPositive ? z < 0.0 : z >= 0.0;
}

// Evaluates a leaf the way predict() does and reports whether it flips.
inline bool leaf_flips(const NeuralModel& model, const Instance& x,
                       Decision d) {
  const double z = logit(model, x);
  if (is_ambiguous(z)) {
    throw AmbiguityError("completion " + x.to_string() +
                             " has logit within the ambiguity margin",
                         z);
  }
  return is_flip(z, d);
}

inline Instance fill_free(const PartialAssignment& partial, bool value) {
  Instance x(partial.size());
  for (std::size_t i = 0; i < partial.size(); ++i) {
    x.set(i, partial.is_free(i) ? value : partial.value(i));
  }
  return x;
}

}  // namespace detail

// Interval of the logit over every completion of `partial`. Free inputs range
// over [0, 1], fixed inputs are points; each affine layer maps intervals by
// signed-weight min/max and hidden ReLUs clamp both ends at zero.
inline Interval bound_logit(const NeuralModel& model,
                            const PartialAssignment& partial) {
  detail::check_partial(model, partial);
  const std::size_t n = partial.size();
  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (partial.is_free(i)) {
      lo[i] = 0.0;
      hi[i] = 1.0;
    } else {
      lo[i] = hi[i] = partial.value(i) ? 1.0 : 0.0;
    }
  }
  std::vector<double> next_lo, next_hi;
  const auto& layers = model.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& layer = layers[l];
    next_lo.assign(layer.outputs, 0.0);
    next_hi.assign(layer.outputs, 0.0);
    for (std::size_t r = 0; r < layer.outputs; ++r) {
      double acc_lo = layer.bias[r];
      double acc_hi = layer.bias[r];
      const double* row = layer.weights.data() + r * layer.inputs;
      for (std::size_t c = 0; c < layer.inputs; ++c) {
        const double w = row[c];
        if (w >= 0.0) {
          acc_lo += w * lo[c];
          acc_hi += w * hi[c];
        } else {
          acc_lo += w * hi[c];
          acc_hi += w * lo[c];
        }
      }
      if (l + 1 < layers.size()) {
        acc_lo = std::max(acc_lo, 0.0);
        acc_hi = std::max(acc_hi, 0.0);
      }
      next_lo[r] = acc_lo;
      next_hi[r] = acc_hi;
    }
    lo.swap(next_lo);
    hi.swap(next_hi);
  }
  return {lo[0], hi[0]};
}

// Branch order for the search: descending sum of |first-layer weight| per
// input, ties broken by index.
inline std::vector<std::size_t> first_layer_magnitude_order(
    const NeuralModel& model) {
  const Layer& first = model.layers().front();
  std::vector<double> magnitude(first.inputs, 0.0);
  for (std::size_t r = 0; r < first.outputs; ++r) {
    for (std::size_t c = 0; c < first.inputs; ++c) {
      magnitude[c] += std::abs(first.weight(r, c));
    }
  }
  std::vector<std::size_t> order(first.inputs);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return magnitude[a] > magnitude[b];
                   });
  return order;
}

// Branch-and-bound search bound to one model. Holds only the precomputed
// branch order, so one instance can serve queries from many threads.
class CounterexampleSearch {
 public:
  explicit CounterexampleSearch(const NeuralModel& model)
      : model_(model), order_(first_layer_magnitude_order(model)) {}

  OracleAnswer operator()(const PartialAssignment& partial, Decision d) const {
    detail::check_partial(model_, partial);
    PartialAssignment work = partial;
    OracleAnswer answer;
    answer.flips = descend(work, bound_logit(model_, work), d, answer);
    return answer;
  }

  const std::vector<std::size_t>& branch_order() const { return order_; }

 private:
  enum class Verdict { kNoFlip, kAllFlip, kUndecided };

  // Bounds that keep an ambiguity margin: a subtree is only declared free of
  // flips (or all flips) when no completion can be ambiguous either.
  static Verdict classify(const Interval& iv, Decision d) {
    if (d == Decision::kPositive) {
      if (iv.lo >= kAmbiguityMargin) return Verdict::kNoFlip;
      if (iv.hi <= -kAmbiguityMargin) return Verdict::kAllFlip;
    } else {
      if (iv.hi <= -kAmbiguityMargin) return Verdict::kNoFlip;
      if (iv.lo >= kAmbiguityMargin) return Verdict::kAllFlip;
    }
    return Verdict::kUndecided;
  }

  // How far the interval reaches into the flip side. Larger explores first.
  static double flip_reach(const Interval& iv, Decision d) {
    return d == Decision::kPositive ? -iv.lo : iv.hi;
  }

  bool descend(PartialAssignment& partial, const Interval& bound, Decision d,
               OracleAnswer& answer) const {
    const Verdict verdict = classify(bound, d);
    if (verdict == Verdict::kNoFlip) return false;

    std::optional<std::size_t> branch;
    for (std::size_t v : order_) {
      if (partial.is_free(v)) {
        branch = v;
        break;
      }
    }

    if (verdict == Verdict::kAllFlip || !branch) {
      Instance candidate = detail::fill_free(partial, false);
      if (detail::leaf_flips(model_, candidate, d)) {
        answer.witness = std::move(candidate);
        return true;
      }
      if (!branch) return false;
      // Rounding disagreed with the bound; fall through and branch.
    }

    const std::size_t v = *branch;
    partial.fix(v, false);
    const Interval bound_false = bound_logit(model_, partial);
    partial.fix(v, true);
    const Interval bound_true = bound_logit(model_, partial);

    const bool true_first = flip_reach(bound_true, d) > flip_reach(bound_false, d);
    const bool values[2] = {true_first, !true_first};
    for (bool value : values) {
      partial.fix(v, value);
      if (descend(partial, value ? bound_true : bound_false, d, answer)) {
        partial.release(v);
        return true;
      }
    }
    partial.release(v);
    return false;
  }

  const NeuralModel& model_;
  std::vector<std::size_t> order_;
};

// flips == true iff some completion of `partial` is predicted != d. Exact.
inline OracleAnswer exists_counterexample(const NeuralModel& model,
                                          const PartialAssignment& partial,
                                          Decision d) {
  return CounterexampleSearch(model)(partial, d);
}

// Reference oracle: visits all 2^|free| completions in binary counting order
// (lowest free feature is the least significant bit).
inline OracleAnswer exhaustive_oracle(
    const NeuralModel& model, const PartialAssignment& partial, Decision d,
    std::size_t cap = kDefaultEnumerationCap) {
  detail::check_partial(model, partial);
  const FeatureSet free = partial.free_features();
  if (free.size() > cap || free.size() >= 63) {
    throw LimitError(std::to_string(free.size()) +
                     " free features exceed the enumeration cap of " +
                     std::to_string(cap));
  }
  Instance x = detail::fill_free(partial, false);
  const std::uint64_t total = std::uint64_t{1} << free.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t k = 0; k < free.size(); ++k) {
      x.set(free[k], ((mask >> k) & 1U) != 0);
    }
    if (detail::leaf_flips(model, x, d)) return {true, x};
  }
  return {false, std::nullopt};
}

}  // namespace axp
