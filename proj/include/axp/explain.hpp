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

// Abductive explanations: minimal subsets of an instance's literals that
// force the model's decision for every completion of the other features.
//
// compute_explanation() is the deletion procedure: start from the whole
// instance, free one feature at a time in the given order and put the literal
// back whenever the counterexample oracle finds a completion that flips the
// decision. Since sufficiency is monotone under adding literals, one pass
// leaves a subset-minimal sufficient set.

#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "axp/error.hpp"
#include "axp/model.hpp"
#include "axp/oracle.hpp"
#include "axp/types.hpp"

namespace axp {

struct Literal {
  std::size_t feature = 0;
  bool value = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Explanation {
  std::vector<Literal> literals;  // ascending feature index
  Decision decision = Decision::kNegative;
  std::optional<std::size_t> instance_index;

  FeatureSet features() const {
    FeatureSet out;
    for (const auto& lit : literals) out.push_back(lit.feature);
    return out;
  }

  bool contains(std::size_t feature) const {
    return std::any_of(literals.begin(), literals.end(),
                       [&](const Literal& l) { return l.feature == feature; });
  }
};

// One oracle call of the deletion pass, in the shape of a trace row.
struct TraceStep {
  std::size_t step = 0;     // 1-based
  std::size_t feature = 0;  // feature tentatively freed
  PartialAssignment state;  // assignment handed to the oracle
  bool counterexample = false;
};

using TraceSink = std::function<void(const TraceStep&)>;

enum class OrderPolicy { kAscending, kWeightMagnitude };

inline std::vector<std::size_t> ascending_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

inline std::vector<std::size_t> make_order(const NeuralModel& model,
                                           OrderPolicy policy) {
  return policy == OrderPolicy::kAscending
             ? ascending_order(model.input_width())
             : first_layer_magnitude_order(model);
}

namespace detail {

inline void check_instance(const NeuralModel& model, const Instance& x) {
  if (x.size() != model.input_width()) {
    throw SchemaError("instance has " + std::to_string(x.size()) +
                      " features, model expects " +
                      std::to_string(model.input_width()));
  }
}

// Empty `order` means ascending. Anything else must be a permutation.
inline std::vector<std::size_t> resolve_order(std::span<const std::size_t> order,
                                              std::size_t n) {
  if (order.empty()) return ascending_order(n);
  std::vector<std::size_t> sorted(order.begin(), order.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted != ascending_order(n)) {
    throw ConfigError("feature order must be a permutation of 0.." +
                      std::to_string(n - 1));
  }
  return {order.begin(), order.end()};
}

inline Explanation to_explanation(const PartialAssignment& partial,
                                  Decision d) {
  Explanation e;
  e.decision = d;
  for (std::size_t i = 0; i < partial.size(); ++i) {
    if (!partial.is_free(i)) e.literals.push_back({i, partial.value(i)});
  }
  return e;
}

// Deletion pass over `order`, skipping features already free in `partial`.
inline Explanation shrink(const CounterexampleSearch& search,
                          PartialAssignment partial, Decision d,
                          std::span<const std::size_t> order,
                          const TraceSink& trace) {
  std::size_t step = 0;
  for (std::size_t v : order) {
    if (partial.is_free(v)) continue;
    const bool value = partial.value(v);
    partial.release(v);
    const bool flips = search(partial, d).flips;
    if (trace) trace({++step, v, partial, flips});
    if (flips) partial.fix(v, value);
  }
  return to_explanation(partial, d);
}

}  // namespace detail

// True iff fixing x's literals on `subset` forces predict(x) for every
// completion.
inline bool is_sufficient(const NeuralModel& model, const Instance& x,
                          std::span<const std::size_t> subset) {
  detail::check_instance(model, x);
  const Decision d = predict(model, x);
  return !exists_counterexample(model, PartialAssignment::from_subset(x, subset),
                                d)
              .flips;
}

inline Explanation compute_explanation(const NeuralModel& model,
                                       const Instance& x,
                                       std::span<const std::size_t> order = {},
                                       const TraceSink& trace = {}) {
  detail::check_instance(model, x);
  const auto resolved = detail::resolve_order(order, x.size());
  const Decision d = predict(model, x);
  const CounterexampleSearch search(model);
  return detail::shrink(search, PartialAssignment::all_fixed(x), d, resolved,
                        trace);
}

// Minimal explanation that uses none of `excluded`, or nullopt when no such
// explanation exists (i.e. freeing all of `excluded` at once admits a flip).
inline std::optional<Explanation> compute_explanation_excluding(
    const NeuralModel& model, const Instance& x,
    std::span<const std::size_t> excluded,
    std::span<const std::size_t> order = {}, const TraceSink& trace = {}) {
  detail::check_instance(model, x);
  const auto resolved = detail::resolve_order(order, x.size());
  const Decision d = predict(model, x);
  PartialAssignment start = PartialAssignment::all_fixed(x);
  for (std::size_t e : excluded) {
    if (e >= x.size()) {
      throw SchemaError("excluded feature " + std::to_string(e) +
                        " out of range");
    }
    start.release(e);
  }
  const CounterexampleSearch search(model);
  if (search(start, d).flips) return std::nullopt;
  return detail::shrink(search, std::move(start), d, resolved, trace);
}

// A decision is biased w.r.t. p when every abductive explanation contains p.
inline bool is_biased_decision(const NeuralModel& model, const Instance& x,
                               std::size_t p) {
  detail::check_instance(model, x);
  if (p >= x.size()) {
    throw SchemaError("protected feature " + std::to_string(p) +
                      " out of range");
  }
  const Decision d = predict(model, x);
  PartialAssignment relaxed = PartialAssignment::all_fixed(x);
  relaxed.release(p);
  return exists_counterexample(model, relaxed, d).flips;
}

// Soundness plus single-literal minimality of `e` for `x`. The CLI runs this
// before printing anything.
inline bool verify_explanation(const NeuralModel& model, const Instance& x,
                               const Explanation& e) {
  detail::check_instance(model, x);
  const Decision d = predict(model, x);
  if (d != e.decision) return false;
  for (const auto& lit : e.literals) {
    if (lit.feature >= x.size() || x[lit.feature] != lit.value) return false;
  }
  const FeatureSet vars = e.features();
  if (!is_sufficient(model, x, vars)) return false;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    FeatureSet reduced = vars;
    reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(k));
    if (is_sufficient(model, x, reduced)) return false;
  }
  return true;
}

// "x3 ∧ x7 ∧ ¬x9", or "⊤" for the empty explanation.
inline std::string conjunction_string(const Explanation& e) {
  if (e.literals.empty()) return "⊤";
  std::string s;
  for (const auto& lit : e.literals) {
    if (!s.empty()) s += " ∧ ";
    if (!lit.value) s += "¬";
    s += "x" + std::to_string(lit.feature);
  }
  return s;
}

}  // namespace axp
