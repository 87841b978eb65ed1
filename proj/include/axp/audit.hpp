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

// Dataset-level audits built on explanation existence.
//
// A feature v is critical for a decision when every abductive explanation of
// it contains v. An explanation avoiding v exists iff the instance with only v
// freed is still sufficient, so criticality costs one oracle call per feature
// (two completions each). Bias w.r.t. a protected feature is criticality of
// that feature.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "axp/error.hpp"
#include "axp/explain.hpp"
#include "axp/model.hpp"
#include "axp/oracle.hpp"
#include "axp/parallel.hpp"
#include "axp/types.hpp"

namespace axp {

// Features that appear in every abductive explanation of x.
inline FeatureSet critical_features(const NeuralModel& model,
                                    const Instance& x) {
  detail::check_instance(model, x);
  const Decision d = predict(model, x);
  const CounterexampleSearch search(model);
  PartialAssignment relaxed = PartialAssignment::all_fixed(x);
  FeatureSet critical;
  for (std::size_t v = 0; v < x.size(); ++v) {
    relaxed.release(v);
    if (search(relaxed, d).flips) critical.push_back(v);
    relaxed.fix(v, x[v]);
  }
  return critical;
}

struct BiasAuditReport {
  std::size_t protected_feature = 0;
  std::size_t unbiased = 0;
  std::size_t biased_negative = 0;
  std::size_t biased_positive = 0;
  std::size_t ambiguous = 0;
  std::vector<std::size_t> biased_instances;
  std::vector<std::size_t> ambiguous_instances;

  std::size_t total() const {
    return unbiased + biased_negative + biased_positive + ambiguous;
  }
  std::size_t audited() const { return total() - ambiguous; }

  // Share of explained (non-ambiguous) decisions that are unbiased.
  double unbiased_ratio() const {
    return audited() == 0 ? 0.0
                          : static_cast<double>(unbiased) /
                                static_cast<double>(audited());
  }
};

struct AuditOptions {
  std::size_t threads = 0;  // 0 = hardware concurrency
};

inline BiasAuditReport audit_bias(const NeuralModel& model,
                                  std::span<const Instance> dataset,
                                  std::size_t protected_feature,
                                  const AuditOptions& options = {}) {
  if (protected_feature >= model.input_width()) {
    throw SchemaError("protected feature " + std::to_string(protected_feature) +
                      " out of range");
  }
  enum class Outcome { kUnbiased, kBiasedNegative, kBiasedPositive, kAmbiguous };
  std::vector<Outcome> outcome(dataset.size(), Outcome::kAmbiguous);
  const CounterexampleSearch search(model);
  parallel_for(dataset.size(), options.threads, [&](std::size_t i) {
    const Instance& x = dataset[i];
    detail::check_instance(model, x);
    try {
      const Decision d = predict(model, x);
      PartialAssignment relaxed = PartialAssignment::all_fixed(x);
      relaxed.release(protected_feature);
      if (!search(relaxed, d).flips) {
        outcome[i] = Outcome::kUnbiased;
      } else {
        outcome[i] = d == Decision::kPositive ? Outcome::kBiasedPositive
                                              : Outcome::kBiasedNegative;
      }
    } catch (const AmbiguityError&) {
      outcome[i] = Outcome::kAmbiguous;
    }
  });

  BiasAuditReport report;
  report.protected_feature = protected_feature;
  for (std::size_t i = 0; i < outcome.size(); ++i) {
    switch (outcome[i]) {
      case Outcome::kUnbiased:
        ++report.unbiased;
        break;
      case Outcome::kBiasedNegative:
        ++report.biased_negative;
        report.biased_instances.push_back(i);
        break;
      case Outcome::kBiasedPositive:
        ++report.biased_positive;
        report.biased_instances.push_back(i);
        break;
      case Outcome::kAmbiguous:
        ++report.ambiguous;
        report.ambiguous_instances.push_back(i);
        break;
    }
  }
  return report;
}

struct FeatureImpactRow {
  std::size_t non_influenced = 0;
  std::size_t critical_negative = 0;
  std::size_t critical_positive = 0;
};

struct InstanceCriticality {
  std::size_t index = 0;  // position in the audited dataset
  Decision decision = Decision::kNegative;
  FeatureSet critical;
};

struct FeatureImpactTable {
  std::vector<FeatureImpactRow> rows;         // one per schema feature
  std::vector<InstanceCriticality> instances;  // non-ambiguous, dataset order
  std::vector<std::size_t> ambiguous_instances;

  std::size_t audited() const { return instances.size(); }

  std::size_t outcome_count(Decision d) const {
    std::size_t count = 0;
    for (const auto& inst : instances) count += inst.decision == d ? 1 : 0;
    return count;
  }
};

inline FeatureImpactTable feature_impact(const NeuralModel& model,
                                         std::span<const Instance> dataset,
                                         const AuditOptions& options = {}) {
  const std::size_t n = model.input_width();
  std::vector<std::optional<InstanceCriticality>> per_instance(dataset.size());
  parallel_for(dataset.size(), options.threads, [&](std::size_t i) {
    const Instance& x = dataset[i];
    detail::check_instance(model, x);
    try {
      InstanceCriticality entry;
      entry.index = i;
      entry.decision = predict(model, x);
      entry.critical = critical_features(model, x);
      per_instance[i] = std::move(entry);
    } catch (const AmbiguityError&) {
      per_instance[i].reset();
    }
  });

  FeatureImpactTable table;
  table.rows.assign(n, FeatureImpactRow{});
  for (std::size_t i = 0; i < per_instance.size(); ++i) {
    if (!per_instance[i]) {
      table.ambiguous_instances.push_back(i);
      continue;
    }
    table.instances.push_back(std::move(*per_instance[i]));
  }
  for (const auto& inst : table.instances) {
    std::vector<bool> is_critical(n, false);
    for (std::size_t v : inst.critical) is_critical[v] = true;
    for (std::size_t v = 0; v < n; ++v) {
      if (!is_critical[v]) {
        ++table.rows[v].non_influenced;
      } else if (inst.decision == Decision::kPositive) {
        ++table.rows[v].critical_positive;
      } else {
        ++table.rows[v].critical_negative;
      }
    }
  }
  return table;
}

}  // namespace axp
