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

// Critical combinations: feature sets contained in every abductive
// explanation of an instance. A set S has that property iff S is a subset of
// the instance's critical features, so mining is frequent-itemset counting
// over the per-instance critical sets of a FeatureImpactTable. Support is
// anti-monotone, which gives the usual level-wise (apriori) pruning.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "axp/audit.hpp"
#include "axp/error.hpp"
#include "axp/types.hpp"

namespace axp {

struct MiningOptions {
  std::size_t max_size = 3;
  // Absolute support threshold. Default: ceil(5% of the outcome class).
  std::optional<std::size_t> min_count;
  // Only mine this outcome; both when unset.
  std::optional<Decision> outcome;
  // Restrict candidates to the k features most often critical in the class.
  std::optional<std::size_t> top_k;
};

struct Combination {
  FeatureSet features;
  Decision outcome = Decision::kNegative;
  std::size_t count = 0;
  double whole_ratio = 0.0;     // count / audited instances
  double specific_ratio = 0.0;  // count / instances with this outcome
};

struct OutcomeSummary {
  Decision outcome = Decision::kNegative;
  std::size_t instances = 0;
  std::size_t min_count = 0;
  FeatureSet candidates;
};

struct CombinationReport {
  std::size_t audited = 0;
  std::size_t max_size = 0;
  std::vector<OutcomeSummary> outcomes;
  // Per outcome (negative first), by size, then count descending.
  std::vector<Combination> combinations;
};

inline std::size_t default_min_count(std::size_t class_size) {
  const auto five_percent =
      static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(class_size)));
  return std::max<std::size_t>(1, five_percent);
}

namespace detail {

inline std::size_t support(const std::vector<const FeatureSet*>& transactions,
                           const FeatureSet& items) {
  std::size_t count = 0;
  for (const FeatureSet* t : transactions) {
    if (std::includes(t->begin(), t->end(), items.begin(), items.end())) {
      ++count;
    }
  }
  return count;
}

// Joins frequent k-sets sharing their first k-1 items and drops candidates
// with an infrequent k-subset.
inline std::vector<FeatureSet> next_candidates(
    const std::vector<FeatureSet>& frequent) {
  std::vector<FeatureSet> out;
  for (std::size_t a = 0; a < frequent.size(); ++a) {
    for (std::size_t b = a + 1; b < frequent.size(); ++b) {
      const FeatureSet& left = frequent[a];
      const FeatureSet& right = frequent[b];
      if (!std::equal(left.begin(), left.end() - 1, right.begin())) continue;
      FeatureSet candidate = left;
      candidate.push_back(right.back());
      std::sort(candidate.begin(), candidate.end());
      bool all_frequent = true;
      for (std::size_t drop = 0; drop < candidate.size() && all_frequent;
           ++drop) {
        FeatureSet subset = candidate;
        subset.erase(subset.begin() + static_cast<std::ptrdiff_t>(drop));
        all_frequent =
            std::binary_search(frequent.begin(), frequent.end(), subset);
      }
      if (all_frequent) out.push_back(std::move(candidate));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

inline CombinationReport mine_combinations(const FeatureImpactTable& impact,
                                           const MiningOptions& options = {}) {
  if (options.max_size < 1) throw ConfigError("max_size must be at least 1");
  if (options.top_k && *options.top_k < 1) {
    throw ConfigError("top_k must be at least 1");
  }
  const std::size_t n = impact.rows.size();
  CombinationReport report;
  report.audited = impact.audited();
  report.max_size = options.max_size;

  for (Decision outcome : {Decision::kNegative, Decision::kPositive}) {
    if (options.outcome && *options.outcome != outcome) continue;
    std::vector<const FeatureSet*> transactions;
    for (const auto& inst : impact.instances) {
      if (inst.decision == outcome) transactions.push_back(&inst.critical);
    }
    OutcomeSummary summary;
    summary.outcome = outcome;
    summary.instances = transactions.size();
    summary.min_count = std::max<std::size_t>(
        1, options.min_count.value_or(default_min_count(transactions.size())));

    std::vector<std::size_t> single(n, 0);
    for (const FeatureSet* t : transactions) {
      for (std::size_t v : *t) ++single[v];
    }
    std::vector<std::size_t> candidates(n);
    for (std::size_t v = 0; v < n; ++v) candidates[v] = v;
    if (options.top_k && *options.top_k < n) {
      std::stable_sort(candidates.begin(), candidates.end(),
                       [&](std::size_t a, std::size_t b) {
                         return single[a] > single[b];
                       });
      candidates.resize(*options.top_k);
      std::sort(candidates.begin(), candidates.end());
    }
    summary.candidates = candidates;

    auto emit = [&](const FeatureSet& items, std::size_t count) {
      Combination c;
      c.features = items;
      c.outcome = outcome;
      c.count = count;
      c.whole_ratio = report.audited == 0
                          ? 0.0
                          : static_cast<double>(count) /
                                static_cast<double>(report.audited);
      c.specific_ratio = transactions.empty()
                             ? 0.0
                             : static_cast<double>(count) /
                                   static_cast<double>(transactions.size());
      return c;
    };

    std::vector<Combination> found;
    std::vector<FeatureSet> frequent;
    for (std::size_t v : candidates) {
      if (single[v] >= summary.min_count) {
        frequent.push_back({v});
        found.push_back(emit({v}, single[v]));
      }
    }
    for (std::size_t size = 2; size <= options.max_size && !frequent.empty();
         ++size) {
      std::vector<FeatureSet> next;
      for (FeatureSet& candidate : detail::next_candidates(frequent)) {
        const std::size_t count = detail::support(transactions, candidate);
        if (count >= summary.min_count) {
          found.push_back(emit(candidate, count));
          next.push_back(std::move(candidate));
        }
      }
      frequent = std::move(next);
    }
    std::stable_sort(found.begin(), found.end(),
                     [](const Combination& a, const Combination& b) {
                       if (a.features.size() != b.features.size()) {
                         return a.features.size() < b.features.size();
                       }
                       if (a.count != b.count) return a.count > b.count;
                       return a.features < b.features;
                     });
    report.combinations.insert(report.combinations.end(), found.begin(),
                               found.end());
    report.outcomes.push_back(std::move(summary));
  }
  return report;
}

}  // namespace axp
