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

// Domain vocabulary shared by every module: the feature schema, Boolean
// instances, binary decisions and partial assignments (instances with some
// features left free).

#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "axp/error.hpp"

namespace axp {

// Sorted, duplicate-free list of feature indices.
using FeatureSet = std::vector<std::size_t>;

enum class Decision : std::uint8_t { kNegative = 0, kPositive = 1 };

constexpr Decision opposite(Decision d) {
  return d == Decision::kPositive ? Decision::kNegative : Decision::kPositive;
}

constexpr std::string_view to_string(Decision d) {
  return d == Decision::kPositive ? "positive" : "negative";
}

constexpr int to_label(Decision d) { return d == Decision::kPositive ? 1 : 0; }

inline Decision decision_from_label(int label) {
  if (label != 0 && label != 1) {
    throw ParseError("decision label must be 0 or 1, got " +
                     std::to_string(label));
  }
  return label == 1 ? Decision::kPositive : Decision::kNegative;
}

class FeatureSchema {
 public:
  FeatureSchema() = default;

  FeatureSchema(std::vector<std::string> names,
                std::vector<std::string> questions,
                std::optional<std::size_t> protected_index = std::nullopt)
      : names_(std::move(names)),
        questions_(std::move(questions)),
        protected_index_(protected_index) {
    if (names_.empty()) throw SchemaError("schema needs at least one feature");
    if (questions_.size() != names_.size()) {
      throw SchemaError("schema has " + std::to_string(names_.size()) +
                        " names but " + std::to_string(questions_.size()) +
                        " questions");
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : names_) {
      if (name.empty()) throw SchemaError("feature names must be nonempty");
      if (!seen.insert(name).second) {
        throw SchemaError("duplicate feature name '" + name + "'");
      }
    }
    if (protected_index_ && *protected_index_ >= names_.size()) {
      throw SchemaError("protected index " + std::to_string(*protected_index_) +
                        " out of range");
    }
  }

  // x0..x{n-1} with placeholder questions.
  static FeatureSchema generic(std::size_t n,
                               std::optional<std::size_t> protected_index =
                                   std::nullopt) {
    std::vector<std::string> names, questions;
    for (std::size_t i = 0; i < n; ++i) {
      names.push_back("x" + std::to_string(i));
      questions.push_back("feature x" + std::to_string(i) + "?");
    }
    return FeatureSchema(std::move(names), std::move(questions),
                         protected_index);
  }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::string>& questions() const { return questions_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::string& question(std::size_t i) const { return questions_.at(i); }
  std::optional<std::size_t> protected_index() const {
    return protected_index_;
  }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return i;
    }
    return std::nullopt;
  }

  // Accepts a feature name, a bare index ("3") or the positional form "x3".
  std::size_t resolve(std::string_view token) const {
    if (auto idx = index_of(token)) return *idx;
    std::string_view digits = token;
    if (!digits.empty() && digits.front() == 'x') digits.remove_prefix(1);
    std::size_t value = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (!digits.empty() && ec == std::errc() &&
        ptr == digits.data() + digits.size() && value < size()) {
      return value;
    }
    throw ConfigError("unknown feature '" + std::string(token) + "'");
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::string> questions_;
  std::optional<std::size_t> protected_index_;
};

// A Boolean feature vector. Also read as the conjunction of its literals.
class Instance {
 public:
  Instance() = default;
  explicit Instance(std::size_t n) : values_(n, 0) {}
  Instance(std::initializer_list<int> bits) {
    for (int b : bits) values_.push_back(b != 0 ? 1 : 0);
  }
  explicit Instance(std::vector<std::uint8_t> values)
      : values_(std::move(values)) {
    for (auto& v : values_) v = v != 0 ? 1 : 0;
  }

  // Bit i of `mask` becomes feature i.
  static Instance from_mask(std::uint64_t mask, std::size_t n) {
    Instance x(n);
    for (std::size_t i = 0; i < n; ++i) x.set(i, ((mask >> i) & 1U) != 0);
    return x;
  }

  std::size_t size() const { return values_.size(); }
  bool operator[](std::size_t i) const { return values_[i] != 0; }
  bool at(std::size_t i) const { return values_.at(i) != 0; }
  void set(std::size_t i, bool v) { values_.at(i) = v ? 1 : 0; }
  const std::vector<std::uint8_t>& values() const { return values_; }

  std::string to_string() const {
    std::string s;
    for (auto v : values_) s.push_back(v != 0 ? '1' : '0');
    return s;
  }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::vector<std::uint8_t> values_;
};

enum class LiteralState : std::uint8_t { kFalse = 0, kTrue = 1, kFree = 2 };

// Per-feature fixed literal or free. Its completions are all instances that
// agree with it on the fixed features.
class PartialAssignment {
 public:
  PartialAssignment() = default;
  explicit PartialAssignment(std::size_t n) : states_(n, LiteralState::kFree) {}

  static PartialAssignment all_free(std::size_t n) {
    return PartialAssignment(n);
  }

  static PartialAssignment all_fixed(const Instance& x) {
    PartialAssignment p(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) p.fix(i, x[i]);
    return p;
  }

  // Fixes x's literals on `fixed` and leaves everything else free.
  static PartialAssignment from_subset(const Instance& x,
                                       std::span<const std::size_t> fixed) {
    PartialAssignment p(x.size());
    for (std::size_t i : fixed) {
      if (i >= x.size()) {
        throw SchemaError("feature index " + std::to_string(i) +
                          " out of range");
      }
      p.fix(i, x[i]);
    }
    return p;
  }

  std::size_t size() const { return states_.size(); }
  LiteralState state(std::size_t i) const { return states_[i]; }
  bool is_free(std::size_t i) const { return states_[i] == LiteralState::kFree; }
  bool value(std::size_t i) const { return states_[i] == LiteralState::kTrue; }

  void fix(std::size_t i, bool v) {
    states_.at(i) = v ? LiteralState::kTrue : LiteralState::kFalse;
  }
  void release(std::size_t i) { states_.at(i) = LiteralState::kFree; }

  FeatureSet free_features() const {
    FeatureSet out;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (is_free(i)) out.push_back(i);
    }
    return out;
  }

  std::size_t free_count() const {
    return static_cast<std::size_t>(
        std::count(states_.begin(), states_.end(), LiteralState::kFree));
  }

  bool is_completion(const Instance& x) const {
    if (x.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
      if (!is_free(i) && value(i) != x[i]) return false;
    }
    return true;
  }

  // "?" for free features, as in a deletion trace.
  std::string to_string() const {
    std::string s;
    for (auto st : states_) {
      s.push_back(st == LiteralState::kFree ? '?'
                  : st == LiteralState::kTrue ? '1'
                                              : '0');
    }
    return s;
  }

  friend bool operator==(const PartialAssignment&,
                         const PartialAssignment&) = default;

 private:
  std::vector<LiteralState> states_;
};

}  // namespace axp
