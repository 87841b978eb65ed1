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

// Text and JSON renderings of explanations and audit reports. Both forms are
// produced from the same structs, so their numbers always agree.

#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "axp/audit.hpp"
#include "axp/explain.hpp"
#include "axp/mining.hpp"
#include "axp/survey.hpp"
#include "axp/types.hpp"

namespace axp {

inline std::string outcome_phrase(Decision d) {
  return d == Decision::kPositive ? "seeks treatment" : "does not seek treatment";
}

// "x9 = 0: does not know about the wellness program". Survey features use
// their fixed phrasing, other schemas echo the question with yes/no.
inline std::string render_literal(const FeatureSchema& schema,
                                  const Literal& lit) {
  std::string head = "x" + std::to_string(lit.feature) + " = " +
                     (lit.value ? "1" : "0") + ": ";
  if (auto text = survey::lookup(schema.name(lit.feature))) {
    return head + std::string(lit.value ? text->when_true : text->when_false);
  }
  return head + (lit.value ? "yes to \"" : "no to \"") +
         schema.question(lit.feature) + "\"";
}

inline std::string render_explanation(const FeatureSchema& schema,
                                      const Explanation& e) {
  std::string s;
  if (e.instance_index) {
    s += "instance " + std::to_string(*e.instance_index) + ": ";
  }
  s += "predicted " + std::string(to_string(e.decision)) + " (" +
       outcome_phrase(e.decision) + ")\n";
  s += "XP = {" + conjunction_string(e) + "}\n";
  s += "because:\n";
  for (const auto& lit : e.literals) {
    s += "  - " + render_literal(schema, lit) + "\n";
  }
  return s;
}

inline nlohmann::json explanation_to_json(const FeatureSchema& schema,
                                          const Explanation& e) {
  nlohmann::json literals = nlohmann::json::array();
  for (const auto& lit : e.literals) {
    literals.push_back({{"feature", lit.feature},
                        {"name", schema.name(lit.feature)},
                        {"value", lit.value ? 1 : 0}});
  }
  nlohmann::json doc;
  doc["instance_index"] = e.instance_index ? nlohmann::json(*e.instance_index)
                                           : nlohmann::json(nullptr);
  doc["decision"] = to_label(e.decision);
  doc["literals"] = literals;
  doc["conjunction"] = conjunction_string(e);
  return doc;
}

namespace detail {

inline std::size_t display_width(const std::string& s) {
  std::size_t width = 0;
  for (unsigned char c : s) width += (c & 0xC0) != 0x80 ? 1 : 0;
  return width;
}

// Pipe-separated table with columns padded to their widest cell.
inline std::string aligned_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], display_width(row[c]));
    }
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c > 0) line += " | ";
      line += rows[r][c];
      if (c + 1 < rows[r].size()) {
        line.append(widths[c] - display_width(rows[r][c]), ' ');
      }
    }
    out += line + "\n";
    if (r == 0) {
      std::string rule;
      for (std::size_t c = 0; c < widths.size(); ++c) {
        if (c > 0) rule += "-+-";
        rule.append(widths[c], '-');
      }
      out += rule + "\n";
    }
  }
  return out;
}

inline std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * fraction);
  return buf;
}

inline std::string feature_label(std::size_t v) { return "x" + std::to_string(v); }

}  // namespace detail

// Deletion trace with one row per oracle call: "?" marks freed features and
// the last column is ⊤ when a counterexample completion exists.
inline std::string render_trace(const std::vector<TraceStep>& steps,
                                const Explanation& result) {
  if (steps.empty()) return {};
  const std::size_t n = steps.front().state.size();
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head = {"Steps"};
  for (std::size_t i = 0; i < n; ++i) head.push_back(detail::feature_label(i));
  head.push_back("∃x'");
  rows.push_back(head);
  for (const auto& step : steps) {
    std::vector<std::string> row = {std::to_string(step.step)};
    for (char c : step.state.to_string()) row.emplace_back(1, c);
    row.push_back(step.counterexample ? "⊤" : "⊥");
    rows.push_back(row);
  }
  std::vector<std::string> final_row = {"final"};
  std::vector<std::string> cells(n, "?");
  for (const auto& lit : result.literals) cells[lit.feature] = lit.value ? "1" : "0";
  final_row.insert(final_row.end(), cells.begin(), cells.end());
  final_row.push_back("");
  rows.push_back(final_row);
  return detail::aligned_table(rows);
}

inline std::string bias_report_text(const FeatureSchema& schema,
                                    const BiasAuditReport& report) {
  std::string s = "Individual bias in the decisions (protected feature x" +
                  std::to_string(report.protected_feature) + " " +
                  schema.name(report.protected_feature) + ")\n";
  s += detail::aligned_table({{"Unbiased decisions", "Negative", "Positive"},
                              {std::to_string(report.unbiased),
                               std::to_string(report.biased_negative),
                               std::to_string(report.biased_positive)}});
  s += "unbiased ratio: " + detail::percent(report.unbiased_ratio()) + " of " +
       std::to_string(report.audited()) + " explained decisions\n";
  s += "ambiguous (not explained): " + std::to_string(report.ambiguous) + "\n";
  return s;
}

inline nlohmann::json bias_report_json(const FeatureSchema& schema,
                                       const BiasAuditReport& report) {
  return {{"protected_index", report.protected_feature},
          {"protected_name", schema.name(report.protected_feature)},
          {"unbiased", report.unbiased},
          {"biased_negative", report.biased_negative},
          {"biased_positive", report.biased_positive},
          {"ambiguous", report.ambiguous},
          {"total", report.total()},
          {"unbiased_ratio", report.unbiased_ratio()},
          {"biased_instances", report.biased_instances},
          {"ambiguous_instances", report.ambiguous_instances}};
}

inline std::string impact_report_text(const FeatureSchema& schema,
                                      const FeatureImpactTable& table) {
  std::vector<std::vector<std::string>> rows = {
      {"Features", "Name", "Non influenced", "Negative", "Positive"}};
  for (std::size_t v = 0; v < table.rows.size(); ++v) {
    const auto& r = table.rows[v];
    rows.push_back({detail::feature_label(v), schema.name(v),
                    std::to_string(r.non_influenced),
                    std::to_string(r.critical_negative),
                    std::to_string(r.critical_positive)});
  }
  std::string s = "Influence of features on the model outputs\n";
  s += detail::aligned_table(rows);
  s += "audited: " + std::to_string(table.audited()) + " (negative " +
       std::to_string(table.outcome_count(Decision::kNegative)) +
       ", positive " + std::to_string(table.outcome_count(Decision::kPositive)) +
       "), ambiguous: " + std::to_string(table.ambiguous_instances.size()) +
       "\n";
  return s;
}

inline nlohmann::json impact_report_json(const FeatureSchema& schema,
                                         const FeatureImpactTable& table) {
  nlohmann::json features = nlohmann::json::array();
  for (std::size_t v = 0; v < table.rows.size(); ++v) {
    const auto& r = table.rows[v];
    features.push_back({{"feature", v},
                        {"name", schema.name(v)},
                        {"non_influenced", r.non_influenced},
                        {"critical_negative", r.critical_negative},
                        {"critical_positive", r.critical_positive}});
  }
  nlohmann::json instances = nlohmann::json::array();
  for (const auto& inst : table.instances) {
    instances.push_back({{"instance_index", inst.index},
                         {"decision", to_label(inst.decision)},
                         {"critical", inst.critical}});
  }
  return {{"audited", table.audited()},
          {"negative", table.outcome_count(Decision::kNegative)},
          {"positive", table.outcome_count(Decision::kPositive)},
          {"ambiguous_instances", table.ambiguous_instances},
          {"features", features},
          {"instances", instances}};
}

inline std::string combination_string(const FeatureSet& features) {
  std::string s;
  for (std::size_t v : features) {
    if (!s.empty()) s += " ∧ ";
    s += detail::feature_label(v);
  }
  return s;
}

inline std::string combination_report_text(const CombinationReport& report) {
  std::vector<std::vector<std::string>> rows = {
      {"Outcomes", "Combinations", "Count", "Whole", "Specific"}};
  for (const auto& c : report.combinations) {
    rows.push_back({c.outcome == Decision::kPositive ? "Positive" : "Negative",
                    combination_string(c.features), std::to_string(c.count),
                    detail::percent(c.whole_ratio),
                    detail::percent(c.specific_ratio)});
  }
  std::string s = "Critical combinations of features (ratio: Whole / Specific)\n";
  s += detail::aligned_table(rows);
  for (const auto& o : report.outcomes) {
    s += std::string(o.outcome == Decision::kPositive ? "Positive" : "Negative") +
         ": " + std::to_string(o.instances) + " instances, min count " +
         std::to_string(o.min_count) + "\n";
  }
  return s;
}

inline nlohmann::json combination_report_json(const CombinationReport& report) {
  nlohmann::json combos = nlohmann::json::array();
  for (const auto& c : report.combinations) {
    combos.push_back({{"outcome", to_label(c.outcome)},
                      {"features", c.features},
                      {"count", c.count},
                      {"whole_ratio", c.whole_ratio},
                      {"specific_ratio", c.specific_ratio}});
  }
  nlohmann::json outcomes = nlohmann::json::array();
  for (const auto& o : report.outcomes) {
    outcomes.push_back({{"outcome", to_label(o.outcome)},
                        {"instances", o.instances},
                        {"min_count", o.min_count},
                        {"candidates", o.candidates}});
  }
  return {{"audited", report.audited},
          {"max_size", report.max_size},
          {"outcomes", outcomes},
          {"combinations", combos}};
}

}  // namespace axp
