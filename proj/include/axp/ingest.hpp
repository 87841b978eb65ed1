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

// Survey ingestion: raw Mental Health in Tech records to 19 Boolean features
// plus the self-reported treatment label, and the binarized dataset file.
//
// Every feature except age is "answer is in the affirmative set". Anything
// else, including "Don't know", "Maybe", "Not sure" and missing values, maps
// to 0. The rules live in one table that can be replaced from a JSON file.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "axp/csv.hpp"
#include "axp/error.hpp"
#include "axp/survey.hpp"
#include "axp/types.hpp"

namespace axp {

// Field name (lower case) to raw string value.
using RawSurveyRecord = std::map<std::string, std::string>;

struct LabeledInstance {
  Instance instance;
  Decision label = Decision::kNegative;
};

struct FeatureRule {
  std::string feature;  // schema name, checked against the survey order
  std::string column;
  std::vector<std::string> affirmative;  // compared trimmed, case-insensitive
};

struct BinarizationRules {
  std::string age_column = "age";
  long long age_threshold = 31;  // x0 = 1 iff age > threshold
  std::string label_column = "treatment";
  std::vector<std::string> label_affirmative = {"yes"};
  std::vector<FeatureRule> features;  // x1..x18 in schema order

  static BinarizationRules defaults() {
    const std::vector<std::string> yes = {"yes"};
    BinarizationRules r;
    r.features = {
        {"male", "gender",
         {"male", "m", "man", "cis male", "cis man", "male (cis)", "make",
          "mal", "malr", "mail", "maile", "msle", "male."}},
        {"self_employed", "self_employed", yes},
        {"family_history", "family_history", yes},
        {"small_company", "no_employees", {"1-5", "6-25", "26-100"}},
        {"remote_work", "remote_work", yes},
        {"tech_company", "tech_company", yes},
        {"benefits", "benefits", yes},
        {"care_options", "care_options", yes},
        {"wellness_program", "wellness_program", yes},
        {"seek_help", "seek_help", yes},
        {"anonymity", "anonymity", yes},
        {"leave", "leave", {"very easy", "somewhat easy"}},
        {"mental_health_consequence", "mental_health_consequence", yes},
        {"phys_health_consequence", "phys_health_consequence", yes},
        {"coworkers", "coworkers", {"yes", "some of them"}},
        {"supervisor", "supervisor", {"yes", "some of them"}},
        {"mental_vs_physical", "mental_vs_physical", yes},
        {"obs_consequence", "obs_consequence", yes},
    };
    return r;
  }

  // Overrides from a JSON document with the same field names as this struct;
  // absent keys keep their defaults.
  static BinarizationRules from_json(const nlohmann::json& doc) {
    BinarizationRules r = defaults();
    try {
      if (doc.contains("age_column")) r.age_column = doc["age_column"];
      if (doc.contains("age_threshold")) r.age_threshold = doc["age_threshold"];
      if (doc.contains("label_column")) r.label_column = doc["label_column"];
      if (doc.contains("label_affirmative")) {
        r.label_affirmative =
            doc["label_affirmative"].get<std::vector<std::string>>();
      }
      if (doc.contains("features")) {
        r.features.clear();
        for (const auto& f : doc["features"]) {
          r.features.push_back(
              {f.at("feature").get<std::string>(),
               f.at("column").get<std::string>(),
               f.at("affirmative").get<std::vector<std::string>>()});
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("binarization rules: ") + e.what());
    }
    r.validate();
    return r;
  }

  static BinarizationRules load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open rules file '" + path + "'");
    try {
      return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("binarization rules: ") + e.what());
    }
  }

  // Feature order must be exactly the survey schema order.
  void validate() const {
    if (features.size() + 1 != survey::kFeatureCount) {
      throw ConfigError("binarization rules must cover " +
                        std::to_string(survey::kFeatureCount - 1) +
                        " non-age features, got " +
                        std::to_string(features.size()));
    }
    for (std::size_t i = 0; i < features.size(); ++i) {
      if (features[i].feature != survey::kFeatures[i + 1].name) {
        throw ConfigError("rule " + std::to_string(i + 1) + " is for '" +
                          features[i].feature + "', expected '" +
                          std::string(survey::kFeatures[i + 1].name) + "'");
      }
    }
  }

  // Every column binarize() reads, including age and the label.
  std::vector<std::string> required_columns() const {
    std::vector<std::string> cols = {age_column};
    for (const auto& f : features) cols.push_back(f.column);
    cols.push_back(label_column);
    return cols;
  }
};

namespace detail {

inline std::string normalize(std::string_view raw) {
  std::size_t b = 0, e = raw.size();
  while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
  std::string out(raw.substr(b, e - b));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline bool is_affirmative(std::string_view raw,
                           const std::vector<std::string>& affirmative) {
  const std::string value = normalize(raw);
  return std::any_of(affirmative.begin(), affirmative.end(),
                     [&](const std::string& a) { return normalize(a) == value; });
}

inline bool is_missing(const std::string& normalized) {
  return normalized.empty() || normalized == "na" || normalized == "n/a" ||
         normalized == "nan";
}

inline const std::string& field(const RawSurveyRecord& record,
                                const std::string& column,
                                std::size_t index) {
  auto it = record.find(normalize(column));
  if (it == record.end()) {
    throw IngestError(index, "missing field '" + column + "'");
  }
  return it->second;
}

}  // namespace detail

inline LabeledInstance binarize(const RawSurveyRecord& record,
                                const BinarizationRules& rules,
                                std::size_t index = 0) {
  LabeledInstance out;
  out.instance = Instance(survey::kFeatureCount);

  const std::string age = detail::normalize(detail::field(record, rules.age_column, index));
  if (!detail::is_missing(age)) {
    long long years = 0;
    auto [ptr, ec] = std::from_chars(age.data(), age.data() + age.size(), years);
    if (ec != std::errc() || ptr != age.data() + age.size()) {
      throw IngestError(index, "unparseable age '" + age + "'");
    }
    out.instance.set(0, years > rules.age_threshold);
  }
  for (std::size_t i = 0; i < rules.features.size(); ++i) {
    const FeatureRule& rule = rules.features[i];
    out.instance.set(i + 1, detail::is_affirmative(
                                detail::field(record, rule.column, index),
                                rule.affirmative));
  }
  out.label = detail::is_affirmative(
                  detail::field(record, rules.label_column, index),
                  rules.label_affirmative)
                  ? Decision::kPositive
                  : Decision::kNegative;
  return out;
}

inline LabeledInstance binarize(const RawSurveyRecord& record) {
  return binarize(record, BinarizationRules::defaults());
}

struct DatasetStats {
  std::size_t rows = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t male = 0;

  double male_fraction() const {
    return rows == 0 ? 0.0
                     : static_cast<double>(male) / static_cast<double>(rows);
  }
};

struct SkippedRecord {
  std::size_t index = 0;  // 0-based data row
  std::string reason;
};

struct SurveyDataset {
  std::vector<LabeledInstance> rows;
  DatasetStats stats;
  std::vector<SkippedRecord> skipped;
};

inline SurveyDataset read_survey(std::istream& in,
                                 const BinarizationRules& rules =
                                     BinarizationRules::defaults()) {
  const auto table = read_csv(in);
  if (table.empty()) throw ParseError("survey file has no header row");
  std::vector<std::string> header;
  for (const auto& h : table.front()) header.push_back(detail::normalize(h));
  for (const auto& col : rules.required_columns()) {
    if (std::find(header.begin(), header.end(), detail::normalize(col)) ==
        header.end()) {
      throw ParseError("survey header lacks column '" + col + "'");
    }
  }
  if (table.size() < 2) throw ParseError("survey file has zero data rows");

  SurveyDataset out;
  for (std::size_t r = 1; r < table.size(); ++r) {
    const std::size_t index = r - 1;
    const CsvRow& row = table[r];
    if (row.size() != header.size()) {
      out.skipped.push_back({index, "has " + std::to_string(row.size()) +
                                        " fields, header has " +
                                        std::to_string(header.size())});
      continue;
    }
    RawSurveyRecord record;
    for (std::size_t c = 0; c < header.size(); ++c) record[header[c]] = row[c];
    try {
      out.rows.push_back(binarize(record, rules, index));
    } catch (const IngestError& e) {
      out.skipped.push_back({index, e.what()});
    }
  }
  for (const auto& row : out.rows) {
    ++out.stats.rows;
    if (row.label == Decision::kPositive) {
      ++out.stats.positive;
    } else {
      ++out.stats.negative;
    }
    if (row.instance[survey::kGenderFeature]) ++out.stats.male;
  }
  if (out.rows.empty()) throw ParseError("survey file has no parseable rows");
  return out;
}

inline SurveyDataset load_dataset(const std::string& path,
                                  const BinarizationRules& rules =
                                      BinarizationRules::defaults()) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open survey file '" + path + "'");
  return read_survey(in, rules);
}

// Binarized dataset file: header of feature names followed by "label", then
// one line of comma-separated 0/1 values per instance.
struct BinarizedDataset {
  std::vector<std::string> feature_names;
  std::vector<Instance> instances;
  std::vector<Decision> labels;  // empty when the file has no label column
};

inline void write_binarized(std::ostream& out, const FeatureSchema& schema,
                            const std::vector<LabeledInstance>& rows) {
  for (const auto& name : schema.names()) out << name << ',';
  out << "label\n";
  for (const auto& row : rows) {
    if (row.instance.size() != schema.size()) {
      throw SchemaError("row width does not match schema");
    }
    for (std::size_t i = 0; i < row.instance.size(); ++i) {
      out << (row.instance[i] ? '1' : '0') << ',';
    }
    out << to_label(row.label) << '\n';
  }
}

inline BinarizedDataset read_binarized(std::istream& in) {
  const auto table = read_csv(in);
  if (table.empty()) throw ParseError("binarized dataset has no header row");
  BinarizedDataset out;
  out.feature_names = table.front();
  const bool labeled = !out.feature_names.empty() &&
                       detail::normalize(out.feature_names.back()) == "label";
  if (labeled) out.feature_names.pop_back();
  const std::size_t n = out.feature_names.size();
  if (n == 0) throw ParseError("binarized dataset has no feature columns");
  auto bit = [](const std::string& s, std::size_t line) {
    const std::string v = detail::normalize(s);
    if (v == "0") return 0;
    if (v == "1") return 1;
    throw ParseError("line " + std::to_string(line) + ": value '" + s +
                     "' is not 0 or 1");
  };
  for (std::size_t r = 1; r < table.size(); ++r) {
    const CsvRow& row = table[r];
    if (row.size() != n + (labeled ? 1 : 0)) {
      throw ParseError("line " + std::to_string(r + 1) + " has " +
                       std::to_string(row.size()) + " fields");
    }
    Instance x(n);
    for (std::size_t i = 0; i < n; ++i) x.set(i, bit(row[i], r + 1) == 1);
    out.instances.push_back(std::move(x));
    if (labeled) out.labels.push_back(decision_from_label(bit(row[n], r + 1)));
  }
  if (out.instances.empty()) throw ParseError("binarized dataset has zero rows");
  return out;
}

inline BinarizedDataset load_binarized(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open dataset file '" + path + "'");
  return read_binarized(in);
}

// Column names must match the schema exactly and in order.
inline void check_columns(const BinarizedDataset& data,
                          const FeatureSchema& schema) {
  if (data.feature_names != schema.names()) {
    throw SchemaError("dataset columns do not match the model's feature names");
  }
}

}  // namespace axp
