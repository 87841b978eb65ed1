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

// axp-audit: ingest survey data, predict, explain decisions and audit a model.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 ambiguity error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "axp/axp.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitAmbiguous = 4;

struct RunConfig {
  std::string model_path;
  std::string data_path;
  std::string rules_path;
  std::string protected_feature;
  std::string order = "ascending";
  std::size_t max_size = 3;
  std::optional<std::size_t> min_count;
  std::optional<std::size_t> top_k;
  std::string outcome = "both";
  std::string format = "text";
  std::string out_path;
  std::string instance;
  std::string free_features;
  std::string exclude;
  std::size_t threads = 0;
  bool trace = false;
};

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) throw axp::ParseError("cannot write '" + cfg.out_path + "'");
  out << text;
  if (!out) throw axp::ParseError("failed writing '" + cfg.out_path + "'");
}

bool json_output(const RunConfig& cfg) { return cfg.format == "json"; }

axp::NeuralModel require_model(const RunConfig& cfg) {
  if (cfg.model_path.empty()) {
    throw axp::ConfigError("--model is required (or set AXP_MODEL)");
  }
  return axp::load_model(cfg.model_path);
}

std::vector<axp::Instance> require_data(const RunConfig& cfg,
                                        const axp::NeuralModel& model) {
  if (cfg.data_path.empty()) throw axp::ConfigError("--data is required");
  auto data = axp::load_binarized(cfg.data_path);
  axp::check_columns(data, model.schema());
  return std::move(data.instances);
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

axp::FeatureSet resolve_features(const axp::FeatureSchema& schema,
                                 const std::string& list) {
  axp::FeatureSet out;
  for (const auto& token : split(list)) out.push_back(schema.resolve(token));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// An n-digit 0/1 string (commas allowed) is an inline instance; anything else
// is an index into --data.
struct SelectedInstance {
  axp::Instance instance;
  std::optional<std::size_t> index;
};

SelectedInstance select_instance(const RunConfig& cfg,
                                 const axp::NeuralModel& model) {
  if (cfg.instance.empty()) throw axp::ConfigError("--instance is required");
  std::string bits;
  bool binary = true;
  for (char c : cfg.instance) {
    if (c == '0' || c == '1') {
      bits.push_back(c);
    } else if (c != ',' && c != ' ') {
      binary = false;
    }
  }
  if (binary && bits.size() == model.input_width()) {
    axp::Instance x(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) x.set(i, bits[i] == '1');
    return {x, std::nullopt};
  }
  std::size_t index = 0;
  try {
    std::size_t used = 0;
    index = std::stoul(cfg.instance, &used);
    if (used != cfg.instance.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw axp::ConfigError("--instance must be an index or a " +
                           std::to_string(model.input_width()) +
                           "-bit vector, got '" + cfg.instance + "'");
  }
  const auto data = require_data(cfg, model);
  if (index >= data.size()) {
    throw axp::ConfigError("instance index " + std::to_string(index) +
                           " out of range (dataset has " +
                           std::to_string(data.size()) + " rows)");
  }
  return {data[index], index};
}

std::vector<std::size_t> resolve_order(const RunConfig& cfg,
                                       const axp::NeuralModel& model) {
  if (cfg.order == "ascending") {
    return axp::make_order(model, axp::OrderPolicy::kAscending);
  }
  if (cfg.order == "weight") {
    return axp::make_order(model, axp::OrderPolicy::kWeightMagnitude);
  }
  std::vector<std::size_t> order;
  for (const auto& token : split(cfg.order)) {
    order.push_back(model.schema().resolve(token));
  }
  return order;
}

std::size_t resolve_protected(const RunConfig& cfg,
                              const axp::FeatureSchema& schema) {
  if (!cfg.protected_feature.empty()) {
    return schema.resolve(cfg.protected_feature);
  }
  if (schema.protected_index()) return *schema.protected_index();
  throw axp::ConfigError(
      "no protected feature: pass --protected or set protected_index in the "
      "model");
}

void cmd_ingest(const RunConfig& cfg) {
  if (cfg.data_path.empty()) throw axp::ConfigError("--data is required");
  const auto rules = cfg.rules_path.empty()
                         ? axp::BinarizationRules::defaults()
                         : axp::BinarizationRules::load(cfg.rules_path);
  const auto dataset = axp::load_dataset(cfg.data_path, rules);
  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw axp::ParseError("cannot write '" + cfg.out_path + "'");
    axp::write_binarized(out, axp::survey::schema(), dataset.rows);
  }
  const auto& st = dataset.stats;
  char male[32];
  std::snprintf(male, sizeof(male), "%.2f%%", 100.0 * st.male_fraction());
  std::cerr << st.rows << " rows, " << st.positive << " positive, "
            << st.negative << " negative, male " << male << "\n";
  for (const auto& skip : dataset.skipped) {
    std::cerr << "skipped " << skip.reason << "\n";
  }
  if (cfg.out_path.empty()) {
    axp::write_binarized(std::cout, axp::survey::schema(), dataset.rows);
  }
}

void cmd_predict(const RunConfig& cfg) {
  const auto model = require_model(cfg);
  std::vector<std::pair<std::optional<std::size_t>, axp::Instance>> targets;
  if (!cfg.instance.empty()) {
    auto sel = select_instance(cfg, model);
    targets.emplace_back(sel.index, sel.instance);
  } else {
    const auto data = require_data(cfg, model);
    for (std::size_t i = 0; i < data.size(); ++i) targets.emplace_back(i, data[i]);
  }
  nlohmann::json rows = nlohmann::json::array();
  std::string text;
  bool ambiguous = false;
  for (const auto& [index, x] : targets) {
    const double z = axp::logit(model, x);
    const bool amb = axp::is_ambiguous(z);
    ambiguous = ambiguous || amb;
    const std::string label =
        amb ? "ambiguous"
            : std::string(axp::to_string(z >= 0 ? axp::Decision::kPositive
                                                : axp::Decision::kNegative));
    rows.push_back({{"instance_index", index ? nlohmann::json(*index)
                                             : nlohmann::json(nullptr)},
                    {"instance", x.to_string()},
                    {"logit", z},
                    {"decision", amb ? nlohmann::json(nullptr)
                                     : nlohmann::json(z >= 0 ? 1 : 0)}});
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", z);
    text += (index ? std::to_string(*index) : std::string("-")) + " " +
            x.to_string() + " logit=" + buf + " " + label + "\n";
  }
  emit(cfg, json_output(cfg) ? rows.dump(2) + "\n" : text);
  if (ambiguous && targets.size() == 1) {
    throw axp::AmbiguityError("instance is within the ambiguity margin", 0.0);
  }
}

void cmd_explain(const RunConfig& cfg) {
  const auto model = require_model(cfg);
  const auto sel = select_instance(cfg, model);
  const auto order = resolve_order(cfg, model);
  const auto excluded = resolve_features(model.schema(), cfg.exclude);

  std::vector<axp::TraceStep> steps;
  axp::TraceSink sink;
  if (cfg.trace) sink = [&](const axp::TraceStep& s) { steps.push_back(s); };

  std::optional<axp::Explanation> e;
  if (excluded.empty()) {
    e = axp::compute_explanation(model, sel.instance, order, sink);
  } else {
    e = axp::compute_explanation_excluding(model, sel.instance, excluded, order,
                                           sink);
  }
  if (!e) {
    const std::string msg = "no abductive explanation avoids the excluded features";
    emit(cfg, json_output(cfg)
                  ? nlohmann::json{{"instance_index", sel.index
                                                          ? nlohmann::json(*sel.index)
                                                          : nlohmann::json(nullptr)},
                                   {"explanation", nullptr},
                                   {"reason", msg}}
                            .dump(2) +
                        "\n"
                  : msg + "\n");
    return;
  }
  e->instance_index = sel.index;
  if (!axp::verify_explanation(model, sel.instance, *e)) {
    throw axp::Error("internal error: explanation failed its self-check");
  }
  if (json_output(cfg)) {
    auto doc = axp::explanation_to_json(model.schema(), *e);
    doc["instance"] = sel.instance.to_string();
    emit(cfg, doc.dump(2) + "\n");
    return;
  }
  std::string text = axp::render_explanation(model.schema(), *e);
  if (cfg.trace) text = axp::render_trace(steps, *e) + "\n" + text;
  emit(cfg, text);
}

void cmd_bias_audit(const RunConfig& cfg) {
  const auto model = require_model(cfg);
  const std::size_t p = resolve_protected(cfg, model.schema());
  const auto data = require_data(cfg, model);
  const auto report = axp::audit_bias(model, data, p, {cfg.threads});
  emit(cfg, json_output(cfg)
                ? axp::bias_report_json(model.schema(), report).dump(2) + "\n"
                : axp::bias_report_text(model.schema(), report));
}

void cmd_feature_impact(const RunConfig& cfg) {
  const auto model = require_model(cfg);
  const auto data = require_data(cfg, model);
  const auto table = axp::feature_impact(model, data, {cfg.threads});
  emit(cfg, json_output(cfg)
                ? axp::impact_report_json(model.schema(), table).dump(2) + "\n"
                : axp::impact_report_text(model.schema(), table));
}

void cmd_mine_combos(const RunConfig& cfg) {
  const auto model = require_model(cfg);
  const auto data = require_data(cfg, model);
  axp::MiningOptions options;
  options.max_size = cfg.max_size;
  options.min_count = cfg.min_count;
  options.top_k = cfg.top_k;
  if (cfg.outcome == "negative") options.outcome = axp::Decision::kNegative;
  if (cfg.outcome == "positive") options.outcome = axp::Decision::kPositive;
  const auto table = axp::feature_impact(model, data, {cfg.threads});
  const auto report = axp::mine_combinations(table, options);
  emit(cfg, json_output(cfg)
                ? axp::combination_report_json(report).dump(2) + "\n"
                : axp::combination_report_text(report));
}

void cmd_export_smt(const RunConfig& cfg) {
  const auto model = require_model(cfg);
  const auto sel = select_instance(cfg, model);
  const auto d = axp::predict(model, sel.instance);
  auto partial = axp::PartialAssignment::all_fixed(sel.instance);
  for (std::size_t v : resolve_features(model.schema(), cfg.free_features)) {
    partial.release(v);
  }
  emit(cfg, axp::export_smtlib(model, partial, d));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Abductive explanations and decision audits for ReLU classifiers"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model_path, "portable weights document")
        ->envname("AXP_MODEL");
  };
  auto add_data = [&](CLI::App* sub, const std::string& help) {
    sub->add_option("--data", cfg.data_path, help);
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--out", cfg.out_path, "write output here instead of stdout");
  };
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  };

  auto* ingest = app.add_subcommand("ingest", "binarize a raw survey CSV");
  add_data(ingest, "raw survey CSV");
  ingest->add_option("--rules", cfg.rules_path, "binarization rules JSON");
  ingest->add_option("--out", cfg.out_path, "binarized dataset output");

  auto* predict = app.add_subcommand("predict", "evaluate the model");
  add_model(predict);
  add_data(predict, "binarized dataset");
  predict->add_option("--instance", cfg.instance, "row index or inline bits");
  add_output(predict);

  auto* explain = app.add_subcommand("explain", "compute an abductive explanation");
  add_model(explain);
  add_data(explain, "binarized dataset");
  explain->add_option("--instance", cfg.instance, "row index or inline bits");
  explain->add_option("--order", cfg.order,
                      "ascending, weight, or a comma-separated permutation");
  explain->add_option("--exclude", cfg.exclude,
                      "features the explanation must avoid");
  explain->add_flag("--trace", cfg.trace, "print the deletion trace");
  add_output(explain);

  auto* bias = app.add_subcommand("bias-audit", "per-decision bias audit");
  add_model(bias);
  add_data(bias, "binarized dataset");
  bias->add_option("--protected", cfg.protected_feature,
                   "protected feature name or index");
  add_threads(bias);
  add_output(bias);

  auto* impact = app.add_subcommand("feature-impact", "per-feature criticality");
  add_model(impact);
  add_data(impact, "binarized dataset");
  add_threads(impact);
  add_output(impact);

  auto* mine = app.add_subcommand("mine-combos", "critical feature combinations");
  add_model(mine);
  add_data(mine, "binarized dataset");
  mine->add_option("--max-size", cfg.max_size, "largest combination size");
  mine->add_option("--min-count", cfg.min_count,
                   "minimum instance count (default: 5% of the outcome class)");
  mine->add_option("--top-k", cfg.top_k,
                   "only combine the k most critical features per outcome");
  mine->add_option("--outcome", cfg.outcome, "negative, positive or both")
      ->check(CLI::IsMember({"negative", "positive", "both"}));
  add_threads(mine);
  add_output(mine);

  auto* smt = app.add_subcommand("export-smt", "write the SMT-LIB2 query");
  add_model(smt);
  add_data(smt, "binarized dataset");
  smt->add_option("--instance", cfg.instance, "row index or inline bits");
  smt->add_option("--free", cfg.free_features, "features left free");
  smt->add_option("--out", cfg.out_path, "script output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*ingest) cmd_ingest(cfg);
    if (*predict) cmd_predict(cfg);
    if (*explain) cmd_explain(cfg);
    if (*bias) cmd_bias_audit(cfg);
    if (*impact) cmd_feature_impact(cfg);
    if (*mine) cmd_mine_combos(cfg);
    if (*smt) cmd_export_smt(cfg);
  } catch (const axp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const axp::AmbiguityError& e) {
    std::cerr << "ambiguous: " << e.what() << "\n";
    return kExitAmbiguous;
  } catch (const axp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
