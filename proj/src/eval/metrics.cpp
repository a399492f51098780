#include "agenda/eval/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "agenda/core/error.hpp"

namespace agenda::eval {

std::vector<GoldItem> gold_items(const Dataset& dataset) {
  std::vector<GoldItem> out;
  for (const auto& m : dataset.messages()) {
    if (m.gold) out.push_back({m.id, m.lang, *m.gold});
  }
  return out;
}

Aligned align(std::span<const classify::Prediction> predictions, std::span<const GoldItem> gold,
              const LabelSchema& schema) {
  std::unordered_map<std::string, const classify::Prediction*> by_id;
  for (const auto& p : predictions) {
    if (!by_id.emplace(p.id, &p).second) throw ValidationError("duplicate prediction id '" + p.id + "'");
  }
  {
    std::unordered_map<std::string, bool> gold_ids;
    for (const auto& g : gold) gold_ids.emplace(g.id, true);
    for (const auto& p : predictions) {
      if (!gold_ids.count(p.id)) throw ValidationError("id mismatch: prediction '" + p.id + "' has no gold");
    }
  }
  Aligned out;
  for (const auto& g : gold) {
    auto it = by_id.find(g.id);
    if (it == by_id.end()) throw ValidationError("id mismatch: no prediction for '" + g.id + "'");
    if (g.labels.empty()) throw ValidationError("message '" + g.id + "' has an empty gold set");
    out.ids.push_back(g.id);
    out.langs.push_back(g.lang);
    out.gold.push_back(schema.indices(g.labels));
    out.predicted.push_back(schema.indices(it->second->labels));
  }
  return out;
}

std::vector<ClassCounts> count_incidences(std::size_t n_labels, std::span<const std::vector<std::size_t>> gold,
                                          std::span<const std::vector<std::size_t>> predicted) {
  if (gold.size() != predicted.size()) throw ValidationError("gold and predictions are not aligned");
  std::vector<ClassCounts> counts(n_labels);
  for (std::size_t e = 0; e < gold.size(); ++e) accumulate(counts, gold[e], predicted[e]);
  return counts;
}

MetricsReport multilabel_metrics(std::span<const classify::Prediction> predictions, std::span<const GoldItem> gold,
                                 const LabelSchema& schema, std::string run_id, std::optional<double> tau) {
  const auto a = align(predictions, gold, schema);
  MetricsReport report;
  report.run_id = std::move(run_id);
  report.tau = tau;
  report.n_examples = a.ids.size();

  const auto counts = count_incidences(schema.size(), a.gold, a.predicted);
  for (std::size_t c = 0; c < schema.size(); ++c) {
    report.per_class.push_back({schema.at(c).id, counts[c], precision(counts[c]), recall(counts[c]), f1(counts[c])});
  }
  report.weighted_f1 = weighted_f1(counts);

  std::map<std::string, std::vector<std::size_t>> by_lang;
  for (std::size_t e = 0; e < a.ids.size(); ++e) by_lang[a.langs[e]].push_back(e);
  for (const auto& [lang, rows] : by_lang) {
    std::vector<ClassCounts> sub(schema.size());
    for (auto e : rows) accumulate(sub, a.gold[e], a.predicted[e]);
    std::string column = lang;
    std::transform(column.begin(), column.end(), column.begin(), [](unsigned char ch) { return std::toupper(ch); });
    report.columns.emplace_back(column, weighted_f1(sub));
  }
  report.columns.emplace_back("Overall", report.weighted_f1);
  return report;
}

nlohmann::ordered_json metrics_to_json(const MetricsReport& report) {
  nlohmann::ordered_json doc;
  doc["kind"] = "metrics";
  doc["run_id"] = report.run_id;
  doc["tau"] = report.tau ? nlohmann::ordered_json(*report.tau) : nlohmann::ordered_json(nullptr);
  doc["n_examples"] = report.n_examples;
  doc["weighted_f1"] = report.weighted_f1;
  nlohmann::ordered_json columns = nlohmann::ordered_json::object();
  for (const auto& [name, value] : report.columns) columns[name] = value;
  doc["weighted_f1_by_subset"] = std::move(columns);
  nlohmann::ordered_json classes = nlohmann::ordered_json::array();
  for (const auto& c : report.per_class) {
    classes.push_back({{"label", c.label},
                       {"precision", c.precision},
                       {"recall", c.recall},
                       {"f1", c.f1},
                       {"support", c.counts.support()},
                       {"tp", c.counts.tp},
                       {"fp", c.counts.fp},
                       {"fn", c.counts.fn}});
  }
  doc["per_class"] = std::move(classes);
  doc["zero_division"] = 0;
  return doc;
}

MetricsReport metrics_from_json(const nlohmann::json& doc) {
  if (doc.value("kind", std::string()) != "metrics") throw ValidationError("not a metrics report");
  MetricsReport r;
  r.run_id = doc.value("run_id", std::string());
  if (doc.contains("tau") && !doc.at("tau").is_null()) r.tau = doc.at("tau").get<double>();
  r.n_examples = doc.value("n_examples", std::size_t{0});
  r.weighted_f1 = doc.at("weighted_f1").get<double>();
  for (const auto& [name, value] : doc.at("weighted_f1_by_subset").items()) r.columns.emplace_back(name, value.get<double>());
  for (const auto& c : doc.at("per_class")) {
    ClassMetrics m;
    m.label = c.at("label").get<std::string>();
    m.counts = {c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(), c.at("fn").get<std::size_t>()};
    m.precision = c.at("precision").get<double>();
    m.recall = c.at("recall").get<double>();
    m.f1 = c.at("f1").get<double>();
    r.per_class.push_back(std::move(m));
  }
  return r;
}

std::string metrics_to_text(const MetricsReport& report) {
  std::size_t width = 8;
  for (const auto& c : report.per_class) width = std::max(width, c.label.size());
  std::string out;
  char buf[256];
  char tau[32] = "-";
  if (report.tau) std::snprintf(tau, sizeof tau, "%.2f", *report.tau);
  std::snprintf(buf, sizeof buf, "run %s  tau %s  n=%zu\n", report.run_id.empty() ? "-" : report.run_id.c_str(), tau,
                report.n_examples);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-*s %9s %9s %9s %8s\n", static_cast<int>(width), "label", "precision", "recall", "f1",
                "support");
  out += buf;
  for (const auto& c : report.per_class) {
    std::snprintf(buf, sizeof buf, "%-*s %9.4f %9.4f %9.4f %8zu\n", static_cast<int>(width), c.label.c_str(),
                  c.precision, c.recall, c.f1, c.counts.support());
    out += buf;
  }
  out += "\nweighted F1";
  for (const auto& [name, value] : report.columns) {
    std::snprintf(buf, sizeof buf, "  %s %.2f", name.c_str(), value);
    out += buf;
  }
  out += '\n';
  return out;
}

}  // namespace agenda::eval
