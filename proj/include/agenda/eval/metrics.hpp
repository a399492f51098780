#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "agenda/classify/decide.hpp"
#include "agenda/core/dataset.hpp"
#include "agenda/eval/counts.hpp"
#include "json.hpp"

namespace agenda::eval {

struct GoldItem {
  std::string id;
  std::string lang;
  LabelSet labels;
};

/// Messages of `dataset` that carry gold, in dataset order.
std::vector<GoldItem> gold_items(const Dataset& dataset);

/// Gold and predictions as sorted label indices, aligned in gold order.
struct Aligned {
  std::vector<std::string> ids;
  std::vector<std::string> langs;
  std::vector<std::vector<std::size_t>> gold;
  std::vector<std::vector<std::size_t>> predicted;
};

/// Throws ValidationError naming an id when the two sides do not cover the same ids,
/// or when a gold set is empty.
Aligned align(std::span<const classify::Prediction> predictions, std::span<const GoldItem> gold,
              const LabelSchema& schema);

std::vector<ClassCounts> count_incidences(std::size_t n_labels, std::span<const std::vector<std::size_t>> gold,
                                          std::span<const std::vector<std::size_t>> predicted);

struct ClassMetrics {
  LabelId label;
  ClassCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsReport {
  std::string run_id;
  std::optional<double> tau;
  std::size_t n_examples = 0;
  std::vector<ClassMetrics> per_class;  // schema order
  double weighted_f1 = 0.0;
  /// Weighted F1 per language subset ("EN", "FR", ...) followed by "Overall".
  std::vector<std::pair<std::string, double>> columns;
};

MetricsReport multilabel_metrics(std::span<const classify::Prediction> predictions, std::span<const GoldItem> gold,
                                 const LabelSchema& schema, std::string run_id = {},
                                 std::optional<double> tau = std::nullopt);

nlohmann::ordered_json metrics_to_json(const MetricsReport& report);
MetricsReport metrics_from_json(const nlohmann::json& doc);
std::string metrics_to_text(const MetricsReport& report);

}  // namespace agenda::eval
