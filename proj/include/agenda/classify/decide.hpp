#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "agenda/classify/score_matrix.hpp"
#include "agenda/core/labels.hpp"
#include "json.hpp"

namespace agenda::classify {

inline constexpr double kMinTau = 0.30;
inline constexpr double kMaxTau = 0.99;

/// Throws ValidationError unless tau lies in [kMinTau, kMaxTau].
void check_tau(double tau);

/// {l : row[l] >= tau}, or {Other} when nothing clears tau. Other competes on its
/// own score like any label. `row` is in schema order and must be complete.
LabelSet decide_labels(std::span<const double> row, const LabelSchema& schema, double tau);

struct Prediction {
  std::string id;
  LabelSet labels;
  /// Score of each predicted label, schema order. A fallback Other carries the
  /// matrix's Other score.
  std::vector<std::pair<LabelId, double>> confidences;
  double tau = 0.0;

  bool operator==(const Prediction&) const = default;
};

std::vector<Prediction> decide_all(const ScoreMatrix& matrix, const LabelSchema& schema, double tau);

nlohmann::ordered_json prediction_to_json(const Prediction& prediction);

/// JSON Lines {"id","labels":[...],"confidences":{...},"tau"}.
std::string serialize_predictions(std::span<const Prediction> predictions);
std::vector<Prediction> parse_predictions(std::istream& in, const std::string& source, const LabelSchema& schema);
std::vector<Prediction> load_predictions(const std::filesystem::path& path, const LabelSchema& schema);

}  // namespace agenda::classify
