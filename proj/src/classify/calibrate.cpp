#include "agenda/classify/calibrate.hpp"

#include <cmath>

#include "agenda/classify/decide.hpp"
#include "agenda/core/error.hpp"
#include "agenda/core/jsonl.hpp"
#include "agenda/kernels/sweep.hpp"

namespace agenda::classify {

std::vector<double> threshold_grid(double step) {
  if (!(step > 0.0) || step > kMaxTau - kMinTau) throw ValidationError("sweep step must be in (0, 0.69]");
  const auto n = static_cast<std::size_t>(std::floor((kMaxTau - kMinTau) / step + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = std::round((kMinTau + static_cast<double>(i) * step) * 1e9) / 1e9;
  return grid;
}

ThresholdCalibration calibrate_threshold(const ScoreMatrix& matrix, std::span<const LabelSet> gold,
                                         const LabelSchema& schema, double step) {
  if (matrix.rows() == 0) throw ValidationError("cannot calibrate on an empty score matrix");
  if (gold.size() != matrix.rows()) throw ValidationError("gold does not align with the score matrix");
  if (matrix.cols() != schema.size()) throw ValidationError("score matrix columns do not match the schema");

  std::vector<std::vector<std::size_t>> gold_idx;
  gold_idx.reserve(gold.size());
  for (std::size_t r = 0; r < gold.size(); ++r) {
    if (gold[r].empty()) throw ValidationError("message '" + matrix.ids()[r] + "' has no gold labels");
    gold_idx.push_back(schema.indices(gold[r]));
  }

  const auto grid = threshold_grid(step);
  kernels::SweepProblem problem{schema.size(), schema.other_index(), matrix.values(), gold_idx};
  const auto objectives = kernels::sweep_weighted_f1(problem, grid);

  double best = objectives.front();
  for (double v : objectives) best = std::max(best, v);
  ThresholdCalibration cal;
  cal.step = step;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (objectives[i] >= best - 1e-12) {
      cal.tau = grid[i];
      cal.objective = objectives[i];
      break;
    }
  }
  return cal;
}

ThresholdCalibration calibrate_threshold(const ScoreMatrix& matrix, const Dataset& dataset, const LabelSchema& schema,
                                         double step) {
  std::vector<LabelSet> gold;
  gold.reserve(matrix.rows());
  for (const auto& id : matrix.ids()) {
    const auto* m = dataset.find(id);
    if (!m) throw ValidationError("no gold message for scored id '" + id + "'");
    if (!m->gold) throw ValidationError("message '" + id + "' has no gold labels");
    gold.push_back(*m->gold);
  }
  return calibrate_threshold(matrix, gold, schema, step);
}

nlohmann::ordered_json calibration_to_json(const ThresholdCalibration& cal) {
  nlohmann::ordered_json doc;
  doc["tau"] = cal.tau;
  doc["objective"] = cal.objective;
  doc["objective_name"] = "weighted_f1";
  doc["sweep_step"] = cal.step;
  doc["sweep_min"] = cal.min_tau;
  doc["sweep_max"] = cal.max_tau;
  doc["tie_break"] = "smallest_tau";
  return doc;
}

ThresholdCalibration calibration_from_json(const nlohmann::json& doc) {
  ThresholdCalibration cal;
  cal.tau = doc.at("tau").get<double>();
  cal.objective = doc.value("objective", 0.0);
  cal.step = doc.value("sweep_step", 0.01);
  cal.min_tau = doc.value("sweep_min", kMinTau);
  cal.max_tau = doc.value("sweep_max", kMaxTau);
  check_tau(cal.tau);
  return cal;
}

ThresholdCalibration load_calibration(const std::filesystem::path& path) {
  return calibration_from_json(read_json_file(path));
}

}  // namespace agenda::classify
