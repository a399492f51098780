#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "agenda/classify/score_matrix.hpp"
#include "agenda/core/dataset.hpp"
#include "json.hpp"

namespace agenda::classify {

struct ThresholdCalibration {
  double tau = 0.5;
  double objective = 0.0;  // weighted F1 on dev at tau
  double step = 0.01;
  double min_tau = 0.30;
  double max_tau = 0.99;
};

/// {0.30, 0.30 + step, ...} up to 0.99, each point rounded to 1e-9 so that
/// 0.30 + 11 * 0.01 is exactly the double nearest 0.41.
std::vector<double> threshold_grid(double step);

/// Sweeps the grid and returns the smallest tau reaching the maximum weighted F1.
/// `gold` is aligned with matrix rows.
ThresholdCalibration calibrate_threshold(const ScoreMatrix& matrix, std::span<const LabelSet> gold,
                                         const LabelSchema& schema, double step = 0.01);

/// Gold looked up by id; every matrix row needs a gold label set in `dataset`.
ThresholdCalibration calibrate_threshold(const ScoreMatrix& matrix, const Dataset& dataset,
                                         const LabelSchema& schema, double step = 0.01);

nlohmann::ordered_json calibration_to_json(const ThresholdCalibration& cal);
ThresholdCalibration calibration_from_json(const nlohmann::json& doc);
ThresholdCalibration load_calibration(const std::filesystem::path& path);

}  // namespace agenda::classify
