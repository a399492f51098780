#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "agenda/classify/decide.hpp"
#include "agenda/eval/metrics.hpp"
#include "json.hpp"

namespace agenda::eval {

struct SignificanceResult {
  std::string model_a;
  std::string model_b;
  double weighted_f1_a = 0.0;
  double weighted_f1_b = 0.0;
  double statistic = 0.0;  // |wF1(A) - wF1(B)|
  double p_value = 1.0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  std::size_t n_examples = 0;
  bool significant_05 = false;
  bool significant_01 = false;
};

/// Two-sided approximate randomization over example-level prediction swaps:
/// p = (1 + #(permuted delta >= observed delta)) / (1 + iterations).
SignificanceResult compare_significance(std::size_t n_labels, std::span<const std::vector<std::size_t>> gold,
                                        std::span<const std::vector<std::size_t>> predicted_a,
                                        std::span<const std::vector<std::size_t>> predicted_b,
                                        std::size_t iterations = 10000, std::uint64_t seed = 0);

/// Aligns both prediction files against gold first; misaligned ids are an error.
SignificanceResult compare_significance(std::span<const classify::Prediction> predictions_a,
                                        std::span<const classify::Prediction> predictions_b,
                                        std::span<const GoldItem> gold, const LabelSchema& schema,
                                        std::size_t iterations = 10000, std::uint64_t seed = 0);

nlohmann::ordered_json significance_to_json(const SignificanceResult& result);
std::string significance_to_text(const SignificanceResult& result);

}  // namespace agenda::eval
