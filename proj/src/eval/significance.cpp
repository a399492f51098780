#include "agenda/eval/significance.hpp"

#include <cstdio>

#include "agenda/core/error.hpp"
#include "agenda/kernels/randomization.hpp"

namespace agenda::eval {

SignificanceResult compare_significance(std::size_t n_labels, std::span<const std::vector<std::size_t>> gold,
                                        std::span<const std::vector<std::size_t>> predicted_a,
                                        std::span<const std::vector<std::size_t>> predicted_b, std::size_t iterations,
                                        std::uint64_t seed) {
  if (iterations == 0) throw ValidationError("significance: iterations must be positive");
  kernels::PairedOutcomes outcomes(n_labels, gold, predicted_a, predicted_b);
  SignificanceResult r;
  r.weighted_f1_a = weighted_f1(count_incidences(n_labels, gold, predicted_a));
  r.weighted_f1_b = weighted_f1(count_incidences(n_labels, gold, predicted_b));
  r.statistic = outcomes.observed_delta();
  r.iterations = iterations;
  r.seed = seed;
  r.n_examples = gold.size();
  const auto hits = kernels::randomization_exceedances(outcomes, iterations, seed);
  r.p_value = static_cast<double>(1 + hits) / static_cast<double>(1 + iterations);
  r.significant_05 = r.p_value < 0.05;
  r.significant_01 = r.p_value < 0.01;
  return r;
}

SignificanceResult compare_significance(std::span<const classify::Prediction> predictions_a,
                                        std::span<const classify::Prediction> predictions_b,
                                        std::span<const GoldItem> gold, const LabelSchema& schema,
                                        std::size_t iterations, std::uint64_t seed) {
  const auto a = align(predictions_a, gold, schema);
  const auto b = align(predictions_b, gold, schema);
  return compare_significance(schema.size(), a.gold, a.predicted, b.predicted, iterations, seed);
}

nlohmann::ordered_json significance_to_json(const SignificanceResult& r) {
  nlohmann::ordered_json doc;
  doc["kind"] = "significance";
  doc["test"] = "approximate_randomization";
  doc["model_a"] = r.model_a;
  doc["model_b"] = r.model_b;
  doc["weighted_f1_a"] = r.weighted_f1_a;
  doc["weighted_f1_b"] = r.weighted_f1_b;
  doc["statistic"] = r.statistic;
  doc["p_value"] = r.p_value;
  doc["iterations"] = r.iterations;
  doc["seed"] = r.seed;
  doc["n_examples"] = r.n_examples;
  doc["significant"] = {{"0.05", r.significant_05}, {"0.01", r.significant_01}};
  return doc;
}

std::string significance_to_text(const SignificanceResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %.4f vs %s %.4f  |delta| %.4f  p %.4f  (%zu iterations, seed %llu)%s\n",
                r.model_a.c_str(), r.weighted_f1_a, r.model_b.c_str(), r.weighted_f1_b, r.statistic, r.p_value,
                r.iterations, static_cast<unsigned long long>(r.seed),
                r.significant_01 ? "  significant at 0.01" : (r.significant_05 ? "  significant at 0.05" : ""));
  return buf;
}

}  // namespace agenda::eval
