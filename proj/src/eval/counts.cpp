#include "agenda/eval/counts.hpp"

namespace agenda::eval {

double precision(const ClassCounts& c) noexcept {
  const auto denom = c.tp + c.fp;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double recall(const ClassCounts& c) noexcept {
  const auto denom = c.tp + c.fn;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double f1(const ClassCounts& c) noexcept {
  // 2PR/(P+R) simplifies to 2TP/(2TP+FP+FN); same value without the intermediate rounding.
  const auto denom = 2 * c.tp + c.fp + c.fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

double weighted_f1(std::span<const ClassCounts> counts) noexcept {
  std::size_t total = 0;
  for (const auto& c : counts) total += c.support();
  if (total == 0) return 0.0;
  double sum = 0.0;
  for (const auto& c : counts) sum += static_cast<double>(c.support()) * f1(c);
  return sum / static_cast<double>(total);
}

void accumulate(std::span<ClassCounts> counts, std::span<const std::size_t> gold, std::span<const std::size_t> predicted) {
  std::size_t g = 0;
  std::size_t p = 0;
  while (g < gold.size() || p < predicted.size()) {
    if (p == predicted.size() || (g < gold.size() && gold[g] < predicted[p])) {
      ++counts[gold[g++]].fn;
    } else if (g == gold.size() || predicted[p] < gold[g]) {
      ++counts[predicted[p++]].fp;
    } else {
      ++counts[gold[g]].tp;
      ++g;
      ++p;
    }
  }
}

}  // namespace agenda::eval
