#pragma once

#include <span>
#include <string>
#include <vector>

#include "agenda/classify/decide.hpp"
#include "agenda/eval/metrics.hpp"
#include "json.hpp"

namespace agenda::eval {

/// (L+1) x (L+1) counts. Rows are gold labels, columns predicted labels; row L is
/// EXTRA (a false positive without a paired false negative) and column L is
/// MISSED (a false negative without a paired false positive).
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::vector<LabelId> labels);

  const std::vector<LabelId>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size() + 1; }
  std::size_t extra_row() const noexcept { return labels_.size(); }
  std::size_t missed_col() const noexcept { return labels_.size(); }

  std::size_t at(std::size_t row, std::size_t col) const { return counts_[row * size() + col]; }
  void add(std::size_t row, std::size_t col) { ++counts_[row * size() + col]; }

  std::size_t row_sum(std::size_t row) const;
  std::size_t col_sum(std::size_t col) const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::vector<LabelId> labels_;
  std::vector<std::size_t> counts_;
};

/// Per example: TPs go on the diagonal; the FN labels and FP labels, each in schema
/// order, are paired element-wise; leftovers go to MISSED / EXTRA.
void add_example(ConfusionMatrix& matrix, std::span<const std::size_t> gold, std::span<const std::size_t> predicted);

ConfusionMatrix confusion_from_indices(std::vector<LabelId> labels, std::span<const std::vector<std::size_t>> gold,
                                       std::span<const std::vector<std::size_t>> predicted);

ConfusionMatrix multilabel_confusion(std::span<const classify::Prediction> predictions, std::span<const GoldItem> gold,
                                     const LabelSchema& schema);

nlohmann::ordered_json confusion_to_json(const ConfusionMatrix& matrix);
/// Header row of predicted labels then MISSED; EXTRA is the last row.
std::string confusion_to_csv(const ConfusionMatrix& matrix);
std::string confusion_to_text(const ConfusionMatrix& matrix);

}  // namespace agenda::eval
