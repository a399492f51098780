#include "agenda/eval/confusion.hpp"

#include <algorithm>
#include <cstdio>

#include "agenda/core/error.hpp"

namespace agenda::eval {

ConfusionMatrix::ConfusionMatrix(std::vector<LabelId> labels)
    : labels_(std::move(labels)), counts_((labels_.size() + 1) * (labels_.size() + 1), 0) {}

std::size_t ConfusionMatrix::row_sum(std::size_t row) const {
  std::size_t s = 0;
  for (std::size_t c = 0; c < size(); ++c) s += at(row, c);
  return s;
}

std::size_t ConfusionMatrix::col_sum(std::size_t col) const {
  std::size_t s = 0;
  for (std::size_t r = 0; r < size(); ++r) s += at(r, col);
  return s;
}

void add_example(ConfusionMatrix& matrix, std::span<const std::size_t> gold, std::span<const std::size_t> predicted) {
  std::vector<std::size_t> fn;
  std::vector<std::size_t> fp;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < gold.size() || j < predicted.size()) {
    if (j == predicted.size() || (i < gold.size() && gold[i] < predicted[j])) {
      fn.push_back(gold[i++]);
    } else if (i == gold.size() || predicted[j] < gold[i]) {
      fp.push_back(predicted[j++]);
    } else {
      matrix.add(gold[i], gold[i]);
      ++i;
      ++j;
    }
  }
  const std::size_t paired = std::min(fn.size(), fp.size());
  for (std::size_t k = 0; k < paired; ++k) matrix.add(fn[k], fp[k]);
  for (std::size_t k = paired; k < fp.size(); ++k) matrix.add(matrix.extra_row(), fp[k]);
  for (std::size_t k = paired; k < fn.size(); ++k) matrix.add(fn[k], matrix.missed_col());
}

ConfusionMatrix confusion_from_indices(std::vector<LabelId> labels, std::span<const std::vector<std::size_t>> gold,
                                       std::span<const std::vector<std::size_t>> predicted) {
  if (gold.size() != predicted.size()) throw ValidationError("gold and predictions are not aligned");
  ConfusionMatrix m(std::move(labels));
  for (std::size_t e = 0; e < gold.size(); ++e) add_example(m, gold[e], predicted[e]);
  return m;
}

ConfusionMatrix multilabel_confusion(std::span<const classify::Prediction> predictions, std::span<const GoldItem> gold,
                                     const LabelSchema& schema) {
  const auto a = align(predictions, gold, schema);
  std::vector<LabelId> labels;
  for (const auto& def : schema.labels()) labels.push_back(def.id);
  return confusion_from_indices(std::move(labels), a.gold, a.predicted);
}

nlohmann::ordered_json confusion_to_json(const ConfusionMatrix& matrix) {
  nlohmann::ordered_json doc;
  doc["kind"] = "confusion";
  auto rows = nlohmann::ordered_json(matrix.labels());
  rows.push_back("EXTRA");
  auto cols = nlohmann::ordered_json(matrix.labels());
  cols.push_back("MISSED");
  doc["rows"] = std::move(rows);
  doc["columns"] = std::move(cols);
  nlohmann::ordered_json counts = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < matrix.size(); ++c) row.push_back(matrix.at(r, c));
    counts.push_back(std::move(row));
  }
  doc["counts"] = std::move(counts);
  return doc;
}

std::string confusion_to_csv(const ConfusionMatrix& matrix) {
  std::string out = "gold\\predicted";
  for (const auto& l : matrix.labels()) out += "," + l;
  out += ",MISSED\n";
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    out += r == matrix.extra_row() ? std::string("EXTRA") : matrix.labels()[r];
    for (std::size_t c = 0; c < matrix.size(); ++c) out += "," + std::to_string(matrix.at(r, c));
    out += '\n';
  }
  return out;
}

std::string confusion_to_text(const ConfusionMatrix& matrix) {
  std::size_t width = 6;
  for (const auto& l : matrix.labels()) width = std::max(width, l.size());
  const int w = static_cast<int>(width);
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-*s", w, "");
  out += buf;
  for (std::size_t c = 0; c < matrix.size(); ++c) {
    std::snprintf(buf, sizeof buf, " %*s", w, c == matrix.missed_col() ? "MISSED" : matrix.labels()[c].c_str());
    out += buf;
  }
  out += '\n';
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%-*s", w, r == matrix.extra_row() ? "EXTRA" : matrix.labels()[r].c_str());
    out += buf;
    for (std::size_t c = 0; c < matrix.size(); ++c) {
      std::snprintf(buf, sizeof buf, " %*zu", w, matrix.at(r, c));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace agenda::eval
