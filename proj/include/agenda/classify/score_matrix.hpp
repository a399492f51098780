#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "agenda/backends/backend.hpp"
#include "agenda/core/dataset.hpp"

namespace agenda::classify {

/// Complete message x label table of scores in [0, 1]. Columns follow schema order.
class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::vector<LabelId> labels, std::vector<std::string> ids, std::vector<std::string> langs,
              std::vector<double> values);

  std::size_t rows() const noexcept { return ids_.size(); }
  std::size_t cols() const noexcept { return labels_.size(); }
  const std::vector<LabelId>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<std::string>& langs() const noexcept { return langs_; }
  const std::vector<double>& values() const noexcept { return values_; }

  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols(), cols()}; }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
  std::optional<std::size_t> find_row(const std::string& id) const;

  /// Rows whose id is in `ids` (matrix order kept).
  ScoreMatrix select(const std::vector<std::string>& ids) const;

 private:
  std::vector<LabelId> labels_;
  std::vector<std::string> ids_;
  std::vector<std::string> langs_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Entry (m, l) = scorer.score(m.text, hypothesis(l, m.lang)). Backend failures are
/// rethrown naming the (message id, label) cells that failed.
ScoreMatrix score_messages(std::span<const Message> messages, const LabelSchema& schema, backends::EntailmentScorer& scorer);

/// JSON Lines {"id","lang","scores":{label: score}} with labels in schema order.
std::string serialize_score_matrix(const ScoreMatrix& matrix);
ScoreMatrix parse_score_matrix(std::istream& in, const std::string& source, const LabelSchema& schema);
ScoreMatrix load_score_matrix(const std::filesystem::path& path, const LabelSchema& schema);

}  // namespace agenda::classify
