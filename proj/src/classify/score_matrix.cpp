#include "agenda/classify/score_matrix.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_set>

#include "agenda/core/error.hpp"
#include "agenda/core/jsonl.hpp"
#include "agenda/dataprep/hypotheses.hpp"

namespace agenda::classify {

ScoreMatrix::ScoreMatrix(std::vector<LabelId> labels, std::vector<std::string> ids, std::vector<std::string> langs,
                         std::vector<double> values)
    : labels_(std::move(labels)), ids_(std::move(ids)), langs_(std::move(langs)), values_(std::move(values)) {
  if (langs_.size() != ids_.size()) throw ValidationError("score matrix: one lang per row required");
  if (values_.size() != ids_.size() * labels_.size()) throw ValidationError("score matrix: incomplete");
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("score matrix: score " + std::to_string(v) + " outside [0, 1]");
  }
  for (std::size_t r = 0; r < ids_.size(); ++r) {
    if (!index_.emplace(ids_[r], r).second) throw ValidationError("score matrix: duplicate id '" + ids_[r] + "'");
  }
}

std::optional<std::size_t> ScoreMatrix::find_row(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ScoreMatrix ScoreMatrix::select(const std::vector<std::string>& ids) const {
  std::unordered_set<std::string> wanted(ids.begin(), ids.end());
  std::vector<std::string> out_ids;
  std::vector<std::string> out_langs;
  std::vector<double> out_values;
  for (std::size_t r = 0; r < rows(); ++r) {
    if (!wanted.count(ids_[r])) continue;
    out_ids.push_back(ids_[r]);
    out_langs.push_back(langs_[r]);
    auto rr = row(r);
    out_values.insert(out_values.end(), rr.begin(), rr.end());
  }
  return ScoreMatrix(labels_, std::move(out_ids), std::move(out_langs), std::move(out_values));
}

ScoreMatrix score_messages(std::span<const Message> messages, const LabelSchema& schema, backends::EntailmentScorer& scorer) {
  std::map<std::string, std::vector<std::string>, std::less<>> hypotheses;
  std::vector<backends::ScoreRequest> requests;
  requests.reserve(messages.size() * schema.size());
  for (const auto& m : messages) {
    auto it = hypotheses.find(m.lang);
    if (it == hypotheses.end()) it = hypotheses.emplace(m.lang, dataprep::render_hypotheses(schema, m.lang)).first;
    for (const auto& hyp : it->second) requests.push_back({m.text, hyp, m.lang});
  }

  std::vector<backends::EntailmentScore> scores;
  try {
    scores = scorer.score_batch(requests);
  } catch (const backends::BackendError& e) {
    std::string cells;
    const auto& failed = e.failed_indices();
    for (std::size_t i = 0; i < std::min<std::size_t>(failed.size(), 10); ++i) {
      if (!cells.empty()) cells += ", ";
      cells += "(" + messages[failed[i] / schema.size()].id + ", " + schema.at(failed[i] % schema.size()).id + ")";
    }
    if (failed.size() > 10) cells += " and " + std::to_string(failed.size() - 10) + " more";
    throw backends::BackendError(e.kind(), std::string(e.what()) + (cells.empty() ? "" : "; failed cells: " + cells),
                                 e.failed_indices());
  }

  std::vector<LabelId> labels;
  for (const auto& def : schema.labels()) labels.push_back(def.id);
  std::vector<std::string> ids;
  std::vector<std::string> langs;
  for (const auto& m : messages) {
    ids.push_back(m.id);
    langs.push_back(m.lang);
  }
  std::vector<double> values;
  values.reserve(scores.size());
  for (const auto& s : scores) values.push_back(s.p_entail);
  return ScoreMatrix(std::move(labels), std::move(ids), std::move(langs), std::move(values));
}

std::string serialize_score_matrix(const ScoreMatrix& matrix) {
  std::string out;
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    nlohmann::ordered_json obj;
    obj["id"] = matrix.ids()[r];
    obj["lang"] = matrix.langs()[r];
    nlohmann::ordered_json scores = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < matrix.cols(); ++c) scores[matrix.labels()[c]] = matrix.at(r, c);
    obj["scores"] = std::move(scores);
    out += dump_line(obj);
    out += '\n';
  }
  return out;
}

ScoreMatrix parse_score_matrix(std::istream& in, const std::string& source, const LabelSchema& schema) {
  std::vector<LabelId> labels;
  for (const auto& def : schema.labels()) labels.push_back(def.id);
  std::vector<std::string> ids;
  std::vector<std::string> langs;
  std::vector<double> values;
  for_each_jsonl(in, source, [&](std::size_t, const nlohmann::json& obj) {
    ids.push_back(obj.at("id").get<std::string>());
    langs.push_back(obj.at("lang").get<std::string>());
    const auto& scores = obj.at("scores");
    if (!scores.is_object()) throw ValidationError("'scores' must be an object");
    for (const auto& [label, value] : scores.items()) schema.index_of(label);
    for (const auto& label : labels) {
      auto it = scores.find(label);
      if (it == scores.end()) throw ValidationError("incomplete row '" + ids.back() + "': no score for '" + label + "'");
      values.push_back(it->get<double>());
    }
  });
  return ScoreMatrix(std::move(labels), std::move(ids), std::move(langs), std::move(values));
}

ScoreMatrix load_score_matrix(const std::filesystem::path& path, const LabelSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open score matrix " + path.string());
  return parse_score_matrix(in, path.string(), schema);
}

}  // namespace agenda::classify
