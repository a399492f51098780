#include "agenda/classify/decide.hpp"

#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "agenda/core/error.hpp"
#include "agenda/core/jsonl.hpp"
#include "agenda/kernels/sweep.hpp"

namespace agenda::classify {

namespace {
constexpr double kTauSlack = 1e-12;
}

void check_tau(double tau) {
  if (!(tau >= kMinTau - kTauSlack && tau <= kMaxTau + kTauSlack)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "tau %.6g outside [%.2f, %.2f]", tau, kMinTau, kMaxTau);
    throw ValidationError(buf);
  }
}

LabelSet decide_labels(std::span<const double> row, const LabelSchema& schema, double tau) {
  check_tau(tau);
  if (row.size() != schema.size()) {
    throw ValidationError("incomplete score row: " + std::to_string(row.size()) + " scores for " +
                          std::to_string(schema.size()) + " labels");
  }
  auto picked = kernels::decide_row(row, tau, schema.other_index());
  return schema.ids(picked);
}

std::vector<Prediction> decide_all(const ScoreMatrix& matrix, const LabelSchema& schema, double tau) {
  check_tau(tau);
  if (matrix.cols() != schema.size()) throw ValidationError("score matrix columns do not match the schema");
  std::vector<Prediction> out;
  out.reserve(matrix.rows());
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    auto row = matrix.row(r);
    Prediction p;
    p.id = matrix.ids()[r];
    p.tau = tau;
    for (auto idx : kernels::decide_row(row, tau, schema.other_index())) {
      p.labels.push_back(schema.at(idx).id);
      p.confidences.emplace_back(schema.at(idx).id, row[idx]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

nlohmann::ordered_json prediction_to_json(const Prediction& p) {
  nlohmann::ordered_json obj;
  obj["id"] = p.id;
  obj["labels"] = p.labels;
  nlohmann::ordered_json conf = nlohmann::ordered_json::object();
  for (const auto& [label, value] : p.confidences) conf[label] = value;
  obj["confidences"] = std::move(conf);
  obj["tau"] = p.tau;
  return obj;
}

std::string serialize_predictions(std::span<const Prediction> predictions) {
  std::string out;
  for (const auto& p : predictions) {
    out += dump_line(prediction_to_json(p));
    out += '\n';
  }
  return out;
}

std::vector<Prediction> parse_predictions(std::istream& in, const std::string& source, const LabelSchema& schema) {
  std::vector<Prediction> out;
  std::unordered_set<std::string> seen;
  for_each_jsonl(in, source, [&](std::size_t, const nlohmann::json& obj) {
    Prediction p;
    p.id = obj.at("id").get<std::string>();
    if (!seen.insert(p.id).second) throw ValidationError("duplicate prediction id '" + p.id + "'");
    auto labels = obj.at("labels").get<std::vector<std::string>>();
    if (labels.empty()) throw ValidationError("prediction '" + p.id + "' has an empty label set");
    p.labels = schema.canonicalize(labels);
    if (auto it = obj.find("confidences"); it != obj.end()) {
      for (const auto& label : p.labels) {
        auto c = it->find(label);
        if (c != it->end()) p.confidences.emplace_back(label, c->get<double>());
      }
    }
    p.tau = obj.value("tau", 0.0);
    out.push_back(std::move(p));
  });
  return out;
}

std::vector<Prediction> load_predictions(const std::filesystem::path& path, const LabelSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open predictions " + path.string());
  return parse_predictions(in, path.string(), schema);
}

}  // namespace agenda::classify
