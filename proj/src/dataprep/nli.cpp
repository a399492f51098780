#include <algorithm>
#include <fstream>
#include <sstream>

#include "agenda/core/error.hpp"
#include "agenda/core/jsonl.hpp"
#include "agenda/dataprep/entailment.hpp"

namespace agenda::dataprep {

std::string_view to_string(NliLabel label) noexcept {
  switch (label) {
    case NliLabel::entailment: return "entailment";
    case NliLabel::neutral: return "neutral";
    case NliLabel::contradiction: return "contradiction";
  }
  return "entailment";
}

std::string_view to_string(Verdict verdict) noexcept {
  return verdict == Verdict::entailment ? "entailment" : "not_entailment";
}

std::string_view to_string(Origin origin) noexcept {
  switch (origin) {
    case Origin::nli: return "nli";
    case Origin::agenda: return "agenda";
    case Origin::synthetic: return "synthetic";
  }
  return "nli";
}

std::optional<NliLabel> parse_nli_label(std::string_view text) noexcept {
  if (text == "entailment") return NliLabel::entailment;
  if (text == "neutral") return NliLabel::neutral;
  if (text == "contradiction") return NliLabel::contradiction;
  return std::nullopt;
}

Verdict parse_verdict(std::string_view text) {
  if (text == "entailment") return Verdict::entailment;
  if (text == "not_entailment") return Verdict::not_entailment;
  throw ValidationError("unknown verdict '" + std::string(text) + "'");
}

Origin parse_origin(std::string_view text) {
  if (text == "nli") return Origin::nli;
  if (text == "agenda") return Origin::agenda;
  if (text == "synthetic") return Origin::synthetic;
  throw ValidationError("unknown origin '" + std::string(text) + "'");
}

EntailmentPair binarize_nli(const NliExample& example) {
  EntailmentPair pair;
  pair.premise = example.premise;
  pair.hypothesis = example.hypothesis;
  pair.verdict = example.label == NliLabel::entailment ? Verdict::entailment : Verdict::not_entailment;
  pair.lang = example.lang;
  pair.origin = Origin::nli;
  return pair;
}

NliReadResult read_snli_jsonl(const std::filesystem::path& path, const std::string& lang) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  NliReadResult result;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      ++result.skipped;
      continue;
    }
    auto s1 = obj.find("sentence1");
    auto s2 = obj.find("sentence2");
    auto gl = obj.find("gold_label");
    if (s1 == obj.end() || s2 == obj.end() || gl == obj.end() || !s1->is_string() || !s2->is_string() || !gl->is_string()) {
      ++result.skipped;
      continue;
    }
    auto label = parse_nli_label(gl->get<std::string>());
    if (!label || s1->get<std::string>().empty() || s2->get<std::string>().empty()) {
      ++result.skipped;
      continue;
    }
    result.examples.push_back({s1->get<std::string>(), s2->get<std::string>(), *label, lang});
  }
  return result;
}

NliReadResult read_rte_tsv(const std::filesystem::path& path, const std::string& lang) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  NliReadResult result;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() != 4 || cols[1].empty() || cols[2].empty()) {
      ++result.skipped;
      continue;
    }
    NliLabel label;
    if (cols[3] == "entailment") {
      label = NliLabel::entailment;
    } else if (cols[3] == "not_entailment") {
      label = NliLabel::neutral;
    } else {
      ++result.skipped;
      continue;
    }
    result.examples.push_back({cols[1], cols[2], label, lang});
  }
  return result;
}

NliReadResult read_nli_directory(const std::filesystem::path& dir, const std::string& lang) {
  if (!std::filesystem::is_directory(dir)) throw ValidationError(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension();
    if (ext == ".jsonl" || ext == ".tsv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  NliReadResult all;
  for (const auto& file : files) {
    auto part = file.extension() == ".tsv" ? read_rte_tsv(file, lang) : read_snli_jsonl(file, lang);
    all.skipped += part.skipped;
    all.examples.insert(all.examples.end(), std::make_move_iterator(part.examples.begin()),
                        std::make_move_iterator(part.examples.end()));
  }
  return all;
}

nlohmann::ordered_json pair_to_json(const EntailmentPair& pair) {
  nlohmann::ordered_json obj;
  obj["premise"] = pair.premise;
  obj["hypothesis"] = pair.hypothesis;
  obj["verdict"] = to_string(pair.verdict);
  obj["lang"] = pair.lang;
  obj["origin"] = to_string(pair.origin);
  if (pair.source_message_id) obj["source_message_id"] = *pair.source_message_id;
  if (pair.label_id) obj["label_id"] = *pair.label_id;
  return obj;
}

EntailmentPair pair_from_json(const nlohmann::json& obj) {
  EntailmentPair pair;
  pair.premise = obj.at("premise").get<std::string>();
  pair.hypothesis = obj.at("hypothesis").get<std::string>();
  pair.verdict = parse_verdict(obj.at("verdict").get<std::string>());
  pair.lang = obj.at("lang").get<std::string>();
  pair.origin = parse_origin(obj.at("origin").get<std::string>());
  if (obj.contains("source_message_id")) pair.source_message_id = obj["source_message_id"].get<std::string>();
  if (obj.contains("label_id")) pair.label_id = obj["label_id"].get<std::string>();
  if (pair.origin == Origin::agenda && (!pair.source_message_id || !pair.label_id)) {
    throw ValidationError("agenda pair needs source_message_id and label_id");
  }
  return pair;
}

std::string serialize_pairs(const std::vector<EntailmentPair>& pairs) {
  std::string out;
  for (const auto& pair : pairs) {
    out += dump_line(pair_to_json(pair));
    out += '\n';
  }
  return out;
}

std::vector<EntailmentPair> load_pairs(const std::filesystem::path& path) {
  std::vector<EntailmentPair> pairs;
  for_each_jsonl(path, [&](std::size_t, const nlohmann::json& obj) { pairs.push_back(pair_from_json(obj)); });
  return pairs;
}

}  // namespace agenda::dataprep
