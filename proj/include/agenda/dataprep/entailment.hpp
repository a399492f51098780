#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agenda/core/labels.hpp"
#include "json.hpp"

namespace agenda::dataprep {

enum class NliLabel { entailment, neutral, contradiction };
enum class Verdict { entailment, not_entailment };
enum class Origin { nli, agenda, synthetic };

std::string_view to_string(NliLabel label) noexcept;
std::string_view to_string(Verdict verdict) noexcept;
std::string_view to_string(Origin origin) noexcept;
std::optional<NliLabel> parse_nli_label(std::string_view text) noexcept;
Verdict parse_verdict(std::string_view text);
Origin parse_origin(std::string_view text);

struct NliExample {
  std::string premise;
  std::string hypothesis;
  NliLabel label = NliLabel::entailment;
  std::string lang = "en";
};

struct EntailmentPair {
  std::string premise;
  std::string hypothesis;
  Verdict verdict = Verdict::not_entailment;
  std::string lang;
  Origin origin = Origin::nli;
  std::optional<std::string> source_message_id;
  std::optional<LabelId> label_id;

  bool operator==(const EntailmentPair&) const = default;
};

/// entailment stays entailment; neutral and contradiction both become not_entailment.
EntailmentPair binarize_nli(const NliExample& example);

struct NliReadResult {
  std::vector<NliExample> examples;
  std::size_t skipped = 0;
};

/// SNLI / MultiNLI JSON Lines (sentence1, sentence2, gold_label). Rows without a
/// usable gold label (e.g. "-") are skipped and counted.
NliReadResult read_snli_jsonl(const std::filesystem::path& path, const std::string& lang = "en");

/// GLUE RTE TSV (index, sentence1, sentence2, label) with a header row. RTE is
/// two-class; its not_entailment rows are read as neutral, which binarizes identically.
NliReadResult read_rte_tsv(const std::filesystem::path& path, const std::string& lang = "en");

/// Reads every recognised corpus file under `dir` (*.jsonl as SNLI/MNLI layout,
/// *.tsv as RTE layout) in sorted path order and concatenates them.
NliReadResult read_nli_directory(const std::filesystem::path& dir, const std::string& lang = "en");

nlohmann::ordered_json pair_to_json(const EntailmentPair& pair);
EntailmentPair pair_from_json(const nlohmann::json& obj);

/// Pair file: one JSON object per line, keys premise, hypothesis, verdict, lang, origin,
/// source_message_id?, label_id?.
std::string serialize_pairs(const std::vector<EntailmentPair>& pairs);
std::vector<EntailmentPair> load_pairs(const std::filesystem::path& path);

}  // namespace agenda::dataprep
