#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "agenda/backends/backend.hpp"
#include "agenda/core/dataset.hpp"
#include "json.hpp"

namespace agenda::bootstrap {

enum class AnchorSource { definition, hypothesis };

AnchorSource parse_anchor_source(std::string_view name);
std::string_view to_string(AnchorSource source) noexcept;

struct BootstrapConfig {
  std::size_t k_per_label = 500;
  AnchorSource source = AnchorSource::definition;
  /// Labels whose queues are (re)built. Empty means every label except Other.
  std::vector<LabelId> target_labels;
  double sample_fraction = 0.10;
  std::uint64_t seed = 0;
};

/// Checks k >= 1, fraction in (0, 1] and known target labels.
void validate_config(const BootstrapConfig& cfg, const LabelSchema& schema);
nlohmann::ordered_json config_to_json(const BootstrapConfig& cfg);
BootstrapConfig config_from_json(const nlohmann::json& doc);

/// Labels a config targets, in schema order.
std::vector<LabelId> target_labels(const BootstrapConfig& cfg, const LabelSchema& schema);

/// One unlabeled input file; sampling is applied per file.
struct CorpusFile {
  std::string name;
  std::vector<Message> messages;
};

CorpusFile load_corpus_file(const std::filesystem::path& path, const LabelSchema& schema);

/// floor(fraction * n) messages from each file, drawn with Rng(mix_seed(seed, file index))
/// and returned in file order.
std::vector<Message> sample_corpus(std::span<const CorpusFile> corpus, double fraction, std::uint64_t seed);

struct RankedMessage {
  Message message;
  std::optional<Message> partner;  // translation counterpart found anywhere in the corpus
  double similarity = 0.0;
};

struct ScoredId {
  std::string message_id;
  double similarity = 0.0;
};

struct LabelQueue {
  LabelId label;
  std::vector<RankedMessage> candidates;  // rank i + 1 at position i
  std::vector<ScoredId> discarded;        // ranked below k, kept for later rounds
};

struct Ranking {
  std::size_t n_sampled = 0;
  std::vector<LabelQueue> queues;  // one per target label, schema order
};

/// Scores every sampled message against the label's definition (or hypothesis) in the
/// message's language and keeps the top k per label, ties broken by message id.
/// `exclude` holds (label, message id) pairs already queued in earlier rounds.
Ranking rank_candidates(std::span<const CorpusFile> corpus, const LabelSchema& schema, backends::Embedder& embedder,
                        const BootstrapConfig& cfg,
                        const std::set<std::pair<LabelId, std::string>>& exclude = {});

}  // namespace agenda::bootstrap
