#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "agenda/bootstrap/review.hpp"

namespace agenda::bootstrap {

struct StoreOptions {
  std::size_t snapshot_every = 50;  // events between snapshots; 0 disables
  bool use_snapshot = true;         // false: rebuild from the log alone
};

/// File-backed review state in one directory:
///   decisions.log     append-only JSON Lines, one event per line
///   snapshot.json     state at some seq; events after it are replayed from the log
///   candidates.jsonl  queue view with status history, rewritten with each snapshot
/// All public members are thread-safe; mutations are serialized on one writer.
class Store {
 public:
  Store(std::filesystem::path dir, const LabelSchema& schema, StoreOptions options = {});

  const std::filesystem::path& dir() const noexcept { return dir_; }

  template <typename F>
  auto read(F&& fn) const {
    std::lock_guard lock(mutex_);
    return fn(state_);
  }

  /// Builds the round under the lock so the exclusion set sees every earlier round.
  int run_round(std::span<const CorpusFile> corpus, backends::Embedder& embedder, const BootstrapConfig& cfg);

  /// Returns the updated candidate view. Empty timestamp means "now" (UTC).
  nlohmann::ordered_json record_decision(const std::string& candidate_id, const std::string& annotator,
                                         const std::vector<LabelId>& labels, std::uint64_t version,
                                         std::string timestamp = {});
  nlohmann::ordered_json record_consensus(const std::string& candidate_id, const std::string& annotator,
                                          const std::vector<LabelId>& labels, bool discard, std::uint64_t version,
                                          std::string timestamp = {});

  void write_snapshot();

 private:
  void commit(nlohmann::ordered_json event);
  void write_snapshot_locked();

  std::filesystem::path dir_;
  const LabelSchema* schema_;
  StoreOptions options_;
  mutable std::mutex mutex_;
  ReviewState state_;
  std::ofstream log_;
};

/// ISO-8601 UTC timestamp with second precision.
std::string utc_now();

}  // namespace agenda::bootstrap
