#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "agenda/bootstrap/ranking.hpp"
#include "agenda/core/error.hpp"
#include "agenda/eval/agreement.hpp"
#include "json.hpp"

namespace agenda::bootstrap {

enum class CandidateStatus { pending, confirmed, reassigned, other, discarded };

std::string_view to_string(CandidateStatus status) noexcept;
CandidateStatus parse_status(std::string_view name);

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Export or consensus refused while candidates still disagree.
class PendingDisagreements : public PreconditionError {
 public:
  explicit PendingDisagreements(std::vector<std::string> ids)
      : PreconditionError("unresolved disagreements: " + std::to_string(ids.size())), ids_(std::move(ids)) {}
  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  std::vector<std::string> ids_;
};

struct Candidate {
  std::string id;  // "r{round}-{label}-{rank}"
  int round = 0;
  LabelId suggested;
  std::size_t rank = 0;
  double similarity = 0.0;
  Message message;
  std::optional<Message> partner;
};

struct AnnotationRecord {
  std::string candidate_id;
  std::string annotator;
  LabelSet labels;  // empty for a discard
  std::string timestamp;
  int round = 0;
  bool consensus = false;
  bool discard = false;
};

struct StatusChange {
  CandidateStatus status;
  std::uint64_t seq;
};

struct CandidateState {
  Candidate candidate;
  std::uint64_t version = 1;
  CandidateStatus status = CandidateStatus::pending;
  std::vector<AnnotationRecord> decisions;  // independent, at most two annotators
  std::optional<AnnotationRecord> consensus;
  std::vector<StatusChange> history;

  bool finalized() const noexcept { return consensus.has_value(); }
  /// Two independent decisions with different label sets and no consensus yet.
  bool in_disagreement() const noexcept;
};

struct RoundInfo {
  int round = 0;
  nlohmann::json config;
  std::size_t n_sampled = 0;
  std::vector<std::string> candidate_ids;
  std::vector<std::pair<LabelId, ScoredId>> discarded;
};

struct ExportResult {
  std::vector<Message> messages;  // sorted by id, gold = merged labels
  std::optional<eval::AgreementReport> agreement;
  std::size_t n_candidates = 0;
  std::size_t n_exported = 0;  // candidates contributing labels
  std::size_t n_discarded = 0;
  std::size_t n_undecided = 0;
};

/// Review queues rebuilt from an ordered event stream. Every mutation is an event
/// ("round", "decision", "consensus"); validate() checks one against the current
/// state, apply() validates and then mutates. Replaying the same events always
/// reproduces the same state.
class ReviewState {
 public:
  explicit ReviewState(const LabelSchema& schema) : schema_(&schema) {}

  const LabelSchema& schema() const noexcept { return *schema_; }
  std::uint64_t seq() const noexcept { return seq_; }
  const std::vector<RoundInfo>& rounds() const noexcept { return rounds_; }
  std::optional<int> open_round() const;

  const CandidateState& candidate(const std::string& id) const;
  const CandidateState* find(const std::string& id) const;
  /// All candidates in creation order.
  std::vector<const CandidateState*> candidates(std::optional<int> round = std::nullopt) const;

  /// (label, message id) pairs queued in any round so far.
  std::set<std::pair<LabelId, std::string>> queued_pairs() const;

  // Event builders; all validate and throw on failure. `seq` is filled in by apply().
  nlohmann::ordered_json round_event(const Ranking& ranking, const BootstrapConfig& cfg) const;
  nlohmann::ordered_json decision_event(const std::string& candidate_id, const std::string& annotator,
                                        const std::vector<LabelId>& labels, std::uint64_t version,
                                        const std::string& timestamp) const;
  /// `labels` empty with discard = true marks the candidate discarded.
  nlohmann::ordered_json consensus_event(const std::string& candidate_id, const std::string& annotator,
                                         const std::vector<LabelId>& labels, bool discard, std::uint64_t version,
                                         const std::string& timestamp) const;

  void validate(const nlohmann::json& event) const;
  void apply(const nlohmann::json& event);

  /// Lowest-rank open candidate of the open round not yet decided by `annotator`.
  const CandidateState* next_for(const std::string& annotator) const;

  std::vector<std::string> disagreements(std::optional<int> round = std::nullopt) const;

  /// Over candidates with two independent decisions (pre-consensus). Empty when none.
  std::optional<eval::AgreementReport> agreement(std::optional<int> round = std::nullopt) const;

  /// Throws PendingDisagreements while any candidate in scope disagrees.
  ExportResult export_labeled(std::optional<int> round = std::nullopt) const;

  nlohmann::ordered_json queue_stats() const;

  nlohmann::ordered_json to_json() const;
  static ReviewState from_json(const nlohmann::json& doc, const LabelSchema& schema);

 private:
  CandidateState& mutable_candidate(const std::string& id);
  void set_status(CandidateState& state, CandidateStatus status);
  CandidateStatus status_for(const CandidateState& state, const LabelSet& labels) const;

  const LabelSchema* schema_;
  std::uint64_t seq_ = 0;
  std::vector<RoundInfo> rounds_;
  std::vector<CandidateState> states_;
  std::unordered_map<std::string, std::size_t> index_;
};

nlohmann::ordered_json candidate_to_json(const CandidateState& state);
nlohmann::ordered_json record_to_json(const AnnotationRecord& record);

}  // namespace agenda::bootstrap
