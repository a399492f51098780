#include "agenda/bootstrap/store.hpp"

#include <chrono>
#include <ctime>

#include "agenda/core/jsonl.hpp"

namespace agenda::bootstrap {

namespace {
constexpr const char* kLog = "decisions.log";
constexpr const char* kSnapshot = "snapshot.json";
constexpr const char* kQueue = "candidates.jsonl";
}  // namespace

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Store::Store(std::filesystem::path dir, const LabelSchema& schema, StoreOptions options)
    : dir_(std::move(dir)), schema_(&schema), options_(options), state_(schema) {
  std::filesystem::create_directories(dir_);
  if (options_.use_snapshot && std::filesystem::exists(dir_ / kSnapshot)) {
    state_ = ReviewState::from_json(read_json_file(dir_ / kSnapshot), schema);
  }
  if (std::filesystem::exists(dir_ / kLog)) {
    for_each_jsonl(dir_ / kLog, [&](std::size_t, const nlohmann::json& ev) {
      if (ev.at("seq").get<std::uint64_t>() <= state_.seq()) return;
      state_.apply(ev);
    });
  }
  log_.open(dir_ / kLog, std::ios::app | std::ios::binary);
  if (!log_) throw Error("cannot open " + (dir_ / kLog).string() + " for appending");
}

void Store::commit(nlohmann::ordered_json event) {
  nlohmann::ordered_json ev;
  ev["seq"] = state_.seq() + 1;
  for (auto& [key, value] : event.items()) ev[key] = std::move(value);
  state_.validate(ev);
  log_ << dump_line(ev) << '\n';
  log_.flush();
  if (!log_) throw Error("failed to append to " + (dir_ / kLog).string());
  state_.apply(ev);
  if (options_.snapshot_every > 0 && state_.seq() % options_.snapshot_every == 0) write_snapshot_locked();
}

int Store::run_round(std::span<const CorpusFile> corpus, backends::Embedder& embedder, const BootstrapConfig& cfg) {
  std::lock_guard lock(mutex_);
  auto ranking = rank_candidates(corpus, *schema_, embedder, cfg, state_.queued_pairs());
  commit(state_.round_event(ranking, cfg));
  write_snapshot_locked();
  return *state_.open_round();
}

nlohmann::ordered_json Store::record_decision(const std::string& candidate_id, const std::string& annotator,
                                              const std::vector<LabelId>& labels, std::uint64_t version,
                                              std::string timestamp) {
  std::lock_guard lock(mutex_);
  if (timestamp.empty()) timestamp = utc_now();
  commit(state_.decision_event(candidate_id, annotator, labels, version, timestamp));
  return candidate_to_json(state_.candidate(candidate_id));
}

nlohmann::ordered_json Store::record_consensus(const std::string& candidate_id, const std::string& annotator,
                                               const std::vector<LabelId>& labels, bool discard,
                                               std::uint64_t version, std::string timestamp) {
  std::lock_guard lock(mutex_);
  if (timestamp.empty()) timestamp = utc_now();
  commit(state_.consensus_event(candidate_id, annotator, labels, discard, version, timestamp));
  return candidate_to_json(state_.candidate(candidate_id));
}

void Store::write_snapshot() {
  std::lock_guard lock(mutex_);
  write_snapshot_locked();
}

void Store::write_snapshot_locked() {
  const auto tmp = dir_ / (std::string(kSnapshot) + ".tmp");
  write_text_file(tmp, dump_line(state_.to_json()) + "\n");
  std::filesystem::rename(tmp, dir_ / kSnapshot);
  std::string queue;
  for (const auto* s : state_.candidates()) queue += dump_line(candidate_to_json(*s)) + "\n";
  const auto qtmp = dir_ / (std::string(kQueue) + ".tmp");
  write_text_file(qtmp, queue);
  std::filesystem::rename(qtmp, dir_ / kQueue);
}

}  // namespace agenda::bootstrap
