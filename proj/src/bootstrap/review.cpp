#include "agenda/bootstrap/review.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_set>

namespace agenda::bootstrap {

namespace {

const char* const kStatusNames[] = {"pending", "confirmed", "reassigned", "other", "discarded"};

std::string candidate_id(int round, const LabelId& label, std::size_t rank) {
  return "r" + std::to_string(round) + "-" + label + "-" + std::to_string(rank);
}

AnnotationRecord record_from_json(const nlohmann::json& obj, const std::string& candidate_id) {
  AnnotationRecord r;
  r.candidate_id = candidate_id;
  r.annotator = obj.value("annotator", std::string());
  r.labels = obj.value("labels", std::vector<LabelId>{});
  r.timestamp = obj.value("timestamp", std::string());
  r.round = obj.value("round", 0);
  r.consensus = obj.value("consensus", false);
  r.discard = obj.value("discard", false);
  return r;
}

Candidate candidate_from_json(const nlohmann::json& obj, const LabelSchema& schema) {
  Candidate c;
  c.id = obj.at("id").get<std::string>();
  c.round = obj.at("round").get<int>();
  c.suggested = obj.at("label").get<std::string>();
  schema.index_of(c.suggested);
  c.rank = obj.at("rank").get<std::size_t>();
  c.similarity = obj.at("similarity").get<double>();
  c.message = parse_message(obj.at("message"), schema);
  if (auto it = obj.find("partner"); it != obj.end() && !it->is_null()) c.partner = parse_message(*it, schema);
  return c;
}

nlohmann::ordered_json candidate_core_json(const Candidate& c) {
  nlohmann::ordered_json obj;
  obj["id"] = c.id;
  obj["round"] = c.round;
  obj["label"] = c.suggested;
  obj["rank"] = c.rank;
  obj["similarity"] = c.similarity;
  obj["message"] = message_to_json(c.message);
  if (c.partner) obj["partner"] = message_to_json(*c.partner);
  return obj;
}

bool in_scope(const CandidateState& s, std::optional<int> round) { return !round || s.candidate.round == *round; }

}  // namespace

std::string_view to_string(CandidateStatus status) noexcept { return kStatusNames[static_cast<int>(status)]; }

CandidateStatus parse_status(std::string_view name) {
  for (int i = 0; i < 5; ++i) {
    if (name == kStatusNames[i]) return static_cast<CandidateStatus>(i);
  }
  throw ValidationError("unknown candidate status '" + std::string(name) + "'");
}

bool CandidateState::in_disagreement() const noexcept {
  return !consensus && decisions.size() == 2 && decisions[0].labels != decisions[1].labels;
}

nlohmann::ordered_json record_to_json(const AnnotationRecord& r) {
  nlohmann::ordered_json obj;
  obj["annotator"] = r.annotator;
  obj["labels"] = r.labels;
  obj["timestamp"] = r.timestamp;
  obj["round"] = r.round;
  if (r.consensus) obj["consensus"] = true;
  if (r.discard) obj["discard"] = true;
  return obj;
}

nlohmann::ordered_json candidate_to_json(const CandidateState& s) {
  auto obj = candidate_core_json(s.candidate);
  obj["status"] = to_string(s.status);
  obj["version"] = s.version;
  auto decisions = nlohmann::ordered_json::array();
  for (const auto& d : s.decisions) decisions.push_back(record_to_json(d));
  obj["decisions"] = std::move(decisions);
  obj["consensus"] = s.consensus ? record_to_json(*s.consensus) : nlohmann::ordered_json(nullptr);
  auto history = nlohmann::ordered_json::array();
  for (const auto& h : s.history) history.push_back({{"status", to_string(h.status)}, {"seq", h.seq}});
  obj["history"] = std::move(history);
  return obj;
}

std::optional<int> ReviewState::open_round() const {
  if (rounds_.empty()) return std::nullopt;
  return rounds_.back().round;
}

const CandidateState* ReviewState::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &states_[it->second];
}

const CandidateState& ReviewState::candidate(const std::string& id) const {
  const auto* s = find(id);
  if (!s) throw NotFoundError("unknown candidate '" + id + "'");
  return *s;
}

CandidateState& ReviewState::mutable_candidate(const std::string& id) {
  auto it = index_.find(id);
  if (it == index_.end()) throw NotFoundError("unknown candidate '" + id + "'");
  return states_[it->second];
}

std::vector<const CandidateState*> ReviewState::candidates(std::optional<int> round) const {
  std::vector<const CandidateState*> out;
  for (const auto& s : states_) {
    if (in_scope(s, round)) out.push_back(&s);
  }
  return out;
}

std::set<std::pair<LabelId, std::string>> ReviewState::queued_pairs() const {
  std::set<std::pair<LabelId, std::string>> out;
  for (const auto& s : states_) out.emplace(s.candidate.suggested, s.candidate.message.id);
  return out;
}

nlohmann::ordered_json ReviewState::round_event(const Ranking& ranking, const BootstrapConfig& cfg) const {
  const int round = static_cast<int>(rounds_.size()) + 1;
  nlohmann::ordered_json ev;
  ev["event"] = "round";
  ev["round"] = round;
  auto config = config_to_json(cfg);
  config["labels"] = target_labels(cfg, *schema_);
  ev["config"] = std::move(config);
  ev["n_sampled"] = ranking.n_sampled;
  auto candidates = nlohmann::ordered_json::array();
  auto discarded = nlohmann::ordered_json::array();
  for (const auto& q : ranking.queues) {
    for (std::size_t r = 0; r < q.candidates.size(); ++r) {
      Candidate c{candidate_id(round, q.label, r + 1), round, q.label, r + 1, q.candidates[r].similarity,
                  q.candidates[r].message, q.candidates[r].partner};
      candidates.push_back(candidate_core_json(c));
    }
    for (const auto& d : q.discarded) {
      discarded.push_back({{"label", q.label}, {"id", d.message_id}, {"similarity", d.similarity}});
    }
  }
  ev["candidates"] = std::move(candidates);
  ev["discarded"] = std::move(discarded);
  validate(ev);
  return ev;
}

nlohmann::ordered_json ReviewState::decision_event(const std::string& candidate_id, const std::string& annotator,
                                                   const std::vector<LabelId>& labels, std::uint64_t version,
                                                   const std::string& timestamp) const {
  const auto& s = candidate(candidate_id);
  nlohmann::ordered_json ev;
  ev["event"] = "decision";
  ev["candidate"] = candidate_id;
  ev["annotator"] = annotator;
  ev["labels"] = schema_->canonicalize(labels);
  ev["round"] = s.candidate.round;
  ev["version"] = version;
  ev["timestamp"] = timestamp;
  validate(ev);
  return ev;
}

nlohmann::ordered_json ReviewState::consensus_event(const std::string& candidate_id, const std::string& annotator,
                                                    const std::vector<LabelId>& labels, bool discard,
                                                    std::uint64_t version, const std::string& timestamp) const {
  const auto& s = candidate(candidate_id);
  nlohmann::ordered_json ev;
  ev["event"] = "consensus";
  ev["candidate"] = candidate_id;
  ev["annotator"] = annotator;
  ev["labels"] = discard ? LabelSet{} : schema_->canonicalize(labels);
  ev["discard"] = discard;
  ev["round"] = s.candidate.round;
  ev["version"] = version;
  ev["timestamp"] = timestamp;
  validate(ev);
  return ev;
}

void ReviewState::validate(const nlohmann::json& ev) const {
  if (auto it = ev.find("seq"); it != ev.end() && it->get<std::uint64_t>() != seq_ + 1) {
    throw ValidationError("event out of order: seq " + std::to_string(it->get<std::uint64_t>()) + " after " +
                          std::to_string(seq_));
  }
  const auto type = ev.at("event").get<std::string>();
  if (type == "round") {
    if (ev.at("round").get<int>() != static_cast<int>(rounds_.size()) + 1) throw ValidationError("round out of order");
    std::unordered_set<std::string> ids;
    for (const auto& c : ev.at("candidates")) {
      auto cand = candidate_from_json(c, *schema_);
      if (find(cand.id) || !ids.insert(cand.id).second) throw ValidationError("duplicate candidate '" + cand.id + "'");
    }
    return;
  }
  if (type != "decision" && type != "consensus") throw ValidationError("unknown event '" + type + "'");

  const auto& s = candidate(ev.at("candidate").get<std::string>());
  const auto annotator = ev.value("annotator", std::string());
  const auto labels = ev.at("labels").get<std::vector<LabelId>>();
  for (const auto& l : labels) schema_->index_of(l);
  if (s.finalized()) throw PreconditionError("candidate '" + s.candidate.id + "' is already resolved");

  if (type == "decision") {
    if (annotator.empty()) throw ValidationError("decision without annotator");
    if (labels.empty()) throw ValidationError("decision with an empty label set");
    for (const auto& d : s.decisions) {
      if (d.annotator == annotator) {
        throw PreconditionError("duplicate decision by '" + annotator + "' on '" + s.candidate.id + "' in round " +
                                std::to_string(s.candidate.round));
      }
    }
    if (s.decisions.size() >= 2) throw PreconditionError("candidate '" + s.candidate.id + "' already has two decisions");
  } else {
    const bool discard = ev.value("discard", false);
    if (labels.empty() != discard) throw ValidationError("consensus needs a non-empty label set or an explicit discard");
  }
  const auto version = ev.at("version").get<std::uint64_t>();
  if (version != s.version) {
    throw PreconditionError("stale version for '" + s.candidate.id + "': " + std::to_string(version) + " != " +
                            std::to_string(s.version));
  }
}

CandidateStatus ReviewState::status_for(const CandidateState& s, const LabelSet& labels) const {
  if (labels.size() == 1 && labels.front() == s.candidate.suggested) return CandidateStatus::confirmed;
  if (labels.size() == 1 && labels.front() == schema_->other_id()) return CandidateStatus::other;
  return CandidateStatus::reassigned;
}

void ReviewState::set_status(CandidateState& s, CandidateStatus status) {
  s.status = status;
  s.history.push_back({status, seq_});
}

void ReviewState::apply(const nlohmann::json& ev) {
  validate(ev);
  ++seq_;
  const auto type = ev.at("event").get<std::string>();
  if (type == "round") {
    RoundInfo info;
    info.round = ev.at("round").get<int>();
    info.config = ev.at("config");
    info.n_sampled = ev.value("n_sampled", std::size_t{0});
    for (const auto& c : ev.at("candidates")) {
      CandidateState s;
      s.candidate = candidate_from_json(c, *schema_);
      info.candidate_ids.push_back(s.candidate.id);
      index_.emplace(s.candidate.id, states_.size());
      states_.push_back(std::move(s));
      set_status(states_.back(), CandidateStatus::pending);
    }
    for (const auto& d : ev.at("discarded")) {
      info.discarded.push_back({d.at("label").get<std::string>(),
                                ScoredId{d.at("id").get<std::string>(), d.at("similarity").get<double>()}});
    }
    rounds_.push_back(std::move(info));
    return;
  }

  auto& s = mutable_candidate(ev.at("candidate").get<std::string>());
  auto record = record_from_json(ev, s.candidate.id);
  ++s.version;
  if (type == "decision") {
    s.decisions.push_back(record);
    if (s.status == CandidateStatus::pending) set_status(s, status_for(s, record.labels));
  } else {
    record.consensus = true;
    s.consensus = record;
    set_status(s, record.discard ? CandidateStatus::discarded : status_for(s, record.labels));
  }
}

const CandidateState* ReviewState::next_for(const std::string& annotator) const {
  const auto round = open_round();
  if (!round) return nullptr;
  const CandidateState* best = nullptr;
  auto key = [&](const CandidateState* s) {
    return std::make_tuple(s->candidate.rank, schema_->index_of(s->candidate.suggested), s->candidate.id);
  };
  for (const auto& s : states_) {
    if (s.candidate.round != *round || s.finalized() || s.decisions.size() >= 2) continue;
    bool mine = false;
    for (const auto& d : s.decisions) mine = mine || d.annotator == annotator;
    if (mine) continue;
    if (!best || key(&s) < key(best)) best = &s;
  }
  return best;
}

std::vector<std::string> ReviewState::disagreements(std::optional<int> round) const {
  std::vector<std::string> out;
  for (const auto& s : states_) {
    if (in_scope(s, round) && s.in_disagreement()) out.push_back(s.candidate.id);
  }
  return out;
}

std::optional<eval::AgreementReport> ReviewState::agreement(std::optional<int> round) const {
  std::vector<const CandidateState*> items;
  std::set<std::string> annotators;
  for (const auto& s : states_) {
    if (!in_scope(s, round) || s.decisions.size() != 2) continue;
    items.push_back(&s);
    for (const auto& d : s.decisions) annotators.insert(d.annotator);
  }
  if (items.empty()) return std::nullopt;
  if (annotators.size() != 2) {
    throw PreconditionError("agreement needs exactly two annotators, found " + std::to_string(annotators.size()));
  }
  const auto& first = *annotators.begin();
  std::vector<std::string> ann1;
  std::vector<std::string> ann2;
  for (const auto* s : items) {
    const auto& a = s->decisions[0].annotator == first ? s->decisions[0] : s->decisions[1];
    const auto& b = s->decisions[0].annotator == first ? s->decisions[1] : s->decisions[0];
    ann1.push_back(category_of(a.labels));
    ann2.push_back(category_of(b.labels));
  }
  return eval::agreement(ann1, ann2);
}

namespace {

/// Final labels of a candidate: consensus, or two agreeing decisions.
std::optional<LabelSet> final_labels(const CandidateState& s) {
  if (s.consensus) {
    if (s.consensus->discard) return std::nullopt;
    return s.consensus->labels;
  }
  if (s.decisions.size() == 2 && s.decisions[0].labels == s.decisions[1].labels) return s.decisions[0].labels;
  return std::nullopt;
}

struct Group {
  std::set<std::size_t> labels;
  std::map<std::string, Message> members;
};

}  // namespace

ExportResult ReviewState::export_labeled(std::optional<int> round) const {
  if (auto pending = disagreements(round); !pending.empty()) throw PendingDisagreements(std::move(pending));
  ExportResult out;
  std::map<std::string, Group> groups;
  for (const auto& s : states_) {
    if (!in_scope(s, round)) continue;
    ++out.n_candidates;
    if (s.status == CandidateStatus::discarded) {
      ++out.n_discarded;
      continue;
    }
    auto labels = final_labels(s);
    if (!labels) {
      ++out.n_undecided;
      continue;
    }
    ++out.n_exported;
    const auto& m = s.candidate.message;
    auto& g = groups[m.pair_id ? "pair:" + *m.pair_id : "msg:" + m.id];
    for (auto idx : schema_->indices(*labels)) g.labels.insert(idx);
    g.members.emplace(m.id, m);
    if (s.candidate.partner) g.members.emplace(s.candidate.partner->id, *s.candidate.partner);
  }
  const auto other = schema_->other_index();
  for (auto& [key, g] : groups) {
    if (g.labels.size() > 1) g.labels.erase(other);
    std::vector<std::size_t> idx(g.labels.begin(), g.labels.end());
    auto gold = schema_->ids(idx);
    for (auto& [id, m] : g.members) {
      m.gold = gold;
      out.messages.push_back(m);
    }
  }
  std::sort(out.messages.begin(), out.messages.end(), [](const Message& a, const Message& b) { return a.id < b.id; });
  out.agreement = agreement(round);
  return out;
}

nlohmann::ordered_json ReviewState::queue_stats() const {
  const auto round = open_round();
  struct Row {
    std::size_t queued = 0, open = 0, labeled = 0;
    std::size_t by_status[5] = {0, 0, 0, 0, 0};
  };
  std::vector<Row> rows(schema_->size());
  for (const auto& s : states_) {
    auto& r = rows[schema_->index_of(s.candidate.suggested)];
    ++r.queued;
    ++r.by_status[static_cast<int>(s.status)];
    if (round && s.candidate.round == *round && !s.finalized() && s.decisions.size() < 2) ++r.open;
  }
  std::map<std::string, Group> groups;
  for (const auto& s : states_) {
    auto labels = final_labels(s);
    if (!labels) continue;
    const auto& m = s.candidate.message;
    auto& g = groups[m.pair_id ? "pair:" + *m.pair_id : "msg:" + m.id];
    for (auto idx : schema_->indices(*labels)) g.labels.insert(idx);
    g.members.emplace(m.id, m);
    if (s.candidate.partner) g.members.emplace(s.candidate.partner->id, *s.candidate.partner);
  }
  for (auto& [key, g] : groups) {
    if (g.labels.size() > 1) g.labels.erase(schema_->other_index());
    for (auto idx : g.labels) rows[idx].labeled += g.members.size();
  }
  nlohmann::ordered_json doc;
  doc["open_round"] = round ? nlohmann::ordered_json(*round) : nlohmann::ordered_json(nullptr);
  auto labels = nlohmann::ordered_json::array();
  for (std::size_t l = 0; l < rows.size(); ++l) {
    nlohmann::ordered_json row;
    row["label"] = schema_->at(l).id;
    row["queued"] = rows[l].queued;
    row["open"] = rows[l].open;
    for (int st = 0; st < 5; ++st) row[kStatusNames[st]] = rows[l].by_status[st];
    row["labeled"] = rows[l].labeled;
    labels.push_back(std::move(row));
  }
  doc["labels"] = std::move(labels);
  return doc;
}

nlohmann::ordered_json ReviewState::to_json() const {
  nlohmann::ordered_json doc;
  doc["seq"] = seq_;
  auto rounds = nlohmann::ordered_json::array();
  for (const auto& r : rounds_) {
    auto discarded = nlohmann::ordered_json::array();
    for (const auto& [label, d] : r.discarded) {
      discarded.push_back({{"label", label}, {"id", d.message_id}, {"similarity", d.similarity}});
    }
    rounds.push_back({{"round", r.round}, {"config", r.config}, {"n_sampled", r.n_sampled}, {"discarded", discarded}});
  }
  doc["rounds"] = std::move(rounds);
  auto candidates = nlohmann::ordered_json::array();
  for (const auto& s : states_) candidates.push_back(candidate_to_json(s));
  doc["candidates"] = std::move(candidates);
  return doc;
}

ReviewState ReviewState::from_json(const nlohmann::json& doc, const LabelSchema& schema) {
  ReviewState st(schema);
  st.seq_ = doc.at("seq").get<std::uint64_t>();
  for (const auto& r : doc.at("rounds")) {
    RoundInfo info;
    info.round = r.at("round").get<int>();
    info.config = r.at("config");
    info.n_sampled = r.value("n_sampled", std::size_t{0});
    for (const auto& d : r.at("discarded")) {
      info.discarded.push_back({d.at("label").get<std::string>(),
                                ScoredId{d.at("id").get<std::string>(), d.at("similarity").get<double>()}});
    }
    st.rounds_.push_back(std::move(info));
  }
  for (const auto& c : doc.at("candidates")) {
    CandidateState s;
    s.candidate = candidate_from_json(c, schema);
    s.version = c.at("version").get<std::uint64_t>();
    s.status = parse_status(c.at("status").get<std::string>());
    for (const auto& d : c.at("decisions")) s.decisions.push_back(record_from_json(d, s.candidate.id));
    if (!c.at("consensus").is_null()) s.consensus = record_from_json(c.at("consensus"), s.candidate.id);
    for (const auto& h : c.at("history")) {
      s.history.push_back({parse_status(h.at("status").get<std::string>()), h.at("seq").get<std::uint64_t>()});
    }
    if (s.candidate.round < 1 || s.candidate.round > static_cast<int>(st.rounds_.size())) {
      throw ValidationError("snapshot: candidate '" + s.candidate.id + "' refers to an unknown round");
    }
    st.rounds_[static_cast<std::size_t>(s.candidate.round - 1)].candidate_ids.push_back(s.candidate.id);
    st.index_.emplace(s.candidate.id, st.states_.size());
    st.states_.push_back(std::move(s));
  }
  return st;
}

}  // namespace agenda::bootstrap
