#include <gtest/gtest.h>

#include <fstream>

#include "agenda/backends/mock.hpp"
#include "agenda/bootstrap/ranking.hpp"
#include "agenda/bootstrap/review.hpp"
#include "agenda/bootstrap/store.hpp"
#include "agenda/core/jsonl.hpp"
#include "fixtures.hpp"

using namespace agenda;
using namespace agenda::bootstrap;

namespace {

const LabelSchema& abc() {
  static const LabelSchema s = fixture::abc_schema();
  return s;
}

/// Anchors are the unit axes; message i leans toward axis (i % 3) with strength i.
backends::MockEmbedder axis_embedder() {
  backends::MockEmbedder::Fixture fx{{"definition of A", {1, 0, 0}},
                                     {"definition of B", {0, 1, 0}},
                                     {"definition of C", {0, 0, 1}},
                                     {"definition of Other", {1, 1, 1}}};
  for (int i = 0; i < 30; ++i) {
    std::vector<float> v{1, 1, 1};
    v[i % 3] += static_cast<float>(i);
    fx["text " + std::to_string(i)] = v;
  }
  return backends::MockEmbedder(3, 0, fx);
}

std::vector<CorpusFile> corpus(int n = 30) {
  CorpusFile f{"c.jsonl", {}};
  for (int i = 0; i < n; ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "m%02d", i);
    f.messages.push_back({id, "text " + std::to_string(i), "en", std::nullopt, std::nullopt});
  }
  return {f};
}

BootstrapConfig config(std::size_t k, double fraction = 1.0) {
  BootstrapConfig c;
  c.k_per_label = k;
  c.sample_fraction = fraction;
  c.seed = 1;
  return c;
}

/// Round one over the axis corpus with k = 3: A gets m27, m24, m21; B m28, m25, m22; C m29, m26, m23.
ReviewState first_round() {
  auto emb = axis_embedder();
  ReviewState st(abc());
  const auto files = corpus();
  const auto cfg = config(3);
  st.apply(st.round_event(rank_candidates(files, abc(), emb, cfg), cfg));
  return st;
}

void decide(ReviewState& st, const std::string& id, const std::string& who, LabelSet labels) {
  st.apply(st.decision_event(id, who, labels, st.candidate(id).version, "2026-01-01T00:00:00Z"));
}

void settle(ReviewState& st, const std::string& id, LabelSet labels, bool discard = false) {
  st.apply(st.consensus_event(id, "lead", labels, discard, st.candidate(id).version, "2026-01-01T00:00:00Z"));
}

}  // namespace

TEST(Config, DefaultsAndValidation) {
  BootstrapConfig c;
  EXPECT_EQ(c.k_per_label, 500u);
  EXPECT_EQ(c.sample_fraction, 0.10);
  EXPECT_EQ(target_labels(c, abc()), (std::vector<LabelId>{"A", "B", "C"}));
  c.k_per_label = 0;
  EXPECT_THROW(validate_config(c, abc()), ValidationError);
  c = {};
  c.sample_fraction = 0;
  EXPECT_THROW(validate_config(c, abc()), ValidationError);
  c = {};
  c.target_labels = {"Z"};
  EXPECT_THROW(validate_config(c, abc()), ValidationError);
  c = {};
  c.target_labels = {"C", "A"};
  EXPECT_EQ(target_labels(c, abc()), (std::vector<LabelId>{"A", "C"}));
  const auto back = config_from_json(nlohmann::json::parse(config_to_json(c).dump()));
  EXPECT_EQ(back.target_labels, c.target_labels);
}

TEST(Sampling, FloorPerFileInFileOrder) {
  std::vector<CorpusFile> files = corpus(25);
  files.push_back({"small", {{"s1", "x", "en", {}, {}}, {"s2", "y", "en", {}, {}}}});
  const auto a = sample_corpus(files, 0.10, 5);
  ASSERT_EQ(a.size(), 2u);  // floor(2.5) from the first file, floor(0.2) from the second
  EXPECT_LT(a[0].id, a[1].id);
  EXPECT_EQ(a[0].id, sample_corpus(files, 0.10, 5)[0].id);
  EXPECT_EQ(sample_corpus(files, 1.0, 5).size(), 27u);
}

TEST(Ranking, TopKBySimilarityWithDiscardedTail) {
  auto emb = axis_embedder();
  const auto r = rank_candidates(corpus(), abc(), emb, config(3));
  EXPECT_EQ(r.n_sampled, 30u);
  ASSERT_EQ(r.queues.size(), 3u);
  const auto& a = r.queues[0];
  EXPECT_EQ(a.label, "A");
  ASSERT_EQ(a.candidates.size(), 3u);
  EXPECT_EQ(a.candidates[0].message.id, "m27");
  EXPECT_EQ(a.candidates[2].message.id, "m21");
  EXPECT_GE(a.candidates[0].similarity, a.candidates[1].similarity);
  EXPECT_EQ(a.discarded.size(), 27u);
  EXPECT_FALSE(a.candidates[0].message.gold.has_value());
}

TEST(Ranking, TiesBrokenById) {
  backends::MockEmbedder emb(3, 0, {{"definition of A", {1, 0, 0}}, {"definition of B", {0, 1, 0}},
                                    {"definition of C", {0, 0, 1}}, {"same", {1, 0, 0}}});
  CorpusFile f{"f", {{"b", "same", "en", {}, {}}, {"a", "same", "en", {}, {}}, {"c", "same", "en", {}, {}}}};
  std::vector<CorpusFile> files{f};
  const auto r = rank_candidates(files, abc(), emb, config(2));
  EXPECT_EQ(r.queues[0].candidates[0].message.id, "a");
  EXPECT_EQ(r.queues[0].candidates[1].message.id, "b");
}

TEST(Ranking, ExcludedPairsAreSkipped) {
  auto emb = axis_embedder();
  std::set<std::pair<LabelId, std::string>> excl{{"A", "m27"}};
  const auto r = rank_candidates(corpus(), abc(), emb, config(1), excl);
  EXPECT_EQ(r.queues[0].candidates[0].message.id, "m24");
  EXPECT_EQ(r.queues[1].candidates[0].message.id, "m28");
}

TEST(Review, RoundCreatesRankedCandidates) {
  auto st = first_round();
  EXPECT_EQ(st.seq(), 1u);
  EXPECT_EQ(st.open_round(), 1);
  const auto& c = st.candidate("r1-A-1");
  EXPECT_EQ(c.candidate.message.id, "m27");
  EXPECT_EQ(c.version, 1u);
  EXPECT_EQ(c.status, CandidateStatus::pending);
  EXPECT_EQ(st.candidates().size(), 9u);
}

TEST(Review, NextForWalksRanksAcrossLabels) {
  auto st = first_round();
  EXPECT_EQ(st.next_for("ann1")->candidate.id, "r1-A-1");
  decide(st, "r1-A-1", "ann1", {"A"});
  EXPECT_EQ(st.next_for("ann1")->candidate.id, "r1-B-1");
  EXPECT_EQ(st.next_for("ann2")->candidate.id, "r1-A-1");
}

TEST(Review, StatusFollowsDecisionKind) {
  auto st = first_round();
  decide(st, "r1-A-1", "ann1", {"A"});
  decide(st, "r1-A-2", "ann1", {"B"});
  decide(st, "r1-A-3", "ann1", {"Other"});
  EXPECT_EQ(st.candidate("r1-A-1").status, CandidateStatus::confirmed);
  EXPECT_EQ(st.candidate("r1-A-2").status, CandidateStatus::reassigned);
  EXPECT_EQ(st.candidate("r1-A-3").status, CandidateStatus::other);
  settle(st, "r1-B-1", {}, true);
  EXPECT_EQ(st.candidate("r1-B-1").status, CandidateStatus::discarded);
  EXPECT_EQ(st.candidate("r1-B-1").history.back().seq, st.seq());
}

TEST(Review, Preconditions) {
  auto st = first_round();
  EXPECT_THROW(st.decision_event("nope", "ann1", {"A"}, 1, "t"), NotFoundError);
  EXPECT_THROW(st.decision_event("r1-A-1", "ann1", {}, 1, "t"), ValidationError);
  EXPECT_THROW(st.decision_event("r1-A-1", "ann1", {"Z"}, 1, "t"), ValidationError);
  EXPECT_THROW(st.decision_event("r1-A-1", "ann1", {"A"}, 2, "t"), PreconditionError);
  decide(st, "r1-A-1", "ann1", {"A"});
  EXPECT_THROW(st.decision_event("r1-A-1", "ann1", {"B"}, 2, "t"), PreconditionError);
  decide(st, "r1-A-1", "ann2", {"A"});
  EXPECT_THROW(st.decision_event("r1-A-1", "ann3", {"A"}, 3, "t"), PreconditionError);
  settle(st, "r1-A-1", {"A"});
  EXPECT_THROW(st.consensus_event("r1-A-1", "lead", {"B"}, false, 4, "t"), PreconditionError);
}

TEST(Review, EventSequenceMustBeContiguous) {
  auto st = first_round();
  auto ev = st.decision_event("r1-A-1", "ann1", {"A"}, 1, "t");
  ev["seq"] = 5;
  EXPECT_THROW(st.apply(ev), ValidationError);
}

TEST(Review, DisagreementBlocksExportUntilConsensus) {
  auto st = first_round();
  decide(st, "r1-A-1", "ann1", {"A"});
  decide(st, "r1-A-1", "ann2", {"B"});
  decide(st, "r1-B-1", "ann1", {"B"});
  decide(st, "r1-B-1", "ann2", {"B"});
  EXPECT_EQ(st.disagreements(), std::vector<std::string>{"r1-A-1"});
  try {
    st.export_labeled();
    FAIL();
  } catch (const PendingDisagreements& e) {
    EXPECT_EQ(e.ids(), std::vector<std::string>{"r1-A-1"});
  }
  settle(st, "r1-A-1", {"A", "B"});
  const auto ex = st.export_labeled();
  ASSERT_EQ(ex.messages.size(), 2u);
  EXPECT_EQ(ex.messages[0].id, "m27");
  EXPECT_EQ(*ex.messages[0].gold, (LabelSet{"A", "B"}));
  EXPECT_EQ(*ex.messages[1].gold, (LabelSet{"B"}));
  EXPECT_EQ(ex.n_candidates, 9u);
  EXPECT_EQ(ex.n_exported, 2u);
  EXPECT_EQ(ex.n_undecided, 7u);
  ASSERT_TRUE(ex.agreement);
  EXPECT_EQ(ex.agreement->n_items, 2u);
  EXPECT_EQ(ex.agreement->percent_agreement, 0.5);
}

TEST(Review, AgreementIsPreConsensusAndNeedsTwoAnnotators) {
  auto st = first_round();
  EXPECT_FALSE(st.agreement().has_value());
  decide(st, "r1-A-1", "ann1", {"A"});
  decide(st, "r1-A-1", "ann2", {"A"});
  decide(st, "r1-A-2", "ann1", {"A"});
  decide(st, "r1-A-2", "ann2", {"Other"});
  settle(st, "r1-A-2", {"A"});
  const auto a = st.agreement();
  ASSERT_TRUE(a);
  EXPECT_EQ(a->n_items, 2u);
  EXPECT_EQ(a->n_agree, 1u);
  decide(st, "r1-B-1", "ann1", {"B"});
  decide(st, "r1-B-1", "ann3", {"B"});
  EXPECT_THROW(st.agreement(), PreconditionError);
}

TEST(Review, ExportMergesSameMessageAcrossQueues) {
  // m00 ranks into every queue when k covers the corpus; label it A in one, Other in another.
  auto emb = axis_embedder();
  ReviewState st(abc());
  const auto files = corpus(3);
  const auto cfg = config(3);
  st.apply(st.round_event(rank_candidates(files, abc(), emb, cfg), cfg));
  std::string in_a, in_b;
  for (const auto* c : st.candidates()) {
    if (c->candidate.message.id != "m00") continue;
    (c->candidate.suggested == "A" ? in_a : in_b) = c->candidate.id;
    if (!in_b.empty() && !in_a.empty()) break;
  }
  settle(st, in_a, {"A"});
  settle(st, in_b, {"Other"});
  const auto ex = st.export_labeled();
  ASSERT_EQ(ex.messages.size(), 1u);
  EXPECT_EQ(*ex.messages[0].gold, LabelSet{"A"});
}

TEST(Review, ReplayReproducesState) {
  auto st = first_round();
  std::vector<nlohmann::ordered_json> log;
  ReviewState fresh(abc());
  auto emb = axis_embedder();
  const auto cfg = config(3);
  auto ev = fresh.round_event(rank_candidates(corpus(), abc(), emb, cfg), cfg);
  ev["seq"] = 1;
  log.push_back(ev);
  auto record = [&](nlohmann::ordered_json e) {
    e["seq"] = st.seq() + 1;
    st.apply(e);
    log.push_back(e);
  };
  record(st.decision_event("r1-A-1", "ann1", {"A"}, 1, "t1"));
  record(st.decision_event("r1-A-1", "ann2", {"B"}, 2, "t2"));
  record(st.consensus_event("r1-A-1", "lead", {"A"}, false, 3, "t3"));
  ReviewState replay(abc());
  for (const auto& e : log) replay.apply(e);
  EXPECT_EQ(replay.to_json().dump(), st.to_json().dump());
  EXPECT_EQ(ReviewState::from_json(st.to_json(), abc()).to_json().dump(), st.to_json().dump());
}

TEST(Store, RestartReplaysLogAfterSnapshot) {
  fixture::TempDir dir;
  auto emb = axis_embedder();
  const auto files = corpus();
  std::string before_stats, before_export;
  {
    Store s(dir.path(), abc(), {4, true});
    s.run_round(files, emb, config(3));
    s.record_decision("r1-A-1", "ann1", {"A"}, 1, "t");
    s.record_decision("r1-A-1", "ann2", {"A"}, 2, "t");
    s.record_decision("r1-B-1", "ann1", {"B"}, 1, "t");
    s.record_decision("r1-B-1", "ann2", {"C"}, 2, "t");
    s.record_consensus("r1-B-1", "lead", {"C"}, false, 3, "t");
    s.record_decision("r1-C-1", "ann1", {"C"}, 1, "t");
    before_stats = s.read([](const ReviewState& st) { return st.queue_stats().dump(); });
    before_export = s.read([](const ReviewState& st) { return nlohmann::json(st.export_labeled().messages.size()).dump(); });
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "snapshot.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "candidates.jsonl"));
  Store with_snapshot(dir.path(), abc(), {4, true});
  Store log_only(dir.path(), abc(), {0, false});
  const auto a = with_snapshot.read([](const ReviewState& st) { return st.to_json().dump(); });
  const auto b = log_only.read([](const ReviewState& st) { return st.to_json().dump(); });
  EXPECT_EQ(a, b);
  EXPECT_EQ(with_snapshot.read([](const ReviewState& st) { return st.queue_stats().dump(); }), before_stats);
  EXPECT_EQ(with_snapshot.read([](const ReviewState& st) { return st.seq(); }), 7u);
}

TEST(Store, SecondRoundSkipsQueuedPairs) {
  fixture::TempDir dir;
  auto emb = axis_embedder();
  const auto files = corpus();
  Store s(dir.path(), abc());
  EXPECT_EQ(s.run_round(files, emb, config(3)), 1);
  EXPECT_EQ(s.run_round(files, emb, config(3)), 2);
  const auto first = s.read([](const ReviewState& st) { return st.candidate("r2-A-1").candidate.message.id; });
  EXPECT_EQ(first, "m18");
  EXPECT_EQ(s.read([](const ReviewState& st) { return *st.open_round(); }), 2);
}

TEST(Store, StaleVersionIsRejectedWithoutLogging) {
  fixture::TempDir dir;
  auto emb = axis_embedder();
  const auto files = corpus();
  Store s(dir.path(), abc());
  s.run_round(files, emb, config(3));
  s.record_decision("r1-A-1", "ann1", {"A"}, 1);
  EXPECT_THROW(s.record_decision("r1-A-1", "ann2", {"A"}, 1), PreconditionError);
  std::size_t lines = 0;
  for_each_jsonl(dir / "decisions.log", [&](std::size_t, const nlohmann::json&) { ++lines; });
  EXPECT_EQ(lines, 2u);
}

TEST(Store, TimestampIsIsoUtc) {
  const auto t = utc_now();
  ASSERT_EQ(t.size(), 20u);
  EXPECT_EQ(t[10], 'T');
  EXPECT_EQ(t.back(), 'Z');
}
