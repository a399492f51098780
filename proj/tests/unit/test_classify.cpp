#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "agenda/backends/mock.hpp"
#include "agenda/classify/calibrate.hpp"
#include "agenda/classify/decide.hpp"
#include "agenda/classify/score_matrix.hpp"
#include "agenda/classify/similarity.hpp"
#include "agenda/dataprep/hypotheses.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace agenda;
using namespace agenda::classify;

namespace {

const LabelSchema& abc() {
  static const LabelSchema s = fixture::abc_schema();
  return s;
}

ScoreMatrix matrix_of(const std::vector<std::vector<double>>& rows) {
  std::vector<std::string> ids, langs;
  std::vector<double> values;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    ids.push_back("m" + std::to_string(r));
    langs.push_back("en");
    values.insert(values.end(), rows[r].begin(), rows[r].end());
  }
  return ScoreMatrix({"A", "B", "C", "Other"}, ids, langs, values);
}

}  // namespace

TEST(ScoreMatrix, RejectsBadShapesAndValues) {
  EXPECT_THROW(ScoreMatrix({"A"}, {"x"}, {"en"}, {1.2}), ValidationError);
  EXPECT_THROW(ScoreMatrix({"A"}, {"x"}, {"en"}, {}), ValidationError);
  EXPECT_THROW(ScoreMatrix({"A"}, {"x", "x"}, {"en", "en"}, {0.1, 0.2}), ValidationError);
}

TEST(ScoreMatrix, ScoresEveryCellWithHypothesisInMessageLanguage) {
  backends::MockScorer scorer(4);
  std::vector<Message> msgs{{"a", "vote now", "en", {}, {}}, {"b", "votez", "fr", {}, {}}};
  const auto& schema = default_schema();
  const auto m = score_messages(msgs, schema, scorer);
  ASSERT_EQ(m.rows(), 2u);
  ASSERT_EQ(m.cols(), 6u);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 6; ++c) {
      const auto h = dataprep::render_hypothesis(schema, schema.at(c).id, msgs[r].lang);
      EXPECT_EQ(m.at(r, c), scorer.hashed_score(msgs[r].text, h));
    }
  }
}

TEST(ScoreMatrix, JsonLinesRoundTripAndIncompleteRowsRejected) {
  const auto m = matrix_of({{0.1, 0.2, 0.3, 0.4}, {1, 0, 0.5, 0.25}});
  std::istringstream in(serialize_score_matrix(m));
  const auto again = parse_score_matrix(in, "mem", abc());
  EXPECT_EQ(again.values(), m.values());
  EXPECT_EQ(again.ids(), m.ids());

  std::istringstream bad(R"({"id":"x","lang":"en","scores":{"A":0.1,"B":0.2,"C":0.3}})" "\n");
  EXPECT_THROW(parse_score_matrix(bad, "mem", abc()), ParseError);
}

TEST(ScoreMatrix, SelectKeepsMatrixOrder) {
  const auto m = matrix_of({{0, 0, 0, 0}, {1, 1, 1, 1}, {0.5, 0.5, 0.5, 0.5}});
  const auto s = m.select({"m2", "m0"});
  EXPECT_EQ(s.ids(), (std::vector<std::string>{"m0", "m2"}));
}

TEST(Decide, MatchesOracleOnRandomRows) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> row(4);
    for (auto& v : row) v = u(rng);
    const double tau = 0.30 + 0.69 * u(rng);
    const auto expect = oracle::decide(row, tau, 3);
    const auto got = decide_labels(row, abc(), tau);
    std::vector<std::size_t> got_idx = abc().indices(got);
    EXPECT_EQ(got_idx, expect);
  }
}

TEST(Decide, OtherCompetesOnItsOwnScore) {
  std::vector<double> row{0.9, 0.1, 0.1, 0.95};
  EXPECT_EQ(decide_labels(row, abc(), 0.5), (LabelSet{"A", "Other"}));
}

TEST(Decide, TauRangeIsEnforced) {
  std::vector<double> row{0.9, 0.1, 0.1, 0.2};
  EXPECT_NO_THROW(decide_labels(row, abc(), 0.30));
  EXPECT_NO_THROW(decide_labels(row, abc(), 0.99));
  EXPECT_THROW(decide_labels(row, abc(), 0.29), ValidationError);
  EXPECT_THROW(decide_labels(row, abc(), 1.0), ValidationError);
  std::vector<double> short_row{0.9, 0.1};
  EXPECT_THROW(decide_labels(short_row, abc(), 0.5), ValidationError);
}

TEST(Decide, FallbackCarriesOtherScore) {
  const auto preds = decide_all(matrix_of({{0.1, 0.2, 0.3, 0.05}}), abc(), 0.5);
  ASSERT_EQ(preds.size(), 1u);
  EXPECT_EQ(preds[0].labels, LabelSet{"Other"});
  ASSERT_EQ(preds[0].confidences.size(), 1u);
  EXPECT_EQ(preds[0].confidences[0].second, 0.05);
}

TEST(Predictions, RoundTripAndRejectDuplicates) {
  const auto preds = decide_all(matrix_of({{0.9, 0.2, 0.6, 0.1}, {0.1, 0.1, 0.1, 0.1}}), abc(), 0.5);
  std::istringstream in(serialize_predictions(preds));
  EXPECT_EQ(parse_predictions(in, "mem", abc()), preds);

  std::istringstream dup(R"({"id":"x","labels":["A"]})" "\n" R"({"id":"x","labels":["B"]})" "\n");
  EXPECT_THROW(parse_predictions(dup, "mem", abc()), ValidationError);
  std::istringstream empty(R"({"id":"x","labels":[]})" "\n");
  EXPECT_THROW(parse_predictions(empty, "mem", abc()), ValidationError);
}

TEST(Grid, SeventyPointsExactHundredths) {
  const auto g = threshold_grid(0.01);
  ASSERT_EQ(g.size(), 70u);
  EXPECT_EQ(g.front(), 0.30);
  EXPECT_EQ(g[11], 0.41);
  EXPECT_EQ(g.back(), 0.99);
  EXPECT_EQ(threshold_grid(0.05).size(), 14u);
  EXPECT_THROW(threshold_grid(0.0), ValidationError);
  EXPECT_THROW(threshold_grid(0.7), ValidationError);
}

TEST(Calibrate, MatchesBruteForceOracle) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> rows;
    oracle::Sets gold_sets;
    std::vector<LabelSet> gold;
    for (int r = 0; r < 40; ++r) {
      rows.push_back({u(rng), u(rng), u(rng), u(rng)});
      gold_sets.push_back(fixture::random_set(rng, 4, 2));
      gold.push_back(abc().ids(fixture::as_vector(gold_sets.back())));
    }
    const auto expect = oracle::calibrate(4, 3, rows, gold_sets);
    const auto got = calibrate_threshold(matrix_of(rows), gold, abc());
    EXPECT_EQ(got.tau, expect.tau) << trial;
    EXPECT_NEAR(got.objective, expect.objective, 1e-12);
  }
}

TEST(Calibrate, TiesGoToSmallestTau) {
  // Every tau in [0.30, 0.80] yields the same perfect prediction.
  const auto got = calibrate_threshold(matrix_of({{0.9, 0.1, 0.1, 0.1}, {0.1, 0.1, 0.1, 0.1}}),
                                       std::vector<LabelSet>{{"A"}, {"Other"}}, abc());
  EXPECT_EQ(got.tau, 0.30);
  EXPECT_DOUBLE_EQ(got.objective, 1.0);
}

TEST(Calibrate, JsonRoundTrip) {
  ThresholdCalibration c{0.41, 0.7, 0.01, 0.30, 0.99};
  const auto back = calibration_from_json(nlohmann::json::parse(calibration_to_json(c).dump()));
  EXPECT_EQ(back.tau, 0.41);
  EXPECT_EQ(back.objective, 0.7);
}

TEST(Similarity, ScoresAreClampedCosine) {
  backends::MockEmbedder::Fixture fx{{"msg", {1, 0}},
                                     {"A", {1, 0}},
                                     {"B", {0, 1}},
                                     {"C", {-1, 0}},
                                     {"Other", {1, 1}}};
  backends::MockEmbedder emb(2, 0, fx);
  std::vector<Message> msgs{{"x", "msg", "en", {}, {}}};
  const auto r = classify_by_similarity(msgs, abc(), emb, AnchorText::label_name, 0.9);
  EXPECT_DOUBLE_EQ(r.matrix.at(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(r.matrix.at(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(r.matrix.at(0, 2), 0.0);
  EXPECT_NEAR(r.matrix.at(0, 3), std::sqrt(0.5), 1e-6);
  EXPECT_EQ(r.predictions[0].labels, LabelSet{"A"});
  EXPECT_THROW(parse_anchor_text("definition"), ValidationError);
  EXPECT_EQ(parse_anchor_text("label"), AnchorText::label_name);
}
