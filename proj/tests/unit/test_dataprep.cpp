#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "agenda/backends/mock.hpp"
#include "agenda/core/error.hpp"
#include "agenda/dataprep/entailment.hpp"
#include "agenda/dataprep/hypotheses.hpp"
#include "agenda/dataprep/pairs.hpp"
#include "fixtures.hpp"

using namespace agenda;
using namespace agenda::dataprep;

namespace {

std::vector<Message> labelled(std::size_t n, std::uint64_t seed) {
  const auto& schema = default_schema();
  std::mt19937_64 rng(seed);
  std::vector<Message> out;
  for (std::size_t i = 0; i < n; ++i) {
    LabelSet gold;
    for (auto idx : fixture::random_set(rng, schema.size(), 2)) gold.push_back(schema.at(idx).id);
    out.push_back({"m" + std::to_string(i), "message " + std::to_string(i), i % 2 ? "fr" : "en", std::nullopt,
                   schema.canonicalize(gold)});
  }
  return out;
}

}  // namespace

TEST(Binarize, ThreeWayCollapsesToTwo) {
  EXPECT_EQ(binarize_nli({"p", "h", NliLabel::entailment}).verdict, Verdict::entailment);
  EXPECT_EQ(binarize_nli({"p", "h", NliLabel::neutral}).verdict, Verdict::not_entailment);
  EXPECT_EQ(binarize_nli({"p", "h", NliLabel::contradiction}).verdict, Verdict::not_entailment);
  const auto p = binarize_nli({"prem", "hyp", NliLabel::neutral, "fr"});
  EXPECT_EQ(p.premise, "prem");
  EXPECT_EQ(p.hypothesis, "hyp");
  EXPECT_EQ(p.lang, "fr");
  EXPECT_EQ(p.origin, Origin::nli);
}

TEST(Binarize, ParsesLabelsAndSkipsUnusableRows) {
  fixture::TempDir dir;
  std::ofstream(dir / "snli.jsonl") << R"({"sentence1":"a","sentence2":"b","gold_label":"entailment"})" "\n"
                                    << R"({"sentence1":"a","sentence2":"b","gold_label":"-"})" "\n"
                                    << "not json\n"
                                    << R"({"sentence1":"c","sentence2":"d","gold_label":"contradiction"})" "\n";
  const auto r = read_snli_jsonl(dir / "snli.jsonl");
  ASSERT_EQ(r.examples.size(), 2u);
  EXPECT_EQ(r.skipped, 2u);
  EXPECT_EQ(r.examples[1].label, NliLabel::contradiction);
}

TEST(Binarize, RteNotEntailmentBinarizesToNotEntailment) {
  fixture::TempDir dir;
  std::ofstream(dir / "rte.tsv") << "index\tsentence1\tsentence2\tlabel\n0\ta\tb\tentailment\n1\tc\td\tnot_entailment\n2\tx\n";
  const auto r = read_rte_tsv(dir / "rte.tsv");
  ASSERT_EQ(r.examples.size(), 2u);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_EQ(binarize_nli(r.examples[1]).verdict, Verdict::not_entailment);
}

TEST(Binarize, DirectoryReadsInPathOrder) {
  fixture::TempDir dir;
  std::ofstream(dir / "b.tsv") << "index\tsentence1\tsentence2\tlabel\n0\tsecond\th\tentailment\n";
  std::ofstream(dir / "a.jsonl") << R"({"sentence1":"first","sentence2":"h","gold_label":"neutral"})" "\n";
  const auto r = read_nli_directory(dir.path());
  ASSERT_EQ(r.examples.size(), 2u);
  EXPECT_EQ(r.examples[0].premise, "first");
}

TEST(PairFile, RoundTrips) {
  EntailmentPair a{"p", "h", Verdict::entailment, "en", Origin::agenda, "m1", "Engagement"};
  EntailmentPair b{"p2", "h2", Verdict::not_entailment, "fr", Origin::nli, std::nullopt, std::nullopt};
  fixture::TempDir dir;
  std::ofstream(dir / "pairs.jsonl") << serialize_pairs({a, b});
  const auto back = load_pairs(dir / "pairs.jsonl");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], a);
  EXPECT_EQ(back[1], b);
}

TEST(Hypotheses, CuratedBeatsTemplate) {
  const auto& s = default_schema();
  EXPECT_EQ(render_hypothesis(s, "PeacefulProtest", "en"),
            "The message motivates the readers to protest peacefully in support of or opposition to a cause.");
}

TEST(Hypotheses, TemplateFillsLabelName) {
  std::vector<LabelDef> defs{{"A", {{"en", "Apples"}}, {}, {}}, {"Other", {{"en", "Other"}}, {}, {}}};
  LabelSchema s(defs, "Other", {{"en", "This text is about {label}."}});
  EXPECT_EQ(render_hypothesis(s, "A", "en"), "This text is about Apples.");
  EXPECT_THROW(render_hypothesis(s, "A", "fr"), ValidationError);
  EXPECT_THROW(render_hypothesis(s, "Z", "en"), ValidationError);
}

TEST(Pairs, OnePositivePerGoldLabelAndNegativesOutsideGold) {
  const auto& schema = default_schema();
  const auto msgs = labelled(200, 3);
  const auto pairs = make_pairs(msgs, schema, {2, 42});

  std::map<std::string, std::vector<const EntailmentPair*>> by_msg;
  for (const auto& p : pairs) by_msg[*p.source_message_id].push_back(&p);
  ASSERT_EQ(by_msg.size(), msgs.size());

  for (const auto& m : msgs) {
    const auto& ps = by_msg[m.id];
    std::multiset<std::string> pos;
    std::size_t neg = 0;
    for (const auto* p : ps) {
      EXPECT_EQ(p->premise, m.text);
      EXPECT_EQ(p->lang, m.lang);
      EXPECT_EQ(p->hypothesis, render_hypothesis(schema, *p->label_id, m.lang));
      const bool in_gold = std::count(m.gold->begin(), m.gold->end(), *p->label_id) > 0;
      if (p->verdict == Verdict::entailment) {
        EXPECT_TRUE(in_gold);
        pos.insert(*p->label_id);
      } else {
        EXPECT_FALSE(in_gold);
        ++neg;
      }
    }
    EXPECT_EQ(pos, std::multiset<std::string>(m.gold->begin(), m.gold->end()));
    EXPECT_EQ(neg, 2 * m.gold->size());
  }
}

TEST(Pairs, NegativesClampToComplementSize) {
  const auto msgs = labelled(10, 9);
  const auto pairs = make_pairs(msgs, default_schema(), {100, 1});
  for (const auto& m : msgs) {
    std::set<std::string> negs;
    for (const auto& p : pairs) {
      if (p.source_message_id == m.id && p.verdict == Verdict::not_entailment) negs.insert(*p.label_id);
    }
    EXPECT_EQ(negs.size(), default_schema().size() - m.gold->size());
  }
}

TEST(Pairs, SeedDeterminesOutput) {
  const auto msgs = labelled(50, 1);
  EXPECT_EQ(make_pairs(msgs, default_schema(), {2, 7}), make_pairs(msgs, default_schema(), {2, 7}));
  EXPECT_NE(make_pairs(msgs, default_schema(), {2, 7}), make_pairs(msgs, default_schema(), {2, 8}));
}

TEST(Pairs, MessagesWithoutGoldAreRejected) {
  std::vector<Message> msgs{{"a", "t", "en", std::nullopt, std::nullopt}};
  EXPECT_THROW(make_pairs(msgs, default_schema(), {}), ValidationError);
}

TEST(Mix, TranslatesFloorFractionInPlace) {
  std::vector<EntailmentPair> pairs;
  for (int i = 0; i < 10; ++i) {
    pairs.push_back({"p" + std::to_string(i), "h" + std::to_string(i), i % 2 ? Verdict::entailment : Verdict::not_entailment,
                     "en", Origin::nli, std::nullopt, std::nullopt});
  }
  std::vector<backends::FixtureTranslator::Entry> entries;
  for (const auto& p : pairs) {
    entries.push_back({"en", "fr", p.premise, p.premise + "-fr"});
    entries.push_back({"en", "fr", p.hypothesis, p.hypothesis + "-fr"});
  }
  backends::FixtureTranslator tr(entries);
  const auto r = mix_translations(pairs, tr, {0.3, "fr", 5});
  ASSERT_EQ(r.pairs.size(), pairs.size());
  ASSERT_EQ(r.translated.size(), 3u);
  EXPECT_TRUE(std::is_sorted(r.translated.begin(), r.translated.end()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const bool t = std::binary_search(r.translated.begin(), r.translated.end(), i);
    EXPECT_EQ(r.pairs[i].verdict, pairs[i].verdict);
    EXPECT_EQ(r.pairs[i].lang, t ? "fr" : "en");
    EXPECT_EQ(r.pairs[i].premise, t ? pairs[i].premise + "-fr" : pairs[i].premise);
  }
}

TEST(Mix, UnsupportedLanguageSurfacesAsBackendError) {
  std::vector<EntailmentPair> pairs(4, EntailmentPair{"p", "h", Verdict::entailment, "en", Origin::nli, {}, {}});
  backends::FixtureTranslator tr({});
  try {
    mix_translations(pairs, tr, {1.0, "fr", 0});
    FAIL();
  } catch (const backends::BackendError& e) {
    EXPECT_EQ(e.kind(), backends::BackendErrorKind::unsupported);
    EXPECT_EQ(e.failed_indices(), std::vector<std::size_t>{0});
  }
}
