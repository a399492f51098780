#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include "agenda/backends/mock.hpp"
#include "agenda/service/server.hpp"
#include "fixtures.hpp"
#include "httplib.h"

using namespace agenda;
using namespace agenda::service;
using nlohmann::json;

namespace {

const LabelSchema& abc() {
  static const LabelSchema s = fixture::abc_schema();
  return s;
}

std::unique_ptr<backends::MockEmbedder> axis_embedder() {
  backends::MockEmbedder::Fixture fx{{"definition of A", {1, 0, 0}},
                                     {"definition of B", {0, 1, 0}},
                                     {"definition of C", {0, 0, 1}},
                                     {"definition of Other", {1, 1, 1}},
                                     {"A", {1, 0, 0}},
                                     {"B", {0, 1, 0}},
                                     {"C", {0, 0, 1}},
                                     {"Other", {1, 1, 1}}};
  for (int i = 0; i < 30; ++i) {
    std::vector<float> v{1, 1, 1};
    v[i % 3] += static_cast<float>(i);
    fx["text " + std::to_string(i)] = v;
  }
  return std::make_unique<backends::MockEmbedder>(3, 0, fx);
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::ofstream out(dir / "corpus.jsonl");
    for (int i = 0; i < 30; ++i) {
      char id[8];
      std::snprintf(id, sizeof id, "m%02d", i);
      out << json{{"id", id}, {"text", "text " + std::to_string(i)}, {"lang", "en"}}.dump() << "\n";
    }
    out.close();
    open();
  }

  void open() {
    svc.reset();
    ServiceConfig cfg;
    cfg.data_dir = dir / "state";
    cfg.corpus = {dir / "corpus.jsonl"};
    svc = std::make_unique<Service>(cfg, abc(), std::make_unique<backends::MockScorer>(3), axis_embedder());
  }

  Response call(const std::string& method, const std::string& path, const json& body = nullptr,
                std::map<std::string, std::string> query = {}) {
    Request r{method, path, std::move(query), {}, body.is_null() ? "" : body.dump()};
    return svc->handle(r);
  }

  json ok(const std::string& method, const std::string& path, const json& body = nullptr,
          std::map<std::string, std::string> query = {}) {
    auto res = call(method, path, body, std::move(query));
    EXPECT_EQ(res.status, 200) << path << " " << res.body;
    return res.body.empty() ? json() : json::parse(res.body);
  }

  std::uint64_t version(const std::string& id) {
    return svc->store().read([&](const bootstrap::ReviewState& s) { return s.candidate(id).version; });
  }

  fixture::TempDir dir;
  std::unique_ptr<Service> svc;
};

}  // namespace

TEST_F(ServiceTest, HealthAndSchema) {
  EXPECT_EQ(ok("GET", "/healthz")["status"], "ok");
  EXPECT_EQ(ok("GET", "/schema")["labels"].size(), 4u);
  EXPECT_EQ(call("GET", "/nope").status, 404);
  EXPECT_EQ(call("DELETE", "/healthz").status, 405);
}

TEST_F(ServiceTest, ClassifyReturnsPredictions) {
  const auto out = ok("POST", "/classify",
                      {{"tau", 0.5}, {"messages", {{{"id", "x"}, {"text", "hello"}, {"lang", "en"}}}}});
  ASSERT_TRUE(out.is_array());
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0]["id"], "x");
  EXPECT_FALSE(out[0]["labels"].empty());

  const auto sim = ok("POST", "/classify",
                      {{"calibration", {{"tau", 0.9}}},
                       {"mode", "similarity"},
                       {"source", "label"},
                       {"messages", {{{"id", "y"}, {"text", "A"}, {"lang", "en"}}}}});
  EXPECT_EQ(sim[0]["labels"], json::array({"A"}));
}

TEST_F(ServiceTest, ClassifyErrors) {
  const json msg = {{"id", "x"}, {"text", "t"}, {"lang", "en"}};
  EXPECT_EQ(call("POST", "/classify", {{"messages", {msg}}}).status, 422);
  EXPECT_EQ(call("POST", "/classify", {{"tau", 0.2}, {"messages", {msg}}}).status, 422);
  EXPECT_EQ(call("POST", "/classify", {{"tau", 0.5}, {"messages", "x"}}).status, 422);
  EXPECT_EQ(call("POST", "/classify", {{"tau", 0.5}, {"messages", {msg, msg}}}).status, 422);
  EXPECT_EQ(call("POST", "/classify", {{"tau", 0.5}, {"mode", "magic"}, {"messages", {msg}}}).status, 422);
  json bad_gold = msg;
  bad_gold["gold"] = {"Z"};
  EXPECT_EQ(call("POST", "/classify", {{"tau", 0.5}, {"messages", {bad_gold}}}).status, 400);
  Request broken{"POST", "/classify", {}, {}, "{oops"};
  EXPECT_EQ(svc->handle(broken).status, 422);
}

TEST_F(ServiceTest, AnnotationWorkflow) {
  const auto run = ok("POST", "/bootstrap/run", {{"k", 2}, {"fraction", 1.0}});
  EXPECT_EQ(run["round"], 1);
  EXPECT_EQ(run["candidates"], 6);

  EXPECT_EQ(call("GET", "/annotation/next").status, 422);
  auto next = ok("GET", "/annotation/next", nullptr, {{"annotator", "ann1"}});
  EXPECT_EQ(next["id"], "r1-A-1");
  EXPECT_EQ(next["definition"], "definition of A");

  ok("POST", "/annotation/r1-A-1/decision", {{"annotator", "ann1"}, {"labels", {"A"}}, {"version", 1}});
  EXPECT_EQ(call("POST", "/annotation/r1-A-1/decision", {{"annotator", "ann2"}, {"labels", {"B"}}, {"version", 1}}).status,
            409);
  EXPECT_EQ(call("POST", "/annotation/r1-A-1/decision", {{"annotator", "ann2"}, {"labels", {"B"}}}).status, 422);
  EXPECT_EQ(call("POST", "/annotation/r9-A-1/decision", {{"annotator", "ann2"}, {"labels", {"B"}}, {"version", 1}}).status,
            404);
  ok("POST", "/annotation/r1-A-1/decision", {{"annotator", "ann2"}, {"labels", {"B"}}, {"version", 2}});

  const auto dis = ok("GET", "/annotation/disagreements");
  ASSERT_EQ(dis.size(), 1u);
  EXPECT_EQ(dis[0]["id"], "r1-A-1");

  auto blocked = call("GET", "/export");
  EXPECT_EQ(blocked.status, 409);
  EXPECT_EQ(json::parse(blocked.body)["error"]["ids"], json::array({"r1-A-1"}));

  const auto agr = ok("GET", "/stats/agreement");
  EXPECT_EQ(agr["n_items"], 1);
  EXPECT_EQ(agr["pending_disagreements"], 1);

  ok("POST", "/annotation/r1-A-1/consensus", {{"annotator", "lead"}, {"labels", {"A"}}, {"version", 3}});
  const auto ex = ok("GET", "/export", nullptr, {{"round", "1"}});
  ASSERT_EQ(ex["messages"].size(), 1u);
  EXPECT_EQ(ex["messages"][0]["gold"], json::array({"A"}));
  EXPECT_EQ(ex["n_undecided"], 5);

  const auto q = ok("GET", "/stats/queues");
  EXPECT_EQ(q["open_round"], 1);
}

TEST_F(ServiceTest, EmptyQueueIs204AndEmptyAgreementIsNull) {
  EXPECT_EQ(call("GET", "/annotation/next", nullptr, {{"annotator", "ann1"}}).status, 204);
  const auto agr = ok("GET", "/stats/agreement");
  EXPECT_EQ(agr["n_items"], 0);
  EXPECT_TRUE(agr["kappa"].is_null());
}

TEST_F(ServiceTest, RestartReproducesStatsAndExport) {
  ok("POST", "/bootstrap/run", {{"k", 3}, {"fraction", 1.0}});
  for (const auto* label : {"A", "B", "C"}) {
    for (int rank = 1; rank <= 3; ++rank) {
      const auto id = std::string("r1-") + label + "-" + std::to_string(rank);
      ok("POST", "/annotation/" + id + "/decision", {{"annotator", "ann1"}, {"labels", {label}}, {"version", version(id)}});
      const std::string other = rank == 2 ? "Other" : label;
      ok("POST", "/annotation/" + id + "/decision", {{"annotator", "ann2"}, {"labels", {other}}, {"version", version(id)}});
      if (rank == 2) ok("POST", "/annotation/" + id + "/consensus", {{"annotator", "lead"}, {"labels", {label}}, {"version", version(id)}});
    }
  }
  const auto agr = call("GET", "/stats/agreement").body;
  const auto ex = call("GET", "/export").body;
  open();
  EXPECT_EQ(call("GET", "/stats/agreement").body, agr);
  EXPECT_EQ(call("GET", "/export").body, ex);
}

TEST_F(ServiceTest, ConcurrentDecisionsOnOneVersionOnlyOneWins) {
  ok("POST", "/bootstrap/run", {{"k", 1}, {"fraction", 1.0}});
  HttpServer http(*svc);
  const int port = http.bind("127.0.0.1", 0);
  std::thread server([&] { http.listen(); });
  http.wait_until_ready();

  std::vector<int> statuses(8, 0);
  std::vector<std::thread> clients;
  for (int i = 0; i < 8; ++i) {
    clients.emplace_back([&, i] {
      httplib::Client c("127.0.0.1", port);
      const json body{{"annotator", "ann" + std::to_string(i)}, {"labels", {"A"}}, {"version", 1}};
      auto res = c.Post("/annotation/r1-A-1/decision", body.dump(), "application/json");
      statuses[i] = res ? res->status : -1;
    });
  }
  for (auto& t : clients) t.join();
  http.stop();
  server.join();

  EXPECT_EQ(std::count(statuses.begin(), statuses.end(), 200), 1);
  EXPECT_EQ(std::count(statuses.begin(), statuses.end(), 409), 7);
  EXPECT_EQ(version("r1-A-1"), 2u);
}

TEST_F(ServiceTest, HttpAdapterPassesQueryAndHeaders) {
  ok("POST", "/bootstrap/run", {{"k", 1}, {"fraction", 1.0}});
  HttpServer http(*svc);
  const int port = http.bind("127.0.0.1", 0);
  std::thread server([&] { http.listen(); });
  http.wait_until_ready();
  httplib::Client c("127.0.0.1", port);
  auto res = c.Get("/annotation/next", httplib::Headers{{"X-Annotator", "ann1"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body)["id"], "r1-A-1");
  auto q = c.Get("/annotation/next?annotator=ann2");
  ASSERT_TRUE(q);
  EXPECT_EQ(q->status, 200);
  http.stop();
  server.join();
}
