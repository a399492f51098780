#include "agenda/service/server.hpp"

#include <algorithm>
#include <cctype>

#include "agenda/backends/descriptor.hpp"
#include "agenda/classify/decide.hpp"
#include "agenda/classify/similarity.hpp"
#include "agenda/core/jsonl.hpp"
#include "agenda/dataprep/hypotheses.hpp"
#include "httplib.h"

namespace agenda::service {

namespace {

using ojson = nlohmann::ordered_json;

/// Malformed request body: 422.
class BadBody : public Error {
 public:
  using Error::Error;
};

Response json_response(int status, const ojson& body) { return {status, dump_line(body) + "\n"}; }

Response error_response(int status, const std::string& kind, const std::string& message, ojson extra = {}) {
  ojson err;
  err["kind"] = kind;
  err["message"] = message;
  for (auto& [k, v] : extra.items()) err[k] = v;
  return json_response(status, ojson{{"error", std::move(err)}});
}

nlohmann::json parse_body(const Request& r) {
  if (r.body.empty()) return nlohmann::json::object();
  try {
    auto doc = nlohmann::json::parse(r.body);
    if (!doc.is_object()) throw BadBody("request body must be a JSON object");
    return doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw BadBody(std::string("invalid JSON body: ") + e.what());
  }
}

std::optional<int> round_param(const Request& r) {
  auto it = r.query.find("round");
  if (it == r.query.end() || it->second.empty()) return std::nullopt;
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw BadBody("round must be an integer");
  }
}

std::string annotator_of(const Request& r, const nlohmann::json& body) {
  if (body.contains("annotator") && body.at("annotator").is_string()) return body.at("annotator").get<std::string>();
  if (auto it = r.query.find("annotator"); it != r.query.end()) return it->second;
  if (auto it = r.headers.find("x-annotator"); it != r.headers.end()) return it->second;
  return {};
}

std::vector<LabelId> labels_of(const nlohmann::json& body) {
  auto it = body.find("labels");
  if (it == body.end() || it->is_null()) return {};
  if (!it->is_array()) throw BadBody("'labels' must be an array of label ids");
  std::vector<LabelId> out;
  for (const auto& l : *it) {
    if (!l.is_string()) throw BadBody("'labels' must be an array of label ids");
    out.push_back(l.get<std::string>());
  }
  return out;
}

std::uint64_t version_of(const nlohmann::json& body) {
  auto it = body.find("version");
  if (it == body.end() || !it->is_number_unsigned()) throw BadBody("'version' token required");
  return it->get<std::uint64_t>();
}

}  // namespace

Service::Service(ServiceConfig config, const LabelSchema& schema)
    : Service(std::move(config), schema, nullptr, nullptr) {}

Service::Service(ServiceConfig config, const LabelSchema& schema, std::unique_ptr<backends::EntailmentScorer> scorer,
                 std::unique_ptr<backends::Embedder> embedder)
    : config_(std::move(config)),
      schema_(&schema),
      store_(config_.data_dir, schema, config_.store),
      scorer_(std::move(scorer)),
      embedder_(std::move(embedder)) {}

backends::EntailmentScorer& Service::scorer() {
  std::lock_guard lock(backend_mutex_);
  if (!scorer_) scorer_ = backends::make_scorer(backends::parse_descriptor(config_.backend));
  return *scorer_;
}

backends::Embedder& Service::embedder() {
  std::lock_guard lock(backend_mutex_);
  if (!embedder_) {
    embedder_ = backends::make_embedder(
        backends::parse_descriptor(config_.embedder.empty() ? config_.backend : config_.embedder));
  }
  return *embedder_;
}

Response Service::handle(const Request& request) {
  try {
    return route(request);
  } catch (const BadBody& e) {
    return error_response(422, "invalid_body", e.what());
  } catch (const nlohmann::json::exception& e) {
    return error_response(422, "invalid_body", e.what());
  } catch (const bootstrap::NotFoundError& e) {
    return error_response(404, "not_found", e.what());
  } catch (const bootstrap::PendingDisagreements& e) {
    return error_response(409, "disagreements", e.what(), ojson{{"ids", e.ids()}});
  } catch (const PreconditionError& e) {
    return error_response(409, "conflict", e.what());
  } catch (const backends::BackendError& e) {
    return error_response(502, std::string("backend_") + std::string(backends::to_string(e.kind())), e.what());
  } catch (const ValidationError& e) {
    return error_response(400, "validation", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

Response Service::route(const Request& r) {
  const auto& p = r.path;
  if (r.method == "GET") {
    if (p == "/healthz") return json_response(200, ojson{{"status", "ok"}});
    if (p == "/schema") return json_response(200, schema_to_json(*schema_));
    if (p == "/annotation/next") return next_candidate(r);
    if (p == "/annotation/disagreements") return disagreements(r);
    if (p == "/stats/agreement") return agreement_stats(r);
    if (p == "/stats/queues") return json_response(200, store_.read([](const auto& s) { return s.queue_stats(); }));
    if (p == "/export") return export_round(r);
  } else if (r.method == "POST") {
    if (p == "/classify") return classify(r);
    if (p == "/bootstrap/run") return bootstrap_run(r);
    const std::string prefix = "/annotation/";
    if (p.rfind(prefix, 0) == 0) {
      const auto rest = p.substr(prefix.size());
      const auto slash = rest.rfind('/');
      if (slash != std::string::npos && slash > 0) {
        const auto id = rest.substr(0, slash);
        const auto action = rest.substr(slash + 1);
        if (action == "decision") return decision(id, r, false);
        if (action == "consensus") return decision(id, r, true);
      }
    }
  } else {
    return error_response(405, "method_not_allowed", r.method + " " + p);
  }
  return error_response(404, "not_found", "no route for " + r.method + " " + p);
}

Response Service::classify(const Request& r) {
  const auto body = parse_body(r);
  std::optional<double> tau = config_.default_tau;
  if (auto it = body.find("tau"); it != body.end()) {
    if (!it->is_number()) throw BadBody("'tau' must be a number");
    tau = it->get<double>();
  } else if (auto c = body.find("calibration"); c != body.end()) {
    if (!c->is_object() || !c->contains("tau") || !c->at("tau").is_number()) {
      throw BadBody("'calibration' must be an object with a numeric 'tau'");
    }
    tau = c->at("tau").get<double>();
  }
  if (!tau) throw BadBody("'tau' or 'calibration' required");
  try {
    classify::check_tau(*tau);
  } catch (const ValidationError& e) {
    throw BadBody(e.what());
  }

  auto it = body.find("messages");
  if (it == body.end() || !it->is_array()) throw BadBody("'messages' must be an array");
  std::vector<Message> messages;
  for (const auto& m : *it) {
    if (!m.is_object() || !m.contains("id") || !m.at("id").is_string() || !m.contains("text") ||
        !m.at("text").is_string() || !m.contains("lang") || !m.at("lang").is_string()) {
      throw BadBody("each message needs string 'id', 'text' and 'lang'");
    }
    Message msg{m.at("id").get<std::string>(), m.at("text").get<std::string>(), m.at("lang").get<std::string>(),
                std::nullopt, std::nullopt};
    if (!schema_->supports_language(msg.lang)) throw BadBody("unsupported language '" + msg.lang + "'");
    if (auto g = m.find("gold"); g != m.end() && !g->is_null()) {
      msg.gold = schema_->canonicalize(g->get<std::vector<std::string>>());
    }
    messages.push_back(std::move(msg));
  }
  {
    std::vector<std::string> ids;
    for (const auto& m : messages) ids.push_back(m.id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw BadBody("duplicate message ids");
  }

  const auto mode = body.value("mode", std::string("entailment"));
  std::vector<classify::Prediction> predictions;
  if (!messages.empty()) {
    if (mode == "entailment") {
      auto matrix = classify::score_messages(messages, *schema_, scorer());
      predictions = classify::decide_all(matrix, *schema_, *tau);
    } else if (mode == "similarity") {
      classify::AnchorText anchor;
      try {
        anchor = classify::parse_anchor_text(body.value("source", std::string("hypothesis")));
      } catch (const ValidationError& e) {
        throw BadBody(e.what());
      }
      predictions = classify::classify_by_similarity(messages, *schema_, embedder(), anchor, *tau).predictions;
    } else {
      throw BadBody("unknown mode '" + mode + "' (entailment|similarity)");
    }
  }
  auto out = ojson::array();
  for (const auto& p : predictions) out.push_back(classify::prediction_to_json(p));
  return json_response(200, out);
}

Response Service::next_candidate(const Request& r) {
  const auto annotator = annotator_of(r, nlohmann::json::object());
  if (annotator.empty()) throw BadBody("annotator required");
  return store_.read([&](const bootstrap::ReviewState& s) -> Response {
    const auto* c = s.next_for(annotator);
    if (!c) return {204, "", "application/json"};
    auto view = bootstrap::candidate_to_json(*c);
    view["definition"] = nullptr;
    const auto& lang = c->candidate.message.lang;
    const auto& def = s.schema().at(s.schema().index_of(c->candidate.suggested)).definition;
    if (auto d = def.find(lang); d != def.end()) view["definition"] = d->second;
    return json_response(200, view);
  });
}

Response Service::decision(const std::string& id, const Request& r, bool consensus) {
  const auto body = parse_body(r);
  const auto annotator = annotator_of(r, body);
  const auto labels = labels_of(body);
  const auto version = version_of(body);
  const auto timestamp = body.value("timestamp", std::string());
  if (consensus) {
    const bool discard = body.value("discard", false);
    return json_response(200, store_.record_consensus(id, annotator, labels, discard, version, timestamp));
  }
  if (annotator.empty()) throw BadBody("annotator required");
  return json_response(200, store_.record_decision(id, annotator, labels, version, timestamp));
}

Response Service::disagreements(const Request& r) {
  const auto round = round_param(r);
  return store_.read([&](const bootstrap::ReviewState& s) {
    auto out = ojson::array();
    for (const auto& id : s.disagreements(round)) out.push_back(bootstrap::candidate_to_json(s.candidate(id)));
    return json_response(200, out);
  });
}

Response Service::agreement_stats(const Request& r) {
  const auto round = round_param(r);
  return store_.read([&](const bootstrap::ReviewState& s) {
    ojson doc;
    doc["round"] = round ? ojson(*round) : ojson(nullptr);
    if (auto a = s.agreement(round)) {
      const auto stats = eval::agreement_to_json(*a);
      for (auto& [k, v] : stats.items()) doc[k] = v;
    } else {
      doc["kind"] = "agreement";
      doc["n_items"] = 0;
      doc["kappa"] = nullptr;
    }
    doc["pending_disagreements"] = s.disagreements(round).size();
    return json_response(200, doc);
  });
}

Response Service::bootstrap_run(const Request& r) {
  const auto body = parse_body(r);
  bootstrap::BootstrapConfig cfg;
  try {
    cfg = bootstrap::config_from_json(body);
    bootstrap::validate_config(cfg, *schema_);
  } catch (const ValidationError& e) {
    throw BadBody(e.what());
  }
  auto paths = config_.corpus;
  if (auto it = body.find("corpus"); it != body.end()) {
    paths.clear();
    for (const auto& p : *it) paths.emplace_back(p.get<std::string>());
  }
  if (paths.empty()) throw BadBody("no corpus files configured");
  std::vector<bootstrap::CorpusFile> corpus;
  for (const auto& p : paths) corpus.push_back(bootstrap::load_corpus_file(p, *schema_));
  const int round = store_.run_round(corpus, embedder(), cfg);
  return store_.read([&](const bootstrap::ReviewState& s) {
    ojson doc;
    doc["round"] = round;
    doc["candidates"] = s.candidates(round).size();
    doc["queues"] = s.queue_stats().at("labels");
    return json_response(200, doc);
  });
}

Response Service::export_round(const Request& r) {
  const auto round = round_param(r);
  return store_.read([&](const bootstrap::ReviewState& s) {
    auto result = s.export_labeled(round);
    ojson doc;
    doc["round"] = round ? ojson(*round) : ojson(nullptr);
    auto messages = ojson::array();
    for (const auto& m : result.messages) messages.push_back(message_to_json(m));
    doc["messages"] = std::move(messages);
    doc["agreement"] = result.agreement ? eval::agreement_to_json(*result.agreement) : ojson(nullptr);
    doc["n_candidates"] = result.n_candidates;
    doc["n_exported"] = result.n_exported;
    doc["n_discarded"] = result.n_discarded;
    doc["n_undecided"] = result.n_undecided;
    return json_response(200, doc);
  });
}

HttpServer::HttpServer(Service& service) : service_(&service), server_(std::make_unique<httplib::Server>()) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    Request r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    for (const auto& [k, v] : req.headers) {
      std::string key = k;
      std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
      r.headers.emplace(std::move(key), v);
    }
    r.body = req.body;
    auto out = service_->handle(r);
    res.status = out.status;
    if (out.status != 204) res.set_content(out.body, out.content_type);
  };
  server_->Get(R"(/.*)", handler);
  server_->Post(R"(/.*)", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::wait_until_ready() { server_->wait_until_ready(); }

void HttpServer::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

}  // namespace agenda::service
