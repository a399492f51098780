#include "agenda/backends/remote.hpp"

#include "httplib.h"

namespace agenda::backends {

RemoteEndpoint::RemoteEndpoint(std::string uri, std::chrono::milliseconds timeout) : uri_(std::move(uri)), timeout_(timeout) {
  auto scheme = uri_.find("://");
  if (scheme == std::string::npos) throw ValidationError("remote backend uri must start with http:// : " + uri_);
  auto path_start = uri_.find('/', scheme + 3);
  origin_ = uri_.substr(0, path_start);
  base_path_ = path_start == std::string::npos ? "" : uri_.substr(path_start);
  while (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
}

nlohmann::json RemoteEndpoint::post(const std::string& path, const nlohmann::json& body) const {
  httplib::Client client(origin_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  const auto started = std::chrono::steady_clock::now();
  auto res = client.Post(base_path_ + path, body.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    const auto elapsed = std::chrono::steady_clock::now() - started;
    const bool timed_out = err == httplib::Error::ConnectionTimeout || (err == httplib::Error::Read && elapsed >= timeout_);
    throw BackendError(timed_out ? BackendErrorKind::timeout : BackendErrorKind::unavailable,
                       "remote " + uri_ + path + ": " + httplib::to_string(err));
  }
  nlohmann::json doc = nlohmann::json::parse(res->body, nullptr, false);
  if (res->status < 200 || res->status >= 300) {
    std::string message = "remote " + uri_ + path + " returned HTTP " + std::to_string(res->status);
    std::vector<std::size_t> indices;
    if (!doc.is_discarded() && doc.is_object()) {
      if (doc.contains("error") && doc["error"].is_string()) message += ": " + doc["error"].get<std::string>();
      if (doc.contains("index") && doc["index"].is_number_unsigned()) indices.push_back(doc["index"].get<std::size_t>());
    }
    throw BackendError(BackendErrorKind::failed, message, std::move(indices));
  }
  if (doc.is_discarded() || !doc.is_object()) {
    throw BackendError(BackendErrorKind::protocol, "remote " + uri_ + path + ": response is not a JSON object");
  }
  return doc;
}

RemoteScorer::RemoteScorer(std::string uri, std::chrono::milliseconds timeout, std::size_t batch_size)
    : EntailmentScorer(batch_size), endpoint_(std::move(uri), timeout) {}

std::vector<EntailmentScore> RemoteScorer::score_chunk(std::span<const ScoreRequest> chunk) {
  nlohmann::json body;
  body["pairs"] = nlohmann::json::array();
  for (const auto& r : chunk) body["pairs"].push_back({{"premise", r.premise}, {"hypothesis", r.hypothesis}, {"lang", r.lang}});
  auto doc = endpoint_.post("/v1/score", body);
  if (!doc.contains("scores") || !doc["scores"].is_array() || doc["scores"].size() != chunk.size()) {
    throw BackendError(BackendErrorKind::protocol, "remote /v1/score: missing or mis-sized 'scores'");
  }
  std::vector<EntailmentScore> out;
  out.reserve(chunk.size());
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    const auto& v = doc["scores"][i];
    if (!v.is_number()) throw BackendError(BackendErrorKind::protocol, "remote /v1/score: non-numeric score", {i});
    try {
      out.push_back(EntailmentScore::checked(v.get<double>()));
    } catch (const BackendError& e) {
      throw BackendError(e.kind(), std::string("remote /v1/score: ") + e.what(), {i});
    }
  }
  return out;
}

RemoteEmbedder::RemoteEmbedder(std::string uri, std::chrono::milliseconds timeout, std::size_t batch_size, std::size_t dim)
    : Embedder(batch_size), endpoint_(std::move(uri), timeout), dim_(dim) {}

std::vector<EmbeddingVector> RemoteEmbedder::embed_chunk(std::span<const EmbedRequest> chunk) {
  nlohmann::json body;
  body["texts"] = nlohmann::json::array();
  for (const auto& r : chunk) body["texts"].push_back({{"text", r.text}, {"lang", r.lang}});
  auto doc = endpoint_.post("/v1/embed", body);
  if (!doc.contains("embeddings") || !doc["embeddings"].is_array() || doc["embeddings"].size() != chunk.size()) {
    throw BackendError(BackendErrorKind::protocol, "remote /v1/embed: missing or mis-sized 'embeddings'");
  }
  std::vector<EmbeddingVector> out;
  out.reserve(chunk.size());
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    try {
      out.push_back(EmbeddingVector{doc["embeddings"][i].get<std::vector<float>>()});
    } catch (const nlohmann::json::exception&) {
      throw BackendError(BackendErrorKind::protocol, "remote /v1/embed: malformed vector", {i});
    }
  }
  return out;
}

RemoteTranslator::RemoteTranslator(std::string uri, std::chrono::milliseconds timeout) : endpoint_(std::move(uri), timeout) {}

std::string RemoteTranslator::translate(std::string_view text, std::string_view src_lang, std::string_view tgt_lang) {
  nlohmann::json body;
  body["texts"] = nlohmann::json::array({{{"text", text}, {"src", src_lang}, {"tgt", tgt_lang}}});
  auto doc = endpoint_.post("/v1/translate", body);
  if (!doc.contains("translations") || !doc["translations"].is_array() || doc["translations"].size() != 1 ||
      !doc["translations"][0].is_string() || doc["translations"][0].get<std::string>().empty()) {
    throw BackendError(BackendErrorKind::protocol, "remote /v1/translate: malformed 'translations'");
  }
  return doc["translations"][0].get<std::string>();
}

}  // namespace agenda::backends
