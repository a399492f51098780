#pragma once

#include <chrono>
#include <string>

#include "agenda/backends/backend.hpp"
#include "json.hpp"

namespace agenda::backends {

/// JSON-over-HTTP endpoint. A fresh connection per request keeps instances
/// shareable between threads.
class RemoteEndpoint {
 public:
  RemoteEndpoint(std::string uri, std::chrono::milliseconds timeout);

  /// POSTs `body` to base_path + path. Non-2xx responses become BackendError
  /// (failed kind, with the server's "index" when present); transport problems
  /// become unavailable or timeout; unparseable bodies become protocol errors.
  nlohmann::json post(const std::string& path, const nlohmann::json& body) const;

  const std::string& uri() const noexcept { return uri_; }

 private:
  std::string uri_;
  std::string origin_;
  std::string base_path_;
  std::chrono::milliseconds timeout_;
};

/// POST /v1/score {"pairs":[{premise,hypothesis,lang}]} -> {"scores":[...]}
class RemoteScorer final : public EntailmentScorer {
 public:
  RemoteScorer(std::string uri, std::chrono::milliseconds timeout, std::size_t batch_size = 32);
  std::string name() const override { return "remote:" + endpoint_.uri(); }

 protected:
  std::vector<EntailmentScore> score_chunk(std::span<const ScoreRequest> chunk) override;

 private:
  RemoteEndpoint endpoint_;
};

/// POST /v1/embed {"texts":[{text,lang}]} -> {"embeddings":[[...]]}
class RemoteEmbedder final : public Embedder {
 public:
  RemoteEmbedder(std::string uri, std::chrono::milliseconds timeout, std::size_t batch_size = 32, std::size_t dim = 0);
  std::size_t dim() const override { return dim_; }
  std::string name() const override { return "remote:" + endpoint_.uri(); }

 protected:
  std::vector<EmbeddingVector> embed_chunk(std::span<const EmbedRequest> chunk) override;

 private:
  RemoteEndpoint endpoint_;
  std::size_t dim_;
};

/// POST /v1/translate {"texts":[{text,src,tgt}]} -> {"translations":[...]}
class RemoteTranslator final : public Translator {
 public:
  RemoteTranslator(std::string uri, std::chrono::milliseconds timeout);

  std::string translate(std::string_view text, std::string_view src_lang, std::string_view tgt_lang) override;
  bool supports(std::string_view, std::string_view) const override { return true; }
  std::string name() const override { return "remote:" + endpoint_.uri(); }

 private:
  RemoteEndpoint endpoint_;
};

}  // namespace agenda::backends
