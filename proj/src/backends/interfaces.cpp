#include <algorithm>
#include <cmath>

#include "agenda/backends/backend.hpp"

namespace agenda::backends {

std::string_view to_string(BackendErrorKind kind) noexcept {
  switch (kind) {
    case BackendErrorKind::unavailable: return "unavailable";
    case BackendErrorKind::timeout: return "timeout";
    case BackendErrorKind::protocol: return "protocol";
    case BackendErrorKind::unsupported: return "unsupported";
    case BackendErrorKind::failed: return "failed";
  }
  return "failed";
}

EntailmentScore EntailmentScore::checked(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw BackendError(BackendErrorKind::protocol, "entailment score " + std::to_string(value) + " outside [0, 1]");
  }
  return EntailmentScore{value};
}

namespace {

// Runs `fn` over consecutive chunks, offsetting chunk-relative failure indices.
template <typename Out, typename In, typename Fn>
std::vector<Out> chunked(std::span<const In> items, std::size_t batch_size, Fn&& fn) {
  std::vector<Out> out;
  out.reserve(items.size());
  std::vector<std::size_t> failed;
  std::string first_message;
  BackendErrorKind first_kind = BackendErrorKind::failed;
  for (std::size_t start = 0; start < items.size(); start += batch_size) {
    const std::size_t len = std::min(batch_size, items.size() - start);
    try {
      auto part = fn(items.subspan(start, len));
      if (part.size() != len) {
        throw BackendError(BackendErrorKind::protocol,
                           "backend returned " + std::to_string(part.size()) + " results for " + std::to_string(len) + " inputs");
      }
      for (auto& value : part) out.push_back(std::move(value));
    } catch (const BackendError& e) {
      if (first_message.empty()) {
        first_message = e.what();
        first_kind = e.kind();
      }
      if (e.failed_indices().empty()) {
        for (std::size_t i = 0; i < len; ++i) failed.push_back(start + i);
      } else {
        for (auto i : e.failed_indices()) failed.push_back(start + i);
      }
      out.resize(start + len);
    }
  }
  if (!failed.empty()) {
    std::string list;
    for (std::size_t k = 0; k < std::min<std::size_t>(failed.size(), 10); ++k) {
      list += (list.empty() ? "" : ",") + std::to_string(failed[k]);
    }
    if (failed.size() > 10) list += " and " + std::to_string(failed.size() - 10) + " more";
    throw BackendError(first_kind, first_message + " (failed indices: " + list + ")", std::move(failed));
  }
  return out;
}

}  // namespace

EntailmentScore EntailmentScorer::score(std::string_view premise, std::string_view hypothesis, std::string_view lang) {
  ScoreRequest req{std::string(premise), std::string(hypothesis), std::string(lang)};
  return score_batch(std::span<const ScoreRequest>(&req, 1)).front();
}

std::vector<EntailmentScore> EntailmentScorer::score_batch(std::span<const ScoreRequest> requests) {
  for (const auto& r : requests) {
    if (r.premise.empty() || r.hypothesis.empty()) throw ValidationError("score: premise and hypothesis must be non-empty");
  }
  return chunked<EntailmentScore>(requests, batch_size_, [this](std::span<const ScoreRequest> c) { return score_chunk(c); });
}

EmbeddingVector Embedder::embed(std::string_view text, std::string_view lang) {
  EmbedRequest req{std::string(text), std::string(lang)};
  return embed_batch(std::span<const EmbedRequest>(&req, 1)).front();
}

std::vector<EmbeddingVector> Embedder::embed_batch(std::span<const EmbedRequest> requests) {
  for (const auto& r : requests) {
    if (r.text.empty()) throw ValidationError("embed: text must be non-empty");
  }
  auto out = chunked<EmbeddingVector>(requests, batch_size_, [this](std::span<const EmbedRequest> c) { return embed_chunk(c); });
  // dim() == 0 means the backend learns its dimension from the first response.
  const auto expected = dim() != 0 ? dim() : (out.empty() ? 0 : out.front().dim());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].dim() != expected || expected == 0) {
      throw BackendError(BackendErrorKind::protocol,
                         "embedding of dim " + std::to_string(out[i].dim()) + ", expected " + std::to_string(expected), {i});
    }
  }
  return out;
}

}  // namespace agenda::backends
