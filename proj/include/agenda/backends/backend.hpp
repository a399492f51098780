#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agenda/core/error.hpp"

namespace agenda::backends {

enum class BackendErrorKind { unavailable, timeout, protocol, unsupported, failed };

std::string_view to_string(BackendErrorKind kind) noexcept;

/// Raised by every backend. `failed_indices` are positions in the caller's batch
/// (empty when the failure is not attributable to items).
class BackendError : public Error {
 public:
  BackendError(BackendErrorKind kind, const std::string& what, std::vector<std::size_t> failed_indices = {})
      : Error(what), kind_(kind), failed_indices_(std::move(failed_indices)) {}

  BackendErrorKind kind() const noexcept { return kind_; }
  const std::vector<std::size_t>& failed_indices() const noexcept { return failed_indices_; }

 private:
  BackendErrorKind kind_;
  std::vector<std::size_t> failed_indices_;
};

/// Probability that the hypothesis is entailed by the premise.
struct EntailmentScore {
  double p_entail = 0.0;

  /// Rejects values outside [0, 1] (and NaN) with a protocol error; never clips.
  static EntailmentScore checked(double value);
};

struct ScoreRequest {
  std::string premise;
  std::string hypothesis;
  std::string lang;
};

struct EmbeddingVector {
  std::vector<float> values;

  std::size_t dim() const noexcept { return values.size(); }
  bool operator==(const EmbeddingVector&) const = default;
};

struct EmbedRequest {
  std::string text;
  std::string lang;
};

/// Entailment scoring contract. Implementations provide score_chunk(); batching,
/// input checks and failure index bookkeeping live here so that
/// score_batch(xs) == map(score, xs) holds for every backend.
class EntailmentScorer {
 public:
  explicit EntailmentScorer(std::size_t batch_size = 32) : batch_size_(batch_size == 0 ? 1 : batch_size) {}
  virtual ~EntailmentScorer() = default;
  EntailmentScorer(const EntailmentScorer&) = delete;
  EntailmentScorer& operator=(const EntailmentScorer&) = delete;

  EntailmentScore score(std::string_view premise, std::string_view hypothesis, std::string_view lang);

  /// Order-preserving, chunked by batch_size(). If any chunk fails, the remaining
  /// chunks still run and one BackendError lists every failed index.
  std::vector<EntailmentScore> score_batch(std::span<const ScoreRequest> requests);

  std::size_t batch_size() const noexcept { return batch_size_; }
  virtual std::string name() const = 0;

 protected:
  /// Scores one chunk. Indices in a thrown BackendError are chunk-relative.
  virtual std::vector<EntailmentScore> score_chunk(std::span<const ScoreRequest> chunk) = 0;

 private:
  std::size_t batch_size_;
};

class Embedder {
 public:
  explicit Embedder(std::size_t batch_size = 32) : batch_size_(batch_size == 0 ? 1 : batch_size) {}
  virtual ~Embedder() = default;
  Embedder(const Embedder&) = delete;
  Embedder& operator=(const Embedder&) = delete;

  EmbeddingVector embed(std::string_view text, std::string_view lang);
  std::vector<EmbeddingVector> embed_batch(std::span<const EmbedRequest> requests);

  std::size_t batch_size() const noexcept { return batch_size_; }
  virtual std::size_t dim() const = 0;
  virtual std::string name() const = 0;

 protected:
  virtual std::vector<EmbeddingVector> embed_chunk(std::span<const EmbedRequest> chunk) = 0;

 private:
  std::size_t batch_size_;
};

class Translator {
 public:
  virtual ~Translator() = default;

  /// Throws BackendError(unsupported) when the language pair is not served.
  virtual std::string translate(std::string_view text, std::string_view src_lang, std::string_view tgt_lang) = 0;
  virtual bool supports(std::string_view src_lang, std::string_view tgt_lang) const = 0;
  virtual std::string name() const = 0;
};

}  // namespace agenda::backends
