#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <string>

#include "agenda/backends/backend.hpp"
#include "json.hpp"

namespace agenda::backends {

enum class BackendKind { mock, local, remote };

struct BackendDescriptor {
  BackendKind kind = BackendKind::mock;
  std::string uri;   // remote
  std::string path;  // local model directory
  std::chrono::milliseconds timeout{30000};
  std::size_t batch_size = 32;
  std::map<std::string, std::string> options;  // mock: seed, dim, fixture, mode
};

/// Accepted forms:
///   "mock", "mock:seed=7,dim=8,fixture=path"
///   "local:/models/scorer" (optionally ",batch_size=N" style options after '?')
///   "http://host:port[/prefix]" or "remote:http://..."
///   a path to a JSON file {"kind","uri"?,"path"?,"timeout_ms"?,"batch_size"?,"options"?}
BackendDescriptor parse_descriptor(const std::string& text);
BackendDescriptor descriptor_from_json(const nlohmann::json& doc);
nlohmann::ordered_json descriptor_to_json(const BackendDescriptor& desc);

std::unique_ptr<EntailmentScorer> make_scorer(const BackendDescriptor& desc);
std::unique_ptr<Embedder> make_embedder(const BackendDescriptor& desc);
std::unique_ptr<Translator> make_translator(const BackendDescriptor& desc);

}  // namespace agenda::backends
