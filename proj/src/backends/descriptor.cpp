#include "agenda/backends/descriptor.hpp"

#include <filesystem>
#include <sstream>

#include "agenda/backends/local.hpp"
#include "agenda/backends/mock.hpp"
#include "agenda/backends/remote.hpp"
#include "agenda/core/jsonl.hpp"

namespace agenda::backends {

namespace {

std::map<std::string, std::string> parse_options(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("backend option '" + item + "' is not key=value");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

std::uint64_t option_u64(const BackendDescriptor& d, const std::string& key, std::uint64_t fallback) {
  auto it = d.options.find(key);
  if (it == d.options.end()) return fallback;
  try {
    std::size_t used = 0;
    auto v = std::stoull(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("backend option " + key + "='" + it->second + "' is not an integer");
  }
}

void apply_common_options(BackendDescriptor& d) {
  if (auto it = d.options.find("timeout_ms"); it != d.options.end()) {
    d.timeout = std::chrono::milliseconds(option_u64(d, "timeout_ms", 30000));
    d.options.erase(it);
  }
  if (auto it = d.options.find("batch_size"); it != d.options.end()) {
    d.batch_size = option_u64(d, "batch_size", 32);
    d.options.erase(it);
  }
}

void validate(const BackendDescriptor& d) {
  if (d.kind == BackendKind::remote && d.uri.empty()) throw ValidationError("remote backend requires a uri");
  if (d.kind == BackendKind::local && d.path.empty()) throw ValidationError("local backend requires a path");
  if (d.batch_size == 0) throw ValidationError("batch_size must be positive");
}

}  // namespace

BackendDescriptor parse_descriptor(const std::string& text) {
  BackendDescriptor d;
  if (text.size() > 5 && text.ends_with(".json") && std::filesystem::exists(text)) {
    return descriptor_from_json(read_json_file(text));
  }
  if (text == "mock") return d;
  if (text.rfind("mock:", 0) == 0) {
    d.options = parse_options(text.substr(5));
  } else if (text.rfind("local:", 0) == 0) {
    d.kind = BackendKind::local;
    auto rest = text.substr(6);
    auto q = rest.find('?');
    d.path = rest.substr(0, q);
    if (q != std::string::npos) d.options = parse_options(rest.substr(q + 1));
  } else if (text.rfind("http://", 0) == 0 || text.rfind("https://", 0) == 0 || text.rfind("remote:", 0) == 0) {
    d.kind = BackendKind::remote;
    auto rest = text.rfind("remote:", 0) == 0 ? text.substr(7) : text;
    auto q = rest.find('?');
    d.uri = rest.substr(0, q);
    if (q != std::string::npos) d.options = parse_options(rest.substr(q + 1));
  } else {
    throw ValidationError("unrecognised backend descriptor '" + text + "'");
  }
  apply_common_options(d);
  validate(d);
  return d;
}

BackendDescriptor descriptor_from_json(const nlohmann::json& doc) {
  BackendDescriptor d;
  try {
    auto kind = doc.at("kind").get<std::string>();
    if (kind == "mock") {
      d.kind = BackendKind::mock;
    } else if (kind == "local") {
      d.kind = BackendKind::local;
    } else if (kind == "remote") {
      d.kind = BackendKind::remote;
    } else {
      throw ValidationError("unknown backend kind '" + kind + "'");
    }
    d.uri = doc.value("uri", std::string());
    d.path = doc.value("path", std::string());
    d.timeout = std::chrono::milliseconds(doc.value("timeout_ms", 30000));
    d.batch_size = doc.value("batch_size", std::size_t{32});
    if (doc.contains("options")) {
      for (const auto& [k, v] : doc["options"].items()) d.options[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("backend descriptor: ") + e.what());
  }
  validate(d);
  return d;
}

nlohmann::ordered_json descriptor_to_json(const BackendDescriptor& d) {
  nlohmann::ordered_json out;
  out["kind"] = d.kind == BackendKind::mock ? "mock" : (d.kind == BackendKind::local ? "local" : "remote");
  if (!d.uri.empty()) out["uri"] = d.uri;
  if (!d.path.empty()) out["path"] = d.path;
  out["timeout_ms"] = d.timeout.count();
  out["batch_size"] = d.batch_size;
  if (!d.options.empty()) {
    nlohmann::ordered_json opts;
    for (const auto& [k, v] : d.options) opts[k] = v;
    out["options"] = opts;
  }
  return out;
}

std::unique_ptr<EntailmentScorer> make_scorer(const BackendDescriptor& d) {
  switch (d.kind) {
    case BackendKind::mock: {
      std::uint64_t seed = option_u64(d, "seed", 0);
      MockScorer::Fixture fixture;
      if (auto it = d.options.find("fixture"); it != d.options.end()) fixture = MockScorer::load_fixture(it->second, &seed);
      if (d.options.count("seed")) seed = option_u64(d, "seed", 0);
      return std::make_unique<MockScorer>(seed, std::move(fixture), d.batch_size);
    }
    case BackendKind::local: return std::make_unique<LocalScorer>(d.path, d.batch_size);
    case BackendKind::remote: return std::make_unique<RemoteScorer>(d.uri, d.timeout, d.batch_size);
  }
  throw ValidationError("bad backend kind");
}

std::unique_ptr<Embedder> make_embedder(const BackendDescriptor& d) {
  switch (d.kind) {
    case BackendKind::mock: {
      MockEmbedder::Fixture fixture;
      if (auto it = d.options.find("fixture"); it != d.options.end()) fixture = MockEmbedder::load_fixture(it->second);
      return std::make_unique<MockEmbedder>(option_u64(d, "dim", 16), option_u64(d, "seed", 0), std::move(fixture), d.batch_size);
    }
    case BackendKind::local: return std::make_unique<LocalEmbedder>(d.path, d.batch_size);
    case BackendKind::remote: return std::make_unique<RemoteEmbedder>(d.uri, d.timeout, d.batch_size, option_u64(d, "dim", 0));
  }
  throw ValidationError("bad backend kind");
}

std::unique_ptr<Translator> make_translator(const BackendDescriptor& d) {
  switch (d.kind) {
    case BackendKind::mock: {
      if (auto it = d.options.find("fixture"); it != d.options.end()) {
        return std::make_unique<FixtureTranslator>(FixtureTranslator::load(it->second));
      }
      return std::make_unique<IdentityTranslator>();
    }
    case BackendKind::local:
      throw BackendError(BackendErrorKind::unsupported, "no local translation runtime; use mock or a remote MT service");
    case BackendKind::remote: return std::make_unique<RemoteTranslator>(d.uri, d.timeout);
  }
  throw ValidationError("bad backend kind");
}

}  // namespace agenda::backends
