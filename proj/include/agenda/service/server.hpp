#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "agenda/backends/backend.hpp"
#include "agenda/bootstrap/store.hpp"

namespace httplib {
class Server;
}

namespace agenda::service {

struct ServiceConfig {
  std::filesystem::path data_dir;
  std::string backend = "mock";  // scorer descriptor
  std::string embedder;          // embedder descriptor; empty means `backend`
  std::vector<std::filesystem::path> corpus;  // default corpus for /bootstrap/run
  std::optional<double> default_tau;           // used by /classify when the body has none
  bootstrap::StoreOptions store;
};

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Transport-independent request handling; HttpServer only adapts sockets to this.
/// Responses depend only on state and request, apart from timestamps echoed from the log.
class Service {
 public:
  Service(ServiceConfig config, const LabelSchema& schema);
  /// Backends supplied directly (tests, embedding); either may be null to fall back to the descriptors.
  Service(ServiceConfig config, const LabelSchema& schema, std::unique_ptr<backends::EntailmentScorer> scorer,
          std::unique_ptr<backends::Embedder> embedder);

  Response handle(const Request& request);

  bootstrap::Store& store() noexcept { return store_; }

 private:
  Response route(const Request& request);
  Response classify(const Request& request);
  Response next_candidate(const Request& request);
  Response decision(const std::string& id, const Request& request, bool consensus);
  Response disagreements(const Request& request);
  Response agreement_stats(const Request& request);
  Response bootstrap_run(const Request& request);
  Response export_round(const Request& request);

  backends::EntailmentScorer& scorer();
  backends::Embedder& embedder();

  ServiceConfig config_;
  const LabelSchema* schema_;
  bootstrap::Store store_;
  std::mutex backend_mutex_;
  std::unique_ptr<backends::EntailmentScorer> scorer_;
  std::unique_ptr<backends::Embedder> embedder_;
};

class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and returns the port (port 0 picks a free one).
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  /// Blocks until a concurrent listen() accepts connections.
  void wait_until_ready();
  void stop();

 private:
  Service* service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace agenda::service
