#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "decide/model.hpp"
#include "decide/store.hpp"

namespace decide::api {

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;  // JSON
};

/// Identity seam: resolves a session token to the participant it was issued for.
class TokenProvider {
 public:
  virtual ~TokenProvider() = default;
  virtual std::optional<ParticipantId> resolve(const std::string& token) const = 0;
};

/// Token file: one `<token> <participant-id>` pair per line (tab or spaces), '#' comments.
class StaticTokenProvider : public TokenProvider {
 public:
  explicit StaticTokenProvider(std::map<std::string, ParticipantId> tokens) : tokens_(std::move(tokens)) {}
  static StaticTokenProvider from_file(const std::filesystem::path& path);

  std::optional<ParticipantId> resolve(const std::string& token) const override;

 private:
  std::map<std::string, ParticipantId> tokens_;
};

struct ServiceOptions {
  std::size_t requests_per_minute = 600;  // per token
  std::size_t argument_limit = 3;
  std::string anonymize_salt;              // empty: a random salt that is never stored
};

using Clock = std::function<Timestamp()>;

Clock system_clock();

/// Routes requests for the single issue held by `store`.
///
///   GET  /issues/{id}                      summary with the current phase
///   GET  /issues/{id}/proposals            proposals with up to `argument_limit` pro and con arguments
///   GET  /proposals/{pid}/arguments        ?all=true for the full lists, ?seed= to pin the shuffle
///   PUT  /issues/{id}/ballot               (auth) full replacement of the caller's ballot
///   GET  /issues/{id}/result               403 "results-hidden" until visible
///   POST /issues/{id}/proposals            (auth) {text, cost}
///   PATCH /issues/{id}/proposals/{pid}     (auth, author) {cost}
///   DELETE /issues/{id}/proposals/{pid}    (auth, author) tombstone
///   POST /issues/{id}/statements           (auth) {text}
///   POST /issues/{id}/arguments            (auth) {premises, conclusion, attitude}
///   POST /issues/{id}/reviews              (auth) {target, kind, side}
///
/// Money is always integer cents. Errors are {code, message, details}.
class Service {
 public:
  Service(Store& store, std::shared_ptr<const TokenProvider> tokens, Clock clock, ServiceOptions options = {});

  Response handle(const Request& request);

 private:
  struct RateWindow {
    std::int64_t minute = 0;
    std::size_t count = 0;
  };

  Store& store_;
  std::shared_ptr<const TokenProvider> tokens_;
  Clock clock_;
  ServiceOptions options_;
  std::mutex rate_mutex_;
  std::map<std::string, RateWindow> rate_;
};

/// HTTP/1.1 front for a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  /// Port 0 picks a free port. Returns the bound port; throws std::runtime_error on bind failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called from another thread.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// bind() then listen().
void serve(Service& service, const std::string& host, int port);

/// Parses "host:port"; throws std::invalid_argument.
std::pair<std::string, int> parse_listen_address(const std::string& text);

}  // namespace decide::api
