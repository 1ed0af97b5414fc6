#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "icr/report.hpp"

namespace icr {

/// Failure with the HTTP status the endpoint should answer with.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& message) : std::runtime_error(message), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

struct SessionEvent {
  std::int64_t timestamp_ms = 0;  // Unix epoch
  Position position;              // as given by the client, 0-based
  std::optional<double> old_value;
  std::optional<double> new_value;
};

struct ServiceOptions {
  RandomIndexTable table = RandomIndexTable::published();
  AnalyzeOptions analyze{};
  /// When set, every session keeps an append-only log here and existing logs
  /// are replayed on start-up.
  std::optional<std::string> state_dir;
};

/// In-memory elicitation sessions. Distinct sessions can be used from
/// different threads at once; calls on one session are serialised.
class SessionStore {
 public:
  explicit SessionStore(ServiceOptions options = {});
  ~SessionStore();
  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  /// All-missing n x n matrix. ServiceError 400 unless 3 <= n <= 15.
  std::string create(int n);
  bool remove(const std::string& id);
  std::vector<std::string> ids() const;

  /// Sets (i, j) and its reciprocal, or clears both when value is empty.
  /// 404 unknown session, 400 bad cell, 422 value off the Saaty scale.
  Report set_entry(const std::string& id, int i, int j, std::optional<double> value);
  /// Same answer as set_entry without touching the session.
  Report what_if(const std::string& id, int i, int j, std::optional<double> value) const;
  Report snapshot(const std::string& id) const;

  IncompleteMatrix matrix(const std::string& id) const;
  std::vector<SessionEvent> history(const std::string& id) const;

  /// Report for an arbitrary matrix under the store's options.
  Report evaluate(const IncompleteMatrix& matrix) const;
  const ServiceOptions& options() const noexcept { return options_; }

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;
  void replay_state_dir();

  ServiceOptions options_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// Flat JSON object with the keys of report_key_values; numbers, booleans
/// and strings typed accordingly.
std::string report_to_json(const Report& report);

inline constexpr int kDefaultPort = 8765;

/// HTTP front end. Endpoints (cells are 1-based on the wire):
///   GET    /health
///   POST   /sessions                    {"n": 4}
///   GET    /sessions/{id}
///   DELETE /sessions/{id}
///   PUT    /sessions/{id}/entries        {"i": 1, "j": 2, "value": "1/4" | 0.25 | null}
///   POST   /sessions/{id}/what-if        same body as entries
///   GET    /sessions/{id}/history
///   GET    /sessions/{id}/matrix         matrix file text
///   POST   /analyze?method=bounded       matrix file text in the body
///   GET    /ri?n=4&m=2
class HttpServer {
 public:
  explicit HttpServer(SessionStore& store);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free one. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen_after_bind();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace icr
