#include "icr/service.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "icr/graph.hpp"

namespace icr {

using nlohmann::json;

struct SessionStore::Session {
  mutable std::mutex mutex;
  IncompleteMatrix matrix;
  std::vector<SessionEvent> history;
  std::optional<std::filesystem::path> log;

  explicit Session(int n) : matrix(IncompleteMatrix::empty(n)) {}
};

namespace {

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::string new_id() {
  static std::mutex mutex;
  static std::mt19937_64 gen{std::random_device{}()};
  std::lock_guard lock(mutex);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(gen()));
  return buf;
}

void check_cell(int n, int i, int j) {
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
    throw ServiceError(400, "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                ") is not an off-diagonal cell of a " + std::to_string(n) + "x" + std::to_string(n) +
                                " matrix");
  }
}

std::optional<double> snap_to_scale(std::optional<double> value) {
  if (!value) return std::nullopt;
  const auto idx = SaatyScale::index_of(*value, 1e-9);
  if (!idx) throw ServiceError(422, format_number(*value) + " is not on the 1/9..9 scale");
  return SaatyScale::value(*idx);
}

std::string value_text(std::optional<double> v) { return v ? format_number(*v) : "*"; }

void append_line(const std::filesystem::path& path, const std::string& line) {
  std::ofstream out(path, std::ios::app);
  out << line << '\n';
  out.flush();
  if (!out) throw ServiceError(500, "cannot write session log " + path.string());
}

}  // namespace

SessionStore::SessionStore(ServiceOptions options) : options_(std::move(options)) {
  if (options_.state_dir) {
    std::filesystem::create_directories(*options_.state_dir);
    replay_state_dir();
  }
}

SessionStore::~SessionStore() = default;

void SessionStore::replay_state_dir() {
  for (const auto& entry : std::filesystem::directory_iterator(*options_.state_dir)) {
    if (entry.path().extension() != ".log") continue;
    std::ifstream in(entry.path());
    std::string line;
    std::shared_ptr<Session> session;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::istringstream f(line);
      std::string kind;
      f >> kind;
      const auto fail = [&] {
        throw Error(ErrorCode::Io, entry.path().string() + ":" + std::to_string(line_no) + ": corrupt session log");
      };
      if (kind == "create") {
        int n = 0;
        if (!(f >> n) || session || n < 3 || n > kDefaultMaxSize) fail();
        session = std::make_shared<Session>(n);
      } else if (kind == "set") {
        SessionEvent ev;
        std::string v;
        if (!session || !(f >> ev.timestamp_ms >> ev.position.row >> ev.position.col >> v)) fail();
        std::optional<double> value;
        if (v != "*") value = std::stod(v);
        ev.old_value = session->matrix.entry(ev.position.row, ev.position.col);
        ev.new_value = value;
        session->matrix = session->matrix.with_entry(ev.position.row, ev.position.col, value);
        session->history.push_back(ev);
      } else if (!kind.empty()) {
        fail();
      }
    }
    if (!session) continue;
    session->log = entry.path();
    sessions_[entry.path().stem().string()] = session;
  }
}

std::string SessionStore::create(int n) {
  if (n < 3 || n > kDefaultMaxSize) {
    throw ServiceError(400, "n must be between 3 and " + std::to_string(kDefaultMaxSize));
  }
  auto session = std::make_shared<Session>(n);
  std::unique_lock lock(sessions_mutex_);
  std::string id;
  do id = new_id();
  while (sessions_.count(id));
  if (options_.state_dir) {
    session->log = std::filesystem::path(*options_.state_dir) / (id + ".log");
    append_line(*session->log, "create " + std::to_string(n));
  }
  sessions_[id] = std::move(session);
  return id;
}

bool SessionStore::remove(const std::string& id) {
  std::unique_lock lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) return false;
  if (it->second->log) std::filesystem::remove(*it->second->log);
  sessions_.erase(it);
  return true;
}

std::vector<std::string> SessionStore::ids() const {
  std::shared_lock lock(sessions_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "no session " + id);
  return it->second;
}

Report SessionStore::evaluate(const IncompleteMatrix& matrix) const {
  // Every request completes from scratch, so equal matrices give equal reports.
  try {
    return make_report(matrix, options_.table, options_.analyze);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::OutOfRange) throw;
    Report r = describe_graph(matrix);
    r.warnings.push_back(std::string("no verdict: ") + e.what());
    return r;
  }
}

Report SessionStore::set_entry(const std::string& id, int i, int j, std::optional<double> value) {
  const auto session = find(id);
  std::lock_guard lock(session->mutex);
  check_cell(session->matrix.size(), i, j);
  value = snap_to_scale(value);
  SessionEvent ev{now_ms(), {i, j}, session->matrix.entry(i, j), value};
  auto next = session->matrix.with_entry(i, j, value);
  if (session->log) {
    append_line(*session->log, "set " + std::to_string(ev.timestamp_ms) + " " + std::to_string(i) + " " +
                                   std::to_string(j) + " " + value_text(value));
  }
  session->matrix = std::move(next);
  session->history.push_back(ev);
  return evaluate(session->matrix);
}

Report SessionStore::what_if(const std::string& id, int i, int j, std::optional<double> value) const {
  const auto session = find(id);
  IncompleteMatrix preview = [&] {
    std::lock_guard lock(session->mutex);
    check_cell(session->matrix.size(), i, j);
    return session->matrix.with_entry(i, j, snap_to_scale(value));
  }();
  return evaluate(preview);
}

Report SessionStore::snapshot(const std::string& id) const { return evaluate(matrix(id)); }

IncompleteMatrix SessionStore::matrix(const std::string& id) const {
  const auto session = find(id);
  std::lock_guard lock(session->mutex);
  return session->matrix;
}

std::vector<SessionEvent> SessionStore::history(const std::string& id) const {
  const auto session = find(id);
  std::lock_guard lock(session->mutex);
  return session->history;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

bool numeric_key(const std::string& head) {
  return head == "fill" || head == "lambda_max" || head == "ci" || head == "ri" || head == "cr" ||
         head == "threshold";
}

json value_json(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string report_to_json(const Report& report) {
  json out = json::object();
  for (const auto& [key, value] : report_key_values(report)) {
    const std::string head = key.substr(0, key.find('.'));
    if (head == "n" || head == "m" || head == "sweeps") {
      out[key] = std::stoi(value);
    } else if (value == "true" || value == "false") {
      out[key] = value == "true";
    } else if (numeric_key(head)) {
      // inf has no JSON number; it only occurs for cr and travels as a string.
      const double d = std::strtod(value.c_str(), nullptr);
      out[key] = std::isfinite(d) ? json(d) : json(value);
    } else {
      out[key] = value;
    }
  }
  return out.dump();
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw ServiceError(400, std::string("request body is not JSON: ") + e.what());
  }
}

int int_field(const json& body, const char* name) {
  if (!body.is_object() || !body.contains(name) || !body[name].is_number_integer()) {
    throw ServiceError(400, std::string("field \"") + name + "\" must be an integer");
  }
  return body[name].get<int>();
}

std::optional<double> value_field(const json& body) {
  if (!body.contains("value")) throw ServiceError(400, "field \"value\" is required");
  const auto& v = body["value"];
  if (v.is_null()) return std::nullopt;
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "*") return std::nullopt;
    if (const auto r = parse_ratio(s)) return r;
    throw ServiceError(422, "cannot read value \"" + s + "\"");
  }
  throw ServiceError(400, "field \"value\" must be a number, a string or null");
}

bool local_origin(const std::string& origin) {
  for (const char* prefix : {"http://localhost", "http://127.0.0.1", "http://[::1]"}) {
    const std::string p(prefix);
    if (origin.rfind(p, 0) == 0 && (origin.size() == p.size() || origin[p.size()] == ':')) return true;
  }
  return false;
}

void send_json(httplib::Response& res, const std::string& body, int status = 200) {
  res.status = status;
  res.set_content(body, "application/json");
}

void send_report(httplib::Response& res, const std::string& id, const Report& report) {
  auto body = json::parse(report_to_json(report));
  if (!id.empty()) body["session"] = id;
  send_json(res, body.dump());
}

template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ServiceError& e) {
      send_json(res, json{{"error", e.what()}}.dump(), e.status());
    } catch (const Error& e) {
      const int status = e.code() == ErrorCode::NoConvergence ? 500 : e.code() == ErrorCode::Io ? 500 : 400;
      send_json(res, json{{"error", e.what()}, {"code", to_string(e.code())}}.dump(), status);
    } catch (const std::exception& e) {
      send_json(res, json{{"error", e.what()}}.dump(), 500);
    }
  };
}

}  // namespace

struct HttpServer::Impl {
  SessionStore& store;
  httplib::Server server;

  explicit Impl(SessionStore& s) : store(s) { routes(); }

  void routes() {
    server.set_post_routing_handler([](const httplib::Request& req, httplib::Response& res) {
      const auto origin = req.get_header_value("Origin");
      if (local_origin(origin)) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Vary", "Origin");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
      }
    });
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, R"({"status":"ok"})");
    });

    server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto id = store.create(int_field(parse_body(req), "n"));
      send_report(res, id, store.snapshot(id));
      res.status = 201;
    }));

    server.Get(R"(/sessions/([0-9a-f]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      send_report(res, id, store.snapshot(id));
    }));

    server.Delete(R"(/sessions/([0-9a-f]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      if (!store.remove(req.matches[1])) throw ServiceError(404, "no session " + std::string(req.matches[1]));
      res.status = 204;
    }));

    server.Put(R"(/sessions/([0-9a-f]+)/entries)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const std::string id = req.matches[1];
                 const auto body = parse_body(req);
                 const int i = int_field(body, "i") - 1;
                 const int j = int_field(body, "j") - 1;
                 send_report(res, id, store.set_entry(id, i, j, value_field(body)));
               }));

    server.Post(R"(/sessions/([0-9a-f]+)/what-if)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const std::string id = req.matches[1];
                  const auto body = parse_body(req);
                  const int i = int_field(body, "i") - 1;
                  const int j = int_field(body, "j") - 1;
                  send_report(res, id, store.what_if(id, i, j, value_field(body)));
                }));

    server.Get(R"(/sessions/([0-9a-f]+)/history)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 json events = json::array();
                 for (const auto& ev : store.history(req.matches[1])) {
                   events.push_back({{"timestamp_ms", ev.timestamp_ms},
                                     {"i", ev.position.row + 1},
                                     {"j", ev.position.col + 1},
                                     {"old", value_json(ev.old_value)},
                                     {"new", value_json(ev.new_value)}});
                 }
                 send_json(res, events.dump());
               }));

    server.Get(R"(/sessions/([0-9a-f]+)/matrix)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 res.set_content(render_matrix(store.matrix(req.matches[1])), "text/plain");
               }));

    server.Post("/analyze", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto matrix = parse_matrix(req.body);
      AnalyzeOptions opts = store.options().analyze;
      if (req.has_param("method")) {
        const auto m = parse_fill_method(req.get_param_value("method"));
        if (!m) throw ServiceError(400, "unknown method");
        opts.method = *m;
        opts.allow_method_mismatch = *m != FillMethod::Bounded;
      }
      if (!is_connected(build_graph(matrix))) {
        send_report(res, "", describe_graph(matrix));
        return;
      }
      send_report(res, "", make_report(matrix, store.options().table, opts));
    }));

    server.Get("/ri", guarded([this](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("n") || !req.has_param("m")) throw ServiceError(400, "n and m are required");
      int n = 0, m = 0;
      try {
        n = std::stoi(req.get_param_value("n"));
        m = std::stoi(req.get_param_value("m"));
      } catch (const std::exception&) {
        throw ServiceError(400, "n and m must be integers");
      }
      const auto ri = lookup_ri(n, m, store.options().table);
      send_json(res, json{{"n", n}, {"m", m}, {"ri", ri.ri}, {"ri_source", to_string(ri.source)}}.dump());
    }));
  }
};

HttpServer::HttpServer(SessionStore& store) : impl_(std::make_unique<Impl>(store)) {}
HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }
void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}
bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace icr
