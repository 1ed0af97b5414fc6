#include "icr/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "icr/graph.hpp"

namespace icr {

Report describe_graph(const IncompleteMatrix& matrix) {
  Report r;
  r.n = matrix.size();
  r.m = matrix.missing_count();
  r.matrix = render_rows(matrix);
  const auto graph = build_graph(matrix);
  r.connected = is_connected(graph);
  r.spanning_tree = is_spanning_tree(graph);
  if (!r.connected) r.components = connected_components(graph);
  return r;
}

Report make_report(const IncompleteMatrix& matrix, const RandomIndexTable& table, const AnalyzeOptions& options) {
  Report r = describe_graph(matrix);
  if (!r.connected) return r;
  auto analysis = analyze(matrix, table, options);
  Report::Outcome o;
  o.method = options.method;
  o.fills = analysis.completion.fills;
  o.lambda_max = analysis.completion.lambda_max;
  o.ci = analysis.verdict.ci;
  o.ri = analysis.verdict.ri_used;
  o.ri_source = analysis.verdict.ri_source;
  o.cr = analysis.verdict.cr;
  o.threshold = analysis.verdict.threshold;
  o.accepted = analysis.verdict.accepted;
  o.sweeps = analysis.completion.sweeps_used;
  o.converged = analysis.completion.converged;
  o.heuristic = analysis.completion.heuristic;
  r.outcome = std::move(o);
  r.warnings = std::move(analysis.warnings);
  return r;
}

namespace {

std::string flag(bool b) { return b ? "true" : "false"; }

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(v[k] + 1);
  }
  return out;
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, "report: " + what); }

double to_double(const std::string& key, const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) bad("bad number for " + key);
  return v;
}

int to_int(const std::string& key, const std::string& s) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) bad("bad integer for " + key);
  return v;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  bad("bad boolean for " + key);
}

RiSource to_source(const std::string& s) {
  for (auto src : {RiSource::Published, RiSource::Simulated, RiSource::Approximated, RiSource::Override}) {
    if (s == to_string(src)) return src;
  }
  bad("unknown ri_source " + s);
}

}  // namespace

KeyValues report_key_values(const Report& r) {
  KeyValues kv;
  kv.emplace_back("n", std::to_string(r.n));
  kv.emplace_back("m", std::to_string(r.m));
  for (std::size_t i = 0; i < r.matrix.size(); ++i) kv.emplace_back("row." + std::to_string(i + 1), r.matrix[i]);
  kv.emplace_back("connected", flag(r.connected));
  kv.emplace_back("spanning_tree", flag(r.spanning_tree));
  for (std::size_t c = 0; c < r.components.size(); ++c) {
    kv.emplace_back("component." + std::to_string(c + 1), join(r.components[c]));
  }
  if (const auto& o = r.outcome) {
    kv.emplace_back("method", to_string(o->method));
    for (const auto& f : o->fills) {
      kv.emplace_back("fill." + std::to_string(f.position.row + 1) + "." + std::to_string(f.position.col + 1),
                      format_number(f.value));
    }
    kv.emplace_back("lambda_max", format_number(o->lambda_max));
    kv.emplace_back("ci", format_number(o->ci));
    kv.emplace_back("ri", format_number(o->ri));
    kv.emplace_back("ri_source", to_string(o->ri_source));
    kv.emplace_back("cr", format_number(o->cr));
    kv.emplace_back("threshold", format_number(o->threshold));
    kv.emplace_back("verdict", o->accepted ? "accepted" : "rejected");
    kv.emplace_back("sweeps", std::to_string(o->sweeps));
    kv.emplace_back("converged", flag(o->converged));
    kv.emplace_back("heuristic", flag(o->heuristic));
  }
  for (std::size_t w = 0; w < r.warnings.size(); ++w) kv.emplace_back("warning." + std::to_string(w + 1), r.warnings[w]);
  return kv;
}

Report report_from_key_values(const KeyValues& kv) {
  Report r;
  Report::Outcome o;
  bool any_outcome = false;
  for (const auto& [key, value] : kv) {
    const auto dot = key.find('.');
    const std::string head = key.substr(0, dot);
    if (head == "n") r.n = to_int(key, value);
    else if (head == "m") r.m = to_int(key, value);
    else if (head == "row") r.matrix.push_back(value);
    else if (head == "connected") r.connected = to_bool(key, value);
    else if (head == "spanning_tree") r.spanning_tree = to_bool(key, value);
    else if (head == "component") {
      std::istringstream in(value);
      auto& comp = r.components.emplace_back();
      for (int v; in >> v;) comp.push_back(v - 1);
    } else if (head == "warning") {
      r.warnings.push_back(value);
    } else {
      any_outcome = true;
      if (head == "method") {
        const auto m = parse_fill_method(value);
        if (!m) bad("unknown method " + value);
        o.method = *m;
      } else if (head == "fill") {
        const auto second = key.find('.', dot + 1);
        if (dot == std::string::npos || second == std::string::npos) bad("malformed key " + key);
        const int i = to_int(key, key.substr(dot + 1, second - dot - 1));
        const int j = to_int(key, key.substr(second + 1));
        o.fills.push_back({{i - 1, j - 1}, to_double(key, value)});
      } else if (head == "lambda_max") o.lambda_max = to_double(key, value);
      else if (head == "ci") o.ci = to_double(key, value);
      else if (head == "ri") o.ri = to_double(key, value);
      else if (head == "ri_source") o.ri_source = to_source(value);
      else if (head == "cr") o.cr = to_double(key, value);
      else if (head == "threshold") o.threshold = to_double(key, value);
      else if (head == "verdict") o.accepted = value == "accepted";
      else if (head == "sweeps") o.sweeps = to_int(key, value);
      else if (head == "converged") o.converged = to_bool(key, value);
      else if (head == "heuristic") o.heuristic = to_bool(key, value);
      else bad("unknown key " + key);
    }
  }
  if (any_outcome) r.outcome = std::move(o);
  return r;
}

std::string render_report_kv(const Report& report) { return render_key_values(report_key_values(report)); }

Report parse_report_kv(std::string_view text) { return report_from_key_values(parse_key_values(text)); }

std::string render_report_text(const Report& r) {
  std::ostringstream out;
  out << "Matrix (n = " << r.n << ", missing pairs m = " << r.m << ")\n";
  // Right-align each column.
  std::vector<std::vector<std::string>> cells;
  std::size_t width = 1;
  for (const auto& row : r.matrix) {
    std::istringstream in(row);
    auto& c = cells.emplace_back();
    for (std::string t; in >> t;) {
      width = std::max(width, t.size());
      c.push_back(t);
    }
  }
  for (const auto& row : cells) {
    out << ' ';
    for (const auto& t : row) out << ' ' << std::string(width - t.size(), ' ') << t;
    out << '\n';
  }
  out << "Graph: " << (r.connected ? "connected" : "disconnected");
  if (r.spanning_tree) out << ", spanning tree";
  out << '\n';
  if (!r.connected) {
    out << "Components:";
    for (const auto& c : r.components) out << " {" << join(c) << '}';
    out << "\nVerdict: insufficient comparisons (graph not connected)\n";
  }
  if (const auto& o = r.outcome) {
    char buf[128];
    out << "Completion: " << to_string(o->method) << ", " << o->sweeps << " sweep(s), "
        << (o->converged ? "converged" : "NOT converged") << (o->heuristic ? " (local search)" : "") << '\n';
    for (const auto& f : o->fills) {
      std::string v;
      if (const auto label = SaatyScale::label(f.value, 1e-9)) {
        v = *label;
      } else {
        std::snprintf(buf, sizeof buf, "%.6g", f.value);
        v = buf;
      }
      out << "  a(" << f.position.row + 1 << ',' << f.position.col + 1 << ") = " << v << '\n';
    }
    std::snprintf(buf, sizeof buf, "lambda_max = %.6f\nCI = %.6f\n", o->lambda_max, o->ci);
    out << buf;
    std::snprintf(buf, sizeof buf, "RI(%d,%d) = %.4g (%s)\n", r.n, r.m, o->ri, to_string(o->ri_source));
    out << buf;
    std::snprintf(buf, sizeof buf, "CR = %.4f (threshold %g)\n", o->cr, o->threshold);
    out << buf;
    out << "Verdict: " << (o->accepted ? "ACCEPTED" : "REJECTED") << '\n';
  }
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  return out.str();
}

}  // namespace icr
