#include "icr/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace icr {

namespace {

struct Token {
  std::string text;
  TextLocation at;
};

std::vector<std::vector<Token>> tokenize(std::string_view text) {
  std::vector<std::vector<Token>> rows;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<Token> row;
    std::size_t i = 0;
    while (i < line.size()) {
      const char c = line[i];
      if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != ',' && line[j] != '\r') ++j;
      row.push_back({std::string(line.substr(i, j - i)), {line_no, static_cast<int>(i) + 1}});
      i = j;
    }
    if (!row.empty()) rows.push_back(std::move(row));
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  return rows;
}

bool parse_decimal(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

IncompleteMatrix::RawEntry parse_token(const Token& t) {
  if (t.text == "*") return std::nullopt;
  if (const auto v = parse_ratio(t.text)) return v;
  throw Error(ErrorCode::ParseError,
              "line " + std::to_string(t.at.line) + ", column " + std::to_string(t.at.column) +
                  ": cannot read token \"" + t.text + "\"",
              std::nullopt, t.at);
}

}  // namespace

std::optional<double> parse_ratio(std::string_view token) {
  double value = 0.0;
  if (const auto slash = token.find('/'); slash != std::string_view::npos) {
    double num = 0.0, den = 0.0;
    if (parse_decimal(token.substr(0, slash), num) && parse_decimal(token.substr(slash + 1), den) && den != 0.0) {
      return num / den;
    }
    return std::nullopt;
  }
  if (parse_decimal(token, value)) return value;
  return std::nullopt;
}

IncompleteMatrix parse_matrix(std::string_view text, const ValidationOptions& options) {
  const auto rows = tokenize(text);
  std::vector<std::vector<IncompleteMatrix::RawEntry>> raw;
  for (const auto& row : rows) {
    auto& out = raw.emplace_back();
    for (const auto& t : row) out.push_back(parse_token(t));
  }
  for (const auto& row : rows) {
    if (row.size() != rows.size()) {
      throw Error(ErrorCode::NonSquare,
                  "line " + std::to_string(row.front().at.line) + ": expected " + std::to_string(rows.size()) +
                      " entries, found " + std::to_string(row.size()),
                  std::nullopt, row.front().at);
    }
  }
  try {
    return IncompleteMatrix::validate(raw, options);
  } catch (const Error& e) {
    if (!e.cell()) throw;
    const auto& t = rows[static_cast<std::size_t>(e.cell()->row)][static_cast<std::size_t>(e.cell()->col)];
    throw Error(e.code(),
                "line " + std::to_string(t.at.line) + ", column " + std::to_string(t.at.column) + ": " + e.what(),
                e.cell(), t.at);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

IncompleteMatrix load_matrix(const std::string& path, const ValidationOptions& options) {
  return parse_matrix(read_file(path), options);
}

std::string format_number(double value) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

std::string format_ratio(double value) {
  if (const auto label = SaatyScale::label(value)) return *label;
  return format_number(value);
}

std::vector<std::string> render_rows(const IncompleteMatrix& matrix) {
  const int n = matrix.size();
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) {
    std::string line;
    for (int j = 0; j < n; ++j) {
      if (j) line += ' ';
      line += matrix.known(i, j) ? format_ratio(matrix.value(i, j)) : "*";
    }
    out.push_back(std::move(line));
  }
  return out;
}

std::string render_matrix(const IncompleteMatrix& matrix) {
  std::string out;
  for (const auto& row : render_rows(matrix)) out += row + '\n';
  return out;
}

std::string render_matrix(const CompleteMatrix& matrix) {
  std::string out;
  for (int i = 0; i < matrix.size(); ++i) {
    for (int j = 0; j < matrix.size(); ++j) {
      if (j) out += ' ';
      out += format_ratio(matrix(i, j));
    }
    out += '\n';
  }
  return out;
}

namespace {
constexpr std::string_view kSimulationHeader = "n\tm\tri\tstd_error\tsamples\trejected\tseed";
}

std::string render_simulation_table(const std::vector<SimulationResult>& rows) {
  std::string out(kSimulationHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.n) + '\t' + std::to_string(r.m) + '\t' + format_number(r.ri) + '\t' +
           format_number(r.std_error) + '\t' + std::to_string(r.samples_kept) + '\t' +
           std::to_string(r.samples_rejected) + '\t' + std::to_string(r.seed) + '\n';
  }
  return out;
}

std::vector<SimulationResult> parse_simulation_table(std::string_view text) {
  std::vector<SimulationResult> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line.rfind("n\t", 0) == 0) continue;
    std::istringstream fields(line);
    SimulationResult r;
    if (!(fields >> r.n >> r.m >> r.ri >> r.std_error >> r.samples_kept >> r.samples_rejected >> r.seed)) {
      throw Error(ErrorCode::ParseError, "simulation table line " + std::to_string(line_no) + " is malformed",
                  std::nullopt, TextLocation{line_no, 1});
    }
    out.push_back(r);
  }
  return out;
}

RandomIndexTable merge_simulated(const RandomIndexTable& base, const std::vector<SimulationResult>& rows) {
  RandomIndexTable out = base;
  for (const auto& r : rows) {
    if (base.find(r.n, r.m)) continue;
    out.insert(r.n, r.m, {r.ri, r.samples_kept, r.std_error, RiSource::Simulated});
  }
  return out;
}

std::string render_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + '=' + v + '\n';
  return out;
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + " is not key=value", std::nullopt,
                  TextLocation{line_no, 1});
    }
    out.emplace_back(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
  }
  return out;
}

}  // namespace icr
