#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icr/consistency.hpp"
#include "icr/io.hpp"

namespace icr {

/// Everything the CLI and the service print about one matrix.
struct Report {
  int n = 0;
  int m = 0;
  std::vector<std::string> matrix;  // rendered rows, "*" for missing
  bool connected = false;
  bool spanning_tree = false;
  /// Only when disconnected. 0-based vertices.
  std::vector<std::vector<int>> components;

  struct Outcome {
    FillMethod method = FillMethod::Bounded;
    std::vector<Fill> fills;
    double lambda_max = 0.0;
    double ci = 0.0;
    double ri = 0.0;
    RiSource ri_source = RiSource::Published;
    double cr = 0.0;
    double threshold = kDefaultThreshold;
    bool accepted = false;
    int sweeps = 0;
    bool converged = false;
    bool heuristic = false;

    friend bool operator==(const Outcome&, const Outcome&) = default;
  };
  /// Absent when the graph is disconnected.
  std::optional<Outcome> outcome;
  std::vector<std::string> warnings;

  friend bool operator==(const Report&, const Report&) = default;
};

/// Matrix echo and graph summary only.
Report describe_graph(const IncompleteMatrix& matrix);

/// Graph summary for any matrix; completion and verdict when connected.
Report make_report(const IncompleteMatrix& matrix, const RandomIndexTable& table = RandomIndexTable::published(),
                   const AnalyzeOptions& options = {});

/// Flat document. Keys use 1-based indices: fill.1.2, component.1, warning.1.
KeyValues report_key_values(const Report& report);
Report report_from_key_values(const KeyValues& kv);

std::string render_report_kv(const Report& report);
Report parse_report_kv(std::string_view text);
std::string render_report_text(const Report& report);

}  // namespace icr
