#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icr/matrix.hpp"
#include "icr/random_index.hpp"

namespace icr {

/// Parses a matrix file: one row per line, entries separated by whitespace
/// and/or commas, "*" for a missing entry, decimals ("0.25") or fractions
/// ("1/4"). Blank lines and text after '#' are ignored. Syntax errors and
/// validation errors both carry the line/column of the offending token.
IncompleteMatrix parse_matrix(std::string_view text, const ValidationOptions& options = {});
IncompleteMatrix load_matrix(const std::string& path, const ValidationOptions& options = {});

/// Value of a decimal ("0.25") or fraction ("1/4") token; empty when unreadable.
std::optional<double> parse_ratio(std::string_view token);

/// Scale elements as fractions ("1/4", "9"), anything else as the shortest
/// decimal that reads back to the same double.
std::string format_ratio(double value);
/// Shortest round-trip decimal.
std::string format_number(double value);

std::string render_matrix(const IncompleteMatrix& matrix);
std::string render_matrix(const CompleteMatrix& matrix);
/// Rows of render_matrix without the trailing newline.
std::vector<std::string> render_rows(const IncompleteMatrix& matrix);

/// Tab-separated simulation results with a header line.
std::string render_simulation_table(const std::vector<SimulationResult>& rows);
std::vector<SimulationResult> parse_simulation_table(std::string_view text);

/// Published table plus simulated cells for every (n, m) the published table lacks.
RandomIndexTable merge_simulated(const RandomIndexTable& base, const std::vector<SimulationResult>& rows);

std::string read_file(const std::string& path);

/// Flat "key=value" document, one datum per line, order preserved.
using KeyValues = std::vector<std::pair<std::string, std::string>>;
std::string render_key_values(const KeyValues& kv);
KeyValues parse_key_values(std::string_view text);

}  // namespace icr
