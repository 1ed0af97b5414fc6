#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace icr {

/// Zero-based (row, column) cell of a matrix.
struct Position {
  int row = 0;
  int col = 0;

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;
};

/// One-based line/column inside a text document.
struct TextLocation {
  int line = 0;
  int column = 0;
};

enum class ErrorCode {
  InvalidArgument,
  NonSquare,
  BadSize,
  NonPositiveEntry,
  ReciprocityViolation,
  BadDiagonal,
  MissingDiagonal,
  AsymmetricMissing,
  NoConvergence,
  DisconnectedGraph,
  NotSpanningTree,
  EntryMismatch,
  InfeasibleMissing,
  OutOfRange,
  InsufficientSamples,
  MethodMismatch,
  ParseError,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<Position> cell = std::nullopt,
        std::optional<TextLocation> location = std::nullopt)
      : std::runtime_error(message), code_(code), cell_(cell), location_(location) {}

  ErrorCode code() const noexcept { return code_; }
  const std::optional<Position>& cell() const noexcept { return cell_; }
  const std::optional<TextLocation>& location() const noexcept { return location_; }

 private:
  ErrorCode code_;
  std::optional<Position> cell_;
  std::optional<TextLocation> location_;
};

}  // namespace icr
