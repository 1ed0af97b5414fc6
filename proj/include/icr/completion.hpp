#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "icr/matrix.hpp"

namespace icr {

/// How missing entries may be filled.
///   Unbounded - any positive real.
///   Bounded   - reals in [1/9, 9].
///   Discrete  - elements of the Saaty scale.
enum class FillMethod { Unbounded, Bounded, Discrete };

const char* to_string(FillMethod method) noexcept;
std::optional<FillMethod> parse_fill_method(std::string_view text) noexcept;

struct SolverConfig {
  /// Residual tolerance of the eigenpair reported for the filled matrix.
  double eigen_tol = 1e-10;
  /// Stop when a sweep lowers lambda_max by less than this, relatively...
  double coordinate_tol = 1e-9;
  /// ...and no free coordinate has |d lambda / d log x| above gradient_tol * lambda.
  double gradient_tol = 1e-10;
  /// Final root bracket width of each one-dimensional search, in log space.
  double line_search_tol = 1e-10;
  int max_sweeps = 200;
  /// Search box for Unbounded fills.
  double unbounded_lower = 1e-8;
  double unbounded_upper = 1e8;
  int max_eigen_iterations = 10000;
  /// Discrete fills are searched exhaustively up to this many missing pairs.
  int exhaustive_limit = 4;
  /// Optional permutation of missing-coordinate indices giving the visiting
  /// order within a sweep. Empty means row-major order.
  std::vector<int> sweep_order;

  /// Throws InvalidArgument when a field is out of range.
  void validate(int missing_count) const;
};

struct Fill {
  Position position;  // above the diagonal
  double value = 0.0;

  friend bool operator==(const Fill&, const Fill&) = default;
};

struct CompletionResult {
  CompleteMatrix filled;
  double lambda_max = 0.0;
  double ci = 0.0;
  std::vector<Fill> fills;  // row-major order of the missing positions
  int sweeps_used = 0;
  bool converged = false;
  /// Discrete fills found by local search rather than enumeration; `converged`
  /// then only certifies a local optimum.
  bool heuristic = false;
};

/// Fills the missing entries so that lambda_max of the completed matrix is
/// minimal over the method's domain. The comparison graph must be connected.
CompletionResult complete(const IncompleteMatrix& matrix, FillMethod method, const SolverConfig& config = {});

/// The unique consistent completion of a matrix whose graph is a spanning tree:
/// each missing a_ij is the product of known entries along the tree path i -> j.
CompleteMatrix spanning_tree_fill(const IncompleteMatrix& matrix);

/// Checks lambda_max(optimal completion) <= lambda_max(candidate) + 1e-8 for a
/// candidate that agrees with `matrix` on every known entry. The Bounded
/// optimum is used when all candidate fills lie in [1/9, 9], the Unbounded
/// optimum otherwise. Throws EntryMismatch.
bool best_completion_bound(const IncompleteMatrix& matrix, const CompleteMatrix& candidate,
                           const SolverConfig& config = {});

}  // namespace icr
