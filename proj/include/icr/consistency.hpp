#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "icr/completion.hpp"
#include "icr/random_index.hpp"

namespace icr {

inline constexpr double kDefaultThreshold = 0.1;

struct Verdict {
  double ci = 0.0;
  double ri_used = 0.0;
  RiSource ri_source = RiSource::Published;
  /// ci / ri_used. When ri_used is 0 (linear approximation at the spanning-tree
  /// limit) it is 0 for a consistent fill and +inf otherwise.
  double cr = 0.0;
  bool accepted = false;
  double threshold = kDefaultThreshold;
  int n = 0;
  int m = 0;
};

Verdict make_verdict(double ci, const RiLookup& ri, double threshold, int n, int m);

struct AnalyzeOptions {
  FillMethod method = FillMethod::Bounded;
  double threshold = kDefaultThreshold;
  /// The published thresholds were generated with Bounded fills; other
  /// methods are refused (MethodMismatch) unless this is set.
  bool allow_method_mismatch = false;
  std::optional<double> ri_override;
  SolverConfig solver{};
};

struct Analysis {
  CompletionResult completion;
  Verdict verdict;
  std::vector<std::string> warnings;
};

/// Optimal completion followed by CR = CI / RI(n, m) and the threshold rule.
/// Throws DisconnectedGraph, OutOfRange, MethodMismatch, InvalidArgument.
Analysis analyze(const IncompleteMatrix& matrix, const RandomIndexTable& table = RandomIndexTable::published(),
                 const AnalyzeOptions& options = {});

/// CR = CI / RI_n for a complete matrix.
Verdict classic_cr(const CompleteMatrix& matrix, const RandomIndexTable& table = RandomIndexTable::published(),
                   double threshold = kDefaultThreshold);

/// The 4x4 matrix with a12 = a23 = a34 = alpha, a14 = beta and a13, a24 missing.
IncompleteMatrix parametric_matrix(double alpha, double beta);

enum class Marking {
  Accepted,          // CI / RI(4,2) within the threshold
  AcceptedAsComplete,  // only CI / RI_4 within the threshold
  Rejected,
};

const char* to_string(Marking marking) noexcept;

struct ParametricCell {
  double alpha = 0.0;
  double beta = 0.0;
  double ci = 0.0;
  Marking marking = Marking::Rejected;
};

/// Grid alphas and betas of the reference table: alpha in {1/5..5}, beta over the whole scale.
std::vector<double> parametric_alphas();
std::vector<double> parametric_betas();

/// Bounded CI of parametric_matrix(alpha, beta) for every pair, row-major by beta.
std::vector<ParametricCell> parametric_table(std::span<const double> alphas, std::span<const double> betas,
                                             const RandomIndexTable& table = RandomIndexTable::published(),
                                             double threshold = kDefaultThreshold);

}  // namespace icr
