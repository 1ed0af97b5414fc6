#include "icr/consistency.hpp"

#include <cmath>
#include <limits>

namespace icr {

namespace {

void check_threshold(double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "threshold must lie in (0, 1]");
  }
}

}  // namespace

Verdict make_verdict(double ci, const RiLookup& ri, double threshold, int n, int m) {
  check_threshold(threshold);
  Verdict v;
  v.ci = ci;
  v.ri_used = ri.ri;
  v.ri_source = ri.source;
  v.threshold = threshold;
  v.n = n;
  v.m = m;
  if (ri.ri > 0.0) {
    v.cr = ci / ri.ri;
  } else {
    v.cr = ci <= 1e-9 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  v.accepted = v.cr <= threshold;
  return v;
}

Analysis analyze(const IncompleteMatrix& matrix, const RandomIndexTable& table, const AnalyzeOptions& options) {
  check_threshold(options.threshold);
  if (options.method != FillMethod::Bounded && !options.allow_method_mismatch) {
    throw Error(ErrorCode::MethodMismatch, std::string("the random index thresholds were generated with bounded fills; ") +
                                               to_string(options.method) + " fills need an explicit override");
  }
  if (options.ri_override && !(*options.ri_override > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "random index override must be positive");
  }
  const int n = matrix.size();
  const int m = matrix.missing_count();
  // Look the threshold up first so an unsupported (n, m) fails before solving.
  const RiLookup ri = options.ri_override ? RiLookup{*options.ri_override, RiSource::Override} : lookup_ri(n, m, table);

  Analysis out{complete(matrix, options.method, options.solver), {}, {}};
  out.verdict = make_verdict(out.completion.ci, ri, options.threshold, n, m);

  if (options.method != FillMethod::Bounded) {
    out.warnings.push_back(std::string("CI from ") + to_string(options.method) +
                           " fills compared against thresholds generated with bounded fills");
  }
  if (ri.source == RiSource::Approximated) {
    out.warnings.push_back("random index approximated by the linear formula in m; it slightly underestimates");
  }
  if (ri.ri <= 0.0) out.warnings.push_back("random index is 0; only a consistent fill is accepted");
  if (!out.completion.converged) out.warnings.push_back("completion did not converge; best iterate reported");
  if (out.completion.heuristic) out.warnings.push_back("discrete fills found by local search, not enumeration");
  return out;
}

Verdict classic_cr(const CompleteMatrix& matrix, const RandomIndexTable& table, double threshold) {
  const int n = matrix.size();
  const auto entry = table.find(n, 0);
  if (!entry) throw Error(ErrorCode::OutOfRange, "no random index for complete matrices of size " + std::to_string(n));
  return make_verdict(consistency_index(matrix), {entry->ri, entry->source}, threshold, n, 0);
}

IncompleteMatrix parametric_matrix(double alpha, double beta) {
  using Raw = IncompleteMatrix::RawEntry;
  const Raw s{};
  const std::vector<std::vector<Raw>> raw = {
      {1.0, alpha, s, beta},
      {1.0 / alpha, 1.0, alpha, s},
      {s, 1.0 / alpha, 1.0, alpha},
      {1.0 / beta, s, 1.0 / alpha, 1.0},
  };
  return IncompleteMatrix::validate(raw);
}

const char* to_string(Marking marking) noexcept {
  switch (marking) {
    case Marking::Accepted: return "accepted";
    case Marking::AcceptedAsComplete: return "accepted-as-complete";
    case Marking::Rejected: return "rejected";
  }
  return "unknown";
}

std::vector<double> parametric_alphas() { return {1.0 / 5, 1.0 / 4, 1.0 / 3, 1.0 / 2, 1.0, 2.0, 3.0, 4.0, 5.0}; }

std::vector<double> parametric_betas() {
  const auto v = SaatyScale::values();
  return {v.begin(), v.end()};
}

std::vector<ParametricCell> parametric_table(std::span<const double> alphas, std::span<const double> betas,
                                             const RandomIndexTable& table, double threshold) {
  const auto incomplete_ri = lookup_ri(4, 2, table);
  const auto complete_ri = lookup_ri(4, 0, table);
  std::vector<ParametricCell> out;
  out.reserve(alphas.size() * betas.size());
  for (double beta : betas) {
    for (double alpha : alphas) {
      const double ci = complete(parametric_matrix(alpha, beta), FillMethod::Bounded).ci;
      Marking mark = Marking::Rejected;
      if (make_verdict(ci, incomplete_ri, threshold, 4, 2).accepted) {
        mark = Marking::Accepted;
      } else if (make_verdict(ci, complete_ri, threshold, 4, 0).accepted) {
        mark = Marking::AcceptedAsComplete;
      }
      out.push_back({alpha, beta, ci, mark});
    }
  }
  return out;
}

}  // namespace icr
