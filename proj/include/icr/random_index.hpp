#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "icr/completion.hpp"
#include "icr/matrix.hpp"

namespace icr {

enum class RiSource { Published, Simulated, Approximated, Override };

const char* to_string(RiSource source) noexcept;

struct RiEntry {
  double ri = 0.0;
  std::int64_t samples = 0;  // 0 when unknown (published values)
  double std_error = 0.0;
  RiSource source = RiSource::Published;
};

/// Random index per (n, m). `published()` carries the reference values for
/// complete matrices (n = 4..10), the incomplete-matrix values for n = 4..7
/// and the four larger (n, m) cells that were computed directly.
class RandomIndexTable {
 public:
  static const RandomIndexTable& published();

  /// Adds or replaces a cell.
  void insert(int n, int m, const RiEntry& entry);
  std::optional<RiEntry> find(int n, int m) const;
  const std::map<std::pair<int, int>, RiEntry>& entries() const noexcept { return entries_; }

 private:
  std::map<std::pair<int, int>, RiEntry> entries_;
};

struct RiLookup {
  double ri = 0.0;
  RiSource source = RiSource::Published;
};

/// Table value when present, otherwise the linear approximation from the
/// table's m = 0 value. Throws OutOfRange when n < 4, n > 15, m is outside
/// [0, (n-1)(n-2)/2], or no m = 0 value exists for n.
RiLookup lookup_ri(int n, int m, const RandomIndexTable& table = RandomIndexTable::published());

/// [1 - 2m / ((n-1)(n-2))] * ri_complete.
double approximate_ri(int n, int m, double ri_complete);

/// Counter-based random stream: the output depends only on (seed, stream),
/// never on which thread draws it or in which order streams are created.
class SampleRng {
 public:
  using result_type = std::uint64_t;

  SampleRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

  /// Uniform integer in [0, bound), bound > 0, without modulo bias.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::uint64_t state_;
};

/// Random incomplete matrix: upper entries uniform on the Saaty scale, then m
/// upper positions chosen uniformly without replacement are blanked.
IncompleteMatrix generate_random_incomplete(int n, int m, SampleRng& rng);

inline constexpr std::uint64_t kDefaultSeed = 20210521;

struct SimulationSpec {
  int n = 4;
  int m = 0;
  std::int64_t target_samples = 100000;
  std::uint64_t seed = kDefaultSeed;
  SolverConfig solver{};
  /// Worker threads; the result does not depend on it.
  int jobs = 1;
  bool keep_samples = false;
  /// Called from the calling thread after each block with (kept, target).
  std::function<void(std::int64_t, std::int64_t)> progress{};
};

struct SimulationResult {
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
  double ri = 0.0;
  double std_error = 0.0;
  std::int64_t samples_kept = 0;
  std::int64_t samples_rejected = 0;
  /// Kept samples whose completion reported converged = false.
  std::int64_t samples_unconverged = 0;
  /// Per-sample CI in draw order when keep_samples was set.
  std::vector<double> ci_samples;
};

/// Draws matrices from stream (seed, attempt index), discards those with a
/// disconnected graph, fills the rest with Bounded completion and averages
/// their CI over the first `target_samples` kept attempts. Throws
/// InfeasibleMissing when m > (n-1)(n-2)/2.
SimulationResult estimate_ri(const SimulationSpec& spec);

struct TTestResult {
  double t = 0.0;
  double p_value = 1.0;
  double dof = 0.0;
};

/// Welch two-sample t-test on the CI samples, two-sided. Works from
/// (ri, std_error, samples_kept), which is exact for the stored samples.
/// Throws InsufficientSamples when either side has fewer than 2 samples.
TTestResult compare_configurations(const SimulationResult& a, const SimulationResult& b);

}  // namespace icr
