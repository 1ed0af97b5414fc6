#include "icr/random_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "icr/graph.hpp"

namespace icr {

const char* to_string(RiSource source) noexcept {
  switch (source) {
    case RiSource::Published: return "published";
    case RiSource::Simulated: return "simulated";
    case RiSource::Approximated: return "approximated";
    case RiSource::Override: return "override";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Reference table

const RandomIndexTable& RandomIndexTable::published() {
  static const RandomIndexTable table = [] {
    RandomIndexTable t;
    auto put = [&t](int n, int m, double ri) { t.insert(n, m, {ri, 0, 0.0, RiSource::Published}); };
    // Complete matrices, n = 4..10.
    const double complete[] = {0.884, 1.109, 1.249, 1.341, 1.404, 1.451, 1.486};
    for (int n = 4; n <= 10; ++n) put(n, 0, complete[n - 4]);
    // Incomplete matrices, m >= 1.
    const double n4[] = {0.583, 0.356, 0.053};
    const double n5[] = {0.925, 0.739, 0.557, 0.379, 0.212, 0.059};
    const double n6[] = {1.128, 1.007, 0.883, 0.758, 0.634, 0.510, 0.389, 0.271, 0.161};
    for (int m = 1; m <= 3; ++m) put(4, m, n4[m - 1]);
    for (int m = 1; m <= 6; ++m) put(5, m, n5[m - 1]);
    for (int m = 1; m <= 9; ++m) put(6, m, n6[m - 1]);
    put(7, 1, 1.256);
    // Directly computed cells for larger matrices.
    put(7, 4, 0.998);
    put(8, 5, 1.088);
    put(9, 6, 1.158);
    put(10, 7, 1.215);
    return t;
  }();
  return table;
}

void RandomIndexTable::insert(int n, int m, const RiEntry& entry) {
  if (entry.ri < 0.0) throw Error(ErrorCode::InvalidArgument, "random index cannot be negative");
  entries_[{n, m}] = entry;
}

std::optional<RiEntry> RandomIndexTable::find(int n, int m) const {
  const auto it = entries_.find({n, m});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

namespace {

void check_range(int n, int m) {
  if (n < 4 || n > kDefaultMaxSize) {
    throw Error(ErrorCode::OutOfRange, "random index is defined for 4 <= n <= " + std::to_string(kDefaultMaxSize));
  }
  if (m < 0 || m > max_missing_for_connectivity(n)) {
    throw Error(ErrorCode::OutOfRange, "m = " + std::to_string(m) + " leaves no connected comparison graph for n = " +
                                           std::to_string(n) + " (at most " +
                                           std::to_string(max_missing_for_connectivity(n)) + ")");
  }
}

}  // namespace

double approximate_ri(int n, int m, double ri_complete) {
  check_range(n, m);
  return (1.0 - 2.0 * m / ((n - 1.0) * (n - 2.0))) * ri_complete;
}

RiLookup lookup_ri(int n, int m, const RandomIndexTable& table) {
  check_range(n, m);
  if (const auto e = table.find(n, m)) return {e->ri, e->source};
  const auto complete = table.find(n, 0);
  if (!complete) {
    throw Error(ErrorCode::OutOfRange, "no random index available for n = " + std::to_string(n) +
                                           "; estimate one with a simulation");
  }
  return {approximate_ri(n, m, complete->ri), RiSource::Approximated};
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

SampleRng::SampleRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : state_(mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL))) {}

SampleRng::result_type SampleRng::operator()() noexcept {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

std::uint64_t SampleRng::below(std::uint64_t bound) noexcept {
  // Reject the top sliver that would make the modulo uneven.
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t r;
  do {
    r = (*this)();
  } while (r >= limit);
  return r % bound;
}

IncompleteMatrix generate_random_incomplete(int n, int m, SampleRng& rng) {
  const int slots = n * (n - 1) / 2;
  if (n < 4 || n > kDefaultMaxSize || m < 0 || m > slots) {
    throw Error(ErrorCode::BadSize, "invalid dimensions n = " + std::to_string(n) + ", m = " + std::to_string(m));
  }
  std::vector<double> upper(static_cast<std::size_t>(slots));
  for (auto& u : upper) u = SaatyScale::value(static_cast<int>(rng.below(SaatyScale::kSize)));

  // Partial Fisher-Yates: the first m slots of `order` are the missing ones.
  std::vector<int> order(static_cast<std::size_t>(slots));
  std::iota(order.begin(), order.end(), 0);
  for (int k = 0; k < m; ++k) {
    const auto pick = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(slots - k)));
    std::swap(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(pick)]);
  }
  std::vector<char> missing(static_cast<std::size_t>(slots), 0);
  for (int k = 0; k < m; ++k) missing[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 1;

  using Raw = IncompleteMatrix::RawEntry;
  std::vector<std::vector<Raw>> raw(static_cast<std::size_t>(n), std::vector<Raw>(static_cast<std::size_t>(n)));
  std::size_t s = 0;
  for (int i = 0; i < n; ++i) {
    raw[i][i] = 1.0;
    for (int j = i + 1; j < n; ++j, ++s) {
      if (missing[s]) continue;
      raw[i][j] = upper[s];
      raw[j][i] = 1.0 / upper[s];
    }
  }
  return IncompleteMatrix::validate(raw);
}

namespace {

// Outcome of one attempt: CI when the graph was connected.
struct Attempt {
  double ci = 0.0;
  bool kept = false;
  bool converged = true;
};

Attempt run_attempt(const SimulationSpec& spec, std::uint64_t index) {
  SampleRng rng(spec.seed, index);
  const auto matrix = generate_random_incomplete(spec.n, spec.m, rng);
  if (!is_connected(build_graph(matrix))) return {};
  const auto res = complete(matrix, FillMethod::Bounded, spec.solver);
  return {res.ci, true, res.converged};
}

}  // namespace

SimulationResult estimate_ri(const SimulationSpec& spec) {
  if (spec.n < 4 || spec.n > kDefaultMaxSize) {
    throw Error(ErrorCode::BadSize, "simulation needs 4 <= n <= " + std::to_string(kDefaultMaxSize));
  }
  if (spec.m < 0 || spec.m > max_missing_for_connectivity(spec.n)) {
    throw Error(ErrorCode::InfeasibleMissing,
                "no connected comparison graph exists with n = " + std::to_string(spec.n) +
                    " and m = " + std::to_string(spec.m));
  }
  if (spec.target_samples < 1 || spec.jobs < 1) {
    throw Error(ErrorCode::InvalidArgument, "target_samples and jobs must be positive");
  }
  spec.solver.validate(spec.m);

  // Attempts are evaluated block by block (in parallel within a block) and
  // consumed strictly in index order, so the kept set and the summation order
  // are the same for every worker count.
  constexpr std::uint64_t kBlock = 2048;
  std::vector<Attempt> block(kBlock);
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(spec.target_samples));

  SimulationResult out;
  out.n = spec.n;
  out.m = spec.m;
  out.seed = spec.seed;
  std::uint64_t base = 0;
  while (static_cast<std::int64_t>(samples.size()) < spec.target_samples) {
    const int jobs = spec.jobs;
    auto work = [&](int worker) {
      for (std::uint64_t k = static_cast<std::uint64_t>(worker); k < kBlock; k += static_cast<std::uint64_t>(jobs)) {
        block[k] = run_attempt(spec, base + k);
      }
    };
    if (jobs == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(static_cast<std::size_t>(jobs));
      for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    }
    for (const auto& a : block) {
      if (static_cast<std::int64_t>(samples.size()) == spec.target_samples) break;
      if (!a.kept) {
        ++out.samples_rejected;
        continue;
      }
      samples.push_back(a.ci);
      if (!a.converged) ++out.samples_unconverged;
    }
    base += kBlock;
    if (spec.progress) spec.progress(static_cast<std::int64_t>(samples.size()), spec.target_samples);
  }

  const double count = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double c : samples) sum += c;
  const double mean = sum / count;
  double ss = 0.0;
  for (double c : samples) ss += (c - mean) * (c - mean);
  const double sd = samples.size() > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;

  out.ri = mean;
  out.std_error = sd / std::sqrt(count);
  out.samples_kept = static_cast<std::int64_t>(samples.size());
  if (spec.keep_samples) out.ci_samples = std::move(samples);
  return out;
}

}  // namespace icr
