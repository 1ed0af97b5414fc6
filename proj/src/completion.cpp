#include "icr/completion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/tools/toms748_solve.hpp>

#include "icr/graph.hpp"

namespace icr {

const char* to_string(FillMethod method) noexcept {
  switch (method) {
    case FillMethod::Unbounded: return "unbounded";
    case FillMethod::Bounded: return "bounded";
    case FillMethod::Discrete: return "discrete";
  }
  return "unknown";
}

std::optional<FillMethod> parse_fill_method(std::string_view text) noexcept {
  if (text == "unbounded") return FillMethod::Unbounded;
  if (text == "bounded") return FillMethod::Bounded;
  if (text == "discrete") return FillMethod::Discrete;
  return std::nullopt;
}

void SolverConfig::validate(int missing_count) const {
  const bool ok = eigen_tol > 0.0 && coordinate_tol > 0.0 && gradient_tol > 0.0 && line_search_tol > 0.0 &&
                  max_sweeps >= 1 && max_eigen_iterations >= 1 && unbounded_lower > 0.0 &&
                  unbounded_upper > unbounded_lower && exhaustive_limit >= 0;
  if (!ok) throw Error(ErrorCode::InvalidArgument, "solver configuration out of range");
  if (!sweep_order.empty()) {
    std::vector<int> sorted = sweep_order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expected(static_cast<std::size_t>(missing_count));
    std::iota(expected.begin(), expected.end(), 0);
    if (sorted != expected) throw Error(ErrorCode::InvalidArgument, "sweep_order is not a permutation of the missing coordinates");
  }
}

namespace {

// Residual target for Perron vectors used in derivatives. The sign of the
// derivative near a minimiser is only as reliable as these vectors.
constexpr double kSearchEigenTol = 1e-15;

// Relative margin below which two lambda values count as equal in the
// discrete searches.
constexpr double kTieMargin = 1e-12;

// Dense working copy of the matrix being filled (and its transpose), with
// warm-started right and left Perron vectors carried between evaluations.
class Workspace {
 public:
  Workspace(const IncompleteMatrix& m, std::vector<Position> missing, int max_iter)
      : n_(m.size()),
        missing_(std::move(missing)),
        a_(static_cast<std::size_t>(n_ * n_)),
        at_(a_.size()),
        w_(static_cast<std::size_t>(n_), 1.0),
        v_(static_cast<std::size_t>(n_), 1.0),
        scratch_(static_cast<std::size_t>(n_)),
        max_iter_(max_iter) {
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        const double x = m.known(i, j) ? m.value(i, j) : 1.0;
        a_[idx(i, j)] = x;
        at_[idx(j, i)] = x;
      }
    }
  }

  int missing() const noexcept { return static_cast<int>(missing_.size()); }

  void set(int k, double x) noexcept {
    const auto [i, j] = missing_[static_cast<std::size_t>(k)];
    a_[idx(i, j)] = at_[idx(j, i)] = x;
    a_[idx(j, i)] = at_[idx(i, j)] = 1.0 / x;
  }

  /// lambda_max from the right Perron vector only.
  double lambda(double tol) noexcept { return iterate(a_, w_, tol); }

  /// lambda_max together with the left Perron vector, enabling partial().
  double lambda_with_left(double tol) noexcept {
    const double lambda = iterate(a_, w_, tol);
    iterate(at_, v_, tol);
    vw_ = 0.0;
    for (int i = 0; i < n_; ++i) vw_ += v_[static_cast<std::size_t>(i)] * w_[static_cast<std::size_t>(i)];
    return lambda;
  }

  /// d lambda / d log(x_k) at the last lambda_with_left() point:
  /// (v_i w_j x - v_j w_i / x) / (v . w) for x = a_ij.
  double partial(int k) const noexcept {
    const auto [i, j] = missing_[static_cast<std::size_t>(k)];
    const auto iu = static_cast<std::size_t>(i), ju = static_cast<std::size_t>(j);
    return (v_[iu] * w_[ju] * a_[idx(i, j)] - v_[ju] * w_[iu] * a_[idx(j, i)]) / vw_;
  }

  bool all_converged() const noexcept { return all_converged_; }

 private:
  std::size_t idx(int i, int j) const noexcept { return static_cast<std::size_t>(i * n_ + j); }

  double iterate(const std::vector<double>& a, std::vector<double>& vec, double tol) noexcept {
    const auto o = detail::power_iterate(a, n_, vec, scratch_, tol, max_iter_);
    if (!o.converged) {
      all_converged_ = false;
      std::fill(vec.begin(), vec.end(), 1.0);
    }
    return o.lambda;
  }

  int n_;
  std::vector<Position> missing_;
  std::vector<double> a_, at_;
  std::vector<double> w_, v_;
  std::vector<double> scratch_;
  double vw_ = 1.0;
  int max_iter_;
  bool all_converged_ = true;
};

// Log-space box for every coordinate, with the exact endpoint values so a
// fill on a bound is stored as exactly 1/9 or 9.
struct Domain {
  double lo_x, hi_x;
  double lo, hi;
};

double to_value(double y, const Domain& d) noexcept {
  if (y <= d.lo) return d.lo_x;
  if (y >= d.hi) return d.hi_x;
  return std::exp(y);
}

// Minimises a convex function of t >= 0 given its derivative `slope`.
// slope(0) < 0 is assumed. The step grows geometrically from `step` until the
// slope changes sign or `t_max` is reached, then the root is polished with
// TOMS 748. Returns the minimising t.
template <class Slope>
double minimise_along(Slope&& slope, double step, double t_max, double tol) {
  double a = 0.0, fa = slope(0.0);
  if (!(fa < 0.0)) return 0.0;
  double b = std::min(step, t_max), fb = slope(b);
  while (fb < 0.0) {
    if (b >= t_max) return t_max;
    a = b;
    fa = fb;
    b = std::min(2.0 * b, t_max);
    fb = slope(b);
  }
  if (fb == 0.0) return b;
  std::uintmax_t iters = 100;
  const auto r = boost::math::tools::toms748_solve(
      slope, a, b, fa, fb, [tol](double lo, double hi) { return hi - lo <= tol; }, iters);
  return 0.5 * (r.first + r.second);
}

struct ContinuousOutcome {
  std::vector<double> x;
  int sweeps = 0;
  bool converged = false;
};

// Cyclic coordinate descent on lambda_max over log-fills. lambda_max is convex
// in the log-fills of a connected instance, so every one-dimensional
// subproblem has a single minimiser, located as the root of its derivative.
// After each sweep a line search along the sweep's net displacement speeds up
// progress along narrow valleys.
class CoordinateDescent {
 public:
  CoordinateDescent(Workspace& ws, const Domain& d, const SolverConfig& cfg)
      : ws_(ws), d_(d), cfg_(cfg), m_(ws.missing()), y_(static_cast<std::size_t>(m_), 0.0) {}

  ContinuousOutcome run() {
    for (int k = 0; k < m_; ++k) ws_.set(k, 1.0);
    std::vector<int> order = cfg_.sweep_order;
    if (order.empty()) {
      order.resize(static_cast<std::size_t>(m_));
      std::iota(order.begin(), order.end(), 0);
    }
    std::vector<double> last_step(static_cast<std::size_t>(m_), -1.0);
    std::vector<double> start(y_.size()), dir(y_.size());

    ContinuousOutcome out;
    double current = ws_.lambda_with_left(kSearchEigenTol);
    for (int sweep = 1; sweep <= cfg_.max_sweeps; ++sweep) {
      const double before = current;
      start = y_;
      for (int k : order) {
        const auto ku = static_cast<std::size_t>(k);
        const double y0 = y_[ku];
        coordinate_step(k, last_step[ku] < 0.0 ? 1.0 : std::max(4.0 * last_step[ku], 1e-6));
        last_step[ku] = std::abs(y_[ku] - y0);
      }
      if (m_ > 1) {
        for (std::size_t k = 0; k < y_.size(); ++k) dir[k] = y_[k] - start[k];
        pattern_step(dir);
      }
      current = ws_.lambda_with_left(kSearchEigenTol);
      out.sweeps = sweep;
      const double decrease = (before - current) / before;
      if (decrease < cfg_.coordinate_tol && projected_gradient() < cfg_.gradient_tol * current) {
        out.converged = true;
        break;
      }
    }
    out.x.resize(y_.size());
    for (std::size_t k = 0; k < y_.size(); ++k) out.x[k] = to_value(y_[k], d_);
    return out;
  }

 private:
  void place(int k, double y) {
    y_[static_cast<std::size_t>(k)] = y;
    ws_.set(k, to_value(y, d_));
  }

  double slope_at(int k, double y) {
    place(k, y);
    ws_.lambda_with_left(kSearchEigenTol);
    return ws_.partial(k);
  }

  void coordinate_step(int k, double step) {
    const double y0 = y_[static_cast<std::size_t>(k)];
    const double g0 = slope_at(k, y0);
    double t = 0.0;
    if (g0 < 0.0) {
      t = minimise_along([&](double s) { return s == 0.0 ? g0 : slope_at(k, y0 + s); }, step, d_.hi - y0,
                         cfg_.line_search_tol);
      place(k, t >= d_.hi - y0 ? d_.hi : y0 + t);
    } else if (g0 > 0.0) {
      t = minimise_along([&](double s) { return s == 0.0 ? -g0 : -slope_at(k, y0 - s); }, step, y0 - d_.lo,
                         cfg_.line_search_tol);
      place(k, t >= y0 - d_.lo ? d_.lo : y0 - t);
    } else {
      place(k, y0);
    }
  }

  void pattern_step(const std::vector<double>& dir) {
    double t_max = 64.0, norm = 0.0;
    for (std::size_t k = 0; k < y_.size(); ++k) {
      norm = std::max(norm, std::abs(dir[k]));
      if (dir[k] > 0.0) t_max = std::min(t_max, (d_.hi - y_[k]) / dir[k]);
      if (dir[k] < 0.0) t_max = std::min(t_max, (d_.lo - y_[k]) / dir[k]);
    }
    if (norm == 0.0 || t_max <= 0.0) return;
    const std::vector<double> base = y_;
    auto move_to = [&](double t) {
      for (int k = 0; k < m_; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        place(k, std::clamp(base[ku] + t * dir[ku], d_.lo, d_.hi));
      }
    };
    auto slope = [&](double t) {
      move_to(t);
      ws_.lambda_with_left(kSearchEigenTol);
      double s = 0.0;
      for (int k = 0; k < m_; ++k) s += dir[static_cast<std::size_t>(k)] * ws_.partial(k);
      return s;
    };
    move_to(minimise_along(slope, std::min(1.0, t_max), t_max, cfg_.line_search_tol / norm));
  }

  // Largest derivative component that is not blocked by an active bound.
  double projected_gradient() const {
    double g = 0.0;
    for (int k = 0; k < m_; ++k) {
      const double p = ws_.partial(k);
      const double y = y_[static_cast<std::size_t>(k)];
      if ((y <= d_.lo && p > 0.0) || (y >= d_.hi && p < 0.0)) continue;
      g = std::max(g, std::abs(p));
    }
    return g;
  }

  Workspace& ws_;
  Domain d_;
  const SolverConfig& cfg_;
  int m_;
  std::vector<double> y_;
};

ContinuousOutcome coordinate_descent(Workspace& ws, const Domain& d, const SolverConfig& cfg) {
  return CoordinateDescent(ws, d, cfg).run();
}

// Enumerates the scale^m grid in lexicographic order of the fill vector.
std::vector<int> exhaustive_discrete(Workspace& ws, double eigen_tol) {
  const int m = ws.missing();
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  std::vector<int> best_idx = idx;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) ws.set(k, SaatyScale::value(0));
  while (true) {
    const double lambda = ws.lambda(eigen_tol);
    if (lambda < best * (1.0 - kTieMargin)) {
      best = lambda;
      best_idx = idx;
    }
    int k = m - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == SaatyScale::kSize - 1) {
      idx[static_cast<std::size_t>(k)] = 0;
      ws.set(k, SaatyScale::value(0));
      --k;
    }
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    ws.set(k, SaatyScale::value(idx[static_cast<std::size_t>(k)]));
  }
  return best_idx;
}

// Steepest single-coordinate moves to neighbouring scale elements until none
// lowers lambda. Ties go to the lowest coordinate, downward move first.
std::vector<int> greedy_discrete(Workspace& ws, std::vector<int> idx, double eigen_tol, int& passes) {
  const int m = ws.missing();
  for (int k = 0; k < m; ++k) ws.set(k, SaatyScale::value(idx[static_cast<std::size_t>(k)]));
  double current = ws.lambda(eigen_tol);
  passes = 0;
  while (true) {
    ++passes;
    int best_k = -1, best_to = -1;
    double best = current;
    for (int k = 0; k < m; ++k) {
      const int from = idx[static_cast<std::size_t>(k)];
      for (int to : {from - 1, from + 1}) {
        if (to < 0 || to >= SaatyScale::kSize) continue;
        ws.set(k, SaatyScale::value(to));
        const double lambda = ws.lambda(eigen_tol);
        if (lambda < best * (1.0 - kTieMargin)) {
          best = lambda;
          best_k = k;
          best_to = to;
        }
      }
      ws.set(k, SaatyScale::value(from));
    }
    if (best_k < 0) break;
    idx[static_cast<std::size_t>(best_k)] = best_to;
    ws.set(best_k, SaatyScale::value(best_to));
    current = best;
  }
  return idx;
}

CompletionResult finish(const IncompleteMatrix& matrix, const std::vector<Position>& missing,
                        const std::vector<double>& x, const SolverConfig& cfg) {
  const int n = matrix.size();
  std::vector<double> a(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a[static_cast<std::size_t>(i * n + j)] = matrix.known(i, j) ? matrix.value(i, j) : 0.0;
  CompletionResult res{assemble_complete(n, {}), 0.0, 0.0, {}, 0, true, false};
  for (std::size_t k = 0; k < missing.size(); ++k) {
    const auto [i, j] = missing[k];
    a[static_cast<std::size_t>(i * n + j)] = x[k];
    a[static_cast<std::size_t>(j * n + i)] = 1.0 / x[k];
    res.fills.push_back({missing[k], x[k]});
  }
  res.filled = assemble_complete(n, std::move(a));

  std::vector<double> w(static_cast<std::size_t>(n), 1.0), scratch(static_cast<std::size_t>(n));
  const auto o = detail::power_iterate(res.filled.data(), n, w, scratch, cfg.eigen_tol, cfg.max_eigen_iterations);
  res.lambda_max = o.lambda;
  res.ci = consistency_index(o.lambda, n);
  res.converged = o.converged;
  return res;
}

}  // namespace

CompletionResult complete(const IncompleteMatrix& matrix, FillMethod method, const SolverConfig& cfg) {
  const int m = matrix.missing_count();
  cfg.validate(m);
  if (!is_connected(build_graph(matrix))) {
    throw Error(ErrorCode::DisconnectedGraph,
                "comparison graph is disconnected; the optimal completion is not unique");
  }
  const auto missing = matrix.missing_positions();
  if (m == 0) return finish(matrix, missing, {}, cfg);

  Workspace ws(matrix, missing, cfg.max_eigen_iterations);
  const Domain bounded{SaatyScale::kLowerBound, SaatyScale::kUpperBound, std::log(SaatyScale::kLowerBound),
                       std::log(SaatyScale::kUpperBound)};

  if (method == FillMethod::Unbounded || method == FillMethod::Bounded) {
    const Domain d = method == FillMethod::Bounded
                         ? bounded
                         : Domain{cfg.unbounded_lower, cfg.unbounded_upper, std::log(cfg.unbounded_lower),
                                  std::log(cfg.unbounded_upper)};
    const auto cd = coordinate_descent(ws, d, cfg);
    auto res = finish(matrix, missing, cd.x, cfg);
    res.sweeps_used = cd.sweeps;
    res.converged = res.converged && cd.converged && ws.all_converged();
    return res;
  }

  std::vector<int> idx;
  int sweeps = 0;
  bool heuristic = false;
  bool converged = true;
  if (m <= cfg.exhaustive_limit) {
    idx = exhaustive_discrete(ws, cfg.eigen_tol);
  } else {
    const auto cd = coordinate_descent(ws, bounded, cfg);
    converged = cd.converged;
    idx.resize(cd.x.size());
    std::transform(cd.x.begin(), cd.x.end(), idx.begin(), [](double v) { return SaatyScale::nearest_log_index(v); });
    int passes = 0;
    idx = greedy_discrete(ws, std::move(idx), cfg.eigen_tol, passes);
    sweeps = cd.sweeps + passes;
    heuristic = true;
  }
  std::vector<double> x(idx.size());
  std::transform(idx.begin(), idx.end(), x.begin(), [](int k) { return SaatyScale::value(k); });
  auto res = finish(matrix, missing, x, cfg);
  res.sweeps_used = sweeps;
  res.heuristic = heuristic;
  res.converged = res.converged && converged && ws.all_converged();
  return res;
}

CompleteMatrix spanning_tree_fill(const IncompleteMatrix& matrix) {
  const auto graph = build_graph(matrix);
  if (!is_spanning_tree(graph)) {
    throw Error(ErrorCode::NotSpanningTree, "comparison graph is not a spanning tree");
  }
  const int n = matrix.size();
  std::vector<double> a(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (matrix.known(i, j)) {
        a[static_cast<std::size_t>(i * n + j)] = matrix.value(i, j);
      } else if (i < j) {
        const auto path = tree_path(graph, i, j);
        double product = 1.0;
        for (std::size_t s = 0; s + 1 < path.size(); ++s) product *= matrix.value(path[s], path[s + 1]);
        a[static_cast<std::size_t>(i * n + j)] = product;
        a[static_cast<std::size_t>(j * n + i)] = 1.0 / product;
      }
    }
  }
  return assemble_complete(n, std::move(a));
}

bool best_completion_bound(const IncompleteMatrix& matrix, const CompleteMatrix& candidate, const SolverConfig& cfg) {
  const int n = matrix.size();
  if (candidate.size() != n) throw Error(ErrorCode::EntryMismatch, "candidate has a different size");
  bool within_bounds = true;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (matrix.known(i, j)) {
        if (std::abs(candidate(i, j) - matrix.value(i, j)) > 1e-12 * matrix.value(i, j)) {
          throw Error(ErrorCode::EntryMismatch, "candidate disagrees with a known entry", Position{i, j});
        }
      } else {
        const double v = candidate(i, j);
        const double slack = 1e-12;
        within_bounds = within_bounds && v >= SaatyScale::kLowerBound * (1 - slack) &&
                        v <= SaatyScale::kUpperBound * (1 + slack);
      }
    }
  }
  const auto best = complete(matrix, within_bounds ? FillMethod::Bounded : FillMethod::Unbounded, cfg);
  return best.lambda_max <= perron(candidate, {cfg.eigen_tol, cfg.max_eigen_iterations}).lambda_max + 1e-8;
}

}  // namespace icr
