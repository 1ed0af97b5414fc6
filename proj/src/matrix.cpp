#include "icr/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace icr {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::BadSize: return "BadSize";
    case ErrorCode::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorCode::ReciprocityViolation: return "ReciprocityViolation";
    case ErrorCode::BadDiagonal: return "BadDiagonal";
    case ErrorCode::MissingDiagonal: return "MissingDiagonal";
    case ErrorCode::AsymmetricMissing: return "AsymmetricMissing";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NotSpanningTree: return "NotSpanningTree";
    case ErrorCode::EntryMismatch: return "EntryMismatch";
    case ErrorCode::InfeasibleMissing: return "InfeasibleMissing";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::MethodMismatch: return "MethodMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// SaatyScale

std::optional<int> SaatyScale::index_of(double x, double tol) {
  if (!(x > 0.0)) return std::nullopt;
  const auto vals = values();
  for (int k = 0; k < kSize; ++k) {
    if (std::abs(x - vals[static_cast<std::size_t>(k)]) <= tol * vals[static_cast<std::size_t>(k)]) return k;
  }
  return std::nullopt;
}

int SaatyScale::nearest_log_index(double x) {
  const double lx = std::log(x);
  const auto vals = values();
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kSize; ++k) {
    const double d = std::abs(lx - std::log(vals[static_cast<std::size_t>(k)]));
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

std::optional<std::string> SaatyScale::label(double x, double tol) {
  const auto k = index_of(x, tol);
  if (!k) return std::nullopt;
  if (*k < 8) return "1/" + std::to_string(9 - *k);
  return std::to_string(*k - 7);
}

// ---------------------------------------------------------------------------
// validation helpers

namespace {

void check_size(int n, int min_size, const ValidationOptions& options) {
  if (n < min_size || n > options.max_size) {
    throw Error(ErrorCode::BadSize, "matrix size " + std::to_string(n) + " outside [" +
                                        std::to_string(min_size) + ", " +
                                        std::to_string(options.max_size) + "]");
  }
}

std::string cell_text(int i, int j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

void check_positive(double v, int i, int j) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::NonPositiveEntry, "entry " + cell_text(i, j) + " must be a positive finite number",
                Position{i, j});
  }
}

void check_diagonal(double v, int i) {
  if (std::abs(v - 1.0) > kReciprocityTolerance) {
    throw Error(ErrorCode::BadDiagonal, "diagonal entry " + cell_text(i, i) + " must be 1", Position{i, i});
  }
}

void check_reciprocal(double aij, double aji, int i, int j, double tol) {
  if (std::abs(aij * aji - 1.0) > tol) {
    throw Error(ErrorCode::ReciprocityViolation,
                "entries " + cell_text(i, j) + " and " + cell_text(j, i) + " are not reciprocal",
                Position{i, j});
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// CompleteMatrix

CompleteMatrix assemble_complete(int n, std::vector<double> entries) {
  return CompleteMatrix(n, std::move(entries));
}

CompleteMatrix CompleteMatrix::validate(const std::vector<std::vector<double>>& raw,
                                        const ValidationOptions& options) {
  const int n = static_cast<int>(raw.size());
  for (const auto& row : raw) {
    if (static_cast<int>(row.size()) != n) throw Error(ErrorCode::NonSquare, "matrix is not square");
  }
  check_size(n, 2, options);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) check_positive(raw[i][j], i, j);
  }
  for (int i = 0; i < n; ++i) check_diagonal(raw[i][i], i);
  std::vector<double> a(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    a[static_cast<std::size_t>(i * n + i)] = 1.0;
    for (int j = i + 1; j < n; ++j) {
      check_reciprocal(raw[i][j], raw[j][i], i, j, options.reciprocity_tol);
      // Keep the upper entry as given; the mirror is its exact reciprocal.
      a[static_cast<std::size_t>(i * n + j)] = raw[i][j];
      a[static_cast<std::size_t>(j * n + i)] = raw[j][i];
    }
  }
  return CompleteMatrix(n, std::move(a));
}

CompleteMatrix CompleteMatrix::from_upper(int n, std::span<const double> upper) {
  if (n < 2) throw Error(ErrorCode::BadSize, "matrix size must be at least 2");
  if (upper.size() != static_cast<std::size_t>(n * (n - 1) / 2)) {
    throw Error(ErrorCode::InvalidArgument, "upper triangle has the wrong number of entries");
  }
  std::vector<double> a(static_cast<std::size_t>(n * n), 1.0);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++k) {
      check_positive(upper[k], i, j);
      a[static_cast<std::size_t>(i * n + j)] = upper[k];
      a[static_cast<std::size_t>(j * n + i)] = 1.0 / upper[k];
    }
  }
  return CompleteMatrix(n, std::move(a));
}

std::vector<std::vector<double>> CompleteMatrix::rows() const {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    out[static_cast<std::size_t>(i)].assign(a_.begin() + i * n_, a_.begin() + (i + 1) * n_);
  }
  return out;
}

CompleteMatrix CompleteMatrix::transposed() const {
  std::vector<double> t(a_.size());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) t[static_cast<std::size_t>(j * n_ + i)] = (*this)(i, j);
  return CompleteMatrix(n_, std::move(t));
}

CompleteMatrix CompleteMatrix::permuted(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != n_) throw Error(ErrorCode::InvalidArgument, "permutation size mismatch");
  std::vector<double> p(a_.size());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) p[static_cast<std::size_t>(i * n_ + j)] = (*this)(perm[i], perm[j]);
  return CompleteMatrix(n_, std::move(p));
}

// ---------------------------------------------------------------------------
// IncompleteMatrix

IncompleteMatrix IncompleteMatrix::validate(const std::vector<std::vector<RawEntry>>& raw,
                                            const ValidationOptions& options) {
  const int n = static_cast<int>(raw.size());
  for (const auto& row : raw) {
    if (static_cast<int>(row.size()) != n) throw Error(ErrorCode::NonSquare, "matrix is not square");
  }
  check_size(n, 3, options);
  for (int i = 0; i < n; ++i) {
    if (!raw[i][i]) {
      throw Error(ErrorCode::MissingDiagonal, "diagonal entry " + cell_text(i, i) + " cannot be missing",
                  Position{i, i});
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (raw[i][j].has_value() != raw[j][i].has_value()) {
        const Position at = raw[i][j] ? Position{j, i} : Position{i, j};
        throw Error(ErrorCode::AsymmetricMissing,
                    "entry " + cell_text(at.row, at.col) + " is missing but its mirror is known", at);
      }
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (raw[i][j]) check_positive(*raw[i][j], i, j);
  for (int i = 0; i < n; ++i) check_diagonal(*raw[i][i], i);

  IncompleteMatrix out(n);
  for (int i = 0; i < n; ++i) {
    out.values_[out.index(i, i)] = 1.0;
    out.known_[out.index(i, i)] = 1;
    for (int j = i + 1; j < n; ++j) {
      if (!raw[i][j]) {
        out.values_[out.index(i, j)] = std::numeric_limits<double>::quiet_NaN();
        out.values_[out.index(j, i)] = std::numeric_limits<double>::quiet_NaN();
        ++out.missing_;
        continue;
      }
      check_reciprocal(*raw[i][j], *raw[j][i], i, j, options.reciprocity_tol);
      out.values_[out.index(i, j)] = *raw[i][j];
      out.values_[out.index(j, i)] = *raw[j][i];
      out.known_[out.index(i, j)] = 1;
      out.known_[out.index(j, i)] = 1;
    }
  }
  return out;
}

IncompleteMatrix IncompleteMatrix::empty(int n, const ValidationOptions& options) {
  check_size(n, 3, options);
  IncompleteMatrix out(n);
  std::fill(out.values_.begin(), out.values_.end(), std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < n; ++i) {
    out.values_[out.index(i, i)] = 1.0;
    out.known_[out.index(i, i)] = 1;
  }
  out.missing_ = n * (n - 1) / 2;
  return out;
}

IncompleteMatrix IncompleteMatrix::from_complete(const CompleteMatrix& m) {
  if (m.size() < 3) throw Error(ErrorCode::BadSize, "incomplete matrices need at least 3 rows");
  IncompleteMatrix out(m.size());
  out.values_.assign(m.data().begin(), m.data().end());
  std::fill(out.known_.begin(), out.known_.end(), 1);
  return out;
}

std::optional<double> IncompleteMatrix::entry(int i, int j) const {
  if (!known(i, j)) return std::nullopt;
  return value(i, j);
}

std::vector<Position> IncompleteMatrix::missing_positions() const {
  std::vector<Position> out;
  out.reserve(static_cast<std::size_t>(missing_));
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!known(i, j)) out.push_back({i, j});
  return out;
}

IncompleteMatrix IncompleteMatrix::with_entry(int i, int j, std::optional<double> v) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j) {
    throw Error(ErrorCode::InvalidArgument, "cell " + cell_text(i, j) + " is not an off-diagonal cell");
  }
  IncompleteMatrix out = *this;
  const bool was_known = known(i, j);
  if (v) {
    check_positive(*v, i, j);
    out.values_[index(i, j)] = *v;
    out.values_[index(j, i)] = 1.0 / *v;
    out.known_[index(i, j)] = out.known_[index(j, i)] = 1;
    if (!was_known) --out.missing_;
  } else {
    out.values_[index(i, j)] = out.values_[index(j, i)] = std::numeric_limits<double>::quiet_NaN();
    out.known_[index(i, j)] = out.known_[index(j, i)] = 0;
    if (was_known) ++out.missing_;
  }
  return out;
}

CompleteMatrix IncompleteMatrix::to_complete() const {
  if (missing_ != 0) throw Error(ErrorCode::InvalidArgument, "matrix still has missing entries");
  return CompleteMatrix(n_, values_);
}

std::vector<std::vector<IncompleteMatrix::RawEntry>> IncompleteMatrix::rows() const {
  std::vector<std::vector<RawEntry>> out(static_cast<std::size_t>(n_), std::vector<RawEntry>(static_cast<std::size_t>(n_)));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[i][j] = entry(i, j);
  return out;
}

bool operator==(const IncompleteMatrix& a, const IncompleteMatrix& b) {
  if (a.n_ != b.n_ || a.known_ != b.known_) return false;
  for (std::size_t k = 0; k < a.values_.size(); ++k) {
    if (a.known_[k] && a.values_[k] != b.values_[k]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Perron eigenpair

namespace detail {

PowerOutcome power_iterate(std::span<const double> a, int n, std::span<double> w,
                           std::span<double> y, double tol, int max_iter) noexcept {
  // Below this the residual is dominated by rounding in A*w.
  const double floor = 8.0 * n * std::numeric_limits<double>::epsilon();
  const double target = std::max(tol, floor);

  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += w[i];
  for (int i = 0; i < n; ++i) w[i] /= sum;

  PowerOutcome out;
  for (int it = 1; it <= max_iter; ++it) {
    double lambda = 0.0;
    for (int i = 0; i < n; ++i) {
      const double* row = a.data() + static_cast<std::ptrdiff_t>(i) * n;
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += row[j] * w[j];
      y[i] = s;
      lambda += s;
    }
    double r = 0.0;
    for (int i = 0; i < n; ++i) r = std::max(r, std::abs(y[i] - lambda * w[i]));
    r /= lambda;
    out.lambda = lambda;
    out.residual = r;
    out.iterations = it;
    if (r <= target) {
      out.converged = true;
      return out;
    }
    if (it == max_iter) break;
    for (int i = 0; i < n; ++i) w[i] = y[i] / lambda;
  }
  return out;
}

}  // namespace detail

EigenResult perron(const CompleteMatrix& matrix, const EigenOptions& options) {
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw Error(ErrorCode::InvalidArgument, "eigen tolerance must be positive and max_iter at least 1");
  }
  const int n = matrix.size();
  EigenResult res;
  res.weights.assign(static_cast<std::size_t>(n), 1.0 / n);
  std::vector<double> scratch(static_cast<std::size_t>(n));
  const auto o = detail::power_iterate(matrix.data(), n, res.weights, scratch, options.tol, options.max_iter);
  if (!o.converged) {
    throw Error(ErrorCode::NoConvergence,
                "power iteration did not converge after " + std::to_string(o.iterations) + " iterations");
  }
  res.lambda_max = o.lambda;
  res.iterations = o.iterations;
  res.residual = o.residual;
  return res;
}

double consistency_index(double lambda_max, int n) noexcept {
  // lambda_max >= n holds exactly; clamp the round-off below it.
  return std::max(0.0, (lambda_max - n) / (n - 1));
}

double consistency_index(const CompleteMatrix& matrix, const EigenOptions& options) {
  return consistency_index(perron(matrix, options).lambda_max, matrix.size());
}

bool is_consistent(const CompleteMatrix& a, double tol) noexcept {
  const int n = a.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (std::abs(a(i, j) * a(j, k) / a(i, k) - 1.0) > tol) return false;
  return true;
}

}  // namespace icr
