#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "icr/error.hpp"

namespace icr {

/// Largest matrix size accepted by validation unless overridden.
inline constexpr int kDefaultMaxSize = 15;

/// Relative tolerance on a_ij * a_ji == 1 when validating user input.
inline constexpr double kReciprocityTolerance = 1e-9;

/// The 17-element discrete ratio scale {1/9, ..., 1/2, 1, 2, ..., 9}.
class SaatyScale {
 public:
  static constexpr int kSize = 17;
  static constexpr double kLowerBound = 1.0 / 9.0;
  static constexpr double kUpperBound = 9.0;

  /// Elements in increasing order; index 8 is 1.
  static constexpr std::array<double, kSize> values() {
    return {1.0 / 9, 1.0 / 8, 1.0 / 7, 1.0 / 6, 1.0 / 5, 1.0 / 4, 1.0 / 3, 1.0 / 2, 1.0,
            2.0,     3.0,     4.0,     5.0,     6.0,     7.0,     8.0,     9.0};
  }
  static constexpr double value(int index) { return values()[static_cast<std::size_t>(index)]; }

  /// Index of the scale element equal to `x` within relative `tol`, if any.
  static std::optional<int> index_of(double x, double tol = 1e-12);
  static bool contains(double x, double tol = 1e-12) { return index_of(x, tol).has_value(); }

  /// Index of the element closest to `x` in log distance. Ties go to the smaller element.
  static int nearest_log_index(double x);

  /// "1/4", "7", ... when `x` is a scale element within `tol`.
  static std::optional<std::string> label(double x, double tol = 1e-12);
};

struct ValidationOptions {
  int max_size = kDefaultMaxSize;
  double reciprocity_tol = kReciprocityTolerance;
};

/// Fully specified positive reciprocal matrix with unit diagonal.
class CompleteMatrix {
 public:
  /// Checks squareness, size, positivity, unit diagonal and reciprocity.
  static CompleteMatrix validate(const std::vector<std::vector<double>>& raw,
                                 const ValidationOptions& options = {});

  /// Builds from the strict upper triangle (row-major, n(n-1)/2 values); the
  /// lower triangle is set to exact reciprocals.
  static CompleteMatrix from_upper(int n, std::span<const double> upper);

  int size() const noexcept { return n_; }
  double operator()(int i, int j) const noexcept { return a_[static_cast<std::size_t>(i * n_ + j)]; }
  std::span<const double> data() const noexcept { return a_; }
  std::vector<std::vector<double>> rows() const;

  CompleteMatrix transposed() const;
  /// Applies the same permutation to rows and columns: result(i,j) = a(p[i], p[j]).
  CompleteMatrix permuted(std::span<const int> perm) const;

  friend bool operator==(const CompleteMatrix&, const CompleteMatrix&) = default;

 private:
  CompleteMatrix(int n, std::vector<double> a) : n_(n), a_(std::move(a)) {}
  friend class IncompleteMatrix;
  friend CompleteMatrix assemble_complete(int, std::vector<double>);

  int n_ = 0;
  std::vector<double> a_;
};

/// Wraps an already reciprocal row-major buffer without re-validation.
/// Callers guarantee a unit diagonal and exact reciprocity.
CompleteMatrix assemble_complete(int n, std::vector<double> entries);

/// Pairwise comparison matrix in which symmetric pairs of entries may be missing.
class IncompleteMatrix {
 public:
  using RawEntry = std::optional<double>;

  static IncompleteMatrix validate(const std::vector<std::vector<RawEntry>>& raw,
                                   const ValidationOptions& options = {});

  /// All off-diagonal entries missing.
  static IncompleteMatrix empty(int n, const ValidationOptions& options = {});
  static IncompleteMatrix from_complete(const CompleteMatrix& m);

  int size() const noexcept { return n_; }
  bool known(int i, int j) const noexcept { return known_[index(i, j)] != 0; }
  /// Value of a known entry; NaN for a missing one.
  double value(int i, int j) const noexcept { return values_[index(i, j)]; }
  std::optional<double> entry(int i, int j) const;

  /// Number of missing entries above the diagonal.
  int missing_count() const noexcept { return missing_; }
  /// Missing positions above the diagonal in row-major order.
  std::vector<Position> missing_positions() const;

  /// Returns a copy with (i,j) set to `value` and (j,i) to its reciprocal, or
  /// both cleared when `value` is empty. Requires i != j.
  IncompleteMatrix with_entry(int i, int j, std::optional<double> value) const;

  /// Converts a matrix with no missing entries.
  CompleteMatrix to_complete() const;

  std::vector<std::vector<RawEntry>> rows() const;

  friend bool operator==(const IncompleteMatrix& a, const IncompleteMatrix& b);

 private:
  IncompleteMatrix(int n) : n_(n), values_(static_cast<std::size_t>(n * n)), known_(static_cast<std::size_t>(n * n)) {}
  std::size_t index(int i, int j) const noexcept { return static_cast<std::size_t>(i * n_ + j); }

  int n_ = 0;
  int missing_ = 0;
  std::vector<double> values_;
  std::vector<unsigned char> known_;
};

struct EigenOptions {
  double tol = 1e-10;
  int max_iter = 10000;
};

/// Perron eigenpair. `residual` is max|A w - lambda w| / lambda for the returned w.
struct EigenResult {
  double lambda_max = 0.0;
  std::vector<double> weights;
  int iterations = 0;
  double residual = 0.0;
};

/// Power iteration from the uniform vector. Throws NoConvergence.
EigenResult perron(const CompleteMatrix& matrix, const EigenOptions& options = {});

/// (lambda_max - n) / (n - 1).
double consistency_index(const CompleteMatrix& matrix, const EigenOptions& options = {});
double consistency_index(double lambda_max, int n) noexcept;

/// True iff |a_ij a_jk / a_ik - 1| <= tol for every triple.
bool is_consistent(const CompleteMatrix& matrix, double tol = 1e-9) noexcept;

namespace detail {

/// Allocation-free power iteration on a dense row-major n x n positive matrix.
/// `w` holds the start vector on entry (any positive vector) and the Perron
/// vector, normalised to sum 1, on exit. `scratch` needs n doubles.
struct PowerOutcome {
  double lambda = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};
PowerOutcome power_iterate(std::span<const double> a, int n, std::span<double> w,
                           std::span<double> scratch, double tol, int max_iter) noexcept;

}  // namespace detail

}  // namespace icr
