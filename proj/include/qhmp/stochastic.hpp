#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qhmp/limits.hpp"

namespace qhmp {

class ProbabilityVector {
 public:
  ProbabilityVector() = default;
  /// Entries must be finite and non-negative (values above -tol are clamped
  /// to zero) and sum to one within tol.
  explicit ProbabilityVector(std::vector<double> weights,
                             double tol = kProbabilityTol);

  static ProbabilityVector uniform(std::size_t n);
  static ProbabilityVector point_mass(std::size_t n, std::size_t k);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

/// Row-stochastic matrix, rows indexed by the source state. Acts on functions
/// by (P f)(i) = sum_j P(i,j) f(j) and on distributions from the left.
class StochasticMatrix {
 public:
  StochasticMatrix() = default;
  StochasticMatrix(std::size_t rows, std::size_t cols,
                   std::vector<double> row_major,
                   double tol = kProbabilityTol);

  static StochasticMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                    double tol = kProbabilityTol);
  static StochasticMatrix identity(std::size_t n);
  static StochasticMatrix uniform(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  const std::vector<double>& entries() const { return entries_; }

  /// (P f)(i) = sum_j P(i,j) f(j).
  std::vector<double> apply(std::span<const double> f) const;
  /// (mu P)(j) = sum_i mu(i) P(i,j).
  std::vector<double> push_forward(std::span<const double> mu) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

/// Largest |row sum - 1| and largest negativity, for reporting.
struct StochasticityReport {
  double max_row_sum_error = 0.0;
  double max_negativity = 0.0;
  bool finite = true;
  bool ok(double tol = kProbabilityTol) const {
    return finite && max_row_sum_error <= tol && max_negativity <= tol;
  }
};

StochasticityReport check_stochastic(std::size_t rows, std::size_t cols,
                                     std::span<const double> row_major);

}  // namespace qhmp
