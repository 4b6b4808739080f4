#include "qhmp/stochastic.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "qhmp/errors.hpp"

namespace qhmp {

Limits Limits::from_environment() {
  Limits l;
  auto read = [](const char* name, std::size_t& target) {
    if (const char* v = std::getenv(name); v != nullptr && *v != '\0') {
      char* end = nullptr;
      const unsigned long long parsed = std::strtoull(v, &end, 10);
      if (end == v || *end != '\0' || parsed == 0) {
        throw std::invalid_argument(std::string(name) + " must be a positive integer");
      }
      target = static_cast<std::size_t>(parsed);
    }
  };
  read("QHMP_MAX_DIM", l.max_operator_dim);
  read("QHMP_MAX_LAW_ENTRIES", l.max_law_entries);
  return l;
}

void Limits::check_operator_dim(std::size_t dim, const std::string& what) const {
  if (dim > max_operator_dim) {
    throw CapExceeded(what + ": operator dimension " + std::to_string(dim) +
                      " exceeds cap " + std::to_string(max_operator_dim));
  }
}

void Limits::check_law_entries(std::size_t entries, const std::string& what) const {
  if (entries > max_law_entries) {
    throw CapExceeded(what + ": table size " + std::to_string(entries) +
                      " exceeds cap " + std::to_string(max_law_entries));
  }
}

std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t cap,
                          const std::string& what) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > cap / base) {
      throw CapExceeded(what + ": size " + std::to_string(base) + "^" +
                        std::to_string(exp) + " exceeds cap " + std::to_string(cap));
    }
    out *= base;
  }
  if (out > cap) throw CapExceeded(what + ": size exceeds cap " + std::to_string(cap));
  return out;
}

namespace {

// Validates and clamps one probability row in place.
void check_row(std::span<double> row, double tol, const char* what, std::size_t index) {
  double sum = 0.0;
  for (double& x : row) {
    if (!std::isfinite(x)) {
      throw ValidationError(std::string(what) + ": non-finite entry in row " + std::to_string(index));
    }
    if (x < 0.0) {
      if (x < -tol) {
        throw ValidationError(std::string(what) + ": negative entry " + std::to_string(x) +
                              " in row " + std::to_string(index));
      }
      x = 0.0;
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw ValidationError(std::string(what) + ": row " + std::to_string(index) +
                          " sums to " + std::to_string(sum));
  }
}

}  // namespace

ProbabilityVector::ProbabilityVector(std::vector<double> weights, double tol)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw DimensionError("ProbabilityVector: empty");
  check_row(weights_, tol, "ProbabilityVector", 0);
}

ProbabilityVector ProbabilityVector::uniform(std::size_t n) {
  return ProbabilityVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbabilityVector ProbabilityVector::point_mass(std::size_t n, std::size_t k) {
  if (k >= n) throw DimensionError("ProbabilityVector::point_mass: index out of range");
  std::vector<double> w(n, 0.0);
  w[k] = 1.0;
  return ProbabilityVector(std::move(w));
}

StochasticMatrix::StochasticMatrix(std::size_t rows, std::size_t cols,
                                   std::vector<double> row_major, double tol)
    : rows_(rows), cols_(cols), entries_(std::move(row_major)) {
  if (rows == 0 || cols == 0) throw DimensionError("StochasticMatrix: empty shape");
  if (entries_.size() != rows * cols) {
    throw DimensionError("StochasticMatrix: expected " + std::to_string(rows * cols) +
                         " entries, got " + std::to_string(entries_.size()));
  }
  for (std::size_t i = 0; i < rows; ++i) {
    check_row({entries_.data() + i * cols, cols}, tol, "StochasticMatrix", i);
  }
}

StochasticMatrix StochasticMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                                             double tol) {
  if (rows.empty()) throw DimensionError("StochasticMatrix: no rows");
  const std::size_t cols = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw DimensionError("StochasticMatrix: ragged rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return StochasticMatrix(rows.size(), cols, std::move(flat), tol);
}

StochasticMatrix StochasticMatrix::identity(std::size_t n) {
  std::vector<double> e(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
  return StochasticMatrix(n, n, std::move(e));
}

StochasticMatrix StochasticMatrix::uniform(std::size_t rows, std::size_t cols) {
  return StochasticMatrix(rows, cols,
                          std::vector<double>(rows * cols, 1.0 / static_cast<double>(cols)));
}

std::vector<double> StochasticMatrix::apply(std::span<const double> f) const {
  if (f.size() != cols_) throw DimensionError("StochasticMatrix::apply: size mismatch");
  std::vector<double> out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += entries_[i * cols_ + j] * f[j];
    out[i] = s;
  }
  return out;
}

std::vector<double> StochasticMatrix::push_forward(std::span<const double> mu) const {
  if (mu.size() != rows_) throw DimensionError("StochasticMatrix::push_forward: size mismatch");
  std::vector<double> out(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out[j] += mu[i] * entries_[i * cols_ + j];
  }
  return out;
}

StochasticityReport check_stochastic(std::size_t rows, std::size_t cols,
                                     std::span<const double> row_major) {
  StochasticityReport r;
  if (row_major.size() != rows * cols) {
    r.finite = false;
    r.max_row_sum_error = std::numeric_limits<double>::infinity();
    return r;
  }
  for (std::size_t i = 0; i < rows; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double x = row_major[i * cols + j];
      if (!std::isfinite(x)) r.finite = false;
      r.max_negativity = std::max(r.max_negativity, -x);
      sum += x;
    }
    r.max_row_sum_error = std::max(r.max_row_sum_error, std::abs(sum - 1.0));
  }
  return r;
}

}  // namespace qhmp
