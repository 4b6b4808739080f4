#include "qhmp/tensor.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qhmp/errors.hpp"

namespace qhmp {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_square(const ComplexMatrix& m, std::size_t n, const char* what) {
  if (m.rows() != idx(n) || m.cols() != idx(n)) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(n) +
                         "x" + std::to_string(n) + " matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

ComplexMatrix identity(std::size_t d) {
  return ComplexMatrix::Identity(idx(d), idx(d));
}

ComplexMatrix matrix_unit(std::size_t i, std::size_t j, std::size_t d) {
  if (i >= d || j >= d) {
    throw DimensionError("matrix_unit: index out of range");
  }
  ComplexMatrix e = ComplexMatrix::Zero(idx(d), idx(d));
  e(idx(i), idx(j)) = 1.0;
  return e;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   const Limits& limits) {
  const auto rows = static_cast<std::size_t>(a.rows() * b.rows());
  const auto cols = static_cast<std::size_t>(a.cols() * b.cols());
  limits.check_operator_dim(std::max(rows, cols), "kron");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& a, std::size_t left, std::size_t right,
                    const Limits& limits) {
  return kron(kron(identity(left), a, limits), identity(right), limits);
}

ComplexMatrix partial_trace_second(const ComplexMatrix& x, std::size_t d1,
                                   std::size_t d2) {
  require_square(x, d1 * d2, "partial_trace_second");
  ComplexMatrix y = ComplexMatrix::Zero(idx(d1), idx(d1));
  for (std::size_t i = 0; i < d1; ++i) {
    for (std::size_t j = 0; j < d1; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < d2; ++k) s += x(idx(i * d2 + k), idx(j * d2 + k));
      y(idx(i), idx(j)) = s;
    }
  }
  return y;
}

ComplexMatrix first_factor_block(const ComplexMatrix& k, std::size_t d,
                                 std::size_t i, std::size_t j) {
  require_square(k, d * d, "first_factor_block");
  return k.block(idx(i * d), idx(j * d), idx(d), idx(d));
}

ComplexMatrix second_factor_block(const ComplexMatrix& k, std::size_t d,
                                  std::size_t i, std::size_t j) {
  require_square(k, d * d, "second_factor_block");
  ComplexMatrix b(idx(d), idx(d));
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t c = 0; c < d; ++c) b(idx(a), idx(c)) = k(idx(a * d + i), idx(c * d + j));
  }
  return b;
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  }
  return true;
}

double hermiticity_violation(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

DensityReport check_density(const ComplexMatrix& rho) {
  DensityReport r;
  if (rho.rows() != rho.cols() || rho.rows() == 0 || !all_finite(rho)) {
    r.hermiticity = r.trace_error = INFINITY;
    r.min_eigenvalue = -INFINITY;
    return r;
  }
  r.hermiticity = hermiticity_violation(rho);
  r.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  const ComplexMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  return r;
}

double orthonormality_violation(const ComplexMatrix& columns) {
  return max_abs(columns.adjoint() * columns - identity(static_cast<std::size_t>(columns.cols())));
}

OrthonormalBasis::OrthonormalBasis(ComplexMatrix columns, double tol)
    : u_(std::move(columns)) {
  if (u_.rows() == 0 || u_.rows() != u_.cols()) {
    throw DimensionError("OrthonormalBasis: expected a non-empty square matrix");
  }
  if (!all_finite(u_)) throw ValidationError("OrthonormalBasis: non-finite entry");
  const double v = orthonormality_violation(u_);
  if (v > tol) {
    throw ValidationError("OrthonormalBasis: Gram matrix deviates from identity by " +
                          std::to_string(v));
  }
}

OrthonormalBasis OrthonormalBasis::standard(std::size_t d) {
  return OrthonormalBasis(identity(d));
}

OrthonormalBasis OrthonormalBasis::fourier(std::size_t d) {
  ComplexMatrix f(idx(d), idx(d));
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(j * k) /
                           static_cast<double>(d);
      f(idx(j), idx(k)) = norm * std::polar(1.0, angle);
    }
  }
  return OrthonormalBasis(f);
}

ComplexMatrix OrthonormalBasis::unit(std::size_t i, std::size_t j) const {
  if (i >= dim() || j >= dim()) throw DimensionError("OrthonormalBasis::unit: index out of range");
  return u_.col(idx(i)) * u_.col(idx(j)).adjoint();
}

ComplexMatrix OrthonormalBasis::to_basis(const ComplexMatrix& x) const {
  require_square(x, dim(), "OrthonormalBasis::to_basis");
  return u_.adjoint() * x * u_;
}

ComplexMatrix OrthonormalBasis::from_basis(const ComplexMatrix& x) const {
  require_square(x, dim(), "OrthonormalBasis::from_basis");
  return u_ * x * u_.adjoint();
}

ComplexMatrix OrthonormalBasis::to_basis2(const ComplexMatrix& x) const {
  require_square(x, dim() * dim(), "OrthonormalBasis::to_basis2");
  const ComplexMatrix uu = kron(u_, u_);
  return uu.adjoint() * x * uu;
}

ComplexMatrix OrthonormalBasis::from_basis2(const ComplexMatrix& x) const {
  require_square(x, dim() * dim(), "OrthonormalBasis::from_basis2");
  const ComplexMatrix uu = kron(u_, u_);
  return uu * x * uu.adjoint();
}

StochasticMatrix basis_overlap_matrix(const OrthonormalBasis& e,
                                      const OrthonormalBasis& f) {
  if (e.dim() != f.dim()) throw DimensionError("basis_overlap_matrix: dimension mismatch");
  const std::size_t d = e.dim();
  const ComplexMatrix g = e.unitary().adjoint() * f.unitary();
  std::vector<double> p(d * d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) p[j * d + k] = std::norm(g(idx(j), idx(k)));
  }
  return StochasticMatrix(d, d, std::move(p), kStructuralTol);
}

}  // namespace qhmp
