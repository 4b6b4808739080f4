#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qhmp/limits.hpp"
#include "qhmp/stochastic.hpp"

namespace qhmp {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Conventions used throughout the library:
//  * e_{ij} is the matrix unit with a single 1 at row i, column j, so that
//    e_{ij} xi = <e_j, xi> e_i.
//  * kron is row-major: (A (x) B)_{(i*dB + k), (j*dB + l)} = A_ij B_kl.
//    On a tensor product of several sites, site 0 is the most significant
//    digit of the flattened index.

ComplexMatrix identity(std::size_t d);
ComplexMatrix matrix_unit(std::size_t i, std::size_t j, std::size_t d);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   const Limits& limits = {});

/// kron(I_left, a, I_right).
ComplexMatrix embed(const ComplexMatrix& a, std::size_t left, std::size_t right,
                    const Limits& limits = {});

/// Y_ij = sum_k X_{(i,k),(j,k)}.
ComplexMatrix partial_trace_second(const ComplexMatrix& x, std::size_t d1,
                                   std::size_t d2);

/// First-factor blocks: K = sum_{ij} e_ij (x) K_ij, K_ij = block (i, j).
ComplexMatrix first_factor_block(const ComplexMatrix& k, std::size_t d,
                                 std::size_t i, std::size_t j);
/// Second-factor blocks: K = sum_{ij} K'_ij (x) e_ij.
ComplexMatrix second_factor_block(const ComplexMatrix& k, std::size_t d,
                                  std::size_t i, std::size_t j);

double max_abs(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);
double hermiticity_violation(const ComplexMatrix& m);

struct DensityReport {
  double hermiticity = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  bool ok(double tol = kStructuralTol) const {
    return hermiticity <= tol && trace_error <= tol && min_eigenvalue >= -tol;
  }
};
DensityReport check_density(const ComplexMatrix& rho);

/// Columns of a unitary matrix.
class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(ComplexMatrix columns, double tol = kStructuralTol);

  static OrthonormalBasis standard(std::size_t d);
  /// Discrete Fourier basis; for d = 2 this is the Hadamard basis.
  static OrthonormalBasis fourier(std::size_t d);

  std::size_t dim() const { return static_cast<std::size_t>(u_.cols()); }
  const ComplexMatrix& unitary() const { return u_; }
  ComplexVector vector(std::size_t j) const { return u_.col(static_cast<Eigen::Index>(j)); }

  /// e_{ij} = e_i e_j^* expressed in the standard basis.
  ComplexMatrix unit(std::size_t i, std::size_t j) const;
  ComplexMatrix projector(std::size_t j) const { return unit(j, j); }

  /// Coordinates of an operator in this basis: U^* X U.
  ComplexMatrix to_basis(const ComplexMatrix& x) const;
  ComplexMatrix from_basis(const ComplexMatrix& x) const;
  /// The same for an operator on two sites, both in this basis.
  ComplexMatrix to_basis2(const ComplexMatrix& x) const;
  ComplexMatrix from_basis2(const ComplexMatrix& x) const;

  friend bool operator==(const OrthonormalBasis& a, const OrthonormalBasis& b) {
    return a.u_ == b.u_;
  }

 private:
  ComplexMatrix u_;
};

double orthonormality_violation(const ComplexMatrix& columns);

/// Entries |<e_j, f_k>|^2. Doubly stochastic.
StochasticMatrix basis_overlap_matrix(const OrthonormalBasis& e,
                                      const OrthonormalBasis& f);

}  // namespace qhmp
