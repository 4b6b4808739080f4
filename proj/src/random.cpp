#include "qhmp/random.hpp"

#include <cmath>
#include <numbers>

#include "qhmp/errors.hpp"

namespace qhmp {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(idx(rows), idx(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.complex_normal();
  }
  return g;
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw DimensionError("Rng::index: empty range");
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

ProbabilityVector random_probability_vector(std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  double s = 0.0;
  for (double& x : w) {
    x = rng.uniform();
    s += x;
  }
  for (double& x : w) x /= s;
  return ProbabilityVector(std::move(w));
}

StochasticMatrix random_stochastic(std::size_t rows, std::size_t cols, Rng& rng) {
  std::vector<double> e;
  e.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto row = random_probability_vector(cols, rng).weights();
    e.insert(e.end(), row.begin(), row.end());
  }
  return StochasticMatrix(rows, cols, std::move(e));
}

ComplexMatrix random_unitary(std::size_t d, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex rjj = r(j, j);
    const double a = std::abs(rjj);
    if (a > 0.0) q.col(j) *= rjj / a;
  }
  return q;
}

OrthonormalBasis random_basis(std::size_t d, Rng& rng) {
  return OrthonormalBasis(random_unitary(d, rng));
}

ComplexMatrix random_density(std::size_t d, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(d, d, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return 0.5 * (rho + rho.adjoint());
}

ComplexMatrix random_diagonal_density(const OrthonormalBasis& basis, Rng& rng) {
  const std::size_t d = basis.dim();
  const ProbabilityVector p = random_probability_vector(d, rng);
  ComplexMatrix diag = ComplexMatrix::Zero(idx(d), idx(d));
  for (std::size_t j = 0; j < d; ++j) diag(idx(j), idx(j)) = p[j];
  ComplexMatrix rho = basis.from_basis(diag);
  return 0.5 * (rho + rho.adjoint());
}

KrausFamily random_unital_kraus(std::size_t d, std::size_t count, Rng& rng) {
  std::vector<ComplexMatrix> ops;
  ComplexMatrix acc = ComplexMatrix::Zero(idx(d * d), idx(d * d));
  for (std::size_t r = 0; r < count; ++r) {
    ops.push_back(gaussian_matrix(d * d, d * d, rng));
    acc += ops.back().adjoint() * ops.back();
  }
  const ComplexMatrix s = partial_trace_second(acc, d, d);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (s + s.adjoint()));
  const ComplexMatrix inv_sqrt = es.operatorInverseSqrt();
  const ComplexMatrix right = kron(inv_sqrt, identity(d));
  for (auto& k : ops) k = k * right;
  return KrausFamily(d, std::move(ops));
}

ComplexMatrix random_phases(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix p(idx(rows), idx(cols));
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    p.data()[i] = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
  }
  return p;
}

namespace {

// c[j](m, i) is the weight of output index j on (m, i), unit norm for every j.
KrausFamily de_family_from_coefficients(const std::vector<ComplexMatrix>& c, std::size_t count,
                                        const OrthonormalBasis& basis, Rng& rng) {
  const std::size_t d = basis.dim();
  const std::size_t stack = d * count;
  std::vector<ComplexMatrix> ops(count, ComplexMatrix::Zero(idx(d * d), idx(d * d)));
  for (std::size_t m = 0; m < d; ++m) {
    for (std::size_t i = 0; i < d; ++i) {
      const ComplexMatrix u = random_unitary(stack, rng);
      for (std::size_t j = 0; j < d; ++j) {
        const Complex w = c[j](idx(m), idx(i));
        for (std::size_t r = 0; r < count; ++r) {
          for (std::size_t l = 0; l < d; ++l) {
            ops[r](idx(m * d + i), idx(j * d + l)) = w * u(idx(r * d + l), idx(j));
          }
        }
      }
    }
  }
  for (auto& k : ops) k = basis.from_basis2(k);
  return KrausFamily(d, std::move(ops));
}

}  // namespace

KrausFamily random_de_preserving_family(std::size_t d, std::size_t count,
                                        const OrthonormalBasis& basis, bool block_diagonal,
                                        Rng& rng) {
  if (count == 0) throw DimensionError("random_de_preserving_family: empty family");
  if (basis.dim() != d) throw DimensionError("random_de_preserving_family: basis dimension mismatch");
  std::vector<ComplexMatrix> c;
  for (std::size_t j = 0; j < d; ++j) {
    ComplexMatrix cj = ComplexMatrix::Zero(idx(d), idx(d));
    for (std::size_t m = 0; m < d; ++m) {
      if (block_diagonal && m != j) continue;
      for (std::size_t i = 0; i < d; ++i) cj(idx(m), idx(i)) = rng.complex_normal();
    }
    cj /= cj.norm();
    c.push_back(std::move(cj));
  }
  return de_family_from_coefficients(c, count, basis, rng);
}

KrausFamily de_preserving_family_from_prmi(const PrmiTensor& prmi, std::size_t count,
                                           const OrthonormalBasis& basis, Rng& rng) {
  const std::size_t d = prmi.dim();
  if (count == 0) throw DimensionError("de_preserving_family_from_prmi: empty family");
  if (basis.dim() != d) throw DimensionError("de_preserving_family_from_prmi: basis dimension mismatch");
  std::vector<ComplexMatrix> c;
  for (std::size_t j = 0; j < d; ++j) {
    const ComplexMatrix phases = random_phases(d, d, rng);
    ComplexMatrix cj(idx(d), idx(d));
    for (std::size_t m = 0; m < d; ++m) {
      for (std::size_t i = 0; i < d; ++i) {
        cj(idx(m), idx(i)) = std::sqrt(prmi(j, m, i)) * phases(idx(m), idx(i));
      }
    }
    c.push_back(std::move(cj));
  }
  return de_family_from_coefficients(c, count, basis, rng);
}

PrmiTensor hidden_readout_prmi(std::size_t d, double stay, double fidelity) {
  if (d < 2) throw DimensionError("hidden_readout_prmi: needs d >= 2");
  if (!(stay >= 0.0 && stay <= 1.0 && fidelity >= 0.0 && fidelity <= 1.0)) {
    throw ValidationError("hidden_readout_prmi: stay and fidelity must lie in [0, 1]");
  }
  const double other = static_cast<double>(d - 1);
  std::vector<double> v(d * d * d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t m = 0; m < d; ++m) {
      const double a = m == r ? fidelity : (1.0 - fidelity) / other;
      for (std::size_t i = 0; i < d; ++i) {
        const double b = i == r ? stay : (1.0 - stay) / other;
        v[(r * d + m) * d + i] = a * b;
      }
    }
  }
  return PrmiTensor(d, std::move(v));
}

}  // namespace qhmp
