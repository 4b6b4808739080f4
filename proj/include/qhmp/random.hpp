#pragma once

#include <cstdint>
#include <random>

#include "qhmp/quantum.hpp"
#include "qhmp/restriction.hpp"
#include "qhmp/stochastic.hpp"
#include "qhmp/tensor.hpp"

namespace qhmp {

/// Deterministic random stream.
///
/// Stream (seed, index) is std::mt19937_64 seeded through std::seed_seq with
/// the four 32-bit words {seed_lo, seed_hi, index_lo, index_hi}. Both the
/// engine and seed_seq are fully specified by the C++ standard, and the
/// distributions below are implemented here rather than taken from <random>,
/// so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal by Box-Muller (both variates are used).
  double normal();
  Complex complex_normal();
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Normalized i.i.d. uniform entries.
ProbabilityVector random_probability_vector(std::size_t n, Rng& rng);
StochasticMatrix random_stochastic(std::size_t rows, std::size_t cols, Rng& rng);

/// QR of a complex Gaussian matrix with the phases of R's diagonal removed.
ComplexMatrix random_unitary(std::size_t d, Rng& rng);
OrthonormalBasis random_basis(std::size_t d, Rng& rng);

ComplexMatrix random_density(std::size_t d, Rng& rng);
/// Diagonal in the basis, with the weights drawn as a probability vector.
ComplexMatrix random_diagonal_density(const OrthonormalBasis& basis, Rng& rng);

/// Gaussian operators whitened so that Tr_2(sum K^*K) = I:
/// K_r <- K_r (S^{-1/2} (x) I) with S = Tr_2(sum K^*K).
KrausFamily random_unital_kraus(std::size_t d, std::size_t count, Rng& rng);

/// Unit-modulus phases.
ComplexMatrix random_phases(std::size_t rows, std::size_t cols, Rng& rng);

/// Random D_e-preserving family. For every (m, i) the row-i vectors of the
/// blocks K_{r,m,j}, stacked over r, are scaled columns of a random unitary,
/// hence mutually orthogonal in j. With block_diagonal the blocks with m != j
/// vanish. The family is built in the given basis.
KrausFamily random_de_preserving_family(std::size_t d, std::size_t count,
                                        const OrthonormalBasis& basis,
                                        bool block_diagonal, Rng& rng);

/// D_e-preserving family with the prescribed P tensor (random phases and
/// random mixing over the family).
KrausFamily de_preserving_family_from_prmi(const PrmiTensor& prmi, std::size_t count,
                                           const OrthonormalBasis& basis, Rng& rng);

/// P_{r;m,i} = a(m|r) b(i|r): the hidden index r is read out correctly with
/// probability `fidelity` and kept with probability `stay`, the remaining
/// mass spread uniformly.
PrmiTensor hidden_readout_prmi(std::size_t d, double stay, double fidelity);

}  // namespace qhmp
