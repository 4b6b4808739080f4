#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qhmp/classical.hpp"
#include "qhmp/joint_law.hpp"
#include "qhmp/quantum.hpp"
#include "qhmp/tensor.hpp"

namespace qhmp {

/// One orthonormal basis per site; a single basis is broadcast.
class DiagonalSpec {
 public:
  explicit DiagonalSpec(OrthonormalBasis basis);
  explicit DiagonalSpec(std::vector<OrthonormalBasis> bases);

  static DiagonalSpec standard(std::size_t d) {
    return DiagonalSpec(OrthonormalBasis::standard(d));
  }

  std::size_t dim() const { return bases_.front().dim(); }
  const OrthonormalBasis& basis(std::size_t site) const;
  std::size_t num_bases() const { return bases_.size(); }

 private:
  std::vector<OrthonormalBasis> bases_;
};

/// P_{r;m,i}: r is the output diagonal index, m the index on the current
/// site and i the index on the next site. For each r the d x d^2 row
/// (m, i) is a probability distribution.
class PrmiTensor {
 public:
  /// values flattened as r * d^2 + m * d + i.
  PrmiTensor(std::size_t d, std::vector<double> values);

  std::size_t dim() const { return d_; }
  double operator()(std::size_t r, std::size_t m, std::size_t i) const {
    return values_[(r * d_ + m) * d_ + i];
  }
  /// P_{r;m} = sum_i P_{r;m,i}.
  double marginal(std::size_t r, std::size_t m) const;
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t d_;
  std::vector<double> values_;
};

/// qmc_joint_expectation on the projector string of the per-site bases.
/// Imaginary parts above kStructuralTol or values below -kStructuralTol are
/// errors; smaller excursions are clamped into [0, 1].
double restrict_qmc_path_prob(const QmcModel& model, const DiagonalSpec& diag,
                              std::span<const std::size_t> path);

/// Law of the restricted process on (X_0, ..., X_n).
JointLaw restricted_law(const QmcModel& model, const DiagonalSpec& diag,
                        std::size_t n, const Limits& limits = {});

struct SingleCdaDiagnosis {
  bool diagonalizable = false;
  std::string reason;
  double violation = 0.0;
  std::optional<StochasticMatrix> transition;
};

/// True iff the family has one operator, that operator is block diagonal in
/// the first factor with diagonal blocks (in the given basis), and it
/// commutes with its right shift. Recovers p_jk = |K_{(j,k),(j,k)}|^2.
SingleCdaDiagnosis check_diagonalizable_single_cda(
    const KrausFamily& kraus, const std::optional<OrthonormalBasis>& basis = {});

/// Classical HMM carried by a diagonalizable model: hidden chain read off the
/// CDA in hidden_basis, initial law diag(w0) in that basis, and emissions
/// |<e_{H;j}, e_{O_m;k}>|^2.
ClassicalHmm hmm_restriction_law(const QmcModel& model,
                                 const DiagonalSpec& obs_bases,
                                 std::size_t horizon,
                                 const std::optional<OrthonormalBasis>& hidden_basis = {});

struct DePreservingReport {
  bool preserving = false;
  double violation = 0.0;
};

/// sum_r <e_i, K_{r,m,j'} K_{r,m,j}^* e_i> = 0 for j != j', blocks taken in
/// the basis with the first factor carrying the unit index.
DePreservingReport check_de_preserving(const KrausFamily& kraus,
                                       const OrthonormalBasis& basis);

PrmiTensor extract_prmi(const KrausFamily& kraus, const OrthonormalBasis& basis);

/// sum over r_0..r_n of p0_{r_0} P_{r_0;i_0,r_1} ... P_{r_{n-1};i_{n-1},r_n} P_{r_n;i_n},
/// contracted right to left.
double de_joint_prob(const ProbabilityVector& p0, const PrmiTensor& prmi,
                     std::span<const std::size_t> path);

JointLaw de_joint_law(const ProbabilityVector& p0, const PrmiTensor& prmi,
                      std::size_t n, const Limits& limits = {});

/// Largest norm of an off-diagonal first-factor block K_{r,h,h'} (h != h').
double off_block_norm(const KrausFamily& kraus, const OrthonormalBasis& basis);

/// Requires D_e-preservation (throws ValidationError otherwise).
bool is_restriction_markov(const KrausFamily& kraus, const OrthonormalBasis& basis);

/// Markov chain on D x D with state (j, i) flattened as j * d + i; j is the
/// Z coordinate and i the Y coordinate.
class ZYChain {
 public:
  ZYChain(std::size_t d, ProbabilityVector initial, StochasticMatrix transition);

  std::size_t dim() const { return d_; }
  const ProbabilityVector& initial() const { return initial_; }
  const StochasticMatrix& transition() const { return transition_; }

  MarkovChainModel chain(std::size_t n) const;
  /// P(Y_0 = i_0, ..., Y_n = i_n).
  double y_marginal(std::span<const std::size_t> path) const;
  /// Transition of the Z coordinate alone.
  StochasticMatrix z_transition() const;
  /// Law over (Z_0, Y_0, ..., Z_n, Y_n).
  JointLaw law(std::size_t n, const Limits& limits = {}) const;

 private:
  std::size_t d_;
  ProbabilityVector initial_;
  StochasticMatrix transition_;
};

/// p(j, i) = sum_r p0(r) P_{r;i,j};  p((j,i),(j',i')) = P_{j;i',j'}.
ZYChain embed_in_zy(const PrmiTensor& prmi, const ProbabilityVector& p0);

/// K = sum_{ij} c_ij e_{H';ii} (x) e_{O';jj}, with |c_ij|^2 row-stochastic.
class DiagonalEmissionCda {
 public:
  DiagonalEmissionCda(ComplexMatrix coeffs, OrthonormalBasis obs_basis);

  const ComplexMatrix& coeffs() const { return c_; }
  const OrthonormalBasis& obs_basis() const { return obs_; }
  StochasticMatrix probabilities() const;
  KrausFamily to_kraus(const OrthonormalBasis& hprime_basis) const;

 private:
  ComplexMatrix c_;
  OrthonormalBasis obs_;
};

/// Law of (H'_0, O_0, ..., H'_n, O_n) for a diagonalizable hidden chain, H'
/// read in hprime_bases and O read through the diagonal emission CDAs.
JointLaw three_tier_restriction_law(const QmcModel& hidden_model,
                                    const DiagonalSpec& hprime_bases,
                                    const std::vector<DiagonalEmissionCda>& emissions,
                                    std::size_t n,
                                    const std::optional<OrthonormalBasis>& hidden_basis = {},
                                    const Limits& limits = {});

}  // namespace qhmp
