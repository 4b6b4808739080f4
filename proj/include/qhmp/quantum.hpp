#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qhmp/limits.hpp"
#include "qhmp/stochastic.hpp"
#include "qhmp/tensor.hpp"

namespace qhmp {

/// Kraus operators K_r on C^d (x) C^d of the transition expectation
/// E(x) = Tr_2(sum_r K_r^* x K_r).
///
/// The constructor checks shapes and finiteness only; unitality is checked
/// by validate_kraus and enforced by the model classes that consume a family.
class KrausFamily {
 public:
  KrausFamily(std::size_t d, std::vector<ComplexMatrix> operators);

  std::size_t dim() const { return d_; }
  std::size_t size() const { return ops_.size(); }
  const ComplexMatrix& op(std::size_t r) const { return ops_.at(r); }
  const std::vector<ComplexMatrix>& operators() const { return ops_; }

 private:
  std::size_t d_;
  std::vector<ComplexMatrix> ops_;
};

struct KrausReport {
  double max_violation = 0.0;
  bool pass = false;
};

/// Checks sum_r sum_i Tr(K_{r;ij}^* K_{r;ij'}) = delta_{jj'} on first-factor
/// blocks.
KrausReport validate_kraus(const KrausFamily& kraus, double tol = kStructuralTol);

/// Throws ValidationError unless validate_kraus passes.
void require_unital(const KrausFamily& kraus, const char* what);

ComplexMatrix apply_te(const KrausFamily& kraus, const ComplexMatrix& x);

/// Single K with Tr_2(K^* K) = I.
class ConditionalDensityAmplitude {
 public:
  ConditionalDensityAmplitude(std::size_t d, ComplexMatrix k);

  std::size_t dim() const { return d_; }
  const ComplexMatrix& matrix() const { return k_; }
  KrausFamily family() const { return KrausFamily(d_, {k_}); }

 private:
  std::size_t d_;
  ComplexMatrix k_;
};

/// K = sum_{jk} phase_jk sqrt(p_jk) e_jj (x) e_kk in the given basis.
/// Phases must have unit modulus; the default root is the non-negative one.
ConditionalDensityAmplitude diagonalizable_cda_from_stochastic(
    const StochasticMatrix& p, const std::optional<ComplexMatrix>& phases = {},
    const std::optional<OrthonormalBasis>& basis = {});

struct CommutationReport {
  bool commutes = false;
  double violation = 0.0;
};

/// [K (x) I, I (x) K] on three sites.
CommutationReport check_shift_commutation(const ComplexMatrix& k, std::size_t d,
                                          const Limits& limits = {});
inline CommutationReport check_shift_commutation(
    const ConditionalDensityAmplitude& k, const Limits& limits = {}) {
  return check_shift_commutation(k.matrix(), k.dim(), limits);
}

struct CompatibilityReport {
  double commutator_norm = 0.0;
  bool commutes = false;
  bool nondegenerate = false;
  bool rows_nonzero = false;
  bool pass() const { return commutes && nondegenerate && rows_nonzero; }
};

/// [w0 (x) I, K], simplicity of the spectrum of w0, and (e_kk (x) I) K != 0
/// for every eigenprojector e_kk of w0.
CompatibilityReport check_initial_compatibility(const ComplexMatrix& w0,
                                                const ConditionalDensityAmplitude& k);

/// Initial density matrix plus one Kraus family per step. A single family is
/// broadcast to every step.
class QmcModel {
 public:
  QmcModel(ComplexMatrix w0, std::vector<KrausFamily> families);
  QmcModel(ComplexMatrix w0, KrausFamily family)
      : QmcModel(std::move(w0), std::vector<KrausFamily>{std::move(family)}) {}

  std::size_t dim() const { return d_; }
  const ComplexMatrix& w0() const { return w0_; }
  bool homogeneous() const { return families_.size() == 1; }
  /// Number of explicitly stored steps; 1 for homogeneous models.
  std::size_t num_families() const { return families_.size(); }
  const KrausFamily& family(std::size_t m) const;
  const std::vector<KrausFamily>& families() const { return families_; }

 private:
  std::size_t d_;
  ComplexMatrix w0_;
  std::vector<KrausFamily> families_;
};

/// Tr(w0 E_0(a_0 (x) E_1(a_1 (x) ... E_n(a_n (x) I)))).
Complex qmc_joint_expectation(const QmcModel& model,
                              const std::vector<ComplexMatrix>& ops);

/// Density matrix W_[0,n] on n + 1 sites:
/// W <- sum_r K_{r,[m,m+1]} (W (x) I) K_{r,[m,m+1]}^* for m = 0..n, followed by
/// the partial trace over site n + 1.
ComplexMatrix qmc_density_window(const QmcModel& model, std::size_t n,
                                 const Limits& limits = {});
ComplexMatrix qmc_density_window(const ComplexMatrix& w0,
                                 const ConditionalDensityAmplitude& k,
                                 std::size_t n, const Limits& limits = {});

/// Hidden chain (w0, E_{H_m}) and emission transition expectations
/// E_{OH;m}: B_H (x) B_O -> B_H, hidden factor first.
class QuantumHmpModel {
 public:
  QuantumHmpModel(QmcModel hidden, std::vector<KrausFamily> emissions);

  std::size_t dim() const { return hidden_.dim(); }
  const QmcModel& hidden() const { return hidden_; }
  const KrausFamily& emission(std::size_t m) const;
  const std::vector<KrausFamily>& emissions() const { return emissions_; }

 private:
  QmcModel hidden_;
  std::vector<KrausFamily> emissions_;
};

/// P_{H_0}(E_{H_0}(E_{OH;0}(g_0 (x) f_0) (x) E_{H_1}(E_{OH;1}(g_1 (x) f_1) (x) ...))),
/// g_m acting on the hidden factor and f_m on the observation factor.
Complex quantum_hmp_joint(const QuantumHmpModel& model,
                          const std::vector<ComplexMatrix>& g_ops,
                          const std::vector<ComplexMatrix>& f_ops);

}  // namespace qhmp
