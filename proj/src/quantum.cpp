#include "qhmp/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qhmp/errors.hpp"

namespace qhmp {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_shape(const ComplexMatrix& m, std::size_t n, const std::string& what) {
  if (m.rows() != idx(n) || m.cols() != idx(n)) {
    throw DimensionError(what + ": expected " + std::to_string(n) + "x" + std::to_string(n) +
                         ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

KrausFamily::KrausFamily(std::size_t d, std::vector<ComplexMatrix> operators)
    : d_(d), ops_(std::move(operators)) {
  if (d_ == 0) throw DimensionError("KrausFamily: zero dimension");
  if (ops_.empty()) throw DimensionError("KrausFamily: no operators");
  for (const auto& k : ops_) {
    require_shape(k, d_ * d_, "KrausFamily");
    if (!all_finite(k)) throw ValidationError("KrausFamily: non-finite entry");
  }
}

KrausReport validate_kraus(const KrausFamily& kraus, double tol) {
  const std::size_t d = kraus.dim();
  ComplexMatrix gram = ComplexMatrix::Zero(idx(d), idx(d));
  for (const auto& k : kraus.operators()) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const ComplexMatrix kij = first_factor_block(k, d, i, j);
        for (std::size_t jp = 0; jp < d; ++jp) {
          gram(idx(j), idx(jp)) += (kij.adjoint() * first_factor_block(k, d, i, jp)).trace();
        }
      }
    }
  }
  KrausReport r;
  r.max_violation = max_abs(gram - identity(d));
  r.pass = r.max_violation <= tol;
  return r;
}

void require_unital(const KrausFamily& kraus, const char* what) {
  const KrausReport r = validate_kraus(kraus);
  if (!r.pass) {
    throw ValidationError(std::string(what) + ": Kraus family is not unital (violation " +
                          std::to_string(r.max_violation) + ")");
  }
}

ComplexMatrix apply_te(const KrausFamily& kraus, const ComplexMatrix& x) {
  const std::size_t d = kraus.dim();
  require_shape(x, d * d, "apply_te");
  ComplexMatrix acc = ComplexMatrix::Zero(idx(d * d), idx(d * d));
  for (const auto& k : kraus.operators()) acc.noalias() += k.adjoint() * x * k;
  return partial_trace_second(acc, d, d);
}

ConditionalDensityAmplitude::ConditionalDensityAmplitude(std::size_t d, ComplexMatrix k)
    : d_(d), k_(std::move(k)) {
  require_unital(KrausFamily(d_, {k_}), "ConditionalDensityAmplitude");
}

ConditionalDensityAmplitude diagonalizable_cda_from_stochastic(
    const StochasticMatrix& p, const std::optional<ComplexMatrix>& phases,
    const std::optional<OrthonormalBasis>& basis) {
  const std::size_t d = p.rows();
  if (p.cols() != d) throw DimensionError("diagonalizable_cda_from_stochastic: P must be square");
  if (phases) {
    require_shape(*phases, d, "diagonalizable_cda_from_stochastic phases");
    for (Eigen::Index i = 0; i < phases->size(); ++i) {
      if (std::abs(std::abs(phases->data()[i]) - 1.0) > kStructuralTol) {
        throw ValidationError("diagonalizable_cda_from_stochastic: phases must have unit modulus");
      }
    }
  }
  if (basis && basis->dim() != d) {
    throw DimensionError("diagonalizable_cda_from_stochastic: basis dimension mismatch");
  }
  ComplexMatrix k = ComplexMatrix::Zero(idx(d * d), idx(d * d));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t l = 0; l < d; ++l) {
      const Complex phase = phases ? (*phases)(idx(j), idx(l)) : Complex(1.0);
      k(idx(j * d + l), idx(j * d + l)) = phase * std::sqrt(p(j, l));
    }
  }
  if (basis) k = basis->from_basis2(k);
  return ConditionalDensityAmplitude(d, std::move(k));
}

CommutationReport check_shift_commutation(const ComplexMatrix& k, std::size_t d,
                                          const Limits& limits) {
  require_shape(k, d * d, "check_shift_commutation");
  limits.check_operator_dim(d * d * d, "check_shift_commutation");
  const ComplexMatrix left = kron(k, identity(d), limits);
  const ComplexMatrix right = kron(identity(d), k, limits);
  CommutationReport r;
  r.violation = max_abs(left * right - right * left);
  r.commutes = r.violation < kStructuralTol;
  return r;
}

CompatibilityReport check_initial_compatibility(const ComplexMatrix& w0,
                                                const ConditionalDensityAmplitude& k) {
  const std::size_t d = k.dim();
  require_shape(w0, d, "check_initial_compatibility");
  CompatibilityReport r;
  const ComplexMatrix w = kron(w0, identity(d));
  r.commutator_norm = max_abs(w * k.matrix() - k.matrix() * w);
  r.commutes = r.commutator_norm < kStructuralTol;

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (w0 + w0.adjoint()));
  const Eigen::VectorXd ev = es.eigenvalues();  // ascending
  r.nondegenerate = true;
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    if (ev(i) - ev(i - 1) <= kStructuralTol) r.nondegenerate = false;
  }
  r.rows_nonzero = true;
  for (std::size_t j = 0; j < d; ++j) {
    const ComplexVector v = es.eigenvectors().col(idx(j));
    const ComplexMatrix proj = kron(v * v.adjoint(), identity(d));
    if (max_abs(proj * k.matrix()) <= kStructuralTol) r.rows_nonzero = false;
  }
  return r;
}

QmcModel::QmcModel(ComplexMatrix w0, std::vector<KrausFamily> families)
    : w0_(std::move(w0)), families_(std::move(families)) {
  if (families_.empty()) throw DimensionError("QmcModel: no Kraus families");
  d_ = families_.front().dim();
  require_shape(w0_, d_, "QmcModel initial density");
  const DensityReport dr = check_density(w0_);
  if (dr.hermiticity > kOracleTol || dr.trace_error > kStructuralTol ||
      dr.min_eigenvalue < -kStructuralTol) {
    throw ValidationError("QmcModel: w0 is not a density matrix (hermiticity " +
                          std::to_string(dr.hermiticity) + ", trace error " +
                          std::to_string(dr.trace_error) + ", min eigenvalue " +
                          std::to_string(dr.min_eigenvalue) + ")");
  }
  for (const auto& f : families_) {
    if (f.dim() != d_) throw DimensionError("QmcModel: families differ in dimension");
    require_unital(f, "QmcModel");
  }
}

const KrausFamily& QmcModel::family(std::size_t m) const {
  if (homogeneous()) return families_.front();
  if (m >= families_.size()) {
    throw DimensionError("QmcModel: no Kraus family for step " + std::to_string(m));
  }
  return families_[m];
}

Complex qmc_joint_expectation(const QmcModel& model, const std::vector<ComplexMatrix>& ops) {
  if (ops.empty()) throw DimensionError("qmc_joint_expectation: empty operator list");
  const std::size_t d = model.dim();
  ComplexMatrix x = identity(d);
  for (std::size_t m = ops.size(); m-- > 0;) {
    require_shape(ops[m], d, "qmc_joint_expectation");
    x = apply_te(model.family(m), kron(ops[m], x));
  }
  return (model.w0() * x).trace();
}

ComplexMatrix qmc_density_window(const QmcModel& model, std::size_t n, const Limits& limits) {
  const std::size_t d = model.dim();
  const std::size_t full = checked_power(d, n + 2, limits.max_operator_dim, "qmc_density_window");
  (void)full;
  ComplexMatrix w = model.w0();
  std::size_t left = 1;  // d^m
  for (std::size_t m = 0; m <= n; ++m) {
    const ComplexMatrix ext = kron(w, identity(d), limits);
    ComplexMatrix next = ComplexMatrix::Zero(ext.rows(), ext.cols());
    for (const auto& k : model.family(m).operators()) {
      const ComplexMatrix kk = embed(k, left, 1, limits);
      next.noalias() += kk * ext * kk.adjoint();
    }
    w = std::move(next);
    left *= d;
  }
  return partial_trace_second(w, left, d);
}

ComplexMatrix qmc_density_window(const ComplexMatrix& w0, const ConditionalDensityAmplitude& k,
                                 std::size_t n, const Limits& limits) {
  return qmc_density_window(QmcModel(w0, k.family()), n, limits);
}

QuantumHmpModel::QuantumHmpModel(QmcModel hidden, std::vector<KrausFamily> emissions)
    : hidden_(std::move(hidden)), emissions_(std::move(emissions)) {
  if (emissions_.empty()) throw DimensionError("QuantumHmpModel: no emission families");
  for (const auto& e : emissions_) {
    if (e.dim() != hidden_.dim()) throw DimensionError("QuantumHmpModel: emission dimension mismatch");
    require_unital(e, "QuantumHmpModel emission");
  }
}

const KrausFamily& QuantumHmpModel::emission(std::size_t m) const {
  if (emissions_.size() == 1) return emissions_.front();
  if (m >= emissions_.size()) {
    throw DimensionError("QuantumHmpModel: no emission family for step " + std::to_string(m));
  }
  return emissions_[m];
}

Complex quantum_hmp_joint(const QuantumHmpModel& model, const std::vector<ComplexMatrix>& g_ops,
                          const std::vector<ComplexMatrix>& f_ops) {
  if (g_ops.size() != f_ops.size() || g_ops.empty()) {
    throw DimensionError("quantum_hmp_joint: g and f lists must be non-empty and of equal length");
  }
  const std::size_t d = model.dim();
  std::vector<ComplexMatrix> a;
  a.reserve(g_ops.size());
  for (std::size_t m = 0; m < g_ops.size(); ++m) {
    require_shape(g_ops[m], d, "quantum_hmp_joint");
    require_shape(f_ops[m], d, "quantum_hmp_joint");
    a.push_back(apply_te(model.emission(m), kron(g_ops[m], f_ops[m])));
  }
  return qmc_joint_expectation(model.hidden(), a);
}

}  // namespace qhmp
