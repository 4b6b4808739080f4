#include "qhmp/restriction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qhmp/errors.hpp"

namespace qhmp {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

const OrthonormalBasis& basis_or_standard(const std::optional<OrthonormalBasis>& b,
                                          const OrthonormalBasis& fallback) {
  return b ? *b : fallback;
}

}  // namespace

// ------------------------------------------------------------- DiagonalSpec

DiagonalSpec::DiagonalSpec(OrthonormalBasis basis) : bases_{std::move(basis)} {}

DiagonalSpec::DiagonalSpec(std::vector<OrthonormalBasis> bases) : bases_(std::move(bases)) {
  if (bases_.empty()) throw DimensionError("DiagonalSpec: no bases");
  for (const auto& b : bases_) {
    if (b.dim() != bases_.front().dim()) throw DimensionError("DiagonalSpec: bases differ in dimension");
  }
}

const OrthonormalBasis& DiagonalSpec::basis(std::size_t site) const {
  if (bases_.size() == 1) return bases_.front();
  if (site >= bases_.size()) {
    throw DimensionError("DiagonalSpec: no basis for site " + std::to_string(site));
  }
  return bases_[site];
}

// --------------------------------------------------------------- PrmiTensor

PrmiTensor::PrmiTensor(std::size_t d, std::vector<double> values)
    : d_(d), values_(std::move(values)) {
  if (d_ == 0 || values_.size() != d_ * d_ * d_) {
    throw DimensionError("PrmiTensor: expected d^3 values");
  }
  for (std::size_t r = 0; r < d_; ++r) {
    double sum = 0.0;
    for (std::size_t k = 0; k < d_ * d_; ++k) {
      double& v = values_[r * d_ * d_ + k];
      if (!std::isfinite(v)) throw ValidationError("PrmiTensor: non-finite entry");
      if (v < -kOracleTol) {
        throw ValidationError("PrmiTensor: negative entry " + std::to_string(v));
      }
      v = std::max(v, 0.0);
      sum += v;
    }
    if (std::abs(sum - 1.0) > kProbabilityTol) {
      throw ValidationError("PrmiTensor: row " + std::to_string(r) + " sums to " +
                            std::to_string(sum));
    }
  }
}

double PrmiTensor::marginal(std::size_t r, std::size_t m) const {
  double s = 0.0;
  for (std::size_t i = 0; i < d_; ++i) s += (*this)(r, m, i);
  return s;
}

// -------------------------------------------------------------- restriction

double restrict_qmc_path_prob(const QmcModel& model, const DiagonalSpec& diag,
                              std::span<const std::size_t> path) {
  if (diag.dim() != model.dim()) throw DimensionError("restrict_qmc_path_prob: basis dimension mismatch");
  if (path.empty()) throw DimensionError("restrict_qmc_path_prob: empty path");
  std::vector<ComplexMatrix> ops;
  for (std::size_t m = 0; m < path.size(); ++m) {
    if (path[m] >= model.dim()) throw DimensionError("restrict_qmc_path_prob: index out of range");
    ops.push_back(diag.basis(m).projector(path[m]));
  }
  const Complex v = qmc_joint_expectation(model, ops);
  if (std::abs(v.imag()) > kStructuralTol || v.real() < -kStructuralTol ||
      v.real() > 1.0 + kStructuralTol) {
    throw ValidationError("restrict_qmc_path_prob: value (" + std::to_string(v.real()) + ", " +
                          std::to_string(v.imag()) + ") is not a probability");
  }
  return std::clamp(v.real(), 0.0, 1.0);
}

JointLaw restricted_law(const QmcModel& model, const DiagonalSpec& diag, std::size_t n,
                        const Limits& limits) {
  std::vector<std::size_t> sizes(n + 1, model.dim());
  std::vector<double> probs(path_count(sizes, limits));
  Path path(n + 1, 0);
  std::size_t i = 0;
  do {
    probs[i++] = restrict_qmc_path_prob(model, diag, path);
  } while (advance_path(path, sizes));
  return JointLaw(std::move(sizes), std::move(probs));
}

SingleCdaDiagnosis check_diagonalizable_single_cda(const KrausFamily& kraus,
                                                   const std::optional<OrthonormalBasis>& basis) {
  SingleCdaDiagnosis out;
  const std::size_t d = kraus.dim();
  if (kraus.size() != 1) {
    out.reason = "family has " + std::to_string(kraus.size()) + " operators";
    return out;
  }
  if (basis && basis->dim() != d) throw DimensionError("check_diagonalizable_single_cda: basis dimension mismatch");
  const ComplexMatrix k = basis ? basis->to_basis2(kraus.op(0)) : kraus.op(0);

  const double off = off_block_norm(KrausFamily(d, {k}), OrthonormalBasis::standard(d));
  if (off >= kStructuralTol) {
    out.reason = "operator is not block diagonal in the first factor";
    out.violation = off;
    return out;
  }
  const CommutationReport comm = check_shift_commutation(k, d);
  if (!comm.commutes) {
    out.reason = "operator does not commute with its right shift";
    out.violation = comm.violation;
    return out;
  }
  double offdiag = 0.0;
  for (Eigen::Index a = 0; a < k.rows(); ++a) {
    for (Eigen::Index b = 0; b < k.cols(); ++b) {
      if (a != b) offdiag = std::max(offdiag, std::abs(k(a, b)));
    }
  }
  if (offdiag >= kStructuralTol) {
    out.reason = "diagonal blocks are not diagonal";
    out.violation = offdiag;
    return out;
  }
  std::vector<double> p(d * d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t l = 0; l < d; ++l) p[j * d + l] = std::norm(k(idx(j * d + l), idx(j * d + l)));
  }
  out.transition = StochasticMatrix(d, d, std::move(p));
  out.diagonalizable = true;
  out.violation = std::max({off, comm.violation, offdiag});
  return out;
}

ClassicalHmm hmm_restriction_law(const QmcModel& model, const DiagonalSpec& obs_bases,
                                 std::size_t horizon,
                                 const std::optional<OrthonormalBasis>& hidden_basis) {
  const std::size_t d = model.dim();
  if (obs_bases.dim() != d) throw DimensionError("hmm_restriction_law: basis dimension mismatch");
  const OrthonormalBasis standard = OrthonormalBasis::standard(d);
  const OrthonormalBasis& hb = basis_or_standard(hidden_basis, standard);
  if (hb.dim() != d) throw DimensionError("hmm_restriction_law: hidden basis dimension mismatch");

  const ComplexMatrix w = hb.to_basis(model.w0());
  double off = 0.0;
  std::vector<double> p0(d);
  for (std::size_t a = 0; a < d; ++a) {
    p0[a] = w(idx(a), idx(a)).real();
    for (std::size_t b = 0; b < d; ++b) {
      if (a != b) off = std::max(off, std::abs(w(idx(a), idx(b))));
    }
  }
  if (off > kStructuralTol) {
    throw ValidationError("hmm_restriction_law: initial density is not diagonal in the hidden basis");
  }

  std::vector<StochasticMatrix> transitions;
  for (std::size_t m = 0; m < horizon; ++m) {
    SingleCdaDiagnosis diag = check_diagonalizable_single_cda(model.family(m), hb);
    if (!diag.diagonalizable) {
      throw ValidationError("hmm_restriction_law: step " + std::to_string(m) +
                            " is not diagonalizable: " + diag.reason);
    }
    transitions.push_back(std::move(*diag.transition));
  }
  std::vector<StochasticMatrix> emissions;
  for (std::size_t m = 0; m <= horizon; ++m) {
    emissions.push_back(basis_overlap_matrix(hb, obs_bases.basis(m)));
  }
  return ClassicalHmm(ProbabilityVector(std::move(p0)), std::move(transitions),
                      std::move(emissions));
}

// ------------------------------------------------------- D_e-preservation

namespace {

std::vector<ComplexMatrix> in_basis(const KrausFamily& kraus, const OrthonormalBasis& basis) {
  if (basis.dim() != kraus.dim()) throw DimensionError("Kraus family and basis differ in dimension");
  std::vector<ComplexMatrix> out;
  for (const auto& k : kraus.operators()) out.push_back(basis.to_basis2(k));
  return out;
}

}  // namespace

DePreservingReport check_de_preserving(const KrausFamily& kraus, const OrthonormalBasis& basis) {
  const std::size_t d = kraus.dim();
  const auto ks = in_basis(kraus, basis);
  double worst = 0.0;
  for (std::size_t m = 0; m < d; ++m) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t jp = 0; jp < d; ++jp) {
        if (j == jp) continue;
        for (std::size_t i = 0; i < d; ++i) {
          Complex s = 0.0;
          for (const auto& k : ks) {
            for (std::size_t l = 0; l < d; ++l) {
              s += k(idx(m * d + i), idx(jp * d + l)) * std::conj(k(idx(m * d + i), idx(j * d + l)));
            }
          }
          worst = std::max(worst, std::abs(s));
        }
      }
    }
  }
  return {worst <= kStructuralTol, worst};
}

PrmiTensor extract_prmi(const KrausFamily& kraus, const OrthonormalBasis& basis) {
  const DePreservingReport rep = check_de_preserving(kraus, basis);
  if (!rep.preserving) {
    throw ValidationError("extract_prmi: family is not D_e-preserving (violation " +
                          std::to_string(rep.violation) + ")");
  }
  const std::size_t d = kraus.dim();
  const auto ks = in_basis(kraus, basis);
  std::vector<double> values(d * d * d, 0.0);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t m = 0; m < d; ++m) {
      for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        // <e_i, K_{m,r} K_{m,r}^* e_i> is the squared norm of row i of block (m, r).
        for (const auto& k : ks) {
          for (std::size_t l = 0; l < d; ++l) s += std::norm(k(idx(m * d + i), idx(r * d + l)));
        }
        values[(r * d + m) * d + i] = s;
      }
    }
  }
  return PrmiTensor(d, std::move(values));
}

double de_joint_prob(const ProbabilityVector& p0, const PrmiTensor& prmi,
                     std::span<const std::size_t> path) {
  const std::size_t d = prmi.dim();
  if (p0.size() != d) throw DimensionError("de_joint_prob: initial law has the wrong size");
  if (path.empty()) throw DimensionError("de_joint_prob: empty path");
  for (std::size_t s : path) {
    if (s >= d) throw DimensionError("de_joint_prob: index out of range");
  }
  const std::size_t n = path.size() - 1;
  std::vector<double> v(d), next(d);
  for (std::size_t r = 0; r < d; ++r) v[r] = prmi.marginal(r, path[n]);
  for (std::size_t m = n; m-- > 0;) {
    for (std::size_t r = 0; r < d; ++r) {
      double s = 0.0;
      for (std::size_t rp = 0; rp < d; ++rp) s += prmi(r, path[m], rp) * v[rp];
      next[r] = s;
    }
    std::swap(v, next);
  }
  double p = 0.0;
  for (std::size_t r = 0; r < d; ++r) p += p0[r] * v[r];
  return p;
}

JointLaw de_joint_law(const ProbabilityVector& p0, const PrmiTensor& prmi, std::size_t n,
                      const Limits& limits) {
  std::vector<std::size_t> sizes(n + 1, prmi.dim());
  std::vector<double> probs(path_count(sizes, limits));
  Path path(n + 1, 0);
  std::size_t i = 0;
  do {
    probs[i++] = de_joint_prob(p0, prmi, path);
  } while (advance_path(path, sizes));
  return JointLaw(std::move(sizes), std::move(probs));
}

double off_block_norm(const KrausFamily& kraus, const OrthonormalBasis& basis) {
  const std::size_t d = kraus.dim();
  double worst = 0.0;
  for (const auto& k : in_basis(kraus, basis)) {
    for (std::size_t h = 0; h < d; ++h) {
      for (std::size_t hp = 0; hp < d; ++hp) {
        if (h != hp) worst = std::max(worst, max_abs(first_factor_block(k, d, h, hp)));
      }
    }
  }
  return worst;
}

bool is_restriction_markov(const KrausFamily& kraus, const OrthonormalBasis& basis) {
  const DePreservingReport rep = check_de_preserving(kraus, basis);
  if (!rep.preserving) {
    throw ValidationError("is_restriction_markov: family is not D_e-preserving (violation " +
                          std::to_string(rep.violation) + ")");
  }
  return off_block_norm(kraus, basis) < kStructuralTol;
}

// ----------------------------------------------------------------- ZYChain

ZYChain::ZYChain(std::size_t d, ProbabilityVector initial, StochasticMatrix transition)
    : d_(d), initial_(std::move(initial)), transition_(std::move(transition)) {
  const std::size_t n = d_ * d_;
  if (initial_.size() != n || transition_.rows() != n || transition_.cols() != n) {
    throw DimensionError("ZYChain: expected objects on d^2 = " + std::to_string(n) + " states");
  }
  for (std::size_t j = 0; j < d_; ++j) {
    for (std::size_t i = 1; i < d_; ++i) {
      for (std::size_t c = 0; c < n; ++c) {
        if (std::abs(transition_(j * d_ + i, c) - transition_(j * d_, c)) > kProbabilityTol) {
          throw ValidationError("ZYChain: transition row (j, i) depends on i");
        }
      }
    }
  }
}

MarkovChainModel ZYChain::chain(std::size_t n) const {
  return MarkovChainModel(initial_, std::vector<StochasticMatrix>(n, transition_));
}

double ZYChain::y_marginal(std::span<const std::size_t> path) const {
  if (path.empty()) throw DimensionError("ZYChain::y_marginal: empty path");
  std::vector<RealFunction> fs;
  for (std::size_t y : path) {
    if (y >= d_) throw DimensionError("ZYChain::y_marginal: index out of range");
    RealFunction f(d_ * d_, 0.0);
    for (std::size_t z = 0; z < d_; ++z) f[z * d_ + y] = 1.0;
    fs.push_back(std::move(f));
  }
  return chain(path.size() - 1).expectation(fs);
}

StochasticMatrix ZYChain::z_transition() const {
  std::vector<double> t(d_ * d_, 0.0);
  for (std::size_t j = 0; j < d_; ++j) {
    for (std::size_t jp = 0; jp < d_; ++jp) {
      for (std::size_t ip = 0; ip < d_; ++ip) t[j * d_ + jp] += transition_(j * d_, jp * d_ + ip);
    }
  }
  return StochasticMatrix(d_, d_, std::move(t));
}

JointLaw ZYChain::law(std::size_t n, const Limits& limits) const {
  // Row-major flattening of (j*d + i) per step equals that of (j, i) as two sites.
  const JointLaw packed = chain(n).law(n, limits);
  return JointLaw(std::vector<std::size_t>(2 * (n + 1), d_), packed.probs(), 2);
}

ZYChain embed_in_zy(const PrmiTensor& prmi, const ProbabilityVector& p0) {
  const std::size_t d = prmi.dim();
  if (p0.size() != d) throw DimensionError("embed_in_zy: initial law has the wrong size");
  std::vector<double> init(d * d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t r = 0; r < d; ++r) init[j * d + i] += p0[r] * prmi(r, i, j);
    }
  }
  std::vector<double> t(d * d * d * d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t jp = 0; jp < d; ++jp) {
        for (std::size_t ip = 0; ip < d; ++ip) {
          t[(j * d + i) * d * d + jp * d + ip] = prmi(j, ip, jp);
        }
      }
    }
  }
  return ZYChain(d, ProbabilityVector(std::move(init)), StochasticMatrix(d * d, d * d, std::move(t)));
}

// --------------------------------------------------------------- three-tier

DiagonalEmissionCda::DiagonalEmissionCda(ComplexMatrix coeffs, OrthonormalBasis obs_basis)
    : c_(std::move(coeffs)), obs_(std::move(obs_basis)) {
  if (c_.rows() != c_.cols() || c_.rows() != idx(obs_.dim())) {
    throw DimensionError("DiagonalEmissionCda: coefficients must be d x d");
  }
  (void)probabilities();
}

StochasticMatrix DiagonalEmissionCda::probabilities() const {
  const std::size_t d = obs_.dim();
  std::vector<double> p(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) p[i * d + j] = std::norm(c_(idx(i), idx(j)));
  }
  return StochasticMatrix(d, d, std::move(p));
}

KrausFamily DiagonalEmissionCda::to_kraus(const OrthonormalBasis& hprime_basis) const {
  const std::size_t d = obs_.dim();
  if (hprime_basis.dim() != d) throw DimensionError("DiagonalEmissionCda: basis dimension mismatch");
  ComplexMatrix k = ComplexMatrix::Zero(idx(d * d), idx(d * d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      k += c_(idx(i), idx(j)) * kron(hprime_basis.projector(i), obs_.projector(j));
    }
  }
  return KrausFamily(d, {k});
}

JointLaw three_tier_restriction_law(const QmcModel& hidden_model, const DiagonalSpec& hprime_bases,
                                    const std::vector<DiagonalEmissionCda>& emissions,
                                    std::size_t n,
                                    const std::optional<OrthonormalBasis>& hidden_basis,
                                    const Limits& limits) {
  if (emissions.empty()) throw DimensionError("three_tier_restriction_law: no emission CDAs");
  if (emissions.size() != 1 && emissions.size() < n + 1) {
    throw DimensionError("three_tier_restriction_law: missing emission CDAs");
  }
  const ClassicalHmm hprime = hmm_restriction_law(hidden_model, hprime_bases, n, hidden_basis);
  std::vector<StochasticMatrix> p;
  for (std::size_t m = 0; m <= n; ++m) {
    p.push_back(emissions[emissions.size() == 1 ? 0 : m].probabilities());
  }
  const std::size_t d = hidden_model.dim();
  std::vector<std::size_t> sizes(2 * (n + 1), d);
  std::vector<double> probs(path_count(sizes, limits));
  Path path(sizes.size(), 0), h(n + 1), k(n + 1);
  std::size_t i = 0;
  do {
    double emit = 1.0;
    for (std::size_t m = 0; m <= n; ++m) {
      h[m] = path[2 * m];
      k[m] = path[2 * m + 1];
      emit *= p[m](h[m], k[m]);
    }
    probs[i++] = emit == 0.0 ? 0.0 : emit * observable_marginal(hprime, h);
  } while (advance_path(path, sizes));
  return JointLaw(std::move(sizes), std::move(probs), 2);
}

}  // namespace qhmp
