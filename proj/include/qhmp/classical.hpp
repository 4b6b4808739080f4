#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qhmp/joint_law.hpp"
#include "qhmp/limits.hpp"
#include "qhmp/stochastic.hpp"

namespace qhmp {

using Path = std::vector<std::size_t>;
using RealFunction = std::vector<double>;

/// Non-homogeneous Markov chain with possibly different alphabets per site:
/// transitions[m] is |D_m| x |D_{m+1}|.
class MarkovChainModel {
 public:
  MarkovChainModel(ProbabilityVector initial,
                   std::vector<StochasticMatrix> transitions);

  std::size_t num_sites() const { return transitions_.size() + 1; }
  std::size_t alphabet_size(std::size_t site) const;
  const ProbabilityVector& initial() const { return initial_; }
  const StochasticMatrix& transition(std::size_t m) const {
    return transitions_.at(m);
  }
  const std::vector<StochasticMatrix>& transitions() const {
    return transitions_;
  }

  double path_prob(std::span<const std::size_t> path) const;

  /// E[f_0(X_0) f_1(X_1) ... f_n(X_n)] by backward recursion
  /// v_n = f_n, v_m = f_m * (P_m v_{m+1}).
  double expectation(const std::vector<RealFunction>& functions) const;

  /// Law of (X_0, ..., X_n).
  JointLaw law(std::size_t n, const Limits& limits = {}) const;

 private:
  ProbabilityVector initial_;
  std::vector<StochasticMatrix> transitions_;
};

/// Same-time hidden Markov model. Horizon N = emissions.size() - 1;
/// transitions[m] maps hidden step m to hidden step m + 1 and emissions[m]
/// gives p(O_m = k | H_m = j).
class ClassicalHmm {
 public:
  ClassicalHmm(ProbabilityVector initial,
               std::vector<StochasticMatrix> transitions,
               std::vector<StochasticMatrix> emissions);

  /// Homogeneous model truncated at the given horizon.
  static ClassicalHmm homogeneous(ProbabilityVector initial,
                                  const StochasticMatrix& transition,
                                  const StochasticMatrix& emission,
                                  std::size_t horizon);

  std::size_t horizon() const { return emissions_.size() - 1; }
  std::size_t hidden_size(std::size_t m) const { return emissions_.at(m).rows(); }
  std::size_t obs_size(std::size_t m) const { return emissions_.at(m).cols(); }
  std::vector<std::size_t> hidden_sizes() const;
  std::vector<std::size_t> obs_sizes() const;

  const ProbabilityVector& initial() const { return initial_; }
  const std::vector<StochasticMatrix>& transitions() const { return transitions_; }
  const std::vector<StochasticMatrix>& emissions() const { return emissions_; }

  MarkovChainModel hidden_chain() const;

 private:
  ProbabilityVector initial_;
  std::vector<StochasticMatrix> transitions_;
  std::vector<StochasticMatrix> emissions_;
};

double hmm_joint_prob(const ClassicalHmm& model,
                      std::span<const std::size_t> hidden_path,
                      std::span<const std::size_t> obs_path);

/// Law over the interleaved sites (H_0, O_0, ..., H_n, O_n).
JointLaw hmm_joint_law(const ClassicalHmm& model, std::size_t n,
                       const Limits& limits = {});

/// Forward recursion; sums hmm_joint_prob over hidden paths.
double observable_marginal(const ClassicalHmm& model,
                           std::span<const std::size_t> obs_path);

/// Law of (O_0, ..., O_n) built from observable_marginal.
JointLaw observable_law(const ClassicalHmm& model, std::size_t n,
                        const Limits& limits = {});

/// Markov chain on product alphabets carrying an HMM.
///
/// Site 0 holds (H_0, O_0) with law p_H0 (x) p_O0. Site m >= 1 holds
/// (H_m, O_{m-1}), reached with probability P_{m-1}(h, h') B_{m-1}(h, o).
/// The last site N + 1 has a one-point hidden alphabet.
/// State (h, o) at site m is flattened as h * |O| + o.
struct LiftedHmm {
  MarkovChainModel chain;
  std::vector<std::size_t> hidden_sizes;  // per chain site
  std::vector<std::size_t> obs_sizes;     // per chain site

  std::size_t state(std::size_t site, std::size_t h, std::size_t o) const {
    return h * obs_sizes[site] + o;
  }
};

LiftedHmm lift_to_markov(const ClassicalHmm& model,
                         const ProbabilityVector& p_O0);

/// Evaluates (p_H0 (x) p_O0)((g_0 (x) 1) P_0((g_1 (x) f_0) ... P_n(1 (x) f_n)))
/// with point indicators g_m = 1_{j_m}, f_m = 1_{k_m}.
double lifted_joint_prob(const LiftedHmm& lifted,
                         std::span<const std::size_t> hidden_path,
                         std::span<const std::size_t> obs_path);

/// Backward hidden Markov process: O_{m+1} is emitted from H_m.
///  obs0         P_{O_0,H_0}      rows H_0, cols O_0
///  obs_ops[m]   P_{O_{m+1},H_m}  rows H_m, cols O_{m+1}
///  hid_ops[m]   P_{H_{m+1},H_m}  rows H_m, cols H_{m+1}
class BackwardHmp {
 public:
  BackwardHmp(ProbabilityVector initial, StochasticMatrix obs0,
              std::vector<StochasticMatrix> obs_ops,
              std::vector<StochasticMatrix> hid_ops);

  std::size_t horizon() const { return hid_ops_.size(); }
  std::size_t hidden_size(std::size_t m) const;
  std::size_t obs_size(std::size_t m) const;

  const ProbabilityVector& initial() const { return initial_; }
  const StochasticMatrix& obs0() const { return obs0_; }
  const std::vector<StochasticMatrix>& obs_ops() const { return obs_ops_; }
  const std::vector<StochasticMatrix>& hid_ops() const { return hid_ops_; }

 private:
  ProbabilityVector initial_;
  StochasticMatrix obs0_;
  std::vector<StochasticMatrix> obs_ops_;
  std::vector<StochasticMatrix> hid_ops_;
};

/// Nested joint expectation with g_m on H_m and f_m on O_m, using
/// E_{O_m,H_m;H_{m-1}}(f (x) g) = P_{O_m,H_{m-1}}(f) P_{H_m,H_{m-1}}(g).
double backward_hmp_expectation(const BackwardHmp& model,
                                const std::vector<RealFunction>& g,
                                const std::vector<RealFunction>& f);

double backward_hmp_joint(const BackwardHmp& model,
                          std::span<const std::size_t> hidden_path,
                          std::span<const std::size_t> obs_path);

/// Law over (H_0, O_0, ..., H_n, O_n).
JointLaw backward_hmp_law(const BackwardHmp& model, std::size_t n,
                          const Limits& limits = {});

/// P(h, o) = P_H(h) prod_m emissions[m](h_{m-1}, o_m), h_{-1} := h_0.
/// hidden_law has one site per step; the result is interleaved
/// (H_0, O_0, ..., H_n, O_n) with n = hidden_law.horizon().
JointLaw time_consecutive_joint(const JointLaw& hidden_law,
                                const std::vector<StochasticMatrix>& emissions,
                                const Limits& limits = {});

/// Generalized hidden process with finite-matrix Markov operators.
///
/// markov_ops[m] has rows indexed by the hidden state x at the attachment
/// site and columns by pairs (o, h) flattened as o * |H| + h, so that
/// (B f (x) g)(x) = sum_{o,h} B[x, (o,h)] f(o) g(h).
/// index_maps[n][m] is the hidden site that factor m attaches to when the
/// path has horizon n. All hidden sites share one alphabet.
class GeneralizedHiddenSpec {
 public:
  GeneralizedHiddenSpec(JointLaw hidden_law,
                        std::vector<std::vector<std::size_t>> index_maps,
                        std::vector<StochasticMatrix> markov_ops,
                        std::vector<std::size_t> obs_sizes);

  static GeneralizedHiddenSpec from_hmm(const ClassicalHmm& model,
                                        const Limits& limits = {});

  static std::vector<std::vector<std::size_t>> identity_maps(std::size_t horizon);
  /// h_{n;m} = n - 1 (and 0 for n = 0).
  static std::vector<std::vector<std::size_t>> previous_site_maps(std::size_t horizon);

  std::size_t horizon() const { return index_maps_.size() - 1; }
  std::size_t hidden_size() const { return hidden_law_.alphabet_sizes().front(); }
  std::size_t obs_size(std::size_t m) const { return obs_sizes_.at(m); }

  const JointLaw& hidden_law() const { return hidden_law_; }
  const std::vector<std::vector<std::size_t>>& index_maps() const { return index_maps_; }
  const std::vector<StochasticMatrix>& markov_ops() const { return markov_ops_; }

 private:
  JointLaw hidden_law_;
  std::vector<std::vector<std::size_t>> index_maps_;
  std::vector<StochasticMatrix> markov_ops_;
  std::vector<std::size_t> obs_sizes_;
};

/// B_hat[x, (k, j)] = B[x, k] delta_{xj}.
StochasticMatrix product_form_operator(const StochasticMatrix& emission);

double generalized_hidden_joint(const GeneralizedHiddenSpec& spec,
                                std::span<const std::size_t> hidden_path,
                                std::span<const std::size_t> obs_path);

/// Law over (H_0, O_0, ..., H_n, O_n).
JointLaw generalized_hidden_law(const GeneralizedHiddenSpec& spec,
                                std::size_t n, const Limits& limits = {});

/// Interleaves two step-aligned paths into (h_0, o_0, h_1, o_1, ...).
Path interleave(std::span<const std::size_t> a, std::span<const std::size_t> b);

}  // namespace qhmp
