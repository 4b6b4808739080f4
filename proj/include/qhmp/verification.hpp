#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qhmp/joint_law.hpp"
#include "qhmp/quantum.hpp"
#include "qhmp/restriction.hpp"

namespace qhmp {

struct OracleReport {
  std::string name;
  double max_abs_error = 0.0;
  double tolerance = kOracleTol;
  std::size_t instances_checked = 0;
  bool pass = true;
  std::uint64_t seed = 0;
  /// Extra named quantities (tv distance, z-score, ...).
  std::vector<std::pair<std::string, double>> details;
  std::string note;

  /// Folds one comparison into the report.
  void record(double error);
  void finish() { pass = pass && max_abs_error <= tolerance; }
  double detail(const std::string& key) const;
};

/// Combines reports of the same check; errors take the max, counts add.
OracleReport merge(const OracleReport& a, const OracleReport& b);

void render_table(std::ostream& out, const std::vector<OracleReport>& reports);
void render_json(std::ostream& out, const std::vector<OracleReport>& reports);

/// Tr(W_[0,n] projector string) against the backward recursion for all
/// d^{n+1} diagonal paths.
OracleReport oracle_window_vs_recursion(const QmcModel& model,
                                        const DiagonalSpec& diag, std::size_t n,
                                        const Limits& limits = {});

/// Total mass of every law, and for every shorter horizon k the marginal of
/// the last law against the k-th law.
OracleReport projectivity_audit(const std::vector<JointLaw>& family,
                                double tol = kOracleTol);
/// Builds the family from a horizon -> law function for horizons 0..n.
OracleReport projectivity_audit(const JointLaw& law,
                                const std::function<JointLaw(std::size_t)>& law_at,
                                double tol = kOracleTol);

/// Largest |P(x_{m+1} | x_0..x_m) - P(x_{m+1} | x_m)| over interior sites m and
/// prefixes of positive probability. Sites are taken one by one. Zero for a
/// Markov law; laws with fewer than three sites are always Markov.
double markov_factorization_violation(const JointLaw& law);

struct SampleBatch {
  std::vector<std::vector<std::size_t>> paths;
  std::uint64_t seed = 0;
  std::vector<std::size_t> alphabet_sizes;
  std::vector<std::size_t> counts;  // flattened like the law table
};

/// Sequential conditional sampling: each site is drawn by cumulative
/// inversion of its conditional law given the prefix, using one uniform
/// from Rng(seed, 0) per site.
SampleBatch sample_paths(const JointLaw& law, std::size_t count, std::uint64_t seed);

struct FitThresholds {
  double max_tv = 0.02;
  double max_z = 5.0;
};

/// Total variation distance ("tv") and largest per-cell z-score ("max_z").
OracleReport frequency_fit(const SampleBatch& batch, const JointLaw& law,
                           const FitThresholds& thresholds = {});

struct SweepGrid {
  std::vector<std::size_t> dims = {2};
  std::size_t max_horizon = 3;
  std::size_t instances = 20;
};

const std::vector<std::string>& sweep_names();

/// Random instances over the grid, both sides of one identity on all paths.
/// Instance k uses Rng(seed, k). Throws std::invalid_argument for unknown ids.
OracleReport equivalence_sweep(const std::string& id, const SweepGrid& grid,
                               std::uint64_t seed);

}  // namespace qhmp
