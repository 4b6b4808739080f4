#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qhmp/limits.hpp"

namespace qhmp {

/// Odometer increment over a product of alphabets, last site fastest.
/// Returns false once every path has been visited (path is reset to zeros).
bool advance_path(std::vector<std::size_t>& path,
                  std::span<const std::size_t> sizes);

std::size_t path_count(std::span<const std::size_t> sizes,
                       const Limits& limits = {});

/// Dense probability table over D_0 x ... x D_{N-1}, row-major with site 0
/// most significant.
///
/// Several table sites can belong to one time step (for instance the pair
/// (H_m, O_m)); sites_per_step records that grouping so that horizons and
/// the projectivity audit work on whole time steps.
class JointLaw {
 public:
  JointLaw() = default;
  /// Checks shape, finiteness, non-negativity (tiny negatives are clamped)
  /// and unit mass within kProbabilityTol.
  JointLaw(std::vector<std::size_t> alphabet_sizes, std::vector<double> probs,
           std::size_t sites_per_step = 1);

  /// Shape and finiteness checks only. Used for fault injection and for
  /// tables whose mass is itself under test.
  static JointLaw unchecked(std::vector<std::size_t> alphabet_sizes,
                            std::vector<double> probs,
                            std::size_t sites_per_step = 1);

  const std::vector<std::size_t>& alphabet_sizes() const { return sizes_; }
  std::size_t sites_per_step() const { return step_; }
  std::size_t num_sites() const { return sizes_.size(); }
  std::size_t num_steps() const { return sizes_.size() / step_; }
  std::size_t horizon() const { return num_steps() - 1; }
  std::size_t size() const { return probs_.size(); }
  const std::vector<double>& probs() const { return probs_; }

  std::size_t flat_index(std::span<const std::size_t> path) const;
  std::vector<std::size_t> path_of(std::size_t flat) const;
  double at(std::span<const std::size_t> path) const {
    return probs_[flat_index(path)];
  }
  double total_mass() const;

  /// Sums out the trailing `count` sites.
  JointLaw drop_last_sites(std::size_t count) const;
  /// Sums out the last time step.
  JointLaw drop_last_step() const { return drop_last_sites(step_); }
  /// Marginal on the listed sites (in increasing order); sites_per_step = 1.
  JointLaw marginal(const std::vector<std::size_t>& keep) const;

 private:
  struct NoCheck {};
  JointLaw(std::vector<std::size_t> sizes, std::vector<double> probs,
           std::size_t step, NoCheck);

  std::vector<std::size_t> sizes_;
  std::vector<double> probs_;
  std::size_t step_ = 1;
};

}  // namespace qhmp
