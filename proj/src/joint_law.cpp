#include "qhmp/joint_law.hpp"

#include <cmath>
#include <string>

#include "qhmp/errors.hpp"

namespace qhmp {

bool advance_path(std::vector<std::size_t>& path, std::span<const std::size_t> sizes) {
  for (std::size_t s = path.size(); s-- > 0;) {
    if (++path[s] < sizes[s]) return true;
    path[s] = 0;
  }
  return false;
}

std::size_t path_count(std::span<const std::size_t> sizes, const Limits& limits) {
  std::size_t n = 1;
  for (std::size_t s : sizes) {
    if (s == 0) throw DimensionError("path_count: empty alphabet");
    if (n > limits.max_law_entries / s) {
      throw CapExceeded("joint law exceeds cap of " + std::to_string(limits.max_law_entries) +
                        " entries");
    }
    n *= s;
  }
  return n;
}

JointLaw::JointLaw(std::vector<std::size_t> sizes, std::vector<double> probs,
                   std::size_t step, NoCheck)
    : sizes_(std::move(sizes)), probs_(std::move(probs)), step_(step) {
  if (sizes_.empty()) throw DimensionError("JointLaw: no sites");
  if (step_ == 0 || sizes_.size() % step_ != 0) {
    throw DimensionError("JointLaw: site count is not a multiple of sites_per_step");
  }
  std::size_t n = 1;
  for (std::size_t s : sizes_) {
    if (s == 0) throw DimensionError("JointLaw: empty alphabet");
    n *= s;
  }
  if (n != probs_.size()) {
    throw DimensionError("JointLaw: table has " + std::to_string(probs_.size()) +
                         " entries, alphabets require " + std::to_string(n));
  }
  for (double p : probs_) {
    if (!std::isfinite(p)) throw ValidationError("JointLaw: non-finite entry");
  }
}

JointLaw::JointLaw(std::vector<std::size_t> alphabet_sizes, std::vector<double> probs,
                   std::size_t sites_per_step)
    : JointLaw(std::move(alphabet_sizes), std::move(probs), sites_per_step, NoCheck{}) {
  double mass = 0.0;
  for (double& p : probs_) {
    if (p < 0.0) {
      if (p < -kProbabilityTol) {
        throw ValidationError("JointLaw: negative entry " + std::to_string(p));
      }
      p = 0.0;
    }
    mass += p;
  }
  if (std::abs(mass - 1.0) > kProbabilityTol) {
    throw ValidationError("JointLaw: total mass " + std::to_string(mass));
  }
}

JointLaw JointLaw::unchecked(std::vector<std::size_t> alphabet_sizes,
                             std::vector<double> probs, std::size_t sites_per_step) {
  return JointLaw(std::move(alphabet_sizes), std::move(probs), sites_per_step, NoCheck{});
}

std::size_t JointLaw::flat_index(std::span<const std::size_t> path) const {
  if (path.size() != sizes_.size()) {
    throw DimensionError("JointLaw: path has " + std::to_string(path.size()) +
                         " sites, law has " + std::to_string(sizes_.size()));
  }
  std::size_t flat = 0;
  for (std::size_t s = 0; s < sizes_.size(); ++s) {
    if (path[s] >= sizes_[s]) throw DimensionError("JointLaw: path index out of range");
    flat = flat * sizes_[s] + path[s];
  }
  return flat;
}

std::vector<std::size_t> JointLaw::path_of(std::size_t flat) const {
  std::vector<std::size_t> path(sizes_.size());
  for (std::size_t s = sizes_.size(); s-- > 0;) {
    path[s] = flat % sizes_[s];
    flat /= sizes_[s];
  }
  return path;
}

double JointLaw::total_mass() const {
  double m = 0.0;
  for (double p : probs_) m += p;
  return m;
}

JointLaw JointLaw::drop_last_sites(std::size_t count) const {
  if (count == 0) return *this;
  if (count >= sizes_.size()) throw DimensionError("JointLaw: cannot drop every site");
  std::size_t tail = 1;
  for (std::size_t s = sizes_.size() - count; s < sizes_.size(); ++s) tail *= sizes_[s];
  std::vector<double> out(probs_.size() / tail, 0.0);
  for (std::size_t i = 0; i < probs_.size(); ++i) out[i / tail] += probs_[i];
  std::vector<std::size_t> sizes(sizes_.begin(), sizes_.end() - static_cast<long>(count));
  const std::size_t step = sizes.size() % step_ == 0 ? step_ : 1;
  return JointLaw(std::move(sizes), std::move(out), step, NoCheck{});
}

JointLaw JointLaw::marginal(const std::vector<std::size_t>& keep) const {
  std::vector<std::size_t> sizes;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] >= sizes_.size() || (k > 0 && keep[k] <= keep[k - 1])) {
      throw DimensionError("JointLaw::marginal: sites must be increasing and in range");
    }
    sizes.push_back(sizes_[keep[k]]);
  }
  std::size_t n = 1;
  for (std::size_t s : sizes) n *= s;
  std::vector<double> out(n, 0.0);
  std::vector<std::size_t> path(sizes_.size(), 0);
  std::size_t i = 0;
  do {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) flat = flat * sizes[k] + path[keep[k]];
    out[flat] += probs_[i++];
  } while (advance_path(path, sizes_));
  return JointLaw(std::move(sizes), std::move(out), 1, NoCheck{});
}

}  // namespace qhmp
