#pragma once

#include <cstddef>
#include <string>

namespace qhmp {

/// Tolerance for structural checks: unitality, orthonormality, stochasticity
/// of generated objects, commutators and block-vanishing tests.
inline constexpr double kStructuralTol = 1e-10;
/// Per-entry tolerance for comparing two exact evaluations of the same quantity.
inline constexpr double kOracleTol = 1e-12;
/// Row sums of user supplied probability data.
inline constexpr double kProbabilityTol = 1e-9;

/// Size caps for dense objects. Defaults can be overridden through the
/// environment (QHMP_MAX_DIM, QHMP_MAX_LAW_ENTRIES) or the CLI flags.
struct Limits {
  std::size_t max_operator_dim = 4096;
  std::size_t max_law_entries = 10'000'000;

  static Limits from_environment();

  void check_operator_dim(std::size_t dim, const std::string& what) const;
  void check_law_entries(std::size_t entries, const std::string& what) const;
};

/// Computes base^exp, throwing CapExceeded as soon as the result passes cap.
std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t cap,
                          const std::string& what);

}  // namespace qhmp
