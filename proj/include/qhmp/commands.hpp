#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qhmp/model_io.hpp"

namespace qhmp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Bad command-line input that is not caught by the argument parser
/// (path specs, grids, incompatible options).
class UsageError : public Error {
 public:
  using Error::Error;
};

struct LabeledLaw {
  JointLaw law;
  std::vector<std::string> site_names;
};

/// Largest horizon the model defines, or nullopt for chains that extend
/// to any horizon.
std::optional<std::size_t> max_horizon(const io::Model& model);

/// Dense law of the process the model describes, at horizon n. Quantum kinds
/// are read through the diagonal algebras of `bases`.
LabeledLaw model_law(const io::Model& model, const io::BasisSet& bases, std::size_t n,
                     const Limits& limits = {});

/// Law of (H_0, O_0, ..., H_n, O_n) of a quantum HMP read on projectors of
/// the hidden and observation bases.
JointLaw quantum_hmp_law(const QuantumHmpModel& model, const OrthonormalBasis& hidden,
                         const DiagonalSpec& observation, std::size_t n,
                         const Limits& limits = {});

/// "0,1/1,0" -> {{0,1},{1,0}}.
std::vector<std::vector<std::size_t>> parse_path_spec(const std::string& spec);

/// Entry point of the qhmp tool. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qhmp::cli
