#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qhmp/classical.hpp"
#include "qhmp/errors.hpp"
#include "qhmp/quantum.hpp"
#include "qhmp/restriction.hpp"

namespace qhmp::io {

inline constexpr int kFormatVersion = 1;

/// Malformed file: bad JSON, missing fields, wrong types, bad complex entries.
class ParseError : public Error {
 public:
  using Error::Error;
};

enum class ModelKind {
  ClassicalHmm,
  BackwardHmp,
  TimeConsecutive,
  Generalized,
  Qmc,
  QuantumHmp,
  ZyChain,
};

std::string to_string(ModelKind kind);
ModelKind parse_kind(const std::string& name);

struct TimeConsecutiveModel {
  JointLaw hidden_law;
  std::vector<StochasticMatrix> emissions;
};

using Model = std::variant<ClassicalHmm, BackwardHmp, TimeConsecutiveModel,
                           GeneralizedHiddenSpec, QmcModel, QuantumHmpModel, ZYChain>;

/// Hidden basis and per-site observation bases attached to a model or given
/// in a separate bases file.
struct BasisSet {
  std::optional<OrthonormalBasis> hidden;
  std::vector<OrthonormalBasis> observation;

  bool empty() const { return !hidden && observation.empty(); }
  /// Observation bases if present, else the hidden basis, else standard.
  DiagonalSpec observation_spec(std::size_t d) const;
  OrthonormalBasis hidden_or_standard(std::size_t d) const;
};

/// Parsed but not yet validated model file.
struct ModelDocument {
  ModelKind kind = ModelKind::ClassicalHmm;
  std::string name;
  std::optional<std::uint64_t> seed;
  nlohmann::json dims = nlohmann::json::object();
  nlohmann::json payload = nlohmann::json::object();
  nlohmann::json bases;  // null when absent

  std::optional<std::size_t> declared_horizon() const;
};

ModelDocument parse_document(const std::string& text);
ModelDocument load_document(const std::string& path);
nlohmann::json to_json(const ModelDocument& doc);
std::string dump_document(const ModelDocument& doc);

struct InvariantCheck {
  std::string name;
  bool pass = false;
  double violation = 0.0;
  std::string message;
};

/// Evaluates every numerical invariant of the payload and reports them
/// without throwing; structural problems raise ParseError.
std::vector<InvariantCheck> check_document(const ModelDocument& doc);

/// Constructs the typed model. Invalid content raises the library's
/// validation or dimension errors.
Model build_model(const ModelDocument& doc);
BasisSet read_bases(const nlohmann::json& bases, std::size_t d);
BasisSet load_bases_file(const std::string& path, std::size_t d);
std::size_t model_dim(const Model& model);

/// Serializes a typed model (inverse of build_model).
ModelDocument to_document(const Model& model, const std::string& name = {},
                          std::optional<std::uint64_t> seed = {});
nlohmann::json bases_to_json(const BasisSet& bases);

nlohmann::json complex_matrix_to_json(const ComplexMatrix& m);
ComplexMatrix complex_matrix_from_json(const nlohmann::json& j, const std::string& what);

// CSV helpers. Numbers use 17 significant digits and '.' regardless of locale.
std::string format_number(double x);
void write_law_csv(std::ostream& out, const JointLaw& law,
                   const std::vector<std::string>& site_names);
void write_prmi_csv(std::ostream& out, const PrmiTensor& prmi);
void write_paths_csv(std::ostream& out, const std::vector<std::vector<std::size_t>>& paths,
                     const std::vector<std::string>& site_names);

}  // namespace qhmp::io
