#include "qhmp/model_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace qhmp::io {

using nlohmann::json;

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

const json& field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(what + ": missing field '" + key + "'");
  }
  return j.at(key);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError(what + ": expected a number");
  return j.get<double>();
}

std::size_t count(const json& j, const std::string& what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw ParseError(what + ": expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::vector<double> real_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) v.push_back(number(x, what));
  return v;
}

std::vector<std::size_t> size_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array of integers");
  std::vector<std::size_t> v;
  for (const auto& x : j) v.push_back(count(x, what));
  return v;
}

struct RawMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;
};

RawMatrix real_matrix(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ParseError(what + ": expected a non-empty matrix");
  RawMatrix m;
  m.rows = j.size();
  for (const auto& row : j) {
    const auto r = real_vector(row, what);
    if (m.data.empty()) m.cols = r.size();
    if (r.size() != m.cols || r.empty()) throw ParseError(what + ": ragged or empty rows");
    m.data.insert(m.data.end(), r.begin(), r.end());
  }
  return m;
}

std::vector<RawMatrix> real_matrices(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected a list of matrices");
  std::vector<RawMatrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(real_matrix(j[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

StochasticMatrix to_stochastic(const RawMatrix& m) {
  return StochasticMatrix(m.rows, m.cols, m.data);
}

std::vector<StochasticMatrix> to_stochastic(const std::vector<RawMatrix>& ms) {
  std::vector<StochasticMatrix> out;
  for (const auto& m : ms) out.push_back(to_stochastic(m));
  return out;
}

json matrix_json(const StochasticMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  }
  return rows;
}

json matrices_json(const std::vector<StochasticMatrix>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(matrix_json(m));
  return out;
}

std::size_t quantum_dim(const ModelDocument& doc) {
  const std::size_t d = count(field(doc.dims, "d", "dims"), "dims.d");
  if (d == 0) throw ParseError("dims.d must be positive");
  if (doc.dims.contains("factor_shape")) {
    const auto fs = size_vector(doc.dims.at("factor_shape"), "dims.factor_shape");
    if (fs.size() != 2 || fs[0] != d || fs[1] != d) {
      throw ParseError("dims.factor_shape must be [d, d]");
    }
  }
  return d;
}

ComplexMatrix square_complex(const json& j, std::size_t n, const std::string& what) {
  ComplexMatrix m = complex_matrix_from_json(j, what);
  if (m.rows() != idx(n) || m.cols() != idx(n)) {
    throw ParseError(what + ": expected " + std::to_string(n) + "x" + std::to_string(n));
  }
  return m;
}

std::vector<std::vector<ComplexMatrix>> kraus_lists(const json& j, std::size_t d,
                                                    const std::string& what) {
  if (!j.is_array() || j.empty()) throw ParseError(what + ": expected a non-empty list of families");
  std::vector<std::vector<ComplexMatrix>> out;
  for (std::size_t f = 0; f < j.size(); ++f) {
    const std::string w = what + "[" + std::to_string(f) + "]";
    if (!j[f].is_array() || j[f].empty()) throw ParseError(w + ": expected a non-empty list of operators");
    std::vector<ComplexMatrix> ops;
    for (std::size_t r = 0; r < j[f].size(); ++r) {
      ops.push_back(square_complex(j[f][r], d * d, w + "[" + std::to_string(r) + "]"));
    }
    out.push_back(std::move(ops));
  }
  return out;
}

std::vector<KrausFamily> families(const std::vector<std::vector<ComplexMatrix>>& lists, std::size_t d) {
  std::vector<KrausFamily> out;
  for (const auto& ops : lists) out.emplace_back(d, ops);
  return out;
}

json families_json(const std::vector<KrausFamily>& fs) {
  json out = json::array();
  for (const auto& f : fs) {
    json ops = json::array();
    for (const auto& k : f.operators()) ops.push_back(complex_matrix_to_json(k));
    out.push_back(std::move(ops));
  }
  return out;
}

// Hidden law of the time-consecutive and generalized kinds: either an
// explicit table or a Markov chain.
JointLaw hidden_law_from(const json& payload, const std::string& what) {
  if (payload.contains("hidden_law")) {
    const json& h = payload.at("hidden_law");
    return JointLaw(size_vector(field(h, "alphabet_sizes", what), what + ".alphabet_sizes"),
                    real_vector(field(h, "probs", what), what + ".probs"));
  }
  if (payload.contains("hidden_chain")) {
    const json& h = payload.at("hidden_chain");
    const auto trans = to_stochastic(real_matrices(field(h, "transitions", what), what + ".transitions"));
    const MarkovChainModel chain(ProbabilityVector(real_vector(field(h, "initial", what), what + ".initial")),
                                 trans);
    return chain.law(trans.size());
  }
  throw ParseError(what + ": expected 'hidden_law' or 'hidden_chain'");
}

json hidden_law_json(const JointLaw& law) {
  return json{{"hidden_law", {{"alphabet_sizes", law.alphabet_sizes()}, {"probs", law.probs()}}}};
}

bool is_matrix_list(const json& j) {
  return j.is_array() && !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_array() &&
         !j[0][0].empty() && j[0][0][0].is_array();
}

// --------------------------------------------------------------- checks

void add_stochastic(std::vector<InvariantCheck>& out, const std::string& name, const RawMatrix& m) {
  const StochasticityReport r = check_stochastic(m.rows, m.cols, m.data);
  InvariantCheck c;
  c.name = name + " stochastic";
  c.violation = std::max(r.max_row_sum_error, r.max_negativity);
  c.pass = r.ok();
  if (!r.finite) c.message = "non-finite entry";
  out.push_back(std::move(c));
}

void add_vector(std::vector<InvariantCheck>& out, const std::string& name, const std::vector<double>& v) {
  add_stochastic(out, name, RawMatrix{1, v.size(), v});
}

void add_kraus(std::vector<InvariantCheck>& out, const std::string& name,
               const std::vector<std::vector<ComplexMatrix>>& lists, std::size_t d) {
  for (std::size_t f = 0; f < lists.size(); ++f) {
    const KrausReport r = validate_kraus(KrausFamily(d, lists[f]));
    out.push_back({name + "[" + std::to_string(f) + "] unitality", r.pass, r.max_violation, {}});
  }
}

void add_density(std::vector<InvariantCheck>& out, const ComplexMatrix& w0) {
  const DensityReport r = check_density(w0);
  out.push_back({"w0 hermitian", r.hermiticity <= kOracleTol, r.hermiticity, {}});
  out.push_back({"w0 trace one", r.trace_error <= kStructuralTol, r.trace_error, {}});
  out.push_back({"w0 positive", r.min_eigenvalue >= -kStructuralTol, std::max(0.0, -r.min_eigenvalue), {}});
}

void add_construction(std::vector<InvariantCheck>& out, const ModelDocument& doc) {
  InvariantCheck c{"model construction", true, 0.0, {}};
  try {
    (void)build_model(doc);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    c.pass = false;
    c.message = e.what();
  }
  out.push_back(std::move(c));
}

}  // namespace

// ------------------------------------------------------------ basics

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::ClassicalHmm: return "classical-hmm";
    case ModelKind::BackwardHmp: return "backward-hmp";
    case ModelKind::TimeConsecutive: return "time-consecutive";
    case ModelKind::Generalized: return "generalized";
    case ModelKind::Qmc: return "qmc";
    case ModelKind::QuantumHmp: return "quantum-hmp";
    case ModelKind::ZyChain: return "zy-chain";
  }
  return "unknown";
}

ModelKind parse_kind(const std::string& name) {
  for (auto k : {ModelKind::ClassicalHmm, ModelKind::BackwardHmp, ModelKind::TimeConsecutive,
                 ModelKind::Generalized, ModelKind::Qmc, ModelKind::QuantumHmp, ModelKind::ZyChain}) {
    if (to_string(k) == name) return k;
  }
  throw ParseError("unknown model kind '" + name + "'");
}

DiagonalSpec BasisSet::observation_spec(std::size_t d) const {
  if (!observation.empty()) return DiagonalSpec(observation);
  return DiagonalSpec(hidden_or_standard(d));
}

OrthonormalBasis BasisSet::hidden_or_standard(std::size_t d) const {
  return hidden ? *hidden : OrthonormalBasis::standard(d);
}

std::optional<std::size_t> ModelDocument::declared_horizon() const {
  if (dims.is_object() && dims.contains("horizon")) return count(dims.at("horizon"), "dims.horizon");
  return std::nullopt;
}

json complex_matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix complex_matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ParseError(what + ": expected a non-empty matrix");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (const auto& row : j) {
    if (!row.is_array() || row.empty()) throw ParseError(what + ": rows must be non-empty arrays");
    if (cols == 0) cols = row.size();
    if (row.size() != cols) throw ParseError(what + ": ragged rows");
  }
  ComplexMatrix m(idx(rows), idx(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = j[r][c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw ParseError(what + ": entry (" + std::to_string(r) + ", " + std::to_string(c) +
                         ") is not a [re, im] pair");
      }
      m(idx(r), idx(c)) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

ModelDocument parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("model file must be a JSON object");
  const json& version = field(j, "format_version", "model file");
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion) {
    throw ParseError("unsupported format_version (expected " + std::to_string(kFormatVersion) + ")");
  }
  const json& kind = field(j, "kind", "model file");
  if (!kind.is_string()) throw ParseError("kind must be a string");

  ModelDocument doc;
  doc.kind = parse_kind(kind.get<std::string>());
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ParseError("name must be a string");
    doc.name = j["name"].get<std::string>();
  }
  if (j.contains("seed")) doc.seed = count(j["seed"], "seed");
  if (j.contains("dims")) {
    if (!j["dims"].is_object()) throw ParseError("dims must be an object");
    doc.dims = j["dims"];
  }
  doc.payload = field(j, "payload", "model file");
  if (!doc.payload.is_object()) throw ParseError("payload must be an object");
  if (j.contains("bases")) doc.bases = j["bases"];
  return doc;
}

ModelDocument load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

json to_json(const ModelDocument& doc) {
  json j{{"format_version", kFormatVersion}, {"kind", to_string(doc.kind)}};
  if (!doc.name.empty()) j["name"] = doc.name;
  if (doc.seed) j["seed"] = *doc.seed;
  j["dims"] = doc.dims;
  j["payload"] = doc.payload;
  if (!doc.bases.is_null()) j["bases"] = doc.bases;
  return j;
}

std::string dump_document(const ModelDocument& doc) { return to_json(doc).dump(2) + "\n"; }

// ------------------------------------------------------------ building

Model build_model(const ModelDocument& doc) {
  const json& p = doc.payload;
  switch (doc.kind) {
    case ModelKind::ClassicalHmm: {
      auto trans = to_stochastic(real_matrices(field(p, "transitions", "payload"), "transitions"));
      auto emis = to_stochastic(real_matrices(field(p, "emissions", "payload"), "emissions"));
      ProbabilityVector init(real_vector(field(p, "initial", "payload"), "initial"));
      if (const auto h = doc.declared_horizon(); h && emis.size() == 1 && trans.size() <= 1) {
        if (*h > 0 && trans.empty()) throw ParseError("homogeneous model needs one transition matrix");
        return ClassicalHmm(std::move(init), std::vector<StochasticMatrix>(*h, trans.empty() ? emis[0] : trans[0]),
                            std::vector<StochasticMatrix>(*h + 1, emis[0]));
      }
      return ClassicalHmm(std::move(init), std::move(trans), std::move(emis));
    }
    case ModelKind::BackwardHmp:
      return BackwardHmp(ProbabilityVector(real_vector(field(p, "initial", "payload"), "initial")),
                         to_stochastic(real_matrix(field(p, "obs0", "payload"), "obs0")),
                         to_stochastic(real_matrices(field(p, "obs_ops", "payload"), "obs_ops")),
                         to_stochastic(real_matrices(field(p, "hid_ops", "payload"), "hid_ops")));
    case ModelKind::TimeConsecutive: {
      JointLaw hidden = hidden_law_from(p, "payload");
      auto emis = to_stochastic(real_matrices(field(p, "emissions", "payload"), "emissions"));
      // Validate the shapes once here so that errors surface at load time.
      (void)time_consecutive_joint(hidden, emis);
      return TimeConsecutiveModel{std::move(hidden), std::move(emis)};
    }
    case ModelKind::Generalized: {
      JointLaw hidden = hidden_law_from(p, "payload");
      auto ops = to_stochastic(real_matrices(field(p, "markov_ops", "payload"), "markov_ops"));
      if (ops.empty()) throw ParseError("markov_ops must not be empty");
      const std::size_t dh = hidden.alphabet_sizes().front();
      std::vector<std::size_t> obs_sizes;
      if (p.contains("obs_sizes")) {
        obs_sizes = size_vector(p.at("obs_sizes"), "obs_sizes");
      } else {
        for (const auto& b : ops) obs_sizes.push_back(b.cols() / dh);
      }
      const json& maps = field(p, "index_maps", "payload");
      std::vector<std::vector<std::size_t>> index_maps;
      const std::size_t horizon = ops.size() - 1;
      if (maps.is_string()) {
        const auto s = maps.get<std::string>();
        if (s == "identity") {
          index_maps = GeneralizedHiddenSpec::identity_maps(horizon);
        } else if (s == "previous") {
          index_maps = GeneralizedHiddenSpec::previous_site_maps(horizon);
        } else {
          throw ParseError("index_maps must be 'identity', 'previous' or a list");
        }
      } else {
        if (!maps.is_array()) throw ParseError("index_maps must be 'identity', 'previous' or a list");
        for (const auto& row : maps) index_maps.push_back(size_vector(row, "index_maps"));
      }
      return GeneralizedHiddenSpec(std::move(hidden), std::move(index_maps), std::move(ops),
                                   std::move(obs_sizes));
    }
    case ModelKind::Qmc: {
      const std::size_t d = quantum_dim(doc);
      return QmcModel(square_complex(field(p, "w0", "payload"), d, "w0"),
                      families(kraus_lists(field(p, "kraus", "payload"), d, "kraus"), d));
    }
    case ModelKind::QuantumHmp: {
      const std::size_t d = quantum_dim(doc);
      QmcModel hidden(square_complex(field(p, "w0", "payload"), d, "w0"),
                      families(kraus_lists(field(p, "hidden_kraus", "payload"), d, "hidden_kraus"), d));
      return QuantumHmpModel(std::move(hidden),
                             families(kraus_lists(field(p, "emission_kraus", "payload"), d, "emission_kraus"), d));
    }
    case ModelKind::ZyChain: {
      const auto init = real_vector(field(p, "initial", "payload"), "initial");
      const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(init.size()))));
      if (d * d != init.size()) throw ParseError("zy-chain initial law must have d^2 entries");
      return ZYChain(d, ProbabilityVector(init),
                     to_stochastic(real_matrix(field(p, "transition", "payload"), "transition")));
    }
  }
  throw ParseError("unhandled model kind");
}

std::vector<InvariantCheck> check_document(const ModelDocument& doc) {
  std::vector<InvariantCheck> out;
  const json& p = doc.payload;
  switch (doc.kind) {
    case ModelKind::ClassicalHmm:
      add_vector(out, "initial", real_vector(field(p, "initial", "payload"), "initial"));
      for (const auto& [key, ms] : {std::pair{"transitions", real_matrices(field(p, "transitions", "payload"), "transitions")},
                                    std::pair{"emissions", real_matrices(field(p, "emissions", "payload"), "emissions")}}) {
        for (std::size_t i = 0; i < ms.size(); ++i) add_stochastic(out, std::string(key) + "[" + std::to_string(i) + "]", ms[i]);
      }
      break;
    case ModelKind::BackwardHmp:
      add_vector(out, "initial", real_vector(field(p, "initial", "payload"), "initial"));
      add_stochastic(out, "obs0", real_matrix(field(p, "obs0", "payload"), "obs0"));
      for (const char* key : {"obs_ops", "hid_ops"}) {
        const auto ms = real_matrices(field(p, key, "payload"), key);
        for (std::size_t i = 0; i < ms.size(); ++i) add_stochastic(out, std::string(key) + "[" + std::to_string(i) + "]", ms[i]);
      }
      break;
    case ModelKind::TimeConsecutive:
    case ModelKind::Generalized: {
      const char* key = doc.kind == ModelKind::Generalized ? "markov_ops" : "emissions";
      const auto ms = real_matrices(field(p, key, "payload"), key);
      for (std::size_t i = 0; i < ms.size(); ++i) add_stochastic(out, std::string(key) + "[" + std::to_string(i) + "]", ms[i]);
      if (p.contains("hidden_law")) {
        const auto probs = real_vector(field(p.at("hidden_law"), "probs", "hidden_law"), "hidden_law.probs");
        add_vector(out, "hidden_law", probs);
      } else if (p.contains("hidden_chain")) {
        const json& h = p.at("hidden_chain");
        add_vector(out, "hidden_chain.initial", real_vector(field(h, "initial", "hidden_chain"), "initial"));
        const auto ts = real_matrices(field(h, "transitions", "hidden_chain"), "transitions");
        for (std::size_t i = 0; i < ts.size(); ++i) add_stochastic(out, "hidden_chain.transitions[" + std::to_string(i) + "]", ts[i]);
      } else {
        throw ParseError("payload: expected 'hidden_law' or 'hidden_chain'");
      }
      break;
    }
    case ModelKind::Qmc: {
      const std::size_t d = quantum_dim(doc);
      add_density(out, square_complex(field(p, "w0", "payload"), d, "w0"));
      add_kraus(out, "kraus", kraus_lists(field(p, "kraus", "payload"), d, "kraus"), d);
      break;
    }
    case ModelKind::QuantumHmp: {
      const std::size_t d = quantum_dim(doc);
      add_density(out, square_complex(field(p, "w0", "payload"), d, "w0"));
      add_kraus(out, "hidden_kraus", kraus_lists(field(p, "hidden_kraus", "payload"), d, "hidden_kraus"), d);
      add_kraus(out, "emission_kraus", kraus_lists(field(p, "emission_kraus", "payload"), d, "emission_kraus"), d);
      break;
    }
    case ModelKind::ZyChain:
      add_vector(out, "initial", real_vector(field(p, "initial", "payload"), "initial"));
      add_stochastic(out, "transition", real_matrix(field(p, "transition", "payload"), "transition"));
      break;
  }
  if (!doc.bases.is_null()) {
    InvariantCheck c{"bases orthonormal", true, 0.0, {}};
    try {
      std::size_t d = 0;
      if (doc.kind == ModelKind::Qmc || doc.kind == ModelKind::QuantumHmp) d = quantum_dim(doc);
      (void)read_bases(doc.bases, d);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      c.pass = false;
      c.message = e.what();
    }
    out.push_back(std::move(c));
  }
  add_construction(out, doc);
  return out;
}

BasisSet read_bases(const json& bases, std::size_t d) {
  BasisSet out;
  if (bases.is_null()) return out;
  if (!bases.is_object()) throw ParseError("bases must be an object");
  auto one = [&](const json& j, const std::string& what) {
    ComplexMatrix u = complex_matrix_from_json(j, what);
    if (d != 0 && u.rows() != idx(d)) throw ParseError(what + ": basis dimension does not match the model");
    return OrthonormalBasis(std::move(u));
  };
  if (bases.contains("hidden")) out.hidden = one(bases.at("hidden"), "bases.hidden");
  if (bases.contains("observation")) {
    const json& o = bases.at("observation");
    if (is_matrix_list(o)) {
      for (std::size_t i = 0; i < o.size(); ++i) out.observation.push_back(one(o[i], "bases.observation[" + std::to_string(i) + "]"));
    } else {
      out.observation.push_back(one(o, "bases.observation"));
    }
  }
  return out;
}

BasisSet load_bases_file(const std::string& path, std::size_t d) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON in bases file: ") + e.what());
  }
  return read_bases(j.contains("bases") ? j.at("bases") : j, d);
}

json bases_to_json(const BasisSet& bases) {
  if (bases.empty()) return nullptr;
  json j = json::object();
  if (bases.hidden) j["hidden"] = complex_matrix_to_json(bases.hidden->unitary());
  if (!bases.observation.empty()) {
    json list = json::array();
    for (const auto& b : bases.observation) list.push_back(complex_matrix_to_json(b.unitary()));
    j["observation"] = std::move(list);
  }
  return j;
}

std::size_t model_dim(const Model& model) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, QmcModel> || std::is_same_v<T, QuantumHmpModel> ||
                      std::is_same_v<T, ZYChain>) {
          return m.dim();
        } else {
          return 0;
        }
      },
      model);
}

ModelDocument to_document(const Model& model, const std::string& name,
                          std::optional<std::uint64_t> seed) {
  ModelDocument doc;
  doc.name = name;
  doc.seed = seed;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ClassicalHmm>) {
          doc.kind = ModelKind::ClassicalHmm;
          doc.dims = {{"horizon", m.horizon()}, {"hidden_sizes", m.hidden_sizes()}, {"obs_sizes", m.obs_sizes()}};
          doc.payload = {{"initial", m.initial().weights()},
                         {"transitions", matrices_json(m.transitions())},
                         {"emissions", matrices_json(m.emissions())}};
        } else if constexpr (std::is_same_v<T, BackwardHmp>) {
          doc.kind = ModelKind::BackwardHmp;
          doc.dims = {{"horizon", m.horizon()}};
          doc.payload = {{"initial", m.initial().weights()},
                         {"obs0", matrix_json(m.obs0())},
                         {"obs_ops", matrices_json(m.obs_ops())},
                         {"hid_ops", matrices_json(m.hid_ops())}};
        } else if constexpr (std::is_same_v<T, TimeConsecutiveModel>) {
          doc.kind = ModelKind::TimeConsecutive;
          doc.dims = {{"horizon", m.hidden_law.horizon()}};
          doc.payload = hidden_law_json(m.hidden_law);
          doc.payload["emissions"] = matrices_json(m.emissions);
        } else if constexpr (std::is_same_v<T, GeneralizedHiddenSpec>) {
          doc.kind = ModelKind::Generalized;
          doc.dims = {{"horizon", m.horizon()}};
          doc.payload = hidden_law_json(m.hidden_law());
          doc.payload["index_maps"] = m.index_maps();
          doc.payload["markov_ops"] = matrices_json(m.markov_ops());
          std::vector<std::size_t> obs;
          for (std::size_t i = 0; i <= m.horizon(); ++i) obs.push_back(m.obs_size(i));
          doc.payload["obs_sizes"] = obs;
        } else if constexpr (std::is_same_v<T, QmcModel>) {
          doc.kind = ModelKind::Qmc;
          doc.dims = {{"d", m.dim()}, {"factor_shape", {m.dim(), m.dim()}}};
          doc.payload = {{"w0", complex_matrix_to_json(m.w0())}, {"kraus", families_json(m.families())}};
        } else if constexpr (std::is_same_v<T, QuantumHmpModel>) {
          doc.kind = ModelKind::QuantumHmp;
          doc.dims = {{"d", m.dim()}, {"factor_shape", {m.dim(), m.dim()}}};
          doc.payload = {{"w0", complex_matrix_to_json(m.hidden().w0())},
                         {"hidden_kraus", families_json(m.hidden().families())},
                         {"emission_kraus", families_json(m.emissions())}};
        } else {
          doc.kind = ModelKind::ZyChain;
          doc.dims = {{"d", m.dim()}};
          doc.payload = {{"initial", m.initial().weights()}, {"transition", matrix_json(m.transition())}};
        }
      },
      model);
  return doc;
}

// ---------------------------------------------------------------- CSV

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_law_csv(std::ostream& out, const JointLaw& law, const std::vector<std::string>& site_names) {
  for (const auto& n : site_names) out << n << ',';
  out << "probability\n";
  for (std::size_t i = 0; i < law.size(); ++i) {
    for (std::size_t s : law.path_of(i)) out << s << ',';
    out << format_number(law.probs()[i]) << '\n';
  }
}

void write_prmi_csv(std::ostream& out, const PrmiTensor& prmi) {
  out << "r,m,i,value\n";
  const std::size_t d = prmi.dim();
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t m = 0; m < d; ++m) {
      for (std::size_t i = 0; i < d; ++i) {
        out << r << ',' << m << ',' << i << ',' << format_number(prmi(r, m, i)) << '\n';
      }
    }
  }
}

void write_paths_csv(std::ostream& out, const std::vector<std::vector<std::size_t>>& paths,
                     const std::vector<std::string>& site_names) {
  for (std::size_t s = 0; s < site_names.size(); ++s) out << (s ? "," : "") << site_names[s];
  out << '\n';
  for (const auto& p : paths) {
    for (std::size_t s = 0; s < p.size(); ++s) out << (s ? "," : "") << p[s];
    out << '\n';
  }
}

}  // namespace qhmp::io
