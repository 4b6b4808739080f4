#include "qhmp/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "qhmp/verification.hpp"

namespace qhmp::cli {

namespace {

std::vector<std::string> site_names(std::initializer_list<const char*> prefixes, std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t m = 0; m <= n; ++m) {
    for (const char* p : prefixes) names.push_back(p + std::to_string(m));
  }
  return names;
}

std::size_t steps_width(const io::Model& model) {
  return std::holds_alternative<QmcModel>(model) ? 1 : 2;
}

JointLaw truncate_steps(JointLaw law, std::size_t n) {
  while (law.horizon() > n) law = law.drop_last_step();
  return law;
}

io::BasisSet resolve_bases(const io::ModelDocument& doc, const std::string& option, std::size_t d) {
  if (option.empty()) return io::read_bases(doc.bases, d);
  if (option == "standard") return {};
  if (option == "model") {
    if (doc.bases.is_null()) throw UsageError("--basis model: the model file has no bases");
    return io::read_bases(doc.bases, d);
  }
  return io::load_bases_file(option, d);
}

std::size_t pick_horizon(const std::optional<std::size_t>& requested, const io::ModelDocument& doc,
                         const io::Model& model) {
  std::optional<std::size_t> n = requested;
  if (!n) n = doc.declared_horizon();
  if (!n) n = max_horizon(model);
  if (!n) throw UsageError("no horizon given and none declared by the model (use --horizon)");
  if (const auto cap = max_horizon(model); cap && *n > *cap) {
    throw UsageError("horizon " + std::to_string(*n) + " exceeds the model horizon " + std::to_string(*cap));
  }
  return *n;
}

class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot write " + path);
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

OracleReport check_as_report(const io::InvariantCheck& c) {
  OracleReport r;
  r.name = "validate: " + c.name;
  r.max_abs_error = c.violation;
  r.tolerance = kStructuralTol;
  r.instances_checked = 1;
  r.pass = c.pass;
  r.note = c.message;
  return r;
}

std::vector<JointLaw> law_family(const io::Model& model, const io::BasisSet& bases, std::size_t n,
                                 const Limits& limits) {
  std::vector<JointLaw> family;
  for (std::size_t k = 0; k <= n; ++k) family.push_back(model_law(model, bases, k, limits).law);
  return family;
}

// ---------------------------------------------------------------- commands

int cmd_validate(const std::string& path, std::ostream& out) {
  const auto doc = io::load_document(path);
  const auto checks = io::check_document(doc);
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.pass;
    out << (c.pass ? "PASS  " : "FAIL  ") << c.name << "  max_violation=" << io::format_number(c.violation);
    if (!c.message.empty()) out << "  (" << c.message << ")";
    out << '\n';
  }
  out << io::to_string(doc.kind) << (ok ? ": valid\n" : ": invalid\n");
  return ok ? kExitOk : kExitFailure;
}

struct JointOptions {
  std::string file;
  std::vector<std::string> paths;
  bool all = false;
  std::optional<std::size_t> horizon;
  std::string out;
  std::string basis;
};

int cmd_joint(const JointOptions& o, const Limits& limits, std::ostream& out) {
  const auto doc = io::load_document(o.file);
  const io::Model model = io::build_model(doc);
  const auto bases = resolve_bases(doc, o.basis, io::model_dim(model));
  OutputTarget target(o.out, out);

  if (o.all) {
    if (!o.paths.empty()) throw UsageError("--all and --path are exclusive");
    const std::size_t n = pick_horizon(o.horizon, doc, model);
    const auto family = law_family(model, bases, n, limits);
    const auto labeled = model_law(model, bases, n, limits);
    const OracleReport audit = projectivity_audit(family);
    io::write_law_csv(target.stream(), labeled.law, labeled.site_names);
    target.stream() << "# total_mass=" << io::format_number(labeled.law.total_mass()) << '\n'
                    << "# projectivity_max_error=" << io::format_number(audit.max_abs_error) << '\n';
    return audit.pass ? kExitOk : kExitFailure;
  }

  if (o.paths.empty()) throw UsageError("give --path or --all");
  std::vector<std::vector<std::size_t>> flat_paths;
  std::optional<std::size_t> n;
  const std::size_t width = steps_width(model);
  for (const auto& spec : o.paths) {
    const auto streams = parse_path_spec(spec);
    if (streams.size() != width) {
      throw UsageError("path '" + spec + "' needs " + std::to_string(width) + " stream(s) separated by '/'");
    }
    const std::size_t len = streams.front().size();
    for (const auto& s : streams) {
      if (s.size() != len) throw UsageError("path '" + spec + "': streams differ in length");
    }
    if (n && *n + 1 != len) throw UsageError("all paths must have the same horizon");
    n = len - 1;
    flat_paths.push_back(width == 1 ? streams.front() : interleave(streams[0], streams[1]));
  }
  if (const auto cap = max_horizon(model); cap && *n > *cap) {
    throw UsageError("path horizon exceeds the model horizon " + std::to_string(*cap));
  }
  const auto labeled = model_law(model, bases, *n, limits);
  const auto& sizes = labeled.law.alphabet_sizes();
  for (const auto& p : flat_paths) {
    for (std::size_t s = 0; s < p.size(); ++s) {
      if (p[s] >= sizes[s]) {
        throw UsageError("path value " + std::to_string(p[s]) + " out of range at site " + labeled.site_names[s]);
      }
    }
  }
  auto& os = target.stream();
  for (const auto& name : labeled.site_names) os << name << ',';
  os << "probability\n";
  for (const auto& p : flat_paths) {
    for (std::size_t v : p) os << v << ',';
    os << io::format_number(labeled.law.at(p)) << '\n';
  }
  return kExitOk;
}

struct RestrictOptions {
  std::string file;
  std::string bases;
  std::string emit = "hmm";
  std::optional<std::size_t> horizon;
  std::string out;
  std::string zy_out;
};

int emit_prmi(const QmcModel& model, const KrausFamily& family, const OrthonormalBasis& basis,
              const RestrictOptions& o, std::ostream& out) {
  const PrmiTensor prmi = extract_prmi(family, basis);
  const bool markov = is_restriction_markov(family, basis);
  {
    OutputTarget target(o.out, out);
    target.stream() << "# markov: " << (markov ? "true" : "false") << '\n';
    io::write_prmi_csv(target.stream(), prmi);
  }
  if (!o.out.empty()) out << "markov: " << (markov ? "true" : "false") << '\n';
  if (!o.zy_out.empty()) {
    const ComplexMatrix w = basis.to_basis(model.w0());
    std::vector<double> p0(basis.dim());
    for (std::size_t r = 0; r < p0.size(); ++r) p0[r] = w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)).real();
    const ZYChain zy = embed_in_zy(prmi, ProbabilityVector(p0));
    OutputTarget zy_target(o.zy_out, out);
    zy_target.stream() << io::dump_document(io::to_document(zy, "zy-embedding"));
  }
  return kExitOk;
}

int cmd_restrict(const RestrictOptions& o, const Limits& limits, std::ostream& out, std::ostream& err) {
  const auto doc = io::load_document(o.file);
  if (doc.kind != io::ModelKind::Qmc) throw UsageError("restrict needs a qmc model");
  const io::Model built = io::build_model(doc);
  const auto& model = std::get<QmcModel>(built);
  const std::size_t d = model.dim();
  const io::BasisSet bases = o.bases.empty() ? io::read_bases(doc.bases, d) : io::load_bases_file(o.bases, d);
  const OrthonormalBasis hidden = bases.hidden_or_standard(d);
  const std::size_t n = o.horizon ? *o.horizon : doc.declared_horizon().value_or(3);

  if (o.emit == "law") {
    OutputTarget target(o.out, out);
    io::write_law_csv(target.stream(), restricted_law(model, bases.observation_spec(d), n, limits),
                      site_names({"X"}, n));
    return kExitOk;
  }
  if (!model.homogeneous()) throw UnsupportedError("restrict --emit hmm|prmi needs a homogeneous model");
  const KrausFamily& family = model.family(0);

  if (o.emit == "hmm") {
    const SingleCdaDiagnosis diag = check_diagonalizable_single_cda(family, hidden);
    if (diag.diagonalizable) {
      const ClassicalHmm hmm = hmm_restriction_law(model, bases.observation_spec(d), n, hidden);
      OutputTarget target(o.out, out);
      target.stream() << io::dump_document(io::to_document(hmm, doc.name.empty() ? "restriction" : doc.name + "-restriction"));
      return kExitOk;
    }
    const DePreservingReport de = check_de_preserving(family, hidden);
    if (!de.preserving) {
      err << "error: model is neither diagonalizable (" << diag.reason << ", violation "
          << io::format_number(diag.violation) << ") nor D_e-preserving (off-diagonal violation "
          << io::format_number(de.violation) << ") in the given basis\n";
      return kExitFailure;
    }
    err << "note: not diagonalizable (" << diag.reason << "); emitting the P tensor\n";
    return emit_prmi(model, family, hidden, o, out);
  }
  if (o.emit == "prmi") {
    const DePreservingReport de = check_de_preserving(family, hidden);
    if (!de.preserving) {
      err << "error: model is not D_e-preserving in the given basis (off-diagonal violation "
          << io::format_number(de.violation) << ")\n";
      return kExitFailure;
    }
    return emit_prmi(model, family, hidden, o, out);
  }
  throw UsageError("--emit must be hmm, prmi or law");
}

struct VerifyOptions {
  std::string suite;
  std::string grid = "2,3";
  std::uint64_t seed = 7;
  std::size_t instances = 20;
  std::string format = "table";
  std::string model;
  std::optional<std::size_t> horizon;
};

SweepGrid parse_grid(const std::string& text, std::size_t instances) {
  const auto comma = text.find(',');
  SweepGrid grid;
  grid.instances = instances;
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    std::size_t pos1 = 0, pos2 = 0;
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const unsigned long dmax = std::stoul(a, &pos1);
    const unsigned long nmax = std::stoul(b, &pos2);
    if (pos1 != a.size() || pos2 != b.size() || dmax < 2) throw std::invalid_argument(text);
    grid.dims.clear();
    for (std::size_t d = 2; d <= dmax; ++d) grid.dims.push_back(d);
    grid.max_horizon = nmax;
  } catch (const std::logic_error&) {
    throw UsageError("--grid expects D,N with D >= 2, got '" + text + "'");
  }
  return grid;
}

std::vector<OracleReport> model_checks(const std::string& path, const VerifyOptions& o, const Limits& limits) {
  std::vector<OracleReport> reports;
  const auto doc = io::load_document(path);
  bool constructed = true;
  for (const auto& c : io::check_document(doc)) {
    reports.push_back(check_as_report(c));
    if (c.name == "model construction") constructed = c.pass;
  }
  if (!constructed) return reports;
  const io::Model model = io::build_model(doc);
  const auto bases = io::read_bases(doc.bases, io::model_dim(model));
  std::size_t n = o.horizon ? *o.horizon : doc.declared_horizon().value_or(3);
  if (const auto cap = max_horizon(model)) n = std::min(n, *cap);
  OracleReport audit = projectivity_audit(law_family(model, bases, n, limits));
  audit.name = "model projectivity";
  reports.push_back(audit);
  if (const auto* qmc = std::get_if<QmcModel>(&model)) {
    OracleReport w = oracle_window_vs_recursion(*qmc, bases.observation_spec(qmc->dim()), std::min<std::size_t>(n, 3), limits);
    w.name = "model window-vs-recursion";
    reports.push_back(w);
  }
  return reports;
}

int cmd_verify(const VerifyOptions& o, const Limits& limits, std::ostream& out) {
  if (o.format != "table" && o.format != "json") throw UsageError("--format must be table or json");
  std::vector<std::string> suites;
  const std::string suite = o.suite.empty() && o.model.empty() ? "all" : o.suite;
  if (suite == "all") {
    suites = sweep_names();
  } else if (!suite.empty()) {
    const auto& names = sweep_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
      std::string list;
      for (const auto& s : names) list += (list.empty() ? "" : ", ") + s;
      throw UsageError("unknown suite '" + suite + "' (known: all, " + list + ")");
    }
    suites.push_back(suite);
  }
  const SweepGrid grid = parse_grid(o.grid, o.instances);

  std::vector<OracleReport> reports;
  if (!o.model.empty()) reports = model_checks(o.model, o, limits);
  for (const auto& s : suites) reports.push_back(equivalence_sweep(s, grid, o.seed));

  if (o.format == "json") {
    render_json(out, reports);
  } else {
    render_table(out, reports);
  }
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const OracleReport& r) { return r.pass; });
  return ok ? kExitOk : kExitFailure;
}

struct SampleOptions {
  std::string file;
  std::size_t count = 1000;
  std::uint64_t seed = 0;
  std::optional<std::size_t> horizon;
  bool fit = false;
  std::string out;
  std::string basis;
};

int cmd_sample(const SampleOptions& o, const Limits& limits, std::ostream& out, std::ostream& err) {
  const auto doc = io::load_document(o.file);
  const io::Model model = io::build_model(doc);
  const auto bases = resolve_bases(doc, o.basis, io::model_dim(model));
  const std::size_t n = pick_horizon(o.horizon, doc, model);
  const auto labeled = model_law(model, bases, n, limits);
  const SampleBatch batch = sample_paths(labeled.law, o.count, o.seed);
  {
    OutputTarget target(o.out, out);
    io::write_paths_csv(target.stream(), batch.paths, labeled.site_names);
  }
  if (!o.fit) return kExitOk;
  const OracleReport fit = frequency_fit(batch, labeled.law);
  std::ostream& report = o.out.empty() ? err : out;
  report << "samples=" << o.count << " seed=" << o.seed << " tv=" << io::format_number(fit.detail("tv"))
         << " max_z=" << io::format_number(fit.detail("max_z")) << (fit.pass ? " PASS\n" : " FAIL\n");
  return fit.pass ? kExitOk : kExitFailure;
}

}  // namespace

// ------------------------------------------------------------------- laws

std::optional<std::size_t> max_horizon(const io::Model& model) {
  return std::visit(
      [](const auto& m) -> std::optional<std::size_t> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, io::TimeConsecutiveModel>) {
          return m.hidden_law.horizon();
        } else if constexpr (std::is_same_v<T, ClassicalHmm> || std::is_same_v<T, BackwardHmp> ||
                             std::is_same_v<T, GeneralizedHiddenSpec>) {
          return m.horizon();
        } else {
          return std::nullopt;
        }
      },
      model);
}

JointLaw quantum_hmp_law(const QuantumHmpModel& model, const OrthonormalBasis& hidden,
                         const DiagonalSpec& observation, std::size_t n, const Limits& limits) {
  const std::size_t d = model.dim();
  const std::vector<std::size_t> sizes(2 * (n + 1), d);
  const std::size_t total = path_count(sizes, limits);
  std::vector<double> probs;
  probs.reserve(total);
  std::vector<std::size_t> path(sizes.size(), 0);
  std::vector<ComplexMatrix> g(n + 1), f(n + 1);
  do {
    for (std::size_t m = 0; m <= n; ++m) {
      g[m] = hidden.projector(path[2 * m]);
      f[m] = observation.basis(m).projector(path[2 * m + 1]);
    }
    const Complex v = quantum_hmp_joint(model, g, f);
    if (std::abs(v.imag()) > kStructuralTol || v.real() < -kStructuralTol) {
      throw ValidationError("quantum HMP projector string gave a non-probability value");
    }
    probs.push_back(std::clamp(v.real(), 0.0, 1.0));
  } while (advance_path(path, sizes));
  return JointLaw(sizes, std::move(probs), 2);
}

LabeledLaw model_law(const io::Model& model, const io::BasisSet& bases, std::size_t n, const Limits& limits) {
  return std::visit(
      [&](const auto& m) -> LabeledLaw {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ClassicalHmm>) {
          return {hmm_joint_law(m, n, limits), site_names({"H", "O"}, n)};
        } else if constexpr (std::is_same_v<T, BackwardHmp>) {
          return {backward_hmp_law(m, n, limits), site_names({"H", "O"}, n)};
        } else if constexpr (std::is_same_v<T, io::TimeConsecutiveModel>) {
          if (n > m.hidden_law.horizon()) throw DimensionError("horizon exceeds the hidden law");
          const std::vector<StochasticMatrix> emis(m.emissions.begin(),
                                                   m.emissions.begin() + static_cast<std::ptrdiff_t>(n + 1));
          return {time_consecutive_joint(truncate_steps(m.hidden_law, n), emis, limits), site_names({"H", "O"}, n)};
        } else if constexpr (std::is_same_v<T, GeneralizedHiddenSpec>) {
          return {generalized_hidden_law(m, n, limits), site_names({"H", "O"}, n)};
        } else if constexpr (std::is_same_v<T, QmcModel>) {
          return {restricted_law(m, bases.observation_spec(m.dim()), n, limits), site_names({"X"}, n)};
        } else if constexpr (std::is_same_v<T, QuantumHmpModel>) {
          return {quantum_hmp_law(m, bases.hidden_or_standard(m.dim()), bases.observation_spec(m.dim()), n, limits),
                  site_names({"H", "O"}, n)};
        } else {
          return {m.law(n, limits), site_names({"Z", "Y"}, n)};
        }
      },
      model);
}

std::vector<std::vector<std::size_t>> parse_path_spec(const std::string& spec) {
  std::vector<std::vector<std::size_t>> streams;
  std::stringstream ss(spec);
  std::string stream;
  while (std::getline(ss, stream, '/')) {
    std::vector<std::size_t> values;
    std::stringstream vs(stream);
    std::string item;
    while (std::getline(vs, item, ',')) {
      std::size_t pos = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(item, &pos);
      } catch (const std::logic_error&) {
        pos = std::string::npos;
      }
      if (item.empty() || pos != item.size() || item.front() == '-' || item.front() == '+') {
        throw UsageError("bad path spec '" + spec + "'");
      }
      values.push_back(v);
    }
    if (values.empty()) throw UsageError("bad path spec '" + spec + "'");
    streams.push_back(std::move(values));
  }
  if (streams.empty() || spec.back() == '/' || spec.back() == ',') throw UsageError("bad path spec '" + spec + "'");
  return streams;
}

// -------------------------------------------------------------------- CLI

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Limits limits;
  try {
    limits = Limits::from_environment();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Classical and quantum hidden Markov process toolkit", "qhmp"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--max-dim", limits.max_operator_dim, "Largest dense operator dimension");
  app.add_option("--max-law-entries", limits.max_law_entries, "Largest dense law table");

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Check every invariant of a model file");
  validate->add_option("file", validate_file, "Model file")->required();

  JointOptions jo;
  auto* joint = app.add_subcommand("joint", "Joint probabilities of paths");
  joint->add_option("file", jo.file, "Model file")->required();
  joint->add_option("--path,--paths", jo.paths, "Path, streams separated by '/' (e.g. 0,1/0,1)");
  joint->add_flag("--all", jo.all, "Whole law table");
  joint->add_option("--horizon", jo.horizon, "Horizon n for --all");
  joint->add_option("--out", jo.out, "CSV output file");
  joint->add_option("--basis", jo.basis, "standard, model or a bases file");

  RestrictOptions ro;
  auto* restrict = app.add_subcommand("restrict", "Diagonal restriction of a qmc model");
  restrict->add_option("file", ro.file, "qmc model file")->required();
  restrict->add_option("--bases", ro.bases, "Bases file");
  restrict->add_option("--emit", ro.emit, "hmm, prmi or law")->check(CLI::IsMember({"hmm", "prmi", "law"}));
  restrict->add_option("--horizon", ro.horizon, "Horizon of the emitted model or law");
  restrict->add_option("--out", ro.out, "Output file");
  restrict->add_option("--zy-out", ro.zy_out, "Write the (Z,Y) chain model here");

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run oracle sweeps or check a model file");
  verify->add_option("--suite", vo.suite, "Sweep name or 'all'");
  verify->add_option("--grid", vo.grid, "D,N: dimensions 2..D, horizons up to N");
  verify->add_option("--seed", vo.seed, "Base seed");
  verify->add_option("--instances", vo.instances, "Instances per sweep");
  verify->add_option("--format", vo.format, "table or json");
  verify->add_option("--model", vo.model, "Also check this model file");
  verify->add_option("--horizon", vo.horizon, "Horizon for model checks");

  SampleOptions so;
  auto* sample = app.add_subcommand("sample", "Draw seeded sample paths");
  sample->add_option("file", so.file, "Model file")->required();
  sample->add_option("--n", so.count, "Number of samples");
  sample->add_option("--seed", so.seed, "Seed");
  sample->add_option("--horizon", so.horizon, "Horizon");
  sample->add_flag("--fit", so.fit, "Report the total variation distance to the exact law");
  sample->add_option("--out", so.out, "CSV output file");
  sample->add_option("--basis", so.basis, "standard, model or a bases file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_file, out);
    if (joint->parsed()) return cmd_joint(jo, limits, out);
    if (restrict->parsed()) return cmd_restrict(ro, limits, out, err);
    if (verify->parsed()) return cmd_verify(vo, limits, out);
    if (sample->parsed()) return cmd_sample(so, limits, out, err);
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace qhmp::cli
