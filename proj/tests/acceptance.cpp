// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qhmp/classical.hpp"
#include "qhmp/commands.hpp"
#include "qhmp/model_io.hpp"
#include "qhmp/random.hpp"
#include "qhmp/verification.hpp"

using namespace qhmp;

namespace {

struct Outcome {
  bool pass = true;
  double error = 0.0;
  std::string info;

  void record(double e) {
    if (std::isnan(e)) e = INFINITY;
    error = std::max(error, e);
  }
  void require(bool ok, const std::string& why) {
    if (!ok) {
      pass = false;
      info += (info.empty() ? "" : "; ") + why;
    }
  }
};

SweepGrid grid(std::vector<std::size_t> dims, std::size_t horizon, std::size_t instances) {
  SweepGrid g;
  g.dims = std::move(dims);
  g.max_horizon = horizon;
  g.instances = instances;
  return g;
}

void take_sweep(Outcome& o, const std::string& id, const SweepGrid& g, double tol, std::uint64_t seed = 2024) {
  const OracleReport r = equivalence_sweep(id, g, seed);
  o.record(r.max_abs_error);
  o.require(r.pass && r.max_abs_error < tol, id + " sweep failed");
  o.require(r.instances_checked == g.instances, id + " instance count");
}

template <class F>
void for_each_path(std::size_t d, std::size_t n, F&& f) {
  const std::vector<std::size_t> sizes(n + 1, d);
  std::vector<std::size_t> path(n + 1, 0);
  do {
    f(path);
  } while (advance_path(path, sizes));
}

std::string fixture(const std::string& name) { return std::string(QHMP_FIXTURE_DIR) + "/" + name; }

int run_cli(std::vector<std::string> args, std::string& out) {
  args.insert(args.begin(), "qhmp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream os, es;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), os, es);
  out = os.str();
  return code;
}

// ---------------------------------------------------------------- criteria

Outcome unitality() {
  Outcome o;
  for (std::size_t k = 0; k < 50; ++k) {
    Rng rng(31, k);
    const std::size_t d = 2 + k % 2;
    const KrausFamily f = random_unital_kraus(d, 1 + (k / 2) % 3, rng);
    const double te = max_abs(apply_te(f, identity(d * d)) - identity(d));
    const double v = validate_kraus(f).max_violation;
    o.record(std::max(te, v));
    o.require(te <= 1e-10 && v < 1e-10, "instance " + std::to_string(k));
  }
  return o;
}

Outcome diagonal_lifting() {
  Outcome o;
  take_sweep(o, "diagonal-lifting", grid({2, 3, 4}, 4, 20), 1e-12);
  return o;
}

Outcome hmm_restriction() {
  Outcome o;
  take_sweep(o, "diag-restriction-hmm", grid({2, 3}, 3, 20), 1e-11);
  return o;
}

Outcome window() {
  Outcome o;
  take_sweep(o, "window-vs-recursion", grid({2}, 3, 20), 1e-12);
  return o;
}

Outcome de_pipeline() {
  Outcome o;
  // P tensor: row-stochastic in (m, i) and E(e_mm (x) e_ii) = sum_r P_{r;m,i} e_rr.
  double tensor_err = 0.0;
  for (std::size_t k = 0; k < 20; ++k) {
    Rng rng(53, k);
    const std::size_t d = 2;
    const OrthonormalBasis basis = random_basis(d, rng);
    const KrausFamily f = random_de_preserving_family(d, 1 + k % 3, basis, k % 2 == 0, rng);
    const PrmiTensor p = extract_prmi(f, basis);
    for (std::size_t r = 0; r < d; ++r) {
      double row = 0.0;
      for (std::size_t m = 0; m < d; ++m) {
        for (std::size_t i = 0; i < d; ++i) {
          row += p(r, m, i);
          tensor_err = std::max(tensor_err, std::max(0.0, -p(r, m, i)));
        }
      }
      tensor_err = std::max(tensor_err, std::abs(row - 1.0));
    }
    for (std::size_t m = 0; m < d; ++m) {
      for (std::size_t i = 0; i < d; ++i) {
        const ComplexMatrix image = apply_te(f, kron(basis.projector(m), basis.projector(i)));
        ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
        for (std::size_t r = 0; r < d; ++r) expected += p(r, m, i) * basis.projector(r);
        tensor_err = std::max(tensor_err, max_abs(image - expected));
      }
    }
  }
  o.require(tensor_err < 1e-9, "P tensor identities");
  take_sweep(o, "de-preserving", grid({2}, 3, 20), 1e-11);
  char buf[64];
  std::snprintf(buf, sizeof buf, "p_tensor_err=%.3e", tensor_err);
  o.info += buf;
  return o;
}

Outcome zy_embedding() {
  Outcome o;
  take_sweep(o, "zy-embedding", grid({2}, 3, 20), 1e-11);
  double best = 0.0;
  for (std::size_t k = 0; k < 20; ++k) {
    Rng rng(67, k);
    const PrmiTensor prmi = hidden_readout_prmi(2, 0.8 + 0.15 * rng.uniform(), 0.6 + 0.2 * rng.uniform());
    const ProbabilityVector p0 = random_probability_vector(2, rng);
    const ZYChain zy = embed_in_zy(prmi, p0);
    std::vector<double> y;
    for_each_path(2, 3, [&](const std::vector<std::size_t>& path) { y.push_back(zy.y_marginal(path)); });
    const JointLaw ylaw({2, 2, 2, 2}, y);
    for (std::size_t i = 0; i < y.size(); ++i) {
      o.record(std::abs(y[i] - de_joint_prob(p0, prmi, ylaw.path_of(i))));
    }
    best = std::max(best, markov_factorization_violation(ylaw));
  }
  o.require(o.error < 1e-11, "Y marginal vs P-tensor law");
  o.require(best > 1e-3, "no non-Markov Y instance");
  o.info = "max_y_markov_violation=" + std::to_string(best);
  return o;
}

Outcome markov_criterion() {
  Outcome o;
  const SweepGrid g = grid({2, 3}, 3, 20);
  const OracleReport r = equivalence_sweep("markov-criterion", g, 2024);
  o.record(r.max_abs_error);
  o.require(r.pass, "markov-criterion sweep failed " + r.note);
  const double counter = r.detail("counterexamples");
  o.require(counter >= 5, "fewer than 5 counterexamples");
  o.info = "counterexamples=" + std::to_string(static_cast<int>(counter)) +
           " min_violation=" + std::to_string(r.detail("min_counterexample_violation"));
  return o;
}

Outcome lifting_independence() {
  Outcome o;
  for (std::size_t k = 0; k < 10; ++k) {
    Rng rng(79, k);
    const std::size_t d = 2 + k % 2, ob = 2 + (k / 2) % 2, n = 2;
    std::vector<StochasticMatrix> trans, emis;
    for (std::size_t m = 0; m < n; ++m) trans.push_back(random_stochastic(d, d, rng));
    for (std::size_t m = 0; m <= n; ++m) emis.push_back(random_stochastic(d, ob, rng));
    const ClassicalHmm hmm(random_probability_vector(d, rng), trans, emis);
    std::vector<LiftedHmm> lifts;
    for (int i = 0; i < 3; ++i) lifts.push_back(lift_to_markov(hmm, random_probability_vector(ob, rng)));
    std::vector<std::size_t> sizes;
    for (std::size_t m = 0; m <= n; ++m) {
      sizes.push_back(d);
      sizes.push_back(ob);
    }
    std::vector<std::size_t> path(sizes.size(), 0);
    do {
      std::vector<std::size_t> h, x;
      for (std::size_t m = 0; m <= n; ++m) {
        h.push_back(path[2 * m]);
        x.push_back(path[2 * m + 1]);
      }
      const double direct = hmm_joint_prob(hmm, h, x);
      std::vector<double> vals;
      for (const auto& l : lifts) vals.push_back(lifted_joint_prob(l, h, x));
      for (std::size_t a = 0; a < vals.size(); ++a) {
        o.record(std::abs(vals[a] - direct));
        for (std::size_t b = a + 1; b < vals.size(); ++b) o.record(std::abs(vals[a] - vals[b]));
      }
    } while (advance_path(path, sizes));
  }
  o.require(o.error < 1e-12, "lifted values disagree");
  return o;
}

Outcome backward() {
  Outcome o;
  take_sweep(o, "backward-time-consecutive", grid({2}, 2, 10), 1e-12);
  return o;
}

Outcome three_tier() {
  Outcome o;
  take_sweep(o, "three-tier", grid({2}, 2, 10), 1e-11);
  return o;
}

Outcome statistical() {
  Outcome o;
  const auto hmm = std::get<ClassicalHmm>(io::build_model(io::load_document(fixture("reference_hmm.json"))));
  const JointLaw law = hmm_joint_law(hmm, 2);
  const SampleBatch batch = sample_paths(law, 100000, 2024);
  const OracleReport fit = frequency_fit(batch, law);
  o.record(fit.detail("tv"));
  o.require(fit.detail("tv") < 0.02, "tv too large");
  std::string a, b;
  const std::vector<std::string> args{"sample", fixture("reference_hmm.json"), "--n", "100000", "--seed", "2024"};
  o.require(run_cli(args, a) == 0 && run_cli(args, b) == 0, "sample command failed");
  o.require(!a.empty() && a == b, "re-run differs");
  o.require(sample_paths(law, 100000, 2024).paths == batch.paths, "library re-run differs");
  o.info = "tv=" + std::to_string(fit.detail("tv")) + " max_z=" + std::to_string(fit.detail("max_z"));
  return o;
}

Outcome projectivity() {
  Outcome o;
  std::size_t laws = 0;
  auto audit = [&](const std::string& what, const std::function<JointLaw(std::size_t)>& law_at, std::size_t n) {
    std::vector<JointLaw> fam;
    for (std::size_t k = 0; k <= n; ++k) fam.push_back(law_at(k));
    laws += fam.size();
    const OracleReport r = projectivity_audit(fam, 1e-12);
    o.record(r.max_abs_error);
    o.require(r.pass, what);
  };

  // Every model kind through the law the joint and sample commands use.
  Rng rng(97);
  const StochasticMatrix p = random_stochastic(3, 3, rng);
  const StochasticMatrix b = random_stochastic(3, 2, rng);
  const ClassicalHmm hmm = ClassicalHmm::homogeneous(random_probability_vector(3, rng), p, b, 3);
  const BackwardHmp back(random_probability_vector(2, rng), random_stochastic(2, 3, rng),
                         {random_stochastic(2, 3, rng), random_stochastic(2, 3, rng), random_stochastic(2, 3, rng)},
                         {random_stochastic(2, 2, rng), random_stochastic(2, 2, rng), random_stochastic(2, 2, rng)});
  const MarkovChainModel chain(random_probability_vector(3, rng), {p, p, p});
  const io::TimeConsecutiveModel tc{chain.law(3), {b, b, b, b}};
  const QmcModel qmc(random_density(2, rng), random_unital_kraus(2, 2, rng));
  const QuantumHmpModel qh(qmc, {random_unital_kraus(2, 2, rng)});
  const PrmiTensor prmi = hidden_readout_prmi(2, 0.85, 0.7);
  const ZYChain zy = embed_in_zy(prmi, ProbabilityVector({0.35, 0.65}));
  io::BasisSet bases;
  bases.hidden = random_basis(2, rng);
  bases.observation = {random_basis(2, rng)};
  const std::vector<io::Model> models{hmm, back, tc, GeneralizedHiddenSpec::from_hmm(hmm), qmc, qh, zy};
  for (const auto& m : models) {
    const std::size_t n = cli::max_horizon(m).value_or(3);
    audit("model kind " + io::to_string(io::to_document(m).kind),
          [&](std::size_t k) { return cli::model_law(m, bases, k).law; }, n);
  }

  // Fixture files through the commands' law, plus restrict outputs.
  for (const char* f : {"reference_hmm.json", "point_mass_hmm.json", "diagonalizable_qmc.json",
                        "markov_form_qmc.json", "generic_de_qmc.json"}) {
    const auto doc = io::load_document(fixture(f));
    const io::Model m = io::build_model(doc);
    const auto bs = io::read_bases(doc.bases, io::model_dim(m));
    audit(f, [&](std::size_t k) { return cli::model_law(m, bs, k).law; }, cli::max_horizon(m).value_or(3));
  }
  const auto diag_doc = io::load_document(fixture("diagonalizable_qmc.json"));
  const auto diag_model = std::get<QmcModel>(io::build_model(diag_doc));
  const auto diag_bases = io::read_bases(diag_doc.bases, 2);
  const ClassicalHmm restricted = hmm_restriction_law(diag_model, diag_bases.observation_spec(2), 3,
                                                      diag_bases.hidden_or_standard(2));
  audit("restricted hmm observations", [&](std::size_t k) { return observable_law(restricted, k); }, 3);
  audit("restricted hmm joint", [&](std::size_t k) { return hmm_joint_law(restricted, k); }, 3);
  audit("P-tensor law", [&](std::size_t k) { return de_joint_law(ProbabilityVector({0.35, 0.65}), prmi, k); }, 3);

  // The joint --all command reports its own audit.
  for (const char* f : {"reference_hmm.json", "generic_de_qmc.json"}) {
    std::string out;
    const int code = run_cli({"joint", fixture(f), "--all"}, out);
    o.require(code == 0, std::string("joint --all on ") + f);
    const auto pos = out.find("# projectivity_max_error=");
    if (pos == std::string::npos) {
      o.require(false, "joint --all audit line");
    } else {
      o.record(std::stod(out.substr(pos + 25)));
    }
    ++laws;
  }
  o.require(o.error <= 1e-12, "audit error above 1e-12");
  o.info = "laws=" + std::to_string(laws);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  Outcome (*fn)();
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "unitality", 1.0, unitality},
      {2, "diagonal lifting", 5.0, diagonal_lifting},
      {3, "hmm restriction", 10.0, hmm_restriction},
      {4, "window vs recursion", 5.0, window},
      {5, "D_e-preserving pipeline", 10.0, de_pipeline},
      {6, "ZY embedding", 10.0, zy_embedding},
      {7, "Markov criterion", 5.0, markov_criterion},
      {8, "lifting independence", 2.0, lifting_independence},
      {9, "backward vs time-consecutive", 2.0, backward},
      {10, "three-tier restriction", 10.0, three_tier},
      {11, "statistical sanity", 5.0, statistical},
      {12, "projectivity", 0.0, projectivity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.info = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0.0 && secs >= c.limit_seconds) {
      o.require(false, "runtime limit exceeded");
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2d %-30s max_error=%.3e time=%.3fs", o.pass ? "PASS" : "FAIL", c.id, c.name, o.error, secs);
    if (c.limit_seconds > 0.0) std::printf(" (limit %.0fs)", c.limit_seconds);
    if (!o.info.empty()) std::printf("  %s", o.info.c_str());
    std::printf("\n");
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
