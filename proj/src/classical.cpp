#include "qhmp/classical.hpp"

#include <string>

#include "qhmp/errors.hpp"

namespace qhmp {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw DimensionError(msg);
}

RealFunction indicator(std::size_t n, std::size_t k) {
  require(k < n, "path index " + std::to_string(k) + " out of range for alphabet of size " +
                     std::to_string(n));
  RealFunction f(n, 0.0);
  f[k] = 1.0;
  return f;
}

// Splits an interleaved (a_0, b_0, a_1, b_1, ...) path.
void deinterleave(std::span<const std::size_t> path, Path& a, Path& b) {
  a.clear();
  b.clear();
  for (std::size_t s = 0; s < path.size(); s += 2) {
    a.push_back(path[s]);
    b.push_back(path[s + 1]);
  }
}

}  // namespace

Path interleave(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  require(a.size() == b.size(), "interleave: paths differ in length");
  Path out;
  out.reserve(2 * a.size());
  for (std::size_t m = 0; m < a.size(); ++m) {
    out.push_back(a[m]);
    out.push_back(b[m]);
  }
  return out;
}

// ---------------------------------------------------------------- Markov chain

MarkovChainModel::MarkovChainModel(ProbabilityVector initial,
                                   std::vector<StochasticMatrix> transitions)
    : initial_(std::move(initial)), transitions_(std::move(transitions)) {
  std::size_t rows = initial_.size();
  for (std::size_t m = 0; m < transitions_.size(); ++m) {
    require(transitions_[m].rows() == rows,
            "MarkovChainModel: transition " + std::to_string(m) + " has " +
                std::to_string(transitions_[m].rows()) + " rows, expected " +
                std::to_string(rows));
    rows = transitions_[m].cols();
  }
}

std::size_t MarkovChainModel::alphabet_size(std::size_t site) const {
  require(site < num_sites(), "MarkovChainModel: site out of range");
  return site == 0 ? initial_.size() : transitions_[site - 1].cols();
}

double MarkovChainModel::path_prob(std::span<const std::size_t> path) const {
  require(!path.empty() && path.size() <= num_sites(), "MarkovChainModel: bad path length");
  require(path[0] < initial_.size(), "MarkovChainModel: index out of range");
  double p = initial_[path[0]];
  for (std::size_t m = 1; m < path.size(); ++m) {
    require(path[m] < transitions_[m - 1].cols(), "MarkovChainModel: index out of range");
    p *= transitions_[m - 1](path[m - 1], path[m]);
  }
  return p;
}

double MarkovChainModel::expectation(const std::vector<RealFunction>& functions) const {
  require(!functions.empty() && functions.size() <= num_sites(),
          "MarkovChainModel::expectation: bad number of functions");
  const std::size_t n = functions.size() - 1;
  for (std::size_t m = 0; m <= n; ++m) {
    require(functions[m].size() == alphabet_size(m),
            "MarkovChainModel::expectation: function size mismatch at site " + std::to_string(m));
  }
  RealFunction v = functions[n];
  for (std::size_t m = n; m-- > 0;) {
    RealFunction pv = transitions_[m].apply(v);
    for (std::size_t i = 0; i < pv.size(); ++i) pv[i] *= functions[m][i];
    v = std::move(pv);
  }
  double e = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) e += initial_[i] * v[i];
  return e;
}

JointLaw MarkovChainModel::law(std::size_t n, const Limits& limits) const {
  require(n < num_sites(), "MarkovChainModel::law: horizon beyond the chain");
  std::vector<std::size_t> sizes;
  for (std::size_t m = 0; m <= n; ++m) sizes.push_back(alphabet_size(m));
  std::vector<double> probs(path_count(sizes, limits));
  Path path(sizes.size(), 0);
  std::size_t i = 0;
  do {
    probs[i++] = path_prob(path);
  } while (advance_path(path, sizes));
  return JointLaw(std::move(sizes), std::move(probs));
}

// ------------------------------------------------------------------------ HMM

ClassicalHmm::ClassicalHmm(ProbabilityVector initial,
                           std::vector<StochasticMatrix> transitions,
                           std::vector<StochasticMatrix> emissions)
    : initial_(std::move(initial)),
      transitions_(std::move(transitions)),
      emissions_(std::move(emissions)) {
  require(!emissions_.empty(), "ClassicalHmm: no emission matrices");
  require(transitions_.size() + 1 == emissions_.size(),
          "ClassicalHmm: need one transition fewer than emissions");
  require(initial_.size() == emissions_[0].rows(),
          "ClassicalHmm: initial law does not match hidden alphabet 0");
  for (std::size_t m = 0; m < transitions_.size(); ++m) {
    require(transitions_[m].rows() == emissions_[m].rows() &&
                transitions_[m].cols() == emissions_[m + 1].rows(),
            "ClassicalHmm: shape mismatch at step " + std::to_string(m));
  }
}

ClassicalHmm ClassicalHmm::homogeneous(ProbabilityVector initial,
                                       const StochasticMatrix& transition,
                                       const StochasticMatrix& emission,
                                       std::size_t horizon) {
  return ClassicalHmm(std::move(initial), std::vector<StochasticMatrix>(horizon, transition),
                      std::vector<StochasticMatrix>(horizon + 1, emission));
}

std::vector<std::size_t> ClassicalHmm::hidden_sizes() const {
  std::vector<std::size_t> s;
  for (const auto& e : emissions_) s.push_back(e.rows());
  return s;
}

std::vector<std::size_t> ClassicalHmm::obs_sizes() const {
  std::vector<std::size_t> s;
  for (const auto& e : emissions_) s.push_back(e.cols());
  return s;
}

MarkovChainModel ClassicalHmm::hidden_chain() const {
  return MarkovChainModel(initial_, transitions_);
}

double hmm_joint_prob(const ClassicalHmm& model, std::span<const std::size_t> hidden_path,
                      std::span<const std::size_t> obs_path) {
  require(hidden_path.size() == obs_path.size() && !hidden_path.empty(),
          "hmm_joint_prob: paths must be non-empty and of equal length");
  require(hidden_path.size() <= model.horizon() + 1, "hmm_joint_prob: path longer than horizon");
  for (std::size_t m = 0; m < hidden_path.size(); ++m) {
    require(hidden_path[m] < model.hidden_size(m) && obs_path[m] < model.obs_size(m),
            "hmm_joint_prob: index out of range at step " + std::to_string(m));
  }
  double p = model.initial()[hidden_path[0]] * model.emissions()[0](hidden_path[0], obs_path[0]);
  for (std::size_t m = 1; m < hidden_path.size(); ++m) {
    p *= model.transitions()[m - 1](hidden_path[m - 1], hidden_path[m]);
    p *= model.emissions()[m](hidden_path[m], obs_path[m]);
  }
  return p;
}

JointLaw hmm_joint_law(const ClassicalHmm& model, std::size_t n, const Limits& limits) {
  require(n <= model.horizon(), "hmm_joint_law: horizon beyond the model");
  std::vector<std::size_t> sizes;
  for (std::size_t m = 0; m <= n; ++m) {
    sizes.push_back(model.hidden_size(m));
    sizes.push_back(model.obs_size(m));
  }
  std::vector<double> probs(path_count(sizes, limits));
  Path path(sizes.size(), 0), h, o;
  std::size_t i = 0;
  do {
    deinterleave(path, h, o);
    probs[i++] = hmm_joint_prob(model, h, o);
  } while (advance_path(path, sizes));
  return JointLaw(std::move(sizes), std::move(probs), 2);
}

double observable_marginal(const ClassicalHmm& model, std::span<const std::size_t> obs_path) {
  require(!obs_path.empty() && obs_path.size() <= model.horizon() + 1,
          "observable_marginal: bad path length");
  for (std::size_t m = 0; m < obs_path.size(); ++m) {
    require(obs_path[m] < model.obs_size(m), "observable_marginal: index out of range");
  }
  std::vector<double> alpha(model.hidden_size(0));
  for (std::size_t h = 0; h < alpha.size(); ++h) {
    alpha[h] = model.initial()[h] * model.emissions()[0](h, obs_path[0]);
  }
  for (std::size_t m = 1; m < obs_path.size(); ++m) {
    alpha = model.transitions()[m - 1].push_forward(alpha);
    for (std::size_t h = 0; h < alpha.size(); ++h) {
      alpha[h] *= model.emissions()[m](h, obs_path[m]);
    }
  }
  double p = 0.0;
  for (double a : alpha) p += a;
  return p;
}

JointLaw observable_law(const ClassicalHmm& model, std::size_t n, const Limits& limits) {
  require(n <= model.horizon(), "observable_law: horizon beyond the model");
  std::vector<std::size_t> sizes;
  for (std::size_t m = 0; m <= n; ++m) sizes.push_back(model.obs_size(m));
  std::vector<double> probs(path_count(sizes, limits));
  Path path(sizes.size(), 0);
  std::size_t i = 0;
  do {
    probs[i++] = observable_marginal(model, path);
  } while (advance_path(path, sizes));
  return JointLaw(std::move(sizes), std::move(probs));
}

// -------------------------------------------------------------------- lifting

LiftedHmm lift_to_markov(const ClassicalHmm& model, const ProbabilityVector& p_O0) {
  require(p_O0.size() == model.obs_size(0), "lift_to_markov: p_O0 has the wrong size");
  const std::size_t N = model.horizon();
  std::vector<std::size_t> hs(N + 2), os(N + 2);
  for (std::size_t m = 0; m <= N + 1; ++m) {
    hs[m] = m <= N ? model.hidden_size(m) : 1;
    os[m] = m == 0 ? model.obs_size(0) : model.obs_size(m - 1);
  }

  std::vector<double> init(hs[0] * os[0]);
  for (std::size_t h = 0; h < hs[0]; ++h) {
    for (std::size_t o = 0; o < os[0]; ++o) init[h * os[0] + o] = model.initial()[h] * p_O0[o];
  }

  std::vector<StochasticMatrix> steps;
  for (std::size_t m = 0; m <= N; ++m) {
    const std::size_t rows = hs[m] * os[m];
    const std::size_t cols = hs[m + 1] * os[m + 1];
    const StochasticMatrix& b = model.emissions()[m];
    std::vector<double> t(rows * cols, 0.0);
    for (std::size_t h = 0; h < hs[m]; ++h) {
      for (std::size_t x = 0; x < os[m]; ++x) {
        const std::size_t row = h * os[m] + x;
        for (std::size_t h2 = 0; h2 < hs[m + 1]; ++h2) {
          const double p = m < N ? model.transitions()[m](h, h2) : 1.0;
          for (std::size_t o = 0; o < os[m + 1]; ++o) {
            t[row * cols + h2 * os[m + 1] + o] = p * b(h, o);
          }
        }
      }
    }
    steps.emplace_back(rows, cols, std::move(t));
  }
  return LiftedHmm{MarkovChainModel(ProbabilityVector(std::move(init)), std::move(steps)),
                   std::move(hs), std::move(os)};
}

double lifted_joint_prob(const LiftedHmm& lifted, std::span<const std::size_t> hidden_path,
                         std::span<const std::size_t> obs_path) {
  require(hidden_path.size() == obs_path.size() && !hidden_path.empty(),
          "lifted_joint_prob: paths must be non-empty and of equal length");
  const std::size_t n = hidden_path.size() - 1;
  require(n + 2 <= lifted.chain.num_sites(), "lifted_joint_prob: path longer than horizon");

  std::vector<RealFunction> fs;
  for (std::size_t site = 0; site <= n + 1; ++site) {
    const std::size_t hn = lifted.hidden_sizes[site], on = lifted.obs_sizes[site];
    RealFunction g = site <= n ? indicator(hn, hidden_path[site]) : RealFunction(hn, 1.0);
    RealFunction f = site >= 1 ? indicator(on, obs_path[site - 1]) : RealFunction(on, 1.0);
    RealFunction gf(hn * on);
    for (std::size_t h = 0; h < hn; ++h) {
      for (std::size_t o = 0; o < on; ++o) gf[lifted.state(site, h, o)] = g[h] * f[o];
    }
    fs.push_back(std::move(gf));
  }
  return lifted.chain.expectation(fs);
}

// ------------------------------------------------------------------- backward

BackwardHmp::BackwardHmp(ProbabilityVector initial, StochasticMatrix obs0,
                         std::vector<StochasticMatrix> obs_ops,
                         std::vector<StochasticMatrix> hid_ops)
    : initial_(std::move(initial)),
      obs0_(std::move(obs0)),
      obs_ops_(std::move(obs_ops)),
      hid_ops_(std::move(hid_ops)) {
  require(obs0_.rows() == initial_.size(), "BackwardHmp: P_{O0,H0} rows must match H_0");
  require(obs_ops_.size() == hid_ops_.size(),
          "BackwardHmp: need as many observation as hidden operators");
  std::size_t h = initial_.size();
  for (std::size_t m = 0; m < hid_ops_.size(); ++m) {
    require(hid_ops_[m].rows() == h && obs_ops_[m].rows() == h,
            "BackwardHmp: shape mismatch at step " + std::to_string(m));
    h = hid_ops_[m].cols();
  }
}

std::size_t BackwardHmp::hidden_size(std::size_t m) const {
  return m == 0 ? initial_.size() : hid_ops_.at(m - 1).cols();
}

std::size_t BackwardHmp::obs_size(std::size_t m) const {
  return m == 0 ? obs0_.cols() : obs_ops_.at(m - 1).cols();
}

double backward_hmp_expectation(const BackwardHmp& model, const std::vector<RealFunction>& g,
                                const std::vector<RealFunction>& f) {
  require(g.size() == f.size() && !g.empty(), "backward_hmp_expectation: bad arguments");
  const std::size_t n = g.size() - 1;
  require(n <= model.horizon(), "backward_hmp_expectation: beyond horizon");
  for (std::size_t m = 0; m <= n; ++m) {
    require(g[m].size() == model.hidden_size(m) && f[m].size() == model.obs_size(m),
            "backward_hmp_expectation: function size mismatch");
  }
  RealFunction w = g[n];
  for (std::size_t m = n; m >= 1; --m) {
    const RealFunction po = model.obs_ops()[m - 1].apply(f[m]);
    const RealFunction ph = model.hid_ops()[m - 1].apply(w);
    RealFunction next(g[m - 1].size());
    for (std::size_t h = 0; h < next.size(); ++h) next[h] = g[m - 1][h] * po[h] * ph[h];
    w = std::move(next);
  }
  const RealFunction p0 = model.obs0().apply(f[0]);
  double e = 0.0;
  for (std::size_t h = 0; h < w.size(); ++h) e += model.initial()[h] * p0[h] * w[h];
  return e;
}

double backward_hmp_joint(const BackwardHmp& model, std::span<const std::size_t> hidden_path,
                          std::span<const std::size_t> obs_path) {
  require(hidden_path.size() == obs_path.size() && !hidden_path.empty(),
          "backward_hmp_joint: paths must be non-empty and of equal length");
  require(hidden_path.size() <= model.horizon() + 1, "backward_hmp_joint: beyond horizon");
  std::vector<RealFunction> g, f;
  for (std::size_t m = 0; m < hidden_path.size(); ++m) {
    g.push_back(indicator(model.hidden_size(m), hidden_path[m]));
    f.push_back(indicator(model.obs_size(m), obs_path[m]));
  }
  return backward_hmp_expectation(model, g, f);
}

JointLaw backward_hmp_law(const BackwardHmp& model, std::size_t n, const Limits& limits) {
  require(n <= model.horizon(), "backward_hmp_law: horizon beyond the model");
  std::vector<std::size_t> sizes;
  for (std::size_t m = 0; m <= n; ++m) {
    sizes.push_back(model.hidden_size(m));
    sizes.push_back(model.obs_size(m));
  }
  std::vector<double> probs(path_count(sizes, limits));
  Path path(sizes.size(), 0), h, o;
  std::size_t i = 0;
  do {
    deinterleave(path, h, o);
    probs[i++] = backward_hmp_joint(model, h, o);
  } while (advance_path(path, sizes));
  return JointLaw(std::move(sizes), std::move(probs), 2);
}

// ----------------------------------------------------------- time-consecutive

JointLaw time_consecutive_joint(const JointLaw& hidden_law,
                                const std::vector<StochasticMatrix>& emissions,
                                const Limits& limits) {
  require(hidden_law.sites_per_step() == 1, "time_consecutive_joint: hidden law must be one stream");
  const std::size_t n = hidden_law.horizon();
  require(emissions.size() >= n + 1, "time_consecutive_joint: missing emission matrices");
  const auto& hs = hidden_law.alphabet_sizes();
  std::vector<std::size_t> sizes;
  for (std::size_t m = 0; m <= n; ++m) {
    const std::size_t from = m == 0 ? 0 : m - 1;
    require(emissions[m].rows() == hs[from],
            "time_consecutive_joint: emission " + std::to_string(m) +
                " rows must match hidden alphabet " + std::to_string(from));
    sizes.push_back(hs[m]);
    sizes.push_back(emissions[m].cols());
  }
  std::vector<double> probs(path_count(sizes, limits));
  Path path(sizes.size(), 0), h, o;
  std::size_t i = 0;
  do {
    deinterleave(path, h, o);
    double p = hidden_law.at(h);
    for (std::size_t m = 0; m <= n && p != 0.0; ++m) {
      p *= emissions[m](h[m == 0 ? 0 : m - 1], o[m]);
    }
    probs[i++] = p;
  } while (advance_path(path, sizes));
  return JointLaw(std::move(sizes), std::move(probs), 2);
}

// ---------------------------------------------------------------- generalized

GeneralizedHiddenSpec::GeneralizedHiddenSpec(JointLaw hidden_law,
                                             std::vector<std::vector<std::size_t>> index_maps,
                                             std::vector<StochasticMatrix> markov_ops,
                                             std::vector<std::size_t> obs_sizes)
    : hidden_law_(std::move(hidden_law)),
      index_maps_(std::move(index_maps)),
      markov_ops_(std::move(markov_ops)),
      obs_sizes_(std::move(obs_sizes)) {
  require(hidden_law_.sites_per_step() == 1, "GeneralizedHiddenSpec: hidden law must be one stream");
  const std::size_t dh = hidden_law_.alphabet_sizes().front();
  for (std::size_t s : hidden_law_.alphabet_sizes()) {
    require(s == dh, "GeneralizedHiddenSpec: hidden sites must share one alphabet");
  }
  require(!index_maps_.empty(), "GeneralizedHiddenSpec: no index maps");
  const std::size_t N = index_maps_.size() - 1;
  require(N <= hidden_law_.horizon(), "GeneralizedHiddenSpec: index maps beyond hidden law");
  require(markov_ops_.size() >= N + 1 && obs_sizes_.size() >= N + 1,
          "GeneralizedHiddenSpec: missing Markov operators");
  for (std::size_t n = 0; n <= N; ++n) {
    require(index_maps_[n].size() == n + 1,
            "GeneralizedHiddenSpec: index map " + std::to_string(n) + " must have n+1 entries");
    for (std::size_t target : index_maps_[n]) {
      if (target > n) {
        throw ValidationError("GeneralizedHiddenSpec: index map " + std::to_string(n) +
                              " points outside {0.." + std::to_string(n) + "}");
      }
    }
  }
  for (std::size_t m = 0; m <= N; ++m) {
    require(markov_ops_[m].rows() == dh && markov_ops_[m].cols() == obs_sizes_[m] * dh,
            "GeneralizedHiddenSpec: operator " + std::to_string(m) + " must be |H| x |O||H|");
  }
}

std::vector<std::vector<std::size_t>> GeneralizedHiddenSpec::identity_maps(std::size_t horizon) {
  std::vector<std::vector<std::size_t>> maps;
  for (std::size_t n = 0; n <= horizon; ++n) {
    std::vector<std::size_t> row(n + 1);
    for (std::size_t m = 0; m <= n; ++m) row[m] = m;
    maps.push_back(std::move(row));
  }
  return maps;
}

std::vector<std::vector<std::size_t>> GeneralizedHiddenSpec::previous_site_maps(std::size_t horizon) {
  std::vector<std::vector<std::size_t>> maps;
  for (std::size_t n = 0; n <= horizon; ++n) maps.emplace_back(n + 1, n == 0 ? 0 : n - 1);
  return maps;
}

StochasticMatrix product_form_operator(const StochasticMatrix& emission) {
  const std::size_t dh = emission.rows(), dobs = emission.cols();
  std::vector<double> b(dh * dobs * dh, 0.0);
  for (std::size_t x = 0; x < dh; ++x) {
    for (std::size_t k = 0; k < dobs; ++k) b[x * dobs * dh + k * dh + x] = emission(x, k);
  }
  return StochasticMatrix(dh, dobs * dh, std::move(b));
}

GeneralizedHiddenSpec GeneralizedHiddenSpec::from_hmm(const ClassicalHmm& model,
                                                      const Limits& limits) {
  std::vector<StochasticMatrix> ops;
  for (const auto& e : model.emissions()) ops.push_back(product_form_operator(e));
  return GeneralizedHiddenSpec(model.hidden_chain().law(model.horizon(), limits),
                               identity_maps(model.horizon()), std::move(ops),
                               model.obs_sizes());
}

namespace {

double generalized_sum(const GeneralizedHiddenSpec& spec, const JointLaw& hidden,
                       std::span<const std::size_t> j, std::span<const std::size_t> k) {
  const std::size_t n = j.size() - 1;
  const std::size_t dh = spec.hidden_size();
  const auto& map = spec.index_maps()[n];
  const auto& sizes = hidden.alphabet_sizes();
  Path x(n + 1, 0);
  double total = 0.0;
  std::size_t i = 0;
  do {
    double p = hidden.probs()[i++];
    for (std::size_t m = 0; m <= n && p != 0.0; ++m) {
      p *= spec.markov_ops()[m](x[map[m]], k[m] * dh + j[m]);
    }
    total += p;
  } while (advance_path(x, sizes));
  return total;
}

}  // namespace

double generalized_hidden_joint(const GeneralizedHiddenSpec& spec,
                                std::span<const std::size_t> hidden_path,
                                std::span<const std::size_t> obs_path) {
  require(hidden_path.size() == obs_path.size() && !hidden_path.empty(),
          "generalized_hidden_joint: paths must be non-empty and of equal length");
  const std::size_t n = hidden_path.size() - 1;
  require(n <= spec.horizon(), "generalized_hidden_joint: beyond horizon");
  for (std::size_t m = 0; m <= n; ++m) {
    require(hidden_path[m] < spec.hidden_size() && obs_path[m] < spec.obs_size(m),
            "generalized_hidden_joint: index out of range");
  }
  const JointLaw hidden =
      spec.hidden_law().drop_last_sites(spec.hidden_law().num_sites() - (n + 1));
  return generalized_sum(spec, hidden, hidden_path, obs_path);
}

JointLaw generalized_hidden_law(const GeneralizedHiddenSpec& spec, std::size_t n,
                                const Limits& limits) {
  require(n <= spec.horizon(), "generalized_hidden_law: beyond horizon");
  const JointLaw hidden =
      spec.hidden_law().drop_last_sites(spec.hidden_law().num_sites() - (n + 1));
  std::vector<std::size_t> sizes;
  for (std::size_t m = 0; m <= n; ++m) {
    sizes.push_back(spec.hidden_size());
    sizes.push_back(spec.obs_size(m));
  }
  std::vector<double> probs(path_count(sizes, limits));
  Path path(sizes.size(), 0), h, o;
  std::size_t i = 0;
  do {
    deinterleave(path, h, o);
    probs[i++] = generalized_sum(spec, hidden, h, o);
  } while (advance_path(path, sizes));
  return JointLaw(std::move(sizes), std::move(probs), 2);
}

}  // namespace qhmp
