#include <gtest/gtest.h>

#include <charconv>
#include <sstream>
#include <string>

#include "qhmp/model_io.hpp"
#include "qhmp/random.hpp"

using namespace qhmp;
using namespace qhmp::io;

namespace {

std::string fixture(const std::string& name) { return std::string(QHMP_FIXTURE_DIR) + "/" + name; }

std::vector<Model> one_of_each_kind() {
  Rng rng(101);
  const StochasticMatrix p = random_stochastic(2, 2, rng);
  const StochasticMatrix b = random_stochastic(2, 3, rng);
  const ClassicalHmm hmm = ClassicalHmm::homogeneous(random_probability_vector(2, rng), p, b, 2);
  const BackwardHmp back(random_probability_vector(2, rng), random_stochastic(2, 3, rng),
                         {random_stochastic(2, 3, rng)}, {random_stochastic(2, 2, rng)});
  const MarkovChainModel chain(random_probability_vector(2, rng), {p, p});
  const TimeConsecutiveModel tc{chain.law(2), {b, b, b}};
  const GeneralizedHiddenSpec gen = GeneralizedHiddenSpec::from_hmm(hmm);
  const QmcModel qmc(random_density(2, rng), random_unital_kraus(2, 2, rng));
  const QuantumHmpModel qhmp(qmc, {random_unital_kraus(2, 1, rng)});
  const ZYChain zy = embed_in_zy(hidden_readout_prmi(2, 0.7, 0.8), ProbabilityVector({0.4, 0.6}));
  return {hmm, back, tc, gen, qmc, qhmp, zy};
}

}  // namespace

TEST(ModelIo, KindNames) {
  for (auto k : {ModelKind::ClassicalHmm, ModelKind::BackwardHmp, ModelKind::TimeConsecutive,
                 ModelKind::Generalized, ModelKind::Qmc, ModelKind::QuantumHmp, ModelKind::ZyChain}) {
    EXPECT_EQ(parse_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_kind("bases"), ParseError);
}

TEST(ModelIo, RoundTripEveryKind) {
  for (const Model& m : one_of_each_kind()) {
    const ModelDocument doc = to_document(m, "rt", 5);
    const std::string text = dump_document(doc);
    const ModelDocument back = parse_document(text);
    EXPECT_EQ(back.kind, doc.kind);
    EXPECT_EQ(back.name, "rt");
    ASSERT_TRUE(back.seed.has_value());
    EXPECT_EQ(*back.seed, 5u);
    for (const auto& c : check_document(back)) EXPECT_TRUE(c.pass) << to_string(doc.kind) << ": " << c.name;
    const Model rebuilt = build_model(back);
    EXPECT_EQ(dump_document(to_document(rebuilt, "rt", 5)), text) << to_string(doc.kind);
    EXPECT_EQ(model_dim(rebuilt), model_dim(m));
  }
}

TEST(ModelIo, ComplexMatrixRoundTrip) {
  Rng rng(3);
  const ComplexMatrix u = random_unitary(3, rng);
  const ComplexMatrix back = complex_matrix_from_json(complex_matrix_to_json(u), "u");
  EXPECT_EQ((u - back).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ModelIo, ReferenceFixtureBroadcasts) {
  const Model m = build_model(load_document(fixture("reference_hmm.json")));
  const auto& hmm = std::get<ClassicalHmm>(m);
  EXPECT_EQ(hmm.horizon(), 2u);
  EXPECT_EQ(hmm.transitions().size(), 2u);
  EXPECT_DOUBLE_EQ(hmm.emissions()[2](1, 1), 0.6);
}

TEST(ModelIo, MalformedComplexIsParseError) {
  const ModelDocument doc = load_document(fixture("malformed_complex.json"));
  EXPECT_THROW(check_document(doc), ParseError);
  EXPECT_THROW(build_model(doc), ParseError);
}

TEST(ModelIo, ScaledKrausViolationIsThree) {
  const auto checks = check_document(load_document(fixture("scaled_kraus.json")));
  bool found = false;
  for (const auto& c : checks) {
    if (c.name != "kraus[0] unitality") continue;
    found = true;
    EXPECT_FALSE(c.pass);
    EXPECT_NEAR(c.violation, 3.0, 1e-12);
  }
  EXPECT_TRUE(found);
}

TEST(ModelIo, FaultyFixtureFailsNarrowly) {
  const auto checks = check_document(load_document(fixture("faulty_qmc.json")));
  bool failed = false;
  for (const auto& c : checks) failed = failed || !c.pass;
  EXPECT_TRUE(failed);
}

TEST(ModelIo, StructuralErrors) {
  EXPECT_THROW(parse_document("{not json"), ParseError);
  EXPECT_THROW(parse_document(R"({"kind":"qmc","payload":{}})"), ParseError);
  EXPECT_THROW(parse_document(R"({"format_version":2,"kind":"qmc","payload":{}})"), ParseError);
  EXPECT_THROW(parse_document(R"({"format_version":1,"kind":"nope","payload":{}})"), ParseError);
  EXPECT_THROW(parse_document(R"({"format_version":1,"kind":"qmc","payload":[]})"), ParseError);
  const auto doc = parse_document(R"({"format_version":1,"kind":"classical-hmm","payload":{"initial":[1]}})");
  EXPECT_THROW(build_model(doc), ParseError);
  EXPECT_THROW(load_document(fixture("does_not_exist.json")), ParseError);
}

TEST(ModelIo, NonStochasticInitialIsReported) {
  const auto doc = parse_document(R"({"format_version":1,"kind":"zy-chain",
    "payload":{"initial":[0.5,0.5,0.5,0.5],"transition":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}})");
  const auto checks = check_document(doc);
  bool flagged = false;
  for (const auto& c : checks) {
    if (c.name == "initial stochastic") {
      flagged = true;
      EXPECT_FALSE(c.pass);
      EXPECT_NEAR(c.violation, 1.0, 1e-12);
    }
  }
  EXPECT_TRUE(flagged);
  EXPECT_THROW(build_model(doc), ValidationError);
}

TEST(ModelIo, BasesFile) {
  const BasisSet b = load_bases_file(fixture("hadamard_bases.json"), 2);
  ASSERT_TRUE(b.hidden.has_value());
  ASSERT_EQ(b.observation.size(), 1u);
  const ComplexMatrix p = b.observation[0].projector(0);
  EXPECT_NEAR(p(0, 1).real(), 0.5, 1e-15);
  EXPECT_THROW(load_bases_file(fixture("hadamard_bases.json"), 3), ParseError);
  const auto again = read_bases(bases_to_json(b), 2);
  EXPECT_EQ((again.observation[0].unitary() - b.observation[0].unitary()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ModelIo, FormatNumberRoundTrips) {
  Rng rng(8);
  for (int k = 0; k < 1000; ++k) {
    const double x = rng.uniform() * std::pow(10.0, static_cast<int>(rng.index(20)) - 10);
    const std::string s = format_number(x);
    double y = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), y);
    EXPECT_EQ(x, y) << s;
  }
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(0.0), "0");
}

TEST(ModelIo, CsvWriters) {
  std::ostringstream law;
  write_law_csv(law, JointLaw({2}, {0.25, 0.75}), {"X0"});
  EXPECT_EQ(law.str(), "X0,probability\n0,0.25\n1,0.75\n");

  std::ostringstream paths;
  write_paths_csv(paths, {{0, 1}, {1, 1}}, {"O0", "O1"});
  EXPECT_EQ(paths.str(), "O0,O1\n0,1\n1,1\n");

  std::ostringstream prmi;
  write_prmi_csv(prmi, hidden_readout_prmi(2, 1.0, 1.0));
  const std::string s = prmi.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "r,m,i,value");
  EXPECT_NE(s.find("1,1,1,1\n"), std::string::npos);
  EXPECT_NE(s.find("0,1,0,0\n"), std::string::npos);
}
