#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qhmp/errors.hpp"
#include "qhmp/quantum.hpp"
#include "qhmp/random.hpp"

using namespace qhmp;

namespace {

const StochasticMatrix kP(2, 2, {0.9, 0.1, 0.2, 0.8});
const StochasticMatrix kB(2, 2, {0.7, 0.3, 0.4, 0.6});

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

ComplexMatrix random_hermitian(std::size_t d, Rng& rng) {
  ComplexMatrix g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.complex_normal();
  return (g + g.adjoint()) / 2.0;
}

using Path = std::vector<std::size_t>;

}  // namespace

TEST(TransitionExpectation, UnitalityOnRandomFamilies) {
  Rng rng(101);
  for (int t = 0; t < 30; ++t) {
    const std::size_t d = 2 + t % 2;
    const KrausFamily k = random_unital_kraus(d, 1 + t % 3, rng);
    EXPECT_LT(max_abs(apply_te(k, identity(d * d)) - identity(d)), 1e-10);
    EXPECT_LT(validate_kraus(k).max_violation, 1e-10);
  }
}

TEST(TransitionExpectation, MatchesEntrywiseOracle) {
  Rng rng(103);
  for (int t = 0; t < 10; ++t) {
    const std::size_t d = 2 + t % 2;
    const KrausFamily k = random_unital_kraus(d, 2, rng);
    const ComplexMatrix a = random_hermitian(d, rng), b = random_hermitian(d, rng);
    const ComplexMatrix x = kron(a, b);
    EXPECT_LT(max_abs(apply_te(k, x) - oracle::transition_expectation(k.operators(), x, d)), 1e-12);
  }
}

TEST(TransitionExpectation, DiagonalizableActsAsMarkovOperator) {
  const auto k = diagonalizable_cda_from_stochastic(kP).family();
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      const ComplexMatrix out = apply_te(k, kron(matrix_unit(a, a, 2), matrix_unit(b, b, 2)));
      EXPECT_LT(max_abs(out - kP(a, b) * matrix_unit(a, a, 2)), 1e-15);
    }
  }
}

TEST(ValidateKraus, StatedCases) {
  EXPECT_TRUE(validate_kraus(diagonalizable_cda_from_stochastic(kP).family()).pass);
  for (std::size_t d : {2u, 3u}) {
    const ComplexMatrix k = kron(identity(d), identity(d) / std::sqrt(static_cast<double>(d)));
    EXPECT_TRUE(validate_kraus(KrausFamily(d, {k})).pass);
  }
  const ComplexMatrix k2 = 2.0 * diagonalizable_cda_from_stochastic(kP).matrix();
  const KrausReport r = validate_kraus(KrausFamily(2, {k2}));
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.max_violation, 3.0, 1e-12);
  EXPECT_THROW(ConditionalDensityAmplitude(2, k2), ValidationError);
  EXPECT_THROW(KrausFamily(2, {identity(3)}), DimensionError);
}

TEST(ValidateKraus, AgreesWithPartialTraceForm) {
  Rng rng(107);
  for (int t = 0; t < 10; ++t) {
    const std::size_t d = 2 + t % 2;
    const KrausFamily k = random_unital_kraus(d, 1 + t % 3, rng);
    ComplexMatrix s = ComplexMatrix::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
    for (const auto& op : k.operators()) s += op.adjoint() * op;
    EXPECT_LT(max_abs(oracle::partial_trace_second(s, d, d) - identity(d)), 1e-10);
  }
}

TEST(DiagonalizableCda, StatedEntries) {
  const auto id = diagonalizable_cda_from_stochastic(StochasticMatrix::identity(2)).matrix();
  const ComplexMatrix expect = kron(matrix_unit(0, 0, 2), matrix_unit(0, 0, 2)) + kron(matrix_unit(1, 1, 2), matrix_unit(1, 1, 2));
  EXPECT_EQ(id, expect);
  const auto k = diagonalizable_cda_from_stochastic(kP).matrix();
  EXPECT_DOUBLE_EQ(k(0, 0).real(), std::sqrt(0.9));
  EXPECT_DOUBLE_EQ(k(1, 1).real(), std::sqrt(0.1));
  EXPECT_DOUBLE_EQ(k(2, 2).real(), std::sqrt(0.2));
  EXPECT_DOUBLE_EQ(k(3, 3).real(), std::sqrt(0.8));
  EXPECT_NEAR(max_abs(k - ComplexMatrix(k.diagonal().asDiagonal())), 0.0, 0.0);
}

TEST(DiagonalizableCda, RandomOutputsAreUnital) {
  Rng rng(109);
  for (int t = 0; t < 10; ++t) {
    const std::size_t d = 2 + t % 3;
    const OrthonormalBasis b = random_basis(d, rng);
    const auto k = diagonalizable_cda_from_stochastic(random_stochastic(d, d, rng), random_phases(d, d, rng), b);
    EXPECT_TRUE(validate_kraus(k.family()).pass);
    EXPECT_TRUE(check_shift_commutation(k).commutes);
  }
}

TEST(ShiftCommutation, StatedCases) {
  EXPECT_TRUE(check_shift_commutation(diagonalizable_cda_from_stochastic(kP)).commutes);
  const ComplexMatrix flat = kron(identity(2), identity(2) / std::sqrt(2.0));
  EXPECT_TRUE(check_shift_commutation(flat, 2).commutes);
  ComplexMatrix swap = ComplexMatrix::Zero(4, 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) swap(static_cast<Eigen::Index>(i * 2 + j), static_cast<Eigen::Index>(j * 2 + i)) = 1.0;
  const auto r = check_shift_commutation(swap / std::sqrt(2.0), 2);
  EXPECT_FALSE(r.commutes);
  EXPECT_GT(r.violation, 0.1);
}

TEST(InitialCompatibility, StatedCases) {
  const auto k = diagonalizable_cda_from_stochastic(kP);
  EXPECT_TRUE(check_initial_compatibility(diag2(0.3, 0.7), k).pass());
  const auto degenerate = check_initial_compatibility(diag2(0.5, 0.5), k);
  EXPECT_FALSE(degenerate.nondegenerate);
  EXPECT_FALSE(degenerate.pass());
  // Row 0 of the first factor vanishes: K = e_10 (x) e_00 + e_11 (x) e_11.
  const ComplexMatrix z = kron(matrix_unit(1, 0, 2), matrix_unit(0, 0, 2)) + kron(matrix_unit(1, 1, 2), matrix_unit(1, 1, 2));
  const ConditionalDensityAmplitude kz(2, z);
  EXPECT_FALSE(check_initial_compatibility(diag2(0.3, 0.7), kz).rows_nonzero);
}

TEST(QmcModel, Validation) {
  const auto k = diagonalizable_cda_from_stochastic(kP).family();
  EXPECT_THROW(QmcModel(diag2(0.7, 0.7), k), ValidationError);
  EXPECT_THROW(QmcModel(diag2(1.5, -0.5), k), ValidationError);
  EXPECT_THROW(QmcModel(diag2(0.5, 0.5), KrausFamily(2, {2.0 * k.op(0)})), ValidationError);
  const QmcModel m(diag2(0.5, 0.5), k);
  EXPECT_TRUE(m.homogeneous());
  EXPECT_EQ(&m.family(0), &m.family(7));
}

TEST(QmcExpectation, IdentityStringIsOne) {
  Rng rng(113);
  const QmcModel m(random_density(3, rng), random_unital_kraus(3, 2, rng));
  EXPECT_NEAR(std::abs(qmc_joint_expectation(m, {identity(3), identity(3), identity(3)}) - 1.0), 0.0, 1e-12);
}

TEST(QmcExpectation, HorizonZeroOnDiagonalizable) {
  const QmcModel m(diag2(0.3, 0.7), diagonalizable_cda_from_stochastic(kP).family());
  EXPECT_NEAR(qmc_joint_expectation(m, {matrix_unit(0, 0, 2)}).real(), 0.3, 1e-15);
  EXPECT_NEAR(qmc_joint_expectation(m, {matrix_unit(1, 1, 2)}).real(), 0.7, 1e-15);
  EXPECT_NEAR(qmc_joint_expectation(m, {matrix_unit(0, 0, 2), matrix_unit(1, 1, 2)}).real(), 0.3 * 0.1, 1e-15);
}

TEST(QmcExpectation, MatchesNestedOracle) {
  Rng rng(127);
  for (int t = 0; t < 5; ++t) {
    const std::size_t d = 2 + t % 2;
    std::vector<KrausFamily> fams{random_unital_kraus(d, 2, rng), random_unital_kraus(d, 1, rng), random_unital_kraus(d, 3, rng)};
    const QmcModel m(random_density(d, rng), fams);
    std::vector<ComplexMatrix> ops{random_hermitian(d, rng), random_hermitian(d, rng), random_hermitian(d, rng)};
    std::vector<std::vector<ComplexMatrix>> raw;
    for (const auto& f : fams) raw.push_back(f.operators());
    EXPECT_LT(std::abs(qmc_joint_expectation(m, ops) - oracle::qmc_expectation(m.w0(), raw, ops)), 1e-12);
  }
}

TEST(DensityWindow, HorizonZero) {
  Rng rng(131);
  const QmcModel m(random_density(2, rng), random_unital_kraus(2, 2, rng));
  const ComplexMatrix w = qmc_density_window(m, 0);
  EXPECT_NEAR(std::abs(w.trace() - 1.0), 0.0, 1e-12);
  ComplexMatrix direct = ComplexMatrix::Zero(4, 4);
  for (const auto& k : m.family(0).operators()) direct += k * kron(m.w0(), identity(2)) * k.adjoint();
  EXPECT_LT(max_abs(w - oracle::partial_trace_second(direct, 2, 2)), 1e-12);
}

TEST(DensityWindow, DiagonalLiftingOfMarkovChain) {
  const std::vector<double> p0{0.3, 0.7};
  const QmcModel m(diag2(0.3, 0.7), diagonalizable_cda_from_stochastic(kP).family());
  const ComplexMatrix w = qmc_density_window(m, 2);
  ComplexMatrix expect = ComplexMatrix::Zero(8, 8);
  oracle::for_each_path(2, 3, [&](const Path& p) {
    const Eigen::Index i = static_cast<Eigen::Index>(p[0] * 4 + p[1] * 2 + p[2]);
    expect(i, i) = oracle::chain_product(p0, kP, p);
  });
  EXPECT_LT(max_abs(w - expect), 1e-15);
}

TEST(DensityWindow, AgreesWithRecursionOnRandomOperators) {
  Rng rng(137);
  for (int t = 0; t < 5; ++t) {
    const QmcModel m(random_density(2, rng), random_unital_kraus(2, 1 + t % 3, rng));
    const ComplexMatrix w = qmc_density_window(m, 2);
    std::vector<ComplexMatrix> ops{random_hermitian(2, rng), random_hermitian(2, rng), random_hermitian(2, rng)};
    const Complex window = (w * kron(kron(ops[0], ops[1]), ops[2])).trace();
    EXPECT_LT(std::abs(window - qmc_joint_expectation(m, ops)), 1e-12);
  }
}

TEST(QuantumHmp, IdentityStringsGiveOne) {
  Rng rng(139);
  const QuantumHmpModel m(QmcModel(random_density(2, rng), random_unital_kraus(2, 2, rng)),
                          {random_unital_kraus(2, 2, rng)});
  const std::vector<ComplexMatrix> ids(3, identity(2));
  EXPECT_NEAR(std::abs(quantum_hmp_joint(m, ids, ids) - 1.0), 0.0, 1e-12);
}

TEST(QuantumHmp, CommutativeCaseIsClassicalHmm) {
  const QuantumHmpModel m(QmcModel(diag2(0.5, 0.5), diagonalizable_cda_from_stochastic(kP).family()),
                          {diagonalizable_cda_from_stochastic(kB).family()});
  const std::vector<double> p0{0.5, 0.5};
  oracle::for_each_path(2, 3, [&](const Path& h) {
    oracle::for_each_path(2, 3, [&](const Path& o) {
      std::vector<ComplexMatrix> g, f;
      double expect = oracle::chain_product(p0, kP, h);
      for (std::size_t s = 0; s < 3; ++s) {
        g.push_back(matrix_unit(h[s], h[s], 2));
        f.push_back(matrix_unit(o[s], o[s], 2));
        expect *= kB(h[s], o[s]);
      }
      EXPECT_NEAR(quantum_hmp_joint(m, g, f).real(), expect, 1e-15);
    });
  });
  EXPECT_NEAR(quantum_hmp_joint(m, {matrix_unit(0, 0, 2), matrix_unit(1, 1, 2)}, {matrix_unit(0, 0, 2), matrix_unit(1, 1, 2)}).real(),
              0.021, 1e-15);
}

TEST(QuantumHmp, EmissionsMustBeUnital) {
  const auto k = diagonalizable_cda_from_stochastic(kP).family();
  EXPECT_THROW(QuantumHmpModel(QmcModel(diag2(0.5, 0.5), k), {KrausFamily(2, {2.0 * k.op(0)})}), ValidationError);
}
