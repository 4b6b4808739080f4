#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qhmp/errors.hpp"
#include "qhmp/random.hpp"

using namespace qhmp;

TEST(Rng, StreamIsSeededThroughSeedSeq) {
  Rng rng(42, 0);
  std::seed_seq seq{42u, 0u, 0u, 0u};
  std::mt19937_64 reference(seq);
  EXPECT_EQ(rng.next(), reference());
  EXPECT_EQ(Rng(42, 0).next(), 9033786554787212662ull);
  EXPECT_EQ(Rng(42, 1).next(), 15458169230261267086ull);
}

TEST(Rng, FrozenDistributions) {
  Rng rng(42, 0);
  rng.next();
  EXPECT_DOUBLE_EQ(rng.uniform(), 0.42321393806600394);
  EXPECT_DOUBLE_EQ(rng.normal(), -0.06711224680852218);
}

TEST(Rng, Determinism) {
  Rng a(7, 3), b(7, 3), c(7, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs = differs || x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformMomentsAndRange) {
  Rng rng(1);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  EXPECT_NEAR(sq / n - 0.25, 1.0 / 12.0, 0.005);
}

TEST(Rng, NormalMoments) {
  Rng rng(2);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
}

TEST(Generators, ProduceValidObjects) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 2 + t % 3;
    const ComplexMatrix u = random_unitary(d, rng);
    EXPECT_LT(max_abs(u.adjoint() * u - identity(d)), 1e-12);
    EXPECT_TRUE(check_density(random_density(d, rng)).ok());
    const StochasticMatrix p = random_stochastic(d, d + 1, rng);
    EXPECT_TRUE(check_stochastic(p.rows(), p.cols(), p.entries()).ok(1e-12));
    EXPECT_TRUE(validate_kraus(random_unital_kraus(d, 1 + t % 3, rng)).pass);
    const ComplexMatrix ph = random_phases(d, d, rng);
    for (Eigen::Index i = 0; i < ph.size(); ++i) EXPECT_NEAR(std::abs(ph(i)), 1.0, 1e-15);
    const OrthonormalBasis b = random_basis(d, rng);
    const ComplexMatrix w = b.to_basis(random_diagonal_density(b, rng));
    EXPECT_LT(max_abs(w - ComplexMatrix(w.diagonal().asDiagonal())), 1e-12);
  }
}

TEST(Generators, DePreservingFamiliesAreUnital) {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const std::size_t d = 2 + t % 2;
    const OrthonormalBasis b = random_basis(d, rng);
    EXPECT_TRUE(validate_kraus(random_de_preserving_family(d, 1 + t % 3, b, t % 2 == 0, rng)).pass);
    EXPECT_TRUE(validate_kraus(de_preserving_family_from_prmi(hidden_readout_prmi(d, 0.9, 0.6), 2, b, rng)).pass);
  }
}

TEST(Generators, HiddenReadoutTensor) {
  const PrmiTensor t = hidden_readout_prmi(2, 0.9, 0.7);
  EXPECT_DOUBLE_EQ(t(0, 0, 0), 0.7 * 0.9);
  EXPECT_DOUBLE_EQ(t(0, 1, 0), 0.3 * 0.9);
  EXPECT_DOUBLE_EQ(t(1, 1, 0), 0.7 * 0.1);
  EXPECT_THROW(hidden_readout_prmi(2, 1.2, 0.5), ValidationError);
}
