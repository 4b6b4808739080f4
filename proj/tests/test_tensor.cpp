#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qhmp/errors.hpp"
#include "qhmp/random.hpp"
#include "qhmp/tensor.hpp"

using namespace qhmp;

namespace {

ComplexMatrix real2(double a, double b, double c, double d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST(MatrixUnit, DefinitionAndAlgebra) {
  EXPECT_EQ(matrix_unit(0, 0, 2), real2(1, 0, 0, 0));
  EXPECT_EQ(matrix_unit(0, 1, 2) * matrix_unit(1, 0, 2), matrix_unit(0, 0, 2));
  EXPECT_EQ(matrix_unit(0, 1, 2) * matrix_unit(0, 1, 2), ComplexMatrix::Zero(2, 2));
  ComplexMatrix sum = ComplexMatrix::Zero(3, 3);
  for (std::size_t i = 0; i < 3; ++i) sum += matrix_unit(i, i, 3);
  EXPECT_EQ(sum, identity(3));
  EXPECT_THROW(matrix_unit(2, 0, 2), DimensionError);
}

TEST(MatrixUnit, ActsAsRankOne) {
  ComplexVector xi(3);
  xi << 1.0, Complex(2.0, -1.0), 3.0;
  // e_ij xi = <e_j, xi> e_i
  const ComplexVector out = matrix_unit(0, 1, 3) * xi;
  EXPECT_EQ(out(0), xi(1));
  EXPECT_EQ(out(1), Complex(0));
  EXPECT_EQ(out(2), Complex(0));
}

TEST(Kron, IdentityAndUnits) {
  EXPECT_EQ(kron(identity(2), identity(2)), identity(4));
  const ComplexMatrix k = kron(matrix_unit(0, 0, 2), matrix_unit(1, 1, 2));
  EXPECT_EQ(k, matrix_unit(1, 1, 4));
}

TEST(Kron, MixedProductAndOracle) {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = random_unitary(2, rng), b = random_density(2, rng);
    const ComplexMatrix c = random_density(2, rng), d = random_unitary(2, rng);
    EXPECT_LT(max_abs(kron(a, b) * kron(c, d) - kron(a * c, b * d)), 1e-12);
    EXPECT_LT(max_abs(kron(a, b) - oracle::kron(a, b)), 1e-15);
  }
  const ComplexMatrix r = ComplexMatrix::Random(2, 3), s = ComplexMatrix::Random(3, 2);
  EXPECT_LT(max_abs(kron(r, s) - oracle::kron(r, s)), 1e-15);
}

TEST(Kron, CapIsEnforced) {
  Limits tight;
  tight.max_operator_dim = 8;
  EXPECT_THROW(kron(identity(4), identity(4), tight), CapExceeded);
  EXPECT_NO_THROW(kron(identity(2), identity(4), tight));
}

TEST(Embed, MatchesNestedKron) {
  Rng rng(5);
  const ComplexMatrix a = random_unitary(2, rng);
  EXPECT_LT(max_abs(embed(a, 2, 3) - oracle::kron(oracle::kron(identity(2), a), identity(3))), 1e-15);
}

TEST(PartialTrace, StatedValues) {
  const ComplexMatrix e00 = matrix_unit(0, 0, 2);
  EXPECT_EQ(partial_trace_second(kron(e00, e00), 2, 2), e00);
  EXPECT_EQ(partial_trace_second(identity(4), 2, 2), 2.0 * identity(2));
}

TEST(PartialTrace, ProductAndOracle) {
  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = random_density(3, rng), b = random_unitary(2, rng);
    EXPECT_LT(max_abs(partial_trace_second(kron(a, b), 3, 2) - a * b.trace()), 1e-12);
    const ComplexMatrix x = ComplexMatrix::Random(6, 6);
    EXPECT_LT(max_abs(partial_trace_second(x, 3, 2) - oracle::partial_trace_second(x, 3, 2)), 1e-14);
  }
  EXPECT_THROW(partial_trace_second(identity(5), 2, 2), DimensionError);
}

TEST(Blocks, FirstFactorReassembles) {
  Rng rng(11);
  const std::size_t d = 3;
  const ComplexMatrix k = random_unitary(d * d, rng);
  ComplexMatrix rebuilt = ComplexMatrix::Zero(9, 9);
  ComplexMatrix rebuilt2 = ComplexMatrix::Zero(9, 9);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      rebuilt += kron(matrix_unit(i, j, d), first_factor_block(k, d, i, j));
      rebuilt2 += kron(second_factor_block(k, d, i, j), matrix_unit(i, j, d));
    }
  }
  EXPECT_LT(max_abs(rebuilt - k), 1e-15);
  EXPECT_LT(max_abs(rebuilt2 - k), 1e-15);
}

TEST(Density, Report) {
  const auto ok = check_density(identity(2) / 2.0);
  EXPECT_TRUE(ok.ok());
  ComplexMatrix bad = real2(1.5, 0, 0, -0.5);
  const auto r = check_density(bad);
  EXPECT_FALSE(r.ok());
  EXPECT_NEAR(r.min_eigenvalue, -0.5, 1e-12);
  ComplexMatrix nh = real2(0.5, 0.1, 0.0, 0.5);
  EXPECT_NEAR(check_density(nh).hermiticity, 0.1, 1e-15);
}

TEST(Basis, OrthonormalityIsChecked) {
  EXPECT_THROW(OrthonormalBasis(real2(1, 1, 0, 1)), ValidationError);
  EXPECT_NO_THROW(OrthonormalBasis::fourier(3));
  EXPECT_LT(orthonormality_violation(OrthonormalBasis::fourier(5).unitary()), 1e-12);
}

TEST(Basis, UnitsAndCoordinates) {
  Rng rng(13);
  const OrthonormalBasis b = random_basis(3, rng);
  EXPECT_LT(max_abs(b.unit(0, 1) * b.unit(1, 2) - b.unit(0, 2)), 1e-12);
  ComplexMatrix sum = ComplexMatrix::Zero(3, 3);
  for (std::size_t j = 0; j < 3; ++j) sum += b.projector(j);
  EXPECT_LT(max_abs(sum - identity(3)), 1e-12);
  // Coordinates of e_{01} in its own basis are the standard unit.
  EXPECT_LT(max_abs(b.to_basis(b.unit(0, 1)) - matrix_unit(0, 1, 3)), 1e-12);
  const ComplexMatrix x = random_density(9, rng);
  EXPECT_LT(max_abs(b.from_basis2(b.to_basis2(x)) - x), 1e-12);
  EXPECT_LT(max_abs(b.to_basis2(kron(b.unit(0, 2), b.unit(1, 1))) - kron(matrix_unit(0, 2, 3), matrix_unit(1, 1, 3))),
            1e-12);
}

TEST(BasisOverlap, StatedValues) {
  const auto same = basis_overlap_matrix(OrthonormalBasis::standard(3), OrthonormalBasis::standard(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(same(i, j), i == j ? 1.0 : 0.0);
  const auto had = basis_overlap_matrix(OrthonormalBasis::standard(2), OrthonormalBasis::fourier(2));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(had(i, j), 0.5, 1e-15);
}

TEST(BasisOverlap, DoublyStochasticForRandomBases) {
  Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    const auto m = basis_overlap_matrix(random_basis(3, rng), random_basis(3, rng));
    for (std::size_t i = 0; i < 3; ++i) {
      double row = 0.0, col = 0.0;
      for (std::size_t j = 0; j < 3; ++j) {
        row += m(i, j);
        col += m(j, i);
      }
      EXPECT_NEAR(row, 1.0, 1e-10);
      EXPECT_NEAR(col, 1.0, 1e-10);
    }
  }
}
