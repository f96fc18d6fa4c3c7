#include "gompcert/densela.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "gompcert/errors.hpp"
#include "gompcert/sensing.hpp"
#include "oracles.hpp"

namespace gompcert {
namespace {

using testing::max_abs_diff;

TEST(Gram, IdentityAndSingleColumn) {
  EXPECT_EQ(gram(DenseMatrix::identity(2)), DenseMatrix::identity(2));
  const DenseMatrix g = gram(DenseMatrix::from_column(Vector{1, 1, 1}));
  ASSERT_EQ(g.rows(), 1u);
  EXPECT_DOUBLE_EQ(g(0, 0), 3.0);
}

TEST(Gram, CounterexampleSmallestCase) {
  const DenseMatrix g = gram(gen_counterexample(1, 1).matrix());
  EXPECT_NEAR(g(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(g(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(g(1, 0), 0.5, 1e-15);
  EXPECT_NEAR(g(1, 1), 1.5, 1e-15);
}

TEST(Gram, ExactlySymmetric) {
  Rng rng(3);
  const DenseMatrix g = gram(testing::random_matrix(rng, 7, 5));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(g(i, j), g(j, i));
}

TEST(LeastSquares, IdentityAndSingleColumn) {
  const Vector u = least_squares(DenseMatrix::identity(3), Vector{1, 2, 3});
  EXPECT_LT(max_abs_diff(u, {1, 2, 3}), 1e-15);

  const double s = 1.0 / std::sqrt(3.0);
  const Vector v = least_squares(DenseMatrix::from_column(Vector{s, s, s}), Vector{1, 2, 3});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NEAR(v[0], 3.464101615137754, 1e-14);
}

TEST(LeastSquares, MatchesNormalEquations) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix m = testing::random_matrix(rng, 6, 3);
    const Vector y = testing::random_vector(rng, 6);
    EXPECT_LT(max_abs_diff(least_squares(m, y), testing::normal_equations_solve(m, y)), 1e-8);
  }
}

TEST(LeastSquares, ResidualOrthogonalToColumnsProperty) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t rows = 1 + rng.below(20);
    const std::size_t cols = 1 + rng.below(rows);
    const DenseMatrix m = testing::random_matrix(rng, rows, cols);
    const Vector y = testing::random_vector(rng, rows);
    const Vector u = least_squares(m, y);
    Vector r = y;
    const Vector mu = m.apply(u);
    for (std::size_t i = 0; i < rows; ++i) r[i] -= mu[i];
    const Vector mtr = m.apply_transpose(r);
    for (double v : mtr) ASSERT_LE(std::abs(v), 1e-10 * norm2(y)) << "trial " << trial;
  }
}

TEST(LeastSquares, RankDeficientSubsetIsRejected) {
  DenseMatrix m(4, 2);
  for (std::size_t r = 0; r < 4; ++r) {
    m(r, 0) = 1.0 + r;
    m(r, 1) = 2.0 * (1.0 + r);
  }
  EXPECT_THROW(least_squares(m, Vector{1, 2, 3, 4}), RankDeficient);
  EXPECT_THROW(least_squares(DenseMatrix(2, 3), Vector{1, 2}), RankDeficient);
  EXPECT_THROW(least_squares(DenseMatrix(3, 1), Vector{1, 2, 3}), RankDeficient);
}

TEST(Projection, CoordinateAndInSpan) {
  const Vector r = residual_after_projection(DenseMatrix::from_column(Vector{1, 0}), Vector{5, 7});
  EXPECT_LT(max_abs_diff(r, {0, 7}), 1e-15);

  Rng rng(5);
  const DenseMatrix m = testing::random_matrix(rng, 6, 3);
  const Vector v = m.apply(Vector{0.3, -1.2, 2.0});
  EXPECT_LT(norm2(residual_after_projection(m, v)), 1e-10);
}

TEST(Projection, MatchesExplicitProjector) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix m = testing::random_matrix(rng, 8, 3);
    const Vector v = testing::random_vector(rng, 8);
    EXPECT_LT(max_abs_diff(residual_after_projection(m, v),
                           testing::normal_equations_residual(m, v)),
              1e-8);
  }
}

TEST(Projection, IdempotentOrthogonalAndContractive) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 2 + rng.below(15);
    const std::size_t cols = 1 + rng.below(rows - 1);
    const DenseMatrix m = testing::random_matrix(rng, rows, cols);
    const Vector v = testing::random_vector(rng, rows);
    const Vector once = residual_after_projection(m, v);
    const Vector twice = residual_after_projection(m, once);
    EXPECT_LT(max_abs_diff(once, twice), 1e-10);
    EXPECT_LE(norm2(once), norm2(v) + 1e-12);
    for (double c : m.apply_transpose(once)) EXPECT_LE(std::abs(c), 1e-10 * norm2(v));
  }
}

TEST(Eigen, DiagonalAndRankOne) {
  EXPECT_LT(max_abs_diff(symmetric_eigenvalues(DenseMatrix::diagonal(Vector{3, 1, 2})),
                         {1, 2, 3}),
            1e-15);
  EXPECT_LT(max_abs_diff(symmetric_eigenvalues(DenseMatrix{{1, 1}, {1, 1}}), {0, 2}), 1e-14);
}

TEST(Eigen, CounterexampleSpectrumKTwoNTwo) {
  const Vector eig = symmetric_eigenvalues(gram(gen_counterexample(2, 2).matrix()));
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_LT(max_abs_diff(eig, {1 - h, 0.5, 1, 1, 1 + h}), 1e-12);
}

TEST(Eigen, TraceAndDeterminantProperty) {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(4);
    const DenseMatrix g = gram(testing::random_matrix(rng, n + rng.below(3), n));
    const Vector eig = symmetric_eigenvalues(g);
    ASSERT_TRUE(std::is_sorted(eig.begin(), eig.end()));
    double trace = 0, sum = 0, prod = 1;
    for (std::size_t i = 0; i < n; ++i) {
      trace += g(i, i);
      sum += eig[i];
      prod *= eig[i];
    }
    EXPECT_NEAR(sum, trace, 1e-10 * std::abs(trace));
    const double det = testing::cofactor_det(g);
    EXPECT_NEAR(prod, det, 1e-8 * std::max(std::abs(det), 1e-300) + 1e-12);
  }
}

TEST(Eigen, LargerRandomSymmetricTrace) {
  Rng rng(1);
  const DenseMatrix g = gram(testing::random_matrix(rng, 40, 30));
  const Vector eig = symmetric_eigenvalues(g);
  double trace = 0, sum = 0;
  for (std::size_t i = 0; i < 30; ++i) {
    trace += g(i, i);
    sum += eig[i];
  }
  EXPECT_NEAR(sum, trace, 1e-10 * trace);
  EXPECT_GT(eig.front(), 0.0);
}

TEST(Eigen, RejectsAsymmetricInput) {
  EXPECT_THROW(symmetric_eigenvalues(DenseMatrix{{1, 2}, {0, 1}}), NotSymmetric);
  EXPECT_THROW(symmetric_eigenvalues(DenseMatrix(2, 3)), NotSymmetric);
}

TEST(Eigen, SweepCapReportsNoConvergence) {
  Rng rng(4);
  const DenseMatrix g = gram(testing::random_matrix(rng, 6, 6));
  EXPECT_THROW(symmetric_eigenvalues(g, JacobiOptions{.max_sweeps = 0}), NoConvergence);
}

TEST(Eigen, ZeroMatrix) {
  EXPECT_EQ(symmetric_eigenvalues(DenseMatrix(3, 3)), (Vector{0, 0, 0}));
}

TEST(DenseMatrix, RejectsBadShapesAndValues) {
  EXPECT_THROW(DenseMatrix(0, 3), InvalidArgument);
  EXPECT_THROW(DenseMatrix(2, 2, {1, 2, 3}), DimensionMismatch);
  EXPECT_THROW(DenseMatrix(1, 2, {1, NAN}), InvalidArgument);
}

}  // namespace
}  // namespace gompcert
