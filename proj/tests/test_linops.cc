#include <random>

#include <gtest/gtest.h>

#include "harnack/linops.h"
#include "harnack/quadrature.h"
#include "oracles.h"

using namespace harnack;

namespace {

double rel_err(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

TEST(MatrixExponential, MatchesTaylorOracle) {
  std::mt19937_64 gen(11);
  for (int d = 1; d <= 6; ++d) {
    const Matrix A = oracle::random_stable(d, gen) + oracle::random_spd(d, gen);
    for (double t : {0.0, 0.1, 1.0, 3.0}) {
      EXPECT_LT(rel_err(matrix_exponential(A, t), oracle::expm(A * t)), 1e-12) << "d=" << d << " t=" << t;
    }
  }
}

TEST(MatrixExponential, RejectsBadInput) {
  EXPECT_THROW(matrix_exponential(Matrix::Zero(2, 3), 1.0), std::invalid_argument);
  EXPECT_THROW(matrix_exponential(Matrix::Identity(2, 2), -1.0), std::invalid_argument);
}

TEST(Gramian, ScalarClosedForm) {
  for (double lambda : {0.5, 1.0, 3.0}) {
    for (double t : {0.01, 0.5, 2.0}) {
      const double want = 2.0 * (1.0 - std::exp(-2.0 * lambda * t)) / (2.0 * lambda);
      EXPECT_NEAR(gramian(Matrix::Constant(1, 1, -lambda), Matrix::Constant(1, 1, 2.0), t)(0, 0), want,
                  1e-14 * std::max(1.0, want));
    }
  }
  // A = 0: R_t = t R
  const Matrix R = Matrix::Identity(2, 2) * 0.7;
  EXPECT_LT(rel_err(gramian(Matrix::Zero(2, 2), R, 1.5), 1.5 * R), 1e-14);
}

TEST(Gramian, MatchesSimpsonOracle) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 1 + trial % 6;
    const Matrix A = oracle::random_stable(d, gen);
    const Matrix R = oracle::random_spd(d, gen);
    const double t = 0.2 + 0.3 * trial;
    EXPECT_LT(rel_err(gramian(A, R, t), oracle::gramian(A, R, t, 4000)), 1e-9);
  }
}

TEST(Gramian, SemigroupAdditivityAndMonotonicity) {
  std::mt19937_64 gen(6);
  const Matrix A = oracle::random_stable(3, gen);
  const Matrix R = oracle::random_spd(3, gen, 0.0);
  const double t = 0.7, s = 0.4;
  const Matrix T = matrix_exponential(A, t);
  EXPECT_LT(rel_err(gramian(A, R, t + s), gramian(A, R, t) + T * gramian(A, R, s) * T.transpose()), 1e-12);
  const Matrix diff = gramian(A, R, t + s) - gramian(A, R, t);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(diff).eigenvalues().minCoeff(), -1e-12);
}

TEST(Snapshot, OffsetMatchesOracle) {
  std::mt19937_64 gen(8);
  const Matrix A = oracle::random_stable(3, gen);
  const Matrix R = oracle::random_spd(3, gen);
  const Vector a = oracle::random_vector(3, gen);
  const SemigroupSnapshot snap = semigroup_snapshot(A, R, a, 1.3);
  EXPECT_LT((snap.offset - oracle::offset(A, a, 1.3)).norm(), 1e-10);
  EXPECT_LT(rel_err(snap.T, oracle::expm(A * 1.3)), 1e-12);
  EXPECT_LT(rel_err(integrated_exponential(A, 1.3) * a, oracle::offset(A, a, 1.3)), 1e-10);
  EXPECT_EQ(snap.gramian_factor.rank(), 3);
}

TEST(Lyapunov, ResidualAndGramianLimit) {
  std::mt19937_64 gen(9);
  for (int d = 1; d <= 5; ++d) {
    const Matrix A = oracle::random_stable(d, gen);
    const Matrix R = oracle::random_spd(d, gen);
    const Matrix X = lyapunov_solve(A, R);
    EXPECT_LT((A * X + X * A.transpose() + R).norm(), 1e-10 * R.norm());
    EXPECT_LT(rel_err(X, gramian(A, R, 80.0)), 1e-8);
  }
  EXPECT_THROW(lyapunov_solve(Matrix::Identity(2, 2), Matrix::Identity(2, 2)), std::domain_error);
}

TEST(PsdFactorization, ReconstructsAndInverts) {
  std::mt19937_64 gen(10);
  const Matrix S = oracle::random_spd(4, gen);
  const PsdFactorization f(S);
  EXPECT_TRUE(f.full_rank());
  EXPECT_LT(rel_err(f.reconstruct(), S), 1e-13);
  EXPECT_LT(rel_err(f.sqrt() * f.sqrt(), S), 1e-13);
  EXPECT_LT(rel_err(f.factor() * f.factor().transpose(), S), 1e-13);
  EXPECT_LT(rel_err(f.pinv() * S, Matrix::Identity(4, 4)), 1e-12);
  const Vector x = oracle::random_vector(4, gen);
  EXPECT_LT((f.apply_sqrt(f.apply_pinv_sqrt(x)) - x).norm(), 1e-12);
}

TEST(PsdFactorization, RankDeficient) {
  Matrix B(3, 2);
  B << 1, 0, 0, 1, 1, 1;
  const Matrix S = B * B.transpose();
  const PsdFactorization f(S);
  EXPECT_EQ(f.rank(), 2);
  EXPECT_FALSE(f.full_rank());
  const Vector inside = B * Vector::Ones(2);
  Vector outside(3);
  outside << 1, 1, -1;  // orthogonal to the columns of B
  EXPECT_TRUE(f.in_range(inside, 1e-9));
  EXPECT_FALSE(f.in_range(outside, 1e-9));
  EXPECT_NEAR(f.range_residual(outside), 1.0, 1e-12);
  // Moore-Penrose identities
  const Matrix P = f.pinv();
  EXPECT_LT((S * P * S - S).norm(), 1e-12);
  EXPECT_LT((P * S * P - P).norm(), 1e-12);
  EXPECT_LT((f.range_projector() * inside - inside).norm(), 1e-12);
}

TEST(RequirePsd, RejectsNonSymmetricAndNegative) {
  Matrix ns(2, 2);
  ns << 1, 0.5, 0, 1;
  EXPECT_FALSE(is_symmetric(ns));
  EXPECT_THROW(require_psd(ns, "R"), std::invalid_argument);
  EXPECT_THROW(require_psd(-Matrix::Identity(2, 2), "R"), std::invalid_argument);
  EXPECT_NO_THROW(require_psd(Matrix::Zero(2, 2), "R"));
}

TEST(SpectralAbscissa, Values) {
  Matrix A(2, 2);
  A << -1, 5, 0, -0.2;
  EXPECT_NEAR(spectral_abscissa(A), -0.2, 1e-14);
}

TEST(Quadrature, SmoothAndRejectsNonFinite) {
  EXPECT_NEAR(integrate([](double s) { return std::exp(-s); }, 0.0, 3.0), 1.0 - std::exp(-3.0), 1e-14);
  EXPECT_NEAR(integrate([](double s) { return std::sin(s) * std::sin(s); }, 0.0, M_PI), M_PI / 2.0, 1e-13);
  EXPECT_THROW(integrate([](double) { return std::nan(""); }, 0.0, 1.0), std::domain_error);
}

}  // namespace
