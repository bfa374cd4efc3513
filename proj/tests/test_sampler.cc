#include <random>

#include <gtest/gtest.h>

#include "harnack/analytic.h"
#include "harnack/registry.h"
#include "harnack/sampler.h"
#include "oracles.h"

using namespace harnack;

namespace {

Matrix m1(double v) { return Matrix::Constant(1, 1, v); }
Vector v1(double v) { return Vector::Constant(1, v); }

// --- RNG ---------------------------------------------------------------------

TEST(Philox, KnownAnswers) {
  using W = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (W{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
            (W{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
            (W{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStream, ReproducibleAndDistinct) {
  RngStream a(5, 1), b(5, 1), c(5, 2), d(6, 1);
  for (int i = 0; i < 10; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_NE(x, c.uniform());
    EXPECT_NE(x, d.uniform());
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_NE(mix_seed(1, 1), mix_seed(1, 2));
  EXPECT_NE(mix_seed(1, 1), mix_seed(2, 1));
}

TEST(RngStream, NormalMoments) {
  RngStream rng(9, 0);
  const int n = 200000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s1 / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 4.0 * std::sqrt(96.0 / n));
}

TEST(RngStream, PoissonMoments) {
  for (double mean : {0.3, 7.0, 450.0}) {
    RngStream rng(13, 0);
    const int n = 50000;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(rng.poisson(mean));
      s1 += k;
      s2 += k * k;
    }
    const double m = s1 / n, var = s2 / n - m * m;
    EXPECT_NEAR(m, mean, 4.0 * std::sqrt(mean / n)) << mean;
    EXPECT_NEAR(var, mean, 0.05 * mean + 0.01) << mean;
  }
}

// --- endpoints ----------------------------------------------------------------

TEST(EndpointSampler, MomentsWithJumps) {
  Matrix A(2, 2);
  A << -1.0, 0.4, 0.0, -0.6;
  Matrix R(2, 2);
  R << 1.0, 0.3, 0.3, 0.5;
  Vector a(2);
  a << 0.2, -0.1;
  Vector j1(2), j2(2);
  j1 << 0.8, 0.0;
  j2 << -0.4, 0.6;
  const auto jump = CompoundPoissonSpec::from_atoms(1.5, {{j1, 0.3}, {j2, 0.7}});
  const OuLevyModel model(A, R, a, jump);
  const double t = 1.2;
  Vector x(2);
  x << 0.5, -1.0;

  const Vector mean_xi = 0.3 * j1 + 0.7 * j2;
  const Matrix second_xi = 0.3 * j1 * j1.transpose() + 0.7 * j2 * j2.transpose();
  const Vector want_mean = oracle::expm(A * t) * x + oracle::offset(A, a, t) +
                           1.5 * oracle::simpson([&](double s) -> Vector { return oracle::expm(A * s) * mean_xi; }, 0.0, t, 200);
  const Matrix want_cov = oracle::gramian(A, R, t) + 1.5 * oracle::simpson([&](double s) -> Matrix {
    const Matrix T = oracle::expm(A * s);
    return T * second_xi * T.transpose();
  }, 0.0, t, 200);

  const EndpointSampler sampler(model, t);
  const int n = 200000;
  Vector sum = Vector::Zero(2);
  Matrix outer = Matrix::Zero(2, 2);
  for (int i = 0; i < n; ++i) {
    RngStream rng(17, i);
    const Vector z = sampler.sample(x, rng);
    sum += z;
    outer += z * z.transpose();
  }
  const Vector mean = sum / n;
  const Matrix cov = outer / n - mean * mean.transpose();
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(mean(k), want_mean(k), 4.0 * std::sqrt(want_cov(k, k) / n));
  EXPECT_LT((cov - want_cov).norm(), 0.02 * want_cov.norm());
}

TEST(EstimateSemigroup, MatchesMehlerAndIsPolicyInvariant) {
  const auto jump = CompoundPoissonSpec::from_atoms(2.0, {{v1(0.5), 0.5}, {v1(-0.3), 0.5}});
  const OuLevyModel model(m1(-0.8), m1(1.5), v1(0.1), jump);
  const auto f = [](const Vector& z) { return std::exp(0.4 * z(0)); };
  const McEstimate par = estimate_semigroup(model, 1.0, v1(0.3), f, 100000, 77, ExecPolicy::kParallel);
  const McEstimate ser = estimate_semigroup(model, 1.0, v1(0.3), f, 100000, 77, ExecPolicy::kSerial);
  EXPECT_EQ(par.mean, ser.mean);
  EXPECT_EQ(par.std_error, ser.std_error);
  EXPECT_NEAR(par.mean, mehler_exponential(model, 1.0, v1(0.4), v1(0.3)), 4.0 * par.std_error);
  EXPECT_THROW(estimate_semigroup(model, 1.0, v1(0.3), f, 99, 1), std::invalid_argument);
  EXPECT_THROW(estimate_semigroup(model, 1.0, v1(0.3), [](const Vector&) { return std::nan(""); }, 100, 1),
               std::domain_error);
}

TEST(SampleFunctionals, CommonNoiseAcrossStarts) {
  const OuLevyModel model(m1(-1.0), m1(2.0), v1(0.0));
  const std::vector<Vector> starts = {v1(1.0), v1(-0.5)};
  const std::vector<TestFunction> fns = {[](const Vector& z) { return z(0); }};
  const auto values = sample_functionals(model, 0.7, starts, fns, 1000, 3);
  ASSERT_EQ(values.size(), 2u);
  for (int i = 0; i < 1000; ++i) EXPECT_NEAR(values[0][i] - values[1][i], std::exp(-0.7) * 1.5, 1e-12);
}

// --- W_A paths ------------------------------------------------------------------

TEST(WaPath, EndpointCovarianceAndCrossCovariance) {
  Matrix A(2, 2);
  A << -1.0, 0.5, -0.2, -0.7;
  Matrix R(2, 2);
  R << 1.0, 0.2, 0.2, 0.4;
  const OuLevyModel model(A, R, Vector::Zero(2));
  const double t = 1.0;
  const WaPathSampler paths(model, uniform_time_grid(t, 16));
  const int n = 100000;
  Matrix cov = Matrix::Zero(2, 2), cross = Matrix::Zero(2, 2);
  for (int i = 0; i < n; ++i) {
    RngStream rng(23, i);
    const WaPath p = paths.sample(rng);
    Vector w = Vector::Zero(2);
    for (const auto& dw : p.increments) w += dw;
    cov += p.states.back() * p.states.back().transpose();
    cross += p.states.back() * w.transpose();
  }
  cov /= n;
  cross /= n;
  const Matrix want_cov = oracle::gramian(A, R, t);
  // Cov(W_A(t), W(t)) = int_0^t T_{t-s} R^{1/2} ds
  const Matrix root = PsdFactorization(R).sqrt();
  const Matrix want_cross = oracle::simpson([&](double s) -> Matrix { return oracle::expm(A * s) * root; }, 0.0, t, 200);
  EXPECT_LT((cov - want_cov).norm(), 0.02 * want_cov.norm());
  EXPECT_LT((cross - want_cross).norm(), 0.02 * want_cross.norm());
}

TEST(Girsanov, ConstantShiftMoments) {
  const OuLevyModel model(m1(-1.0), m1(1.0), v1(0.0));
  const auto grid = uniform_time_grid(1.0, 32);
  const std::vector<Vector> u(32, v1(0.7));
  const int n = 100000;
  std::vector<double> rho(n), rho2(n);
  for (int i = 0; i < n; ++i) {
    RngStream rng(29, i);
    const WaPath p = wa_path(model, grid, rng);
    rho[i] = girsanov_weight(model, grid, p.increments, u).rho();
    rho2[i] = rho[i] * rho[i];
  }
  const McEstimate m1_ = summarize(rho, 0);
  const McEstimate m2_ = summarize(rho2, 0);
  EXPECT_NEAR(m1_.mean, 1.0, 4.0 * m1_.std_error);
  EXPECT_NEAR(m2_.mean, std::exp(0.49), 4.0 * m2_.std_error);
  EXPECT_THROW(girsanov_weight(model, grid, std::vector<Vector>(31, v1(0.0)), u), std::invalid_argument);
}

TEST(CoupledPair, EndpointsCoincideAndReweightingRecoversStartX) {
  Matrix A(2, 2);
  A << -1.0, 0.6, 0.0, -0.5;
  Matrix R = Matrix::Zero(2, 2);
  R(1, 1) = 1.0;  // degenerate noise, controllable through A
  const auto jump = CompoundPoissonSpec::from_atoms(1.0, {{Vector::Ones(2) * 0.3, 1.0}});
  const OuLevyModel model(A, R, Vector::Zero(2), jump);
  Vector x(2), y(2);
  x << 0.4, -0.2;
  y << -0.1, 0.3;
  const CoupledPairSampler pair(model, 1.0, x, y, 64);
  Vector c(2);
  c << 0.3, -0.2;
  const int n = 100000;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    RngStream rng(31, i);
    const CoupledSample s = pair.sample(rng);
    ASSERT_LT((s.shifted_endpoint - s.endpoint).norm(), 1e-9);
    w[i] = s.weight.rho() * std::exp(c.dot(s.endpoint));
  }
  const McEstimate est = summarize(w, 0);
  EXPECT_NEAR(est.mean, mehler_exponential(model, 1.0, c, x), 4.0 * est.std_error);
}

// --- semilinear --------------------------------------------------------------------

TEST(Semilinear, ZeroDriftIsPlainSemigroup) {
  const OuLevyModel model(m1(-1.0), m1(2.0), v1(0.0));
  const auto f = [](const Vector& z) { return std::exp(0.5 * z(0)); };
  const SemilinearEstimate est =
      semilinear_estimate_detailed(model, make_semilinear("zero", model), 1.0, v1(0.4), f, 50000, 64, 5);
  EXPECT_EQ(est.rho.mean, 1.0);
  EXPECT_NEAR(est.value.mean, mehler_exponential(model, 1.0, v1(0.5), v1(0.4)), 4.0 * est.value.std_error);
}

TEST(Semilinear, ConstantDriftEqualsShiftedOffset) {
  Matrix A(2, 2);
  A << -1.0, 0.3, 0.0, -0.8;
  Matrix R(2, 2);
  R << 1.0, 0.2, 0.2, 0.6;
  const OuLevyModel model(A, R, Vector::Zero(2));
  const SemilinearSpec spec = make_semilinear("constant:0.4", model);
  Vector x(2), c(2);
  x << 0.2, -0.1;
  c << 0.3, 0.2;
  const auto f = [c](const Vector& z) { return std::exp(c.dot(z)); };
  const SemilinearEstimate est = semilinear_estimate_detailed(model, spec, 1.0, x, f, 100000, 64, 8);
  const OuLevyModel shifted = model.with_offset(spec.F(x));
  EXPECT_NEAR(est.rho.mean, 1.0, 4.0 * est.rho.std_error);
  EXPECT_NEAR(est.value.mean, mehler_exponential(shifted, 1.0, c, x), 4.0 * est.value.std_error);
}

TEST(Semilinear, SerialAndParallelAgreeBitwise) {
  const OuLevyModel model(m1(-1.0), m1(2.0), v1(0.0));
  const SemilinearSpec spec = make_semilinear("scaled_sine:0.5", model);
  const auto f = [](const Vector& z) { return 1.0 / (1.0 + std::exp(-z(0))); };
  const auto a = semilinear_replicates(model, spec, 1.0, v1(0.3), f, 3000, 32, 4, ExecPolicy::kSerial);
  const auto b = semilinear_replicates(model, spec, 1.0, v1(0.3), f, 3000, 32, 4, ExecPolicy::kParallel);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].log_rho, b[i].log_rho);
    ASSERT_EQ(a[i].f_value, b[i].f_value);
    ASSERT_EQ(a[i].wa_energy, b[i].wa_energy);
  }
}

TEST(Semilinear, RejectsJumpsAndRangeEscape) {
  const auto jump = CompoundPoissonSpec::from_atoms(1.0, {{v1(1.0), 1.0}});
  const OuLevyModel jumpy(m1(-1.0), m1(1.0), v1(0.0), jump);
  const auto one = [](const Vector&) { return 1.0; };
  EXPECT_THROW(semilinear_replicates(jumpy, make_semilinear("zero", jumpy), 1.0, v1(0.0), one, 10, 4, 1),
               std::invalid_argument);
  Matrix R = Matrix::Zero(2, 2);
  R(0, 0) = 1.0;
  const OuLevyModel degenerate(-Matrix::Identity(2, 2), R, Vector::Zero(2));
  SemilinearSpec bad{"bad", [](const Vector& x) { return Vector::Constant(x.size(), 1.0).eval(); }, 1.0, 0.0};
  EXPECT_THROW(semilinear_replicates(degenerate, bad, 1.0, Vector::Zero(2), one, 10, 4, 1), std::domain_error);
}

TEST(ExpMoments, ClosedFormConstantMatchesMonteCarlo) {
  Matrix A(2, 2);
  A << -0.5, 0.2, 0.0, -1.0;
  const OuLevyModel model(A, Matrix::Identity(2, 2), Vector::Zero(2));
  const ExpMomentConstants k = exp_moment_constants(model);
  EXPECT_NEAR(k.theta, oracle::gramian(A, Matrix::Identity(2, 2), 1.0).trace(), 1e-10);
  // at s = 1 the closed form is det(I - R_1 / (2 theta))^{-1/2}
  const Matrix M = Matrix::Identity(2, 2) - oracle::gramian(A, Matrix::Identity(2, 2), 1.0) / (2.0 * k.theta);
  const double at_one = 1.0 / std::sqrt(M.determinant());
  const McEstimate mc = wa_square_mgf_estimate(model, 1.0, 1.0 / (4.0 * k.theta), 200000, 6);
  EXPECT_NEAR(mc.mean, at_one, 4.0 * mc.std_error);
  EXPECT_GE(k.c0, at_one - 1e-12);
  // inside the horizon the exponential functional is below its bound
  const double lambda = 0.3;
  const double t = k.horizon(lambda);
  const McEstimate e = exp_functional_estimate(model, t, lambda, 50000, 64, 2);
  EXPECT_LE(e.mean, k.bound(lambda, t) + 3.0 * e.std_error);
  EXPECT_TRUE(std::isinf(k.horizon(0.0)));
}

}  // namespace
