#pragma once

// Reference computations for tests. Deliberately naive and independent of
// the library: Taylor matrix exponentials, composite Simpson integrals, plain
// 1-d quadrature on a truncated line.

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Scaling and squaring with a 30-term Taylor series.
inline Matrix expm(const Matrix& A) {
  const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const Matrix B = A / std::ldexp(1.0, squarings);
  Matrix term = Matrix::Identity(A.rows(), A.cols());
  Matrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * B / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

template <class Fn>
auto simpson(Fn&& fn, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  decltype(fn(a)) sum = fn(a);
  sum += fn(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * fn(a + i * h);
  return decltype(sum)(h / 3.0 * sum);
}

inline double simpson1(const std::function<double(double)>& fn, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double sum = fn(a) + fn(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * fn(a + i * h);
  return h / 3.0 * sum;
}

// int_0^t e^{sA} R e^{sA^T} ds
inline Matrix gramian(const Matrix& A, const Matrix& R, double t, int panels = 400) {
  return simpson([&](double s) -> Matrix {
    const Matrix T = expm(A * s);
    return T * R * T.transpose();
  }, 0.0, t, panels);
}

// int_0^t e^{sA} a ds
inline Vector offset(const Matrix& A, const Vector& a, double t, int panels = 400) {
  return simpson([&](double s) -> Vector { return expm(A * s) * a; }, 0.0, t, panels);
}

inline double normal_pdf(double z, double mean, double var) {
  return std::exp(-0.5 * (z - mean) * (z - mean) / var) / std::sqrt(2.0 * M_PI * var);
}

// Random stable matrix: negative diagonal shift of a Gaussian matrix.
inline Matrix random_stable(int d, std::mt19937_64& gen) {
  std::normal_distribution<double> n01;
  Matrix A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = 0.5 * n01(gen);
  const double abscissa = Eigen::EigenSolver<Matrix>(A).eigenvalues().real().maxCoeff();
  return A - (abscissa + 0.3 + std::uniform_real_distribution<double>(0.0, 1.0)(gen)) *
                 Matrix::Identity(d, d);
}

inline Matrix random_spd(int d, std::mt19937_64& gen, double ridge = 0.1) {
  std::normal_distribution<double> n01;
  Matrix B(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) B(i, j) = n01(gen);
  return B * B.transpose() / d + ridge * Matrix::Identity(d, d);
}

inline Vector random_vector(int d, std::mt19937_64& gen, double scale = 1.0) {
  std::normal_distribution<double> n01;
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = scale * n01(gen);
  return v;
}

}  // namespace oracle
