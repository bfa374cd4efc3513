#pragma once

// Dense linear algebra used throughout the library: matrix exponentials,
// Gramian integrals via the augmented-block exponential, PSD square roots
// with rank-revealing pseudo-inverses, and continuous Lyapunov solves.

#include <Eigen/Dense>

namespace harnack {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultRankTol = 1e-10;

/// e^{tA}. Throws std::invalid_argument for non-square A or t < 0.
Matrix matrix_exponential(const Matrix& A, double t);

/// Largest real part over the spectrum of A.
double spectral_abscissa(const Matrix& A);

/// Symmetric-tag test: max |S_ij - S_ji| <= 1e-12 (1 + max |S_ij|).
bool is_symmetric(const Matrix& S);

/// Throws std::invalid_argument unless S is square, symmetric and has no
/// eigenvalue below -rank_tol * max(1, lambda_max).
void require_psd(const Matrix& S, const char* what, double rank_tol = kDefaultRankTol);

/// Eigen-factorization of a symmetric PSD matrix S = V diag(lambda) V^T with
/// eigenvalues sorted nonincreasing. Eigenvalues at or below
/// rank_tol * lambda_max are treated as exact zeros.
class PsdFactorization {
 public:
  PsdFactorization() = default;
  explicit PsdFactorization(const Matrix& S, double rank_tol = kDefaultRankTol);

  int dim() const { return static_cast<int>(eigenvalues_.size()); }
  int rank() const { return rank_; }
  double rank_tol() const { return rank_tol_; }
  const Vector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }
  double max_eigenvalue() const { return eigenvalues_.size() ? eigenvalues_(0) : 0.0; }
  /// Smallest retained (nonzero) eigenvalue, 0 when rank is 0.
  double min_positive_eigenvalue() const { return rank_ ? eigenvalues_(rank_ - 1) : 0.0; }
  bool full_rank() const { return rank_ == dim(); }

  Vector apply_sqrt(const Vector& x) const;
  Vector apply_pinv_sqrt(const Vector& x) const;
  Vector apply_pinv(const Vector& x) const;
  Vector project(const Vector& x) const;

  Matrix sqrt() const;
  Matrix pinv_sqrt() const;
  Matrix pinv() const;
  Matrix range_projector() const;
  /// V_r diag(sqrt(lambda_r)): a d x rank factor L with L L^T = S.
  const Matrix& factor() const { return factor_; }
  Matrix reconstruct() const;

  /// ||(I - P) x|| <= tol * max(1, ||x||), P the range projector.
  bool in_range(const Vector& x, double tol) const;
  /// Relative range residual ||(I - P) x|| / max(1, ||x||).
  double range_residual(const Vector& x) const;

 private:
  Vector eigenvalues_;
  Matrix eigenvectors_;
  Matrix factor_;
  int rank_ = 0;
  double rank_tol_ = kDefaultRankTol;
};

inline PsdFactorization psd_sqrt_pinv(const Matrix& S, double rank_tol = kDefaultRankTol) {
  return PsdFactorization(S, rank_tol);
}

/// T_t, R_t = int_0^t T_s R T_s^T ds and m_t = int_0^t T_s a ds at a fixed t.
struct SemigroupSnapshot {
  double t = 0.0;
  Matrix T;
  Matrix gramian;
  Vector offset;
  PsdFactorization gramian_factor;
};

/// Builds the snapshot with the augmented-block exponential:
/// exp(t [[A, R], [0, -A^T]]) has upper-right block F with R_t = F e^{tA^T},
/// and exp(t [[A, a], [0, 0]]) carries m_t in its last column.
SemigroupSnapshot semigroup_snapshot(const Matrix& A, const Matrix& R, const Vector& a,
                                     double t, double rank_tol = kDefaultRankTol);

/// Gramian int_0^t T_s R T_s^T ds alone (augmented-block route).
Matrix gramian(const Matrix& A, const Matrix& R, double t);

/// int_0^t e^{sA} ds.
Matrix integrated_exponential(const Matrix& A, double t);

/// Solves A X + X A^T = -R for stable A by complex Schur reduction.
/// Throws std::domain_error when the spectral abscissa of A is >= 0.
Matrix lyapunov_solve(const Matrix& A, const Matrix& R);

}  // namespace harnack
