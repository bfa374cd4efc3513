#include "harnack/linops.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace harnack {

Matrix matrix_exponential(const Matrix& A, double t) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("matrix_exponential: matrix is " + std::to_string(A.rows()) +
                                "x" + std::to_string(A.cols()) + ", expected square");
  }
  if (!(t >= 0.0)) throw std::invalid_argument("matrix_exponential: t must be >= 0");
  if (A.size() == 0) return A;
  if (t == 0.0 || A.isZero(0.0)) return Matrix::Identity(A.rows(), A.cols());
  const Matrix tA = t * A;
  return tA.exp();
}

double spectral_abscissa(const Matrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("spectral_abscissa: non-square matrix");
  if (A.size() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<Matrix> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw std::runtime_error("spectral_abscissa: eigen solve failed");
  return es.eigenvalues().real().maxCoeff();
}

bool is_symmetric(const Matrix& S) {
  if (S.rows() != S.cols()) return false;
  if (!S.allFinite()) return false;
  const double scale = 1.0 + S.cwiseAbs().maxCoeff();
  return (S - S.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

void require_psd(const Matrix& S, const char* what, double rank_tol) {
  if (S.rows() != S.cols()) throw std::invalid_argument(std::string(what) + ": not square");
  if (!is_symmetric(S)) throw std::invalid_argument(std::string(what) + ": not symmetric");
  if (S.size() == 0) return;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
  const double lmax = es.eigenvalues().maxCoeff();
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin < -rank_tol * std::max(1.0, lmax)) {
    throw std::invalid_argument(std::string(what) + ": not positive semidefinite (eigenvalue " +
                                std::to_string(lmin) + ")");
  }
}

PsdFactorization::PsdFactorization(const Matrix& S, double rank_tol) : rank_tol_(rank_tol) {
  if (S.rows() != S.cols()) throw std::invalid_argument("psd_sqrt_pinv: non-square matrix");
  const int d = static_cast<int>(S.rows());
  eigenvalues_ = Vector::Zero(d);
  eigenvectors_ = Matrix::Identity(d, d);
  if (d == 0) return;

  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()));
  if (es.info() != Eigen::Success) throw std::runtime_error("psd_sqrt_pinv: eigen solve failed");
  // Eigen returns ascending order; flip to nonincreasing.
  for (int i = 0; i < d; ++i) {
    eigenvalues_(i) = es.eigenvalues()(d - 1 - i);
    eigenvectors_.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  const double lmax = std::max(eigenvalues_(0), 0.0);
  const double cutoff = rank_tol * lmax;
  rank_ = 0;
  for (int i = 0; i < d; ++i) {
    if (lmax > 0.0 && eigenvalues_(i) > cutoff) {
      ++rank_;
    } else {
      eigenvalues_(i) = 0.0;
    }
  }
  factor_ = eigenvectors_.leftCols(rank_) *
            eigenvalues_.head(rank_).cwiseSqrt().asDiagonal();
}

Vector PsdFactorization::apply_sqrt(const Vector& x) const {
  const auto V = eigenvectors_.leftCols(rank_);
  return V * (eigenvalues_.head(rank_).cwiseSqrt().asDiagonal() * (V.transpose() * x));
}

Vector PsdFactorization::apply_pinv_sqrt(const Vector& x) const {
  const auto V = eigenvectors_.leftCols(rank_);
  return V * (eigenvalues_.head(rank_).cwiseSqrt().cwiseInverse().asDiagonal() *
              (V.transpose() * x));
}

Vector PsdFactorization::apply_pinv(const Vector& x) const {
  const auto V = eigenvectors_.leftCols(rank_);
  return V * (eigenvalues_.head(rank_).cwiseInverse().asDiagonal() * (V.transpose() * x));
}

Vector PsdFactorization::project(const Vector& x) const {
  const auto V = eigenvectors_.leftCols(rank_);
  return V * (V.transpose() * x);
}

Matrix PsdFactorization::sqrt() const {
  const auto V = eigenvectors_.leftCols(rank_);
  return V * eigenvalues_.head(rank_).cwiseSqrt().asDiagonal() * V.transpose();
}

Matrix PsdFactorization::pinv_sqrt() const {
  const auto V = eigenvectors_.leftCols(rank_);
  return V * eigenvalues_.head(rank_).cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
}

Matrix PsdFactorization::pinv() const {
  const auto V = eigenvectors_.leftCols(rank_);
  return V * eigenvalues_.head(rank_).cwiseInverse().asDiagonal() * V.transpose();
}

Matrix PsdFactorization::range_projector() const {
  const auto V = eigenvectors_.leftCols(rank_);
  return V * V.transpose();
}

Matrix PsdFactorization::reconstruct() const { return factor_ * factor_.transpose(); }

double PsdFactorization::range_residual(const Vector& x) const {
  return (x - project(x)).norm() / std::max(1.0, x.norm());
}

bool PsdFactorization::in_range(const Vector& x, double tol) const {
  return range_residual(x) <= tol;
}

Matrix gramian(const Matrix& A, const Matrix& R, double t) {
  if (A.rows() != A.cols() || R.rows() != A.rows() || R.cols() != A.cols()) {
    throw std::invalid_argument("gramian: dimension mismatch");
  }
  const Eigen::Index d = A.rows();
  // The block exponential carries e^{-sA^T}, which swamps the result for long
  // horizons. Integrate a short step, then double: R_{2s} = R_s + T_s R_s T_s^T.
  const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  double s = t;
  int doublings = 0;
  while (s * norm > 1.0 && doublings < 64) {
    s *= 0.5;
    ++doublings;
  }
  Matrix block = Matrix::Zero(2 * d, 2 * d);
  block.topLeftCorner(d, d) = A;
  block.topRightCorner(d, d) = R;
  block.bottomRightCorner(d, d) = -A.transpose();
  const Matrix E = matrix_exponential(block, s);
  Matrix T = E.topLeftCorner(d, d);
  Matrix G = E.topRightCorner(d, d) * T.transpose();
  G = 0.5 * (G + G.transpose());
  for (int k = 0; k < doublings; ++k) {
    G += T * G * T.transpose();
    G = 0.5 * (G + G.transpose());
    T = T * T;
  }
  return G;
}

Matrix integrated_exponential(const Matrix& A, double t) {
  if (A.rows() != A.cols()) throw std::invalid_argument("integrated_exponential: non-square");
  const Eigen::Index d = A.rows();
  Matrix block = Matrix::Zero(2 * d, 2 * d);
  block.topLeftCorner(d, d) = A;
  block.topRightCorner(d, d) = Matrix::Identity(d, d);
  return matrix_exponential(block, t).topRightCorner(d, d);
}

SemigroupSnapshot semigroup_snapshot(const Matrix& A, const Matrix& R, const Vector& a,
                                     double t, double rank_tol) {
  if (!(t > 0.0)) throw std::invalid_argument("semigroup_snapshot: t must be > 0");
  if (A.rows() != A.cols()) throw std::invalid_argument("semigroup_snapshot: A not square");
  const Eigen::Index d = A.rows();
  if (R.rows() != d || R.cols() != d || a.size() != d) {
    throw std::invalid_argument("semigroup_snapshot: dimension mismatch");
  }
  require_psd(R, "semigroup_snapshot: R", rank_tol);

  SemigroupSnapshot snap;
  snap.t = t;
  snap.T = matrix_exponential(A, t);
  snap.gramian = gramian(A, R, t);

  // m_t from the (d+1)-block [[A, a], [0, 0]].
  Matrix block = Matrix::Zero(d + 1, d + 1);
  block.topLeftCorner(d, d) = A;
  block.topRightCorner(d, 1) = a;
  snap.offset = matrix_exponential(block, t).topRightCorner(d, 1);

  snap.gramian_factor = PsdFactorization(snap.gramian, rank_tol);
  return snap;
}

Matrix lyapunov_solve(const Matrix& A, const Matrix& R) {
  if (A.rows() != A.cols() || R.rows() != A.rows() || R.cols() != A.cols()) {
    throw std::invalid_argument("lyapunov_solve: dimension mismatch");
  }
  if (spectral_abscissa(A) >= 0.0) {
    throw std::domain_error("lyapunov_solve: spectral abscissa >= 0, no invariant measure in this truncation");
  }
  using Complex = std::complex<double>;
  using CMatrix = Eigen::MatrixXcd;
  const Eigen::Index d = A.rows();

  // A = U T U^*, T upper triangular. With Y = U^* X U and C = -U^* R U the
  // equation becomes T Y + Y T^* = C; column j only couples to columns k > j.
  Eigen::ComplexSchur<Matrix> schur(A);
  const CMatrix& U = schur.matrixU();
  const CMatrix& T = schur.matrixT();
  const CMatrix C = -(U.adjoint() * R.cast<Complex>() * U);

  CMatrix Y = CMatrix::Zero(d, d);
  for (Eigen::Index j = d - 1; j >= 0; --j) {
    Eigen::VectorXcd rhs = C.col(j);
    for (Eigen::Index k = j + 1; k < d; ++k) rhs -= std::conj(T(j, k)) * Y.col(k);
    CMatrix shifted = T;
    shifted.diagonal().array() += std::conj(T(j, j));
    Y.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  const Matrix X = (U * Y * U.adjoint()).real();
  return 0.5 * (X + X.transpose());
}

}  // namespace harnack
