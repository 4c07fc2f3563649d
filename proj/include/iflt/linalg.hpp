#pragma once

// Dense kernels shared by every other module: pseudo-inverse, PSD square
// root and Frobenius norms. All functions are pure.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "iflt/errors.hpp"

namespace iflt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Rank decision for pseudo-inverses. Singular values at or below
/// `cutoff(rows, cols) * sigma_max` are treated as zero.
struct SpectralTolerance {
  /// Relative cutoff; when unset it defaults to 1e-12 * max(rows, cols).
  std::optional<double> relative_cutoff;

  double cutoff(Index rows, Index cols) const {
    if (relative_cutoff) {
      if (!(*relative_cutoff > 0.0) || !std::isfinite(*relative_cutoff)) {
        throw InvalidInput("SpectralTolerance: relative_cutoff must be finite and > 0");
      }
      return *relative_cutoff;
    }
    return 1e-12 * static_cast<double>(std::max<Index>({rows, cols, Index{1}}));
  }
};

inline bool all_finite(const Matrix& a) { return a.allFinite(); }

inline void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw InvalidInput(std::string(what) + ": non-finite entries");
  }
}

/// Sum of squared entries.
inline double frob_norm_sq(const Matrix& a) { return a.squaredNorm(); }

/// Moore-Penrose pseudo-inverse via SVD.
inline Matrix pseudo_inverse(const Matrix& a, const SpectralTolerance& tol = {}) {
  require_finite(a, "pseudo_inverse");
  if (a.size() == 0) return Matrix::Zero(a.cols(), a.rows());

  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double threshold = tol.cutoff(a.rows(), a.cols()) * sigma_max;

  Vector inv = Vector::Zero(sigma.size());
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > threshold && sigma(i) > 0.0) inv(i) = 1.0 / sigma(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Symmetric PSD square root S with S*S = E (small negative eigenvalues clipped).
inline Matrix sym_sqrt(const Matrix& e) {
  require_finite(e, "sym_sqrt");
  if (e.rows() != e.cols()) throw InvalidInput("sym_sqrt: matrix is not square");
  if (e.size() == 0) return e;

  const double scale = e.norm();
  if ((e - e.transpose()).norm() > 1e-10 * scale) {
    throw InvalidInput("sym_sqrt: matrix is not symmetric");
  }
  const Matrix sym = 0.5 * (e + e.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) throw NumericalError("sym_sqrt: eigendecomposition failed");

  Vector lambda = eig.eigenvalues();
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -1e-8 * scale) {
      throw NotPSD("sym_sqrt: eigenvalue " + std::to_string(lambda(i)) + " is negative");
    }
    lambda(i) = std::sqrt(std::max(lambda(i), 0.0));
  }
  const Matrix& v = eig.eigenvectors();
  Matrix s = v * lambda.asDiagonal() * v.transpose();
  return 0.5 * (s + s.transpose());
}

/// Relative Frobenius residual ||a - b|| / max(||b||, floor).
inline double rel_diff(const Matrix& a, const Matrix& b, double floor = 1e-300) {
  return (a - b).norm() / std::max(b.norm(), floor);
}

}  // namespace iflt
