#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <complex>
#include <ostream>

#include "diskfem/errors.hpp"

namespace diskfem {

/// Banded-Block-Banded arrowhead matrix: a dense border of `arrow` rows and
/// columns (the hat degrees of freedom) plus a banded tail.  Entries with
/// min(i,j) >= arrow and |i-j| > band are structurally zero.  All matrices in
/// this project are (complex-)symmetric, so the left border is stored as the
/// transpose of the top border; unsymmetric factors use their own storage.
template <typename Scalar>
class B3Arrowhead {
 public:
  B3Arrowhead() = default;
  B3Arrowhead(Eigen::Index n, int arrow, int band)
      : n_(n), arrow_(arrow), band_(band),
        border_(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(arrow, n)),
        bands_(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(2 * band + 1, n)) {}

  Eigen::Index size() const { return n_; }
  int arrow() const { return arrow_; }
  int band() const { return band_; }

  bool in_pattern(Eigen::Index i, Eigen::Index j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) return false;
    if (i < arrow_ || j < arrow_) return true;
    return std::abs(static_cast<long>(i - j)) <= band_;
  }

  Scalar coeff(Eigen::Index i, Eigen::Index j) const {
    if (i < arrow_) return border_(i, j);
    if (j < arrow_) return border_(j, i);  // symmetric mirror
    if (std::abs(static_cast<long>(i - j)) > band_) return Scalar(0);
    return bands_(band_ + i - j, j);
  }

  /// Symmetric add: writes (i,j) and implicitly (j,i) through the mirror.
  void add(Eigen::Index i, Eigen::Index j, Scalar v) {
    if (!in_pattern(i, j)) throw NumericalError("B3Arrowhead: write outside pattern");
    if (i < arrow_) {
      border_(i, j) += v;
      if (j < arrow_ && j != i) border_(j, i) += v;
      return;
    }
    if (j < arrow_) {
      border_(j, i) += v;
      return;
    }
    bands_(band_ + i - j, j) += v;
    if (i != j) bands_(band_ + j - i, i) += v;
  }

  /// Single-entry add for callers that fill both triangles of a symmetric
  /// matrix.  Positions (i >= arrow, j < arrow) share storage with their
  /// mirror (j, i), so writes there are skipped; the caller's mirrored write
  /// at (j, i) carries the value.
  void add_entry(Eigen::Index i, Eigen::Index j, Scalar v) {
    if (!in_pattern(i, j)) throw NumericalError("B3Arrowhead: write outside pattern");
    if (i < arrow_) {
      border_(i, j) += v;
    } else if (j >= arrow_) {
      bands_(band_ + i - j, j) += v;
    }
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> D =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n_, n_);
    for (Eigen::Index j = 0; j < n_; ++j) {
      for (Eigen::Index i = 0; i < n_; ++i) {
        if (in_pattern(i, j)) D(i, j) = coeff(i, j);
      }
    }
    return D;
  }

  Eigen::Vector<Scalar, Eigen::Dynamic> apply(
      const Eigen::Vector<Scalar, Eigen::Dynamic>& x) const {
    Eigen::Vector<Scalar, Eigen::Dynamic> y =
        Eigen::Vector<Scalar, Eigen::Dynamic>::Zero(n_);
    for (Eigen::Index i = 0; i < arrow_; ++i) y[i] = border_.row(i) * x;
    for (Eigen::Index i = arrow_; i < n_; ++i) {
      Scalar acc{};
      for (Eigen::Index j = 0; j < arrow_; ++j) acc += border_(j, i) * x[j];
      const Eigen::Index lo = std::max<Eigen::Index>(arrow_, i - band_);
      const Eigen::Index hi = std::min<Eigen::Index>(n_ - 1, i + band_);
      for (Eigen::Index j = lo; j <= hi; ++j) acc += bands_(band_ + i - j, j) * x[j];
      y[i] = acc;
    }
    return y;
  }

  /// Visit every pattern position of column j (rows ascending).
  template <typename Fn>
  void for_each_row_in_column(Eigen::Index j, Fn&& fn) const {
    if (j < arrow_) {
      for (Eigen::Index i = 0; i < n_; ++i) fn(i);
      return;
    }
    for (Eigen::Index i = 0; i < arrow_; ++i) fn(i);
    const Eigen::Index lo = std::max<Eigen::Index>(arrow_, j - band_);
    const Eigen::Index hi = std::min<Eigen::Index>(n_ - 1, j + band_);
    for (Eigen::Index i = lo; i <= hi; ++i) fn(i);
  }

  /// Number of stored-pattern entries with |value| > tol (structural audit).
  Eigen::Index count_nonzeros(double tol) const {
    Eigen::Index cnt = 0;
    for (Eigen::Index j = 0; j < n_; ++j) {
      for (Eigen::Index i = 0; i < n_; ++i) {
        if (in_pattern(i, j) && std::abs(coeff(i, j)) > tol) ++cnt;
      }
    }
    return cnt;
  }

  /// Coordinate-list text dump (row col value per line) for spy plots.
  void write_coo(std::ostream& os, double tol = 0.0) const {
    for (Eigen::Index j = 0; j < n_; ++j) {
      for (Eigen::Index i = 0; i < n_; ++i) {
        if (in_pattern(i, j) && std::abs(coeff(i, j)) > tol) {
          os << i << " " << j << " " << coeff(i, j) << "\n";
        }
      }
    }
  }

  double norm_estimate() const {
    double m = 0.0;
    for (Eigen::Index j = 0; j < n_; ++j) m = std::max(m, std::abs(coeff(j, j)));
    for (Eigen::Index i = 0; i < arrow_; ++i) {
      m = std::max(m, border_.row(i).cwiseAbs().maxCoeff());
    }
    if (bands_.size() > 0) m = std::max(m, bands_.cwiseAbs().maxCoeff());
    return m;
  }

 private:
  Eigen::Index n_ = 0;
  int arrow_ = 0;
  int band_ = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> border_;  // arrow x n
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> bands_;   // (2band+1) x n
};

/// Linear combination sum_k coeffs[k] * blocks[k] lifted to a common pattern.
template <typename Scalar, typename Real>
B3Arrowhead<Scalar> combine(const std::vector<Scalar>& coeffs,
                            const std::vector<const B3Arrowhead<Real>*>& blocks) {
  if (coeffs.empty() || coeffs.size() != blocks.size()) {
    throw std::invalid_argument("combine: mismatched coefficient/block lists");
  }
  const Eigen::Index n = blocks[0]->size();
  int arrow = 0, band = 0;
  for (const auto* b : blocks) {
    if (b->size() != n) throw std::invalid_argument("combine: dimension mismatch");
    arrow = std::max(arrow, b->arrow());
    band = std::max(band, b->band());
  }
  B3Arrowhead<Scalar> out(n, arrow, band);
  for (size_t k = 0; k < blocks.size(); ++k) {
    const auto& B = *blocks[k];
    for (Eigen::Index j = 0; j < n; ++j) {
      B.for_each_row_in_column(j, [&](Eigen::Index i) {
        const Real v = B.coeff(i, j);
        if (v != Real(0)) out.add_entry(i, j, coeffs[k] * v);
      });
    }
  }
  return out;
}

/// Reverse Cholesky factor: A = U U^T with U upper triangular sharing A's
/// sparsity pattern (elimination starts at the bottom-right corner).
template <typename Scalar>
struct ReverseCholeskyFactor {
  B3Arrowhead<Scalar> U;  // upper triangle stored in the arrowhead pattern

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense_upper() const {
    const Eigen::Index n = U.size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> D =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      U.for_each_row_in_column(j, [&](Eigen::Index i) {
        if (i <= j) D(i, j) = U.coeff(i, j);
      });
    }
    return D;
  }

  /// x = A^{-1} b via U z = b then U^T x = z.
  Eigen::Vector<Scalar, Eigen::Dynamic> solve(Eigen::Vector<Scalar, Eigen::Dynamic> b) const;
  /// y = U^{-T} x (lower-triangular solve with U^T).
  Eigen::Vector<Scalar, Eigen::Dynamic> solve_ut(Eigen::Vector<Scalar, Eigen::Dynamic> b) const;
  /// y = U^{-1} x.
  Eigen::Vector<Scalar, Eigen::Dynamic> solve_u(Eigen::Vector<Scalar, Eigen::Dynamic> b) const;
  /// y = U^T x.
  Eigen::Vector<Scalar, Eigen::Dynamic> apply_ut(const Eigen::Vector<Scalar, Eigen::Dynamic>& x) const;
  /// y = U x.
  Eigen::Vector<Scalar, Eigen::Dynamic> apply_u(const Eigen::Vector<Scalar, Eigen::Dynamic>& x) const;
};

/// Reverse (bottom-right first) Cholesky of an SPD arrowhead. Throws
/// NumericalError on a non-positive pivot.
ReverseCholeskyFactor<double> reverse_cholesky(const B3Arrowhead<double>& A);

/// UL factorization without pivoting: A = U L with U unit-upper and L lower
/// triangular, eliminating from the bottom-right. Pivots below
/// 1e-14 * max|A| abort with NumericalError.
template <typename Scalar>
struct ULFactors {
  B3Arrowhead<Scalar> U;   // unit upper
  B3Arrowhead<Scalar> Lt;  // L stored transposed (upper layout), L = D U^T

  Eigen::Vector<Scalar, Eigen::Dynamic> solve(Eigen::Vector<Scalar, Eigen::Dynamic> b) const;

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense_u() const {
    const Eigen::Index n = U.size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> D =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      U.for_each_row_in_column(j, [&](Eigen::Index i) {
        if (i <= j) D(i, j) = U.coeff(i, j);
      });
    }
    return D;
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense_l() const {
    const Eigen::Index n = Lt.size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> D =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      Lt.for_each_row_in_column(j, [&](Eigen::Index i) {
        if (i <= j) D(j, i) = Lt.coeff(i, j);
      });
    }
    return D;
  }
};

template <typename Scalar>
ULFactors<Scalar> ul_factorize(const B3Arrowhead<Scalar>& A);

extern template ULFactors<double> ul_factorize(const B3Arrowhead<double>&);
extern template ULFactors<std::complex<double>> ul_factorize(
    const B3Arrowhead<std::complex<double>>&);
extern template struct ReverseCholeskyFactor<double>;
extern template struct ULFactors<double>;
extern template struct ULFactors<std::complex<double>>;

/// General sparse LU (Eigen::SparseLU) for the mode-coupled anisotropic path.
class SparseLUSolver {
 public:
  explicit SparseLUSolver(const Eigen::SparseMatrix<double>& A);
  /// Solves and verifies the residual ||Ax - b|| <= 1e-9 ||b|| (+ abs floor).
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  Eigen::SparseMatrix<double> A_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

}  // namespace diskfem
