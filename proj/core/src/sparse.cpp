#include "diskfem/sparse.hpp"

#include <cmath>
#include <vector>

namespace diskfem {

namespace {

// Pattern positions strictly above the diagonal in column j.
template <typename Scalar>
std::vector<Eigen::Index> column_pattern_above(const B3Arrowhead<Scalar>& A, Eigen::Index j) {
  std::vector<Eigen::Index> rows;
  A.for_each_row_in_column(j, [&](Eigen::Index i) {
    if (i < j) rows.push_back(i);
  });
  return rows;
}

}  // namespace

ReverseCholeskyFactor<double> reverse_cholesky(const B3Arrowhead<double>& A) {
  B3Arrowhead<double> C = A;
  const Eigen::Index n = C.size();
  ReverseCholeskyFactor<double> out;
  out.U = B3Arrowhead<double>(n, C.arrow(), C.band());
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    const double d = C.coeff(j, j);
    if (!(d > 0.0)) {
      throw NumericalError("reverse Cholesky: non-positive pivot at index " + std::to_string(j) +
                           " (matrix not positive definite)");
    }
    const double s = std::sqrt(d);
    out.U.add_entry(j, j, s);
    const auto rows = column_pattern_above(C, j);
    std::vector<double> u(rows.size());
    for (size_t k = 0; k < rows.size(); ++k) {
      u[k] = C.coeff(rows[k], j) / s;
      out.U.add_entry(rows[k], j, u[k]);
    }
    for (size_t k1 = 0; k1 < rows.size(); ++k1) {
      for (size_t k2 = k1; k2 < rows.size(); ++k2) {
        C.add(rows[k1], rows[k2], -u[k1] * u[k2]);
      }
    }
  }
  return out;
}

template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> ReverseCholeskyFactor<Scalar>::solve_u(
    Eigen::Vector<Scalar, Eigen::Dynamic> b) const {
  const Eigen::Index n = U.size();
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    b[j] /= U.coeff(j, j);
    const Scalar bj = b[j];
    U.for_each_row_in_column(j, [&](Eigen::Index i) {
      if (i < j) b[i] -= U.coeff(i, j) * bj;
    });
  }
  return b;
}

template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> ReverseCholeskyFactor<Scalar>::solve_ut(
    Eigen::Vector<Scalar, Eigen::Dynamic> b) const {
  const Eigen::Index n = U.size();
  // U^T is lower triangular; forward substitution driven by the rows of U.
  for (Eigen::Index j = 0; j < n; ++j) {
    // subtract contributions of x[i] for i < j: (U^T)(j,i) = U(i,j)
    Scalar acc = b[j];
    U.for_each_row_in_column(j, [&](Eigen::Index i) {
      if (i < j) acc -= U.coeff(i, j) * b[i];
    });
    b[j] = acc / U.coeff(j, j);
  }
  return b;
}

template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> ReverseCholeskyFactor<Scalar>::solve(
    Eigen::Vector<Scalar, Eigen::Dynamic> b) const {
  return solve_ut(solve_u(std::move(b)));
}

template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> ReverseCholeskyFactor<Scalar>::apply_u(
    const Eigen::Vector<Scalar, Eigen::Dynamic>& x) const {
  const Eigen::Index n = U.size();
  Eigen::Vector<Scalar, Eigen::Dynamic> y = Eigen::Vector<Scalar, Eigen::Dynamic>::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    U.for_each_row_in_column(j, [&](Eigen::Index i) {
      if (i <= j) y[i] += U.coeff(i, j) * x[j];
    });
  }
  return y;
}

template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> ReverseCholeskyFactor<Scalar>::apply_ut(
    const Eigen::Vector<Scalar, Eigen::Dynamic>& x) const {
  const Eigen::Index n = U.size();
  Eigen::Vector<Scalar, Eigen::Dynamic> y = Eigen::Vector<Scalar, Eigen::Dynamic>::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    U.for_each_row_in_column(j, [&](Eigen::Index i) {
      if (i <= j) y[j] += U.coeff(i, j) * x[i];
    });
  }
  return y;
}

template <typename Scalar>
ULFactors<Scalar> ul_factorize(const B3Arrowhead<Scalar>& A) {
  B3Arrowhead<Scalar> C = A;
  const Eigen::Index n = C.size();
  const double scale = C.norm_estimate();
  ULFactors<Scalar> out;
  out.U = B3Arrowhead<Scalar>(n, C.arrow(), C.band());
  out.Lt = B3Arrowhead<Scalar>(n, C.arrow(), C.band());
  // Bottom-up elimination of the (complex-)symmetric matrix: A = U D U^T with
  // U unit upper, so A = U L with L = D U^T.
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    const Scalar p = C.coeff(j, j);
    if (std::abs(p) < 1e-14 * scale) {
      throw NumericalError("UL factorization: pivot magnitude " + std::to_string(std::abs(p)) +
                           " below 1e-14 * |A| at index " + std::to_string(j) +
                           " (no pivoting performed)");
    }
    out.U.add_entry(j, j, Scalar(1));
    out.Lt.add_entry(j, j, p);
    const auto rows = column_pattern_above(C, j);
    std::vector<Scalar> f(rows.size()), c(rows.size());
    for (size_t k = 0; k < rows.size(); ++k) {
      c[k] = C.coeff(rows[k], j);
      f[k] = c[k] / p;
      out.U.add_entry(rows[k], j, f[k]);
      out.Lt.add_entry(rows[k], j, c[k]);  // L(j, i) = c_i stored at (i, j)
    }
    for (size_t k1 = 0; k1 < rows.size(); ++k1) {
      for (size_t k2 = k1; k2 < rows.size(); ++k2) {
        C.add(rows[k1], rows[k2], -f[k1] * c[k2]);
      }
    }
  }
  return out;
}

template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> ULFactors<Scalar>::solve(
    Eigen::Vector<Scalar, Eigen::Dynamic> b) const {
  const Eigen::Index n = U.size();
  // w = U^{-1} b (unit upper, eliminate from the bottom).
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    const Scalar bj = b[j];
    U.for_each_row_in_column(j, [&](Eigen::Index i) {
      if (i < j) b[i] -= U.coeff(i, j) * bj;
    });
  }
  // x = L^{-1} w; column j of L is row j of the transposed storage.
  for (Eigen::Index j = 0; j < n; ++j) {
    b[j] /= Lt.coeff(j, j);
    const Scalar xj = b[j];
    Lt.for_each_row_in_column(j, [&](Eigen::Index i) {
      if (i > j) {
        const Scalar lij = Lt.coeff(j, i);  // = L(i, j)
        if (lij != Scalar(0)) b[i] -= lij * xj;
      }
    });
  }
  return b;
}

template struct ReverseCholeskyFactor<double>;
template ULFactors<double> ul_factorize(const B3Arrowhead<double>&);
template ULFactors<std::complex<double>> ul_factorize(const B3Arrowhead<std::complex<double>>&);
template struct ULFactors<double>;
template struct ULFactors<std::complex<double>>;

SparseLUSolver::SparseLUSolver(const Eigen::SparseMatrix<double>& A) : A_(A) {
  A_.makeCompressed();
  lu_.compute(A_);
  if (lu_.info() != Eigen::Success) {
    throw NumericalError("sparse LU factorization failed (numerically singular matrix)");
  }
}

Eigen::VectorXd SparseLUSolver::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x = lu_.solve(b);
  const double resid = (A_ * x - b).norm();
  const double tol = 1e-9 * std::max(b.norm(), 1e-30);
  if (resid > tol) {
    throw NumericalError("sparse LU solve residual " + std::to_string(resid) +
                         " exceeds tolerance");
  }
  return x;
}

}  // namespace diskfem
