#pragma once

#include <Eigen/Dense>
#include <functional>

namespace diskfem {

/// Parameters (a,b) of the Jacobi weight (1-x)^a (1+x)^b on (-1,1).
struct JacobiParams {
  double a = 0.0;
  double b = 0.0;
  void validate() const;
};

/// Symmetric tridiagonal matrix stored as diagonal + offdiagonal.
struct TridiagonalSym {
  Eigen::VectorXd diagonal;     // length n
  Eigen::VectorXd offdiagonal;  // length n-1

  Eigen::Index size() const { return diagonal.size(); }
  Eigen::MatrixXd dense() const;
};

/// Gauss quadrature rule: strictly positive weights, nodes inside the support.
struct QuadRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return nodes.size(); }
  double integrate(const std::function<double(double)>& f) const;
};

/// Coefficients of sum lambda_n T_n scaled to [lo, hi].
struct ChebCoeffs {
  double lo = -1.0;
  double hi = 1.0;
  Eigen::VectorXd coeffs;
};

/// n x n truncation of the Jacobi matrix X_{(a,b)} of the orthonormal family,
/// with x P(x) = P(x) X entrywise.  Recurrence coefficients from the classical
/// closed forms.
TridiagonalSym jacobi_matrix(const JacobiParams& params, int n);

/// Orthonormal P^{(a,b)}_n(x) by forward three-term recurrence.
double eval_jacobi(const JacobiParams& params, int degree, double x);

/// Value and x-derivative in one pass (the derivative satisfies the
/// differentiated recurrence).
void eval_jacobi_with_derivative(const JacobiParams& params, int degree, double x,
                                 double& value, double& derivative);

/// Values P_0..P_{nmax}(x) of the orthonormal family.
Eigen::VectorXd eval_jacobi_all(const JacobiParams& params, int nmax, double x);

/// Golub-Welsch rule for the weight (1-x)^a (1+x)^b; exact for degree <= 2n-1.
QuadRule gauss_rule(const JacobiParams& params, int n);

/// Rule derived from an arbitrary orthonormal recurrence with total mass mu0.
QuadRule gauss_rule_from_recurrence(const TridiagonalSym& recurrence, double mu0);

/// p_{(a,b)} = int_{-1}^{1} (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1).
double normalization_p(const JacobiParams& params);

/// q_{t,(a,b,c)} = int_0^1 x^a (1-x)^b (t-x)^c dx, evaluated through the Gauss
/// hypergeometric series when it converges quickly and by quadrature otherwise.
double normalization_q(double t, double a, double b, double c);

/// Which evaluation path normalization_q took for the given arguments.
enum class QNormPath { HypergeometricSeries, Quadrature };
QNormPath normalization_q_path(double t, double a, double b, double c);

namespace detail {
/// Direct series; sets ok=false if 500 terms do not converge.
double normalization_q_series(double t, double a, double b, double c, bool& ok);
/// Gauss-Jacobi quadrature of x^a (1-x)^b (t-x)^c over (0,1).
double normalization_q_quadrature(double t, double a, double b, double c);
/// Analytic moment int_{-1}^1 x^k (1-x)^a (1+x)^b dx as a finite Beta sum.
double jacobi_weight_moment(const JacobiParams& params, int k);
}  // namespace detail

/// Raising matrix R^{(0,m)}_{a,(1,m)} with (1-x) P^{(1,m)}(x) = P^{(0,m)}(x) R.
/// Returned as a dense n x n matrix whose only nonzeros sit on the diagonal and
/// first subdiagonal (lower bidiagonal); entries are quadrature connection
/// coefficients.
Eigen::MatrixXd raising_jacobi_a(int m, int n);

/// Chebyshev interpolation of f at N+1 second-kind points on [lo,hi],
/// plain O(N^2) cosine sums.
ChebCoeffs cheb_expand(const std::function<double(double)>& f, double lo, double hi, int N);

/// Clenshaw evaluation of sum lambda_n T^{[lo,hi]}_n(J) for a symmetric matrix
/// argument.  The caller guarantees the spectrum of J lies inside [lo,hi];
/// violating that produces an inaccurate (possibly wildly wrong) result since
/// scaled Chebyshev polynomials grow exponentially off the interval.
Eigen::MatrixXd clenshaw_matrix(const ChebCoeffs& coeffs, const Eigen::MatrixXd& J);

}  // namespace diskfem
