#pragma once

#include <Eigen/Dense>

#include "diskfem/jacobi.hpp"

namespace diskfem {

/// Parameters of the semiclassical Jacobi weight x^a (1-x)^b (t-x)^c on (0,1).
struct SemiParams {
  double t = 2.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  void validate() const;
};

/// Orthonormal semiclassical Jacobi family Q^{t,(a,b,c)} carried as the
/// truncation of its Jacobi matrix X_{t,(a,b,c)}.
struct SemiBasis {
  SemiParams params;
  TridiagonalSym recurrence;
  double mu0 = 0.0;  // total mass q_{t,(a,b,c)}

  int size() const { return static_cast<int>(recurrence.size()); }
};

/// First n recurrence coefficients by the Stieltjes procedure over a
/// Gauss-Jacobi rule reweighted by (t-x)^c.  The rule has 2n + ceil(|c|) + 8
/// points; orthonormality is self-checked against a doubled-order rule and the
/// construction retried once at doubled order before failing.
SemiBasis build_semibasis(const SemiParams& params, int n);

/// Q^{t,(a,b,c)}_n(x) by forward recurrence.
double eval_semi(const SemiBasis& basis, int degree, double x);
void eval_semi_with_derivative(const SemiBasis& basis, int degree, double x,
                               double& value, double& derivative);
Eigen::VectorXd eval_semi_all(const SemiBasis& basis, int nmax, double x);

/// Gauss rule for the semiclassical measure itself (Golub-Welsch on the
/// Stieltjes recurrence). Exact for polynomials of degree <= 2*size-1 against
/// x^a (1-x)^b (t-x)^c.
QuadRule semi_gauss_rule(const SemiBasis& basis);

/// Rule from the leading npoints x npoints truncation of the recurrence.
QuadRule semi_gauss_rule(const SemiBasis& basis, int npoints);

/// R^{t,(0,0,m)}_{ab,(1,1,m)} with x(1-x) Q^{t,(1,1,m)} = Q^{t,(0,0,m)} R.
/// Lower triangular, lower bandwidth two.
Eigen::MatrixXd raising_ab(double t, int m, int n);

/// Same connection from prebuilt bases (q00 also supplies the Gauss rule, so
/// it must carry at least n + 2 coefficients).
Eigen::MatrixXd raising_ab_from(const SemiBasis& q00, const SemiBasis& q11, int n);

/// R^{t,(0,0,m)}_{a,(1,0,m)} with x Q^{t,(1,0,m)} = Q^{t,(0,0,m)} R. Lower bidiagonal.
Eigen::MatrixXd raising_a(double t, int m, int n);

/// R^{t,(0,0,m)}_{b,(0,1,m)} with (1-x) Q^{t,(0,1,m)} = Q^{t,(0,0,m)} R. Lower bidiagonal.
Eigen::MatrixXd raising_b(double t, int m, int n);

/// R^{t,(a,b,c+1)}_{(a,b,c)} with Q^{t,(a,b,c)} = Q^{t,(a,b,c+1)} R.  The band
/// structure is measured in tests (upper bidiagonal in this convention), not
/// assumed here: all n x n entries are computed.
Eigen::MatrixXd raising_c(const SemiParams& params, int n);

}  // namespace diskfem
