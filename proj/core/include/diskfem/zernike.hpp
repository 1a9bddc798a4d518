#pragma once

#include <Eigen/Dense>
#include <vector>

#include "diskfem/jacobi.hpp"
#include "diskfem/semiclassical.hpp"

namespace diskfem {

/// Fourier mode m >= 0 and sign j in {0,1} (j=1: cos, j=0: sin). m=0 forces j=1.
struct ModeIndex {
  int m = 0;
  int j = 1;
  void validate() const;
};

/// Position of a mode in the flat ordering (0,1),(1,0),(1,1),(2,0),(2,1),...
int mode_flat_index(const ModeIndex& mode);
ModeIndex mode_from_flat_index(int idx);

/// Zernike label: degree n with n >= m and n - m even.
struct ZernikeIndex {
  int n = 0;
  ModeIndex mode;
  void validate() const;
  int radial_index() const { return (n - mode.m) / 2; }
};

/// Annulus Omega_rho with the derived parameter t = (1 - rho^2)^{-1};
/// tau(r) = t(1 - r^2) maps [rho, 1] onto [0, 1].
struct AnnulusParams {
  double rho = 0.5;
  double t = 0.0;

  explicit AnnulusParams(double rho_in);
  double tau(double r) const { return t * (1.0 - r * r); }
};

/// pi_m = 2*pi if m = 0 else pi.
double pi_m(int m);

/// Harmonic polynomial Y_{m,j}(x,y) = r^m cos(m theta) (j=1) or r^m sin(m theta)
/// (j=0), computed as the real/imaginary part of (x+iy)^m.
double eval_harmonic(const ModeIndex& mode, double x, double y);

/// Generalized Zernike polynomial Z^{(a)}_{n,m,j} on the closed unit disk.
double eval_zernike(double a, const ZernikeIndex& idx, double x, double y);

/// Generalized Zernike annular polynomial Z^{rho,(a,b)}_{n,m,j} on the closed annulus.
double eval_zernike_annular(const AnnulusParams& params, double a, double b,
                            const ZernikeIndex& idx, double x, double y);

/// Laplacian matrix D_m: Delta[(1-r^2) Z^{(1)}_{m,j}] = Z^{(0)}_{m,j} D_m.
/// Built variationally (first derivatives + boundary line terms only);
/// diagonality is asserted by the caller's tests, all entries are returned.
Eigen::MatrixXd laplacian_disk(int m, int N);

/// Laplacian matrix D^rho_m: Delta[(1-r^2)(r^2-rho^2) Z^{rho,(1,1)}_{m,j}]
/// = Z^{rho,(0,0)}_{m,j} D^rho_m.  Tridiagonal (asserted in tests).
Eigen::MatrixXd laplacian_annulus(const AnnulusParams& params, int m, int N);

/// Same construction against caller-supplied bases (avoids rebuilding them
/// during assembly); q00 and q11 must carry at least N coefficients.
Eigen::MatrixXd laplacian_annulus_prebuilt(const SemiBasis& q00, const SemiBasis& q11,
                                           double rho, int m, int N);

/// r^2 multiplication matrix on a disk cell of radius rho:
/// r^2 Z^{K0,(a)} = Z^{K0,(a)} * (rho^2/2)(I + X_{(a,m)}).
Eigen::MatrixXd r2_matrix_disk(double a, int m, int N, double rho = 1.0);

/// r^2 multiplication matrix on an annulus cell (rho1, rho2):
/// r^2 Z^{K1,(a,b)} = Z^{K1,(a,b)} * rho2^2 (I - t^{-1} X_{t,(a,b,m)}).
Eigen::MatrixXd r2_matrix_annulus(double rho1, double rho2, double a, double b, int m, int N);

/// Block-structured x-Jacobi matrix X^{Omega_rho} for the reference annulus:
/// x (Z_{0,1} | Z_{1,0} | Z_{1,1} | ...) = (...) X^{Omega_rho}.  Mode blocks
/// couple m -> m +/- 1 with matching sign; the m=0 and (1,0) columns follow the
/// special single-sided rules.
struct XJacobiAnnulus {
  double t = 0.0;
  int max_mode = 0;    // modes 0..max_mode retained
  int block_size = 0;  // radial entries per mode block

  // raising[m] = N x N slice of R^{t,(0,0,m+1)}_{(0,0,m)}, m = 0..max_mode-1.
  std::vector<Eigen::MatrixXd> raising;

  int n_mode_blocks() const { return 2 * max_mode + 1; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(n_mode_blocks()) * block_size; }

  /// Block mapping column mode -> row mode; zero matrix when uncoupled.
  Eigen::MatrixXd block(const ModeIndex& row, const ModeIndex& col) const;
  bool coupled(const ModeIndex& row, const ModeIndex& col) const;
  Eigen::MatrixXd dense() const;
};

XJacobiAnnulus xjacobi_annulus(const AnnulusParams& params, int max_mode, int N);

/// Radial profile (value, d/dr) helpers used for variational assembly and the
/// analytic gradients of basis functions.
struct RadialValue {
  double value = 0.0;
  double dr = 0.0;
};

/// g(r) = r^m P_k^{(a,m)}(2 (r/rho)^2 - 1) on a disk cell of radius rho.
RadialValue zernike_radial_disk(double a, int m, int k, double r, double rho = 1.0);

/// g(r) = r^m Q_k^{t,(a,b,m)}(tau(r/rho2)) on an annulus cell (rho1, rho2);
/// the caller supplies the prebuilt radial basis.
RadialValue zernike_radial_annulus(const SemiBasis& basis, int m, int k, double r, double rho2);

}  // namespace diskfem
