#include "diskfem/zernike.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace diskfem {

namespace {
constexpr double kPi = std::numbers::pi;
}

void ModeIndex::validate() const {
  if (m < 0) throw std::invalid_argument("Fourier mode must be >= 0");
  if (j != 0 && j != 1) throw std::invalid_argument("Fourier sign must be 0 or 1");
  if (m == 0 && j != 1) throw std::invalid_argument("mode m=0 carries only the cosine sign j=1");
}

int mode_flat_index(const ModeIndex& mode) {
  mode.validate();
  return (mode.m == 0) ? 0 : 2 * mode.m - 1 + mode.j;
}

ModeIndex mode_from_flat_index(int idx) {
  if (idx < 0) throw std::invalid_argument("mode index must be >= 0");
  if (idx == 0) return ModeIndex{0, 1};
  return ModeIndex{(idx + 1) / 2, (idx - 1) % 2};
}

void ZernikeIndex::validate() const {
  mode.validate();
  if (n < mode.m || (n - mode.m) % 2 != 0) {
    throw std::invalid_argument("Zernike index requires n >= m with n - m even");
  }
}

AnnulusParams::AnnulusParams(double rho_in) : rho(rho_in) {
  if (!(rho > 0.0) || !(rho < 1.0)) {
    throw std::invalid_argument("annulus inner radius must satisfy 0 < rho < 1");
  }
  t = 1.0 / (1.0 - rho * rho);
}

double pi_m(int m) { return (m == 0) ? 2.0 * kPi : kPi; }

double eval_harmonic(const ModeIndex& mode, double x, double y) {
  mode.validate();
  const std::complex<double> zm = std::pow(std::complex<double>(x, y), mode.m);
  return (mode.j == 1) ? zm.real() : zm.imag();
}

double eval_zernike(double a, const ZernikeIndex& idx, double x, double y) {
  idx.validate();
  const double r2 = x * x + y * y;
  if (r2 > 1.0 + 1e-12) throw std::invalid_argument("point outside the closed unit disk");
  const JacobiParams p{a, static_cast<double>(idx.mode.m)};
  return eval_harmonic(idx.mode, x, y) * eval_jacobi(p, idx.radial_index(), 2.0 * r2 - 1.0);
}

double eval_zernike_annular(const AnnulusParams& params, double a, double b,
                            const ZernikeIndex& idx, double x, double y) {
  idx.validate();
  const double r2 = x * x + y * y;
  if (r2 > 1.0 + 1e-12 || r2 < params.rho * params.rho - 1e-12) {
    throw std::invalid_argument("point outside the closed annulus");
  }
  SemiParams sp{params.t, a, b, static_cast<double>(idx.mode.m)};
  SemiBasis basis = build_semibasis(sp, idx.radial_index() + 1);
  return eval_harmonic(idx.mode, x, y) *
         eval_semi(basis, idx.radial_index(), params.t * (1.0 - r2));
}

RadialValue zernike_radial_disk(double a, int m, int k, double r, double rho) {
  const JacobiParams p{a, static_cast<double>(m)};
  const double s = r / rho;
  double v, d;
  eval_jacobi_with_derivative(p, k, 2.0 * s * s - 1.0, v, d);
  RadialValue out;
  const double sm = std::pow(s, m);
  out.value = sm * v;
  // d/dr [ s^m P(2s^2-1) ], s = r/rho
  const double ds = 1.0 / rho;
  const double dsm = (m == 0) ? 0.0 : m * std::pow(s, m - 1);
  out.dr = (dsm * v + sm * d * 4.0 * s) * ds;
  return out;
}

RadialValue zernike_radial_annulus(const SemiBasis& basis, int m, int k, double r, double rho2) {
  const double s = r / rho2;
  const double t = basis.params.t;
  double v, d;
  eval_semi_with_derivative(basis, k, t * (1.0 - s * s), v, d);
  RadialValue out;
  const double sm = std::pow(s, m);
  out.value = sm * v;
  const double ds = 1.0 / rho2;
  const double dsm = (m == 0) ? 0.0 : m * std::pow(s, m - 1);
  out.dr = (dsm * v + sm * d * (-2.0 * t * s)) * ds;
  return out;
}

namespace {

// Gauss-Legendre rule in u = r^2 on [u0, u1]; integrates f(r) r dr exactly for
// integrands polynomial in u.
QuadRule radial_rule(double u0, double u1, int points) {
  QuadRule base = gauss_rule(JacobiParams{0.0, 0.0}, points);
  QuadRule out;
  out.nodes.resize(points);
  out.weights.resize(points);
  for (int i = 0; i < points; ++i) {
    const double u = 0.5 * (u0 + u1) + 0.5 * (u1 - u0) * base.nodes[i];
    out.nodes[i] = std::sqrt(u);
    out.weights[i] = 0.25 * (u1 - u0) * base.weights[i];  // r dr = du/2
  }
  return out;
}

}  // namespace

Eigen::MatrixXd laplacian_disk(int m, int N) {
  if (m < 0 || N < 1) throw std::invalid_argument("laplacian_disk requires m >= 0, N >= 1");
  const JacobiParams p0{0.0, static_cast<double>(m)};
  const JacobiParams p1{1.0, static_cast<double>(m)};
  // <grad F, grad G> = pi_m (I_rr + m^2 I_tt) after the exact theta reduction;
  // the boundary line term restores <Z, Delta G> from the gradient form.
  const int pts = N + m / 2 + 8;
  QuadRule rule = radial_rule(0.0, 1.0, pts);
  Eigen::MatrixXd Irr = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd Itt = Eigen::MatrixXd::Zero(N, N);
  for (Eigen::Index q = 0; q < rule.size(); ++q) {
    const double r = rule.nodes[q];
    const double w = rule.weights[q];
    Eigen::VectorXd gv(N), gd(N), vv(N), vd(N);
    for (int k = 0; k < N; ++k) {
      RadialValue g = zernike_radial_disk(0.0, m, k, r);
      RadialValue z1 = zernike_radial_disk(1.0, m, k, r);
      gv[k] = g.value;
      gd[k] = g.dr;
      vv[k] = (1.0 - r * r) * z1.value;
      vd[k] = -2.0 * r * z1.value + (1.0 - r * r) * z1.dr;
    }
    Irr += w * gd * vd.transpose();
    if (m > 0) Itt += (w / (r * r)) * gv * vv.transpose();
  }
  // Boundary r=1: g_i(1) * d/dr[(1-r^2) Z^{(1)}_k](1) = -2 P_i(1) P_k(1).
  Eigen::VectorXd gb(N), vb(N);
  for (int k = 0; k < N; ++k) {
    gb[k] = eval_jacobi(p0, k, 1.0);
    vb[k] = -2.0 * eval_jacobi(p1, k, 1.0);
  }
  Eigen::MatrixXd D = gb * vb.transpose() - Irr - static_cast<double>(m) * m * Itt;
  return std::pow(2.0, m + 2) * D;
}

Eigen::MatrixXd laplacian_annulus(const AnnulusParams& params, int m, int N) {
  if (m < 0 || N < 1) throw std::invalid_argument("laplacian_annulus requires m >= 0, N >= 1");
  SemiBasis q00 = build_semibasis(SemiParams{params.t, 0.0, 0.0, static_cast<double>(m)}, N + 2);
  SemiBasis q11 = build_semibasis(SemiParams{params.t, 1.0, 1.0, static_cast<double>(m)}, N + 2);
  return laplacian_annulus_prebuilt(q00, q11, params.rho, m, N);
}

Eigen::MatrixXd laplacian_annulus_prebuilt(const SemiBasis& q00, const SemiBasis& q11,
                                           double rho, int m, int N) {
  if (m < 0 || N < 1) throw std::invalid_argument("laplacian_annulus requires m >= 0, N >= 1");
  const double t = q00.params.t;
  const int pts = N + m / 2 + 10;
  QuadRule rule = radial_rule(rho * rho, 1.0, pts);
  Eigen::MatrixXd Irr = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd Itt = Eigen::MatrixXd::Zero(N, N);
  for (Eigen::Index q = 0; q < rule.size(); ++q) {
    const double r = rule.nodes[q];
    const double w = rule.weights[q];
    const double wgt = (1.0 - r * r) * (r * r - rho * rho);
    const double dwgt = -2.0 * r * (r * r - rho * rho) + (1.0 - r * r) * 2.0 * r;
    Eigen::VectorXd gv(N), gd(N), vv(N), vd(N);
    for (int k = 0; k < N; ++k) {
      RadialValue g = zernike_radial_annulus(q00, m, k, r, 1.0);
      RadialValue z = zernike_radial_annulus(q11, m, k, r, 1.0);
      gv[k] = g.value;
      gd[k] = g.dr;
      vv[k] = wgt * z.value;
      vd[k] = dwgt * z.value + wgt * z.dr;
    }
    Irr += w * gd * vd.transpose();
    if (m > 0) Itt += (w / (r * r)) * gv * vv.transpose();
  }
  // Boundary terms at r=1 (outward) and r=rho (outward normal is -e_r).
  Eigen::VectorXd g1(N), v1(N), gr(N), vr(N);
  for (int k = 0; k < N; ++k) {
    g1[k] = zernike_radial_annulus(q00, m, k, 1.0, 1.0).value;
    v1[k] = -2.0 * (1.0 - rho * rho) * zernike_radial_annulus(q11, m, k, 1.0, 1.0).value;
    gr[k] = zernike_radial_annulus(q00, m, k, rho, 1.0).value;
    vr[k] = (1.0 - rho * rho) * 2.0 * rho * zernike_radial_annulus(q11, m, k, rho, 1.0).value;
  }
  Eigen::MatrixXd D = g1 * v1.transpose() - rho * gr * vr.transpose() - Irr -
                      static_cast<double>(m) * m * Itt;
  return 2.0 * std::pow(t, m + 1) * D;
}

Eigen::MatrixXd r2_matrix_disk(double a, int m, int N, double rho) {
  TridiagonalSym X = jacobi_matrix(JacobiParams{a, static_cast<double>(m)}, N);
  return 0.5 * rho * rho * (Eigen::MatrixXd::Identity(N, N) + X.dense());
}

Eigen::MatrixXd r2_matrix_annulus(double rho1, double rho2, double a, double b, int m, int N) {
  if (!(0.0 < rho1 && rho1 < rho2)) {
    throw std::invalid_argument("annulus cell requires 0 < rho1 < rho2");
  }
  AnnulusParams ref(rho1 / rho2);
  SemiBasis basis = build_semibasis(SemiParams{ref.t, a, b, static_cast<double>(m)}, N);
  return rho2 * rho2 *
         (Eigen::MatrixXd::Identity(N, N) - basis.recurrence.dense() / ref.t);
}

bool XJacobiAnnulus::coupled(const ModeIndex& row, const ModeIndex& col) const {
  if (col.m == 0) return row.m == 1 && row.j == 1;
  if (col.m == 1 && col.j == 0) return row.m == 2 && row.j == 0;
  if (row.j != col.j) return false;
  if (row.m == col.m - 1) return true;
  return row.m == col.m + 1 && row.m <= max_mode;
}

Eigen::MatrixXd XJacobiAnnulus::block(const ModeIndex& row, const ModeIndex& col) const {
  if (!coupled(row, col)) return Eigen::MatrixXd::Zero(block_size, block_size);
  if (col.m == 0) return raising[0];
  if (col.m == 1 && col.j == 0) return 0.5 * raising[1];
  if (row.m == col.m - 1) return (0.5 / t) * raising[col.m - 1].transpose();
  return 0.5 * raising[col.m];
}

Eigen::MatrixXd XJacobiAnnulus::dense() const {
  const Eigen::Index n = dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int ci = 0; ci < n_mode_blocks(); ++ci) {
    const ModeIndex col = mode_from_flat_index(ci);
    for (int ri = 0; ri < n_mode_blocks(); ++ri) {
      const ModeIndex row = mode_from_flat_index(ri);
      if (!coupled(row, col)) continue;
      out.block(static_cast<Eigen::Index>(ri) * block_size,
                static_cast<Eigen::Index>(ci) * block_size, block_size, block_size) =
          block(row, col);
    }
  }
  return out;
}

XJacobiAnnulus xjacobi_annulus(const AnnulusParams& params, int max_mode, int N) {
  if (max_mode < 0 || N < 1) {
    throw std::invalid_argument("xjacobi_annulus requires max_mode >= 0, N >= 1");
  }
  XJacobiAnnulus X;
  X.t = params.t;
  X.max_mode = max_mode;
  X.block_size = N;
  X.raising.resize(std::max(max_mode, 1));
  for (int m = 0; m < std::max(max_mode, 1); ++m) {
    Eigen::MatrixXd Rc =
        raising_c(SemiParams{params.t, 0.0, 0.0, static_cast<double>(m)}, N + 2);
    X.raising[m] = Rc.topLeftCorner(N, N);
  }
  return X;
}

}  // namespace diskfem
