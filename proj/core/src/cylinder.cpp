#include "diskfem/cylinder.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace diskfem {

namespace {
constexpr double kPi = std::numbers::pi;
}

int IntervalBasis::find_cell(double z) const {
  const int nc = num_cells();
  for (int c = 0; c < nc; ++c) {
    if (z <= breakpoints[c + 1] || c == nc - 1) return c;
  }
  return nc - 1;
}

namespace {

// Bubble b_k(xi) = (1 - xi^2) P_k^{(1,1)}(xi) and its xi-derivative.
void interval_bubble(int k, double xi, double& value, double& dxi) {
  double v, d;
  eval_jacobi_with_derivative(JacobiParams{1.0, 1.0}, k, xi, v, d);
  value = (1.0 - xi * xi) * v;
  dxi = -2.0 * xi * v + (1.0 - xi * xi) * d;
}

}  // namespace

Eigen::VectorXd IntervalBasis::eval_all(double z) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(size);
  const int nc = num_cells();
  // hats
  for (int h = 0; h < hats; ++h) {
    const double zm = breakpoints[h];
    const double z0 = breakpoints[h + 1];
    const double zp = breakpoints[h + 2];
    if (z >= zm && z <= z0) {
      out[h] = (z - zm) / (z0 - zm);
    } else if (z > z0 && z <= zp) {
      out[h] = (zp - z) / (zp - z0);
    }
  }
  const int c = find_cell(z);
  const double h = breakpoints[c + 1] - breakpoints[c];
  const double xi = 2.0 * (z - breakpoints[c]) / h - 1.0;
  for (int g = 0; g < bubble_groups; ++g) {
    double v, d;
    interval_bubble(g, xi, v, d);
    out[hats + static_cast<Eigen::Index>(g) * nc + c] = v;
  }
  return out;
}

double IntervalBasis::eval_p(int cell, int n, double z) const {
  if (z < breakpoints[cell] - 1e-14 || z > breakpoints[cell + 1] + 1e-14) return 0.0;
  const double h = breakpoints[cell + 1] - breakpoints[cell];
  const double xi = 2.0 * (z - breakpoints[cell]) / h - 1.0;
  // Orthonormal w.r.t. the cell's Lebesgue measure.
  return eval_jacobi(JacobiParams{0.0, 0.0}, n, xi) * std::sqrt(2.0 / h);
}

IntervalBasis build_interval_basis(const std::vector<double>& breakpoints, int Np) {
  if (breakpoints.size() < 2) throw ConfigError("interval mesh needs >= 2 breakpoints");
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) {
      throw ConfigError("interval breakpoints must be strictly increasing");
    }
  }
  if (Np < 2) throw ConfigError("interval basis requires Np >= 2");
  IntervalBasis ib;
  ib.breakpoints = Eigen::Map<const Eigen::VectorXd>(breakpoints.data(),
                                                     static_cast<Eigen::Index>(breakpoints.size()));
  ib.Np = Np;
  const int nc = ib.num_cells();
  ib.hats = nc - 1;
  ib.bubble_groups = Np - 1;
  ib.size = ib.hats + static_cast<Eigen::Index>(ib.bubble_groups) * nc;

  const int band = 2 * nc + 2;
  ib.mass = B3Arrowhead<double>(ib.size, ib.hats, band);
  ib.stiffness = B3Arrowhead<double>(ib.size, ib.hats, band);
  ib.gram = Eigen::MatrixXd::Zero(ib.size, ib.p_size());

  QuadRule leg = gauss_rule(JacobiParams{0.0, 0.0}, Np + 6);

  // Per cell: local functions = [hat at left edge, hat at right edge, bubbles],
  // where boundary hats are dropped.
  for (int c = 0; c < nc; ++c) {
    const double z0 = ib.breakpoints[c];
    const double z1 = ib.breakpoints[c + 1];
    const double h = z1 - z0;
    const int nloc = 2 + ib.bubble_groups;
    std::vector<Eigen::Index> gidx(nloc, -1);
    gidx[0] = (c == 0) ? -1 : (c - 1);  // hat at left edge
    gidx[1] = (c == nc - 1) ? -1 : c;   // hat at right edge
    for (int g = 0; g < ib.bubble_groups; ++g) {
      gidx[2 + g] = ib.hats + static_cast<Eigen::Index>(g) * nc + c;
    }
    Eigen::MatrixXd Mloc = Eigen::MatrixXd::Zero(nloc, nloc);
    Eigen::MatrixXd Aloc = Eigen::MatrixXd::Zero(nloc, nloc);
    Eigen::MatrixXd Gloc = Eigen::MatrixXd::Zero(nloc, ib.p_per_cell());
    for (Eigen::Index qp = 0; qp < leg.size(); ++qp) {
      const double xi = leg.nodes[qp];
      const double w = leg.weights[qp] * h / 2.0;  // dz = (h/2) dxi
      Eigen::VectorXd val(nloc), der(nloc);
      val[0] = 0.5 * (1.0 - xi);
      der[0] = -1.0 / h;
      val[1] = 0.5 * (1.0 + xi);
      der[1] = 1.0 / h;
      for (int g = 0; g < ib.bubble_groups; ++g) {
        double v, d;
        interval_bubble(g, xi, v, d);
        val[2 + g] = v;
        der[2 + g] = d * 2.0 / h;
      }
      Mloc += w * val * val.transpose();
      Aloc += w * der * der.transpose();
      Eigen::VectorXd pv(ib.p_per_cell());
      const double pscale = std::sqrt(2.0 / h);
      pv = pscale * eval_jacobi_all(JacobiParams{0.0, 0.0}, ib.Np, xi);
      Gloc += w * val * pv.transpose();
    }
    // Quadrature noise below 1e-15 of the diagonal scale is clipped so the
    // stored pattern matches the analytic sparsity.
    const double clip = 1e-15 * std::max(Mloc.cwiseAbs().maxCoeff(), Aloc.cwiseAbs().maxCoeff());
    for (int i = 0; i < nloc; ++i) {
      if (gidx[i] < 0) continue;
      for (int j = 0; j < nloc; ++j) {
        if (gidx[j] < 0) continue;
        if (std::abs(Mloc(i, j)) > clip) ib.mass.add_entry(gidx[i], gidx[j], Mloc(i, j));
        if (std::abs(Aloc(i, j)) > clip) ib.stiffness.add_entry(gidx[i], gidx[j], Aloc(i, j));
      }
      for (int n = 0; n <= ib.Np; ++n) {
        ib.gram(gidx[i], static_cast<Eigen::Index>(c) * ib.p_per_cell() + n) += Gloc(i, n);
      }
    }
  }
  return ib;
}

CylinderRhs analyze_rhs_cylinder(const std::function<double(double, double, double)>& f,
                                 const DofLayout& layout2d, const IntervalBasis& interval) {
  CylinderRhs out;
  out.layout2d = layout2d;
  const int n_modes = layout2d.num_modes();
  const int nh = layout2d.mesh.num_cells();
  const int nzc = interval.num_cells();
  const int Np = layout2d.Np;

  // Psi mode sizes and offsets.
  std::vector<std::vector<Eigen::Index>> psi_off(n_modes, std::vector<Eigen::Index>(nh, 0));
  std::vector<Eigen::Index> psi_size(n_modes, 0);
  for (int fm = 0; fm < n_modes; ++fm) {
    Eigen::Index s = 0;
    for (int c = 0; c < nh; ++c) {
      psi_off[fm][c] = s;
      s += layout2d.cell_basis(c, fm).ncols();
    }
    psi_size[fm] = s;
  }
  out.F.resize(n_modes);
  for (int fm = 0; fm < n_modes; ++fm) {
    out.F[fm] = Eigen::MatrixXd::Zero(psi_size[fm], interval.p_size());
  }

  const int ntheta = 2 * Np + 8;
  const int nrad = Np + 10;
  const int nz = interval.Np + 8;
  QuadRule leg_r = gauss_rule(JacobiParams{0.0, 0.0}, nrad);
  QuadRule leg_z = gauss_rule(JacobiParams{0.0, 0.0}, nz);

  const double dtheta = 2.0 * kPi / ntheta;
  Eigen::MatrixXd T(ntheta, n_modes);
  for (int k = 0; k < ntheta; ++k) {
    for (int fm = 0; fm < n_modes; ++fm) {
      const ModeIndex mode = mode_from_flat_index(fm);
      T(k, fm) =
          ((mode.j == 1) ? std::cos(mode.m * k * dtheta) : std::sin(mode.m * k * dtheta)) *
          dtheta;
    }
  }

  for (int c = 0; c < nh; ++c) {
    const double u0 = layout2d.mesh.inner_radius(c) * layout2d.mesh.inner_radius(c);
    const double u1 = layout2d.mesh.outer_radius(c) * layout2d.mesh.outer_radius(c);
    Eigen::VectorXd rs(nrad), rw(nrad);
    for (int i = 0; i < nrad; ++i) {
      const double u = 0.5 * (u0 + u1) + 0.5 * (u1 - u0) * leg_r.nodes[i];
      rs[i] = std::sqrt(u);
      rw[i] = 0.25 * (u1 - u0) * leg_r.weights[i];
    }
    for (int cz = 0; cz < nzc; ++cz) {
      const double z0 = interval.breakpoints[cz];
      const double z1 = interval.breakpoints[cz + 1];
      const double hz = z1 - z0;
      Eigen::VectorXd zs(nz), zw(nz);
      for (int l = 0; l < nz; ++l) {
        zs[l] = 0.5 * (z0 + z1) + 0.5 * hz * leg_z.nodes[l];
        zw[l] = 0.5 * hz * leg_z.weights[l];
      }
      // F3(i*nz + l, k) = f at (r_i, theta_k, z_l); theta transform by GEMM.
      Eigen::MatrixXd F3(nrad * nz, ntheta);
      for (int k = 0; k < ntheta; ++k) {
        const double ct = std::cos(k * dtheta), st = std::sin(k * dtheta);
        for (int i = 0; i < nrad; ++i) {
          for (int l = 0; l < nz; ++l) {
            F3(i * nz + l, k) = f(rs[i] * ct, rs[i] * st, zs[l]);
          }
        }
      }
      Eigen::MatrixXd G = F3 * T;  // (nrad*nz) x n_modes
      // P values on the z nodes.
      Eigen::MatrixXd Pv(nz, interval.p_per_cell());
      for (int l = 0; l < nz; ++l) {
        Pv.row(l) = (std::sqrt(2.0 / hz) *
                     eval_jacobi_all(JacobiParams{0.0, 0.0}, interval.Np,
                                     2.0 * (zs[l] - z0) / hz - 1.0))
                        .transpose();
      }
      for (int fm = 0; fm < n_modes; ++fm) {
        const CellModeBasis& cb = layout2d.cell_basis(c, fm);
        const double norm2 = cb.psi_norm2();
        Eigen::MatrixXd Zv(nrad, cb.ncols());
        for (int i = 0; i < nrad; ++i) Zv.row(i) = cb.z_radial_values(rs[i]).transpose();
        // coeff(n, np) = sum_{i,l} rw_i zw_l Zv(i,n) G(i*nz+l, fm) Pv(l, np) / norm2
        Eigen::MatrixXd Gm =
            Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                           Eigen::RowMajor>>(G.col(fm).data(), nrad, nz);
        Eigen::MatrixXd W = (rw.asDiagonal() * Gm) * zw.asDiagonal();  // nrad x nz
        Eigen::MatrixXd coeff = Zv.transpose() * W * Pv / norm2;       // ncols x p_per_cell
        out.F[fm].block(psi_off[fm][c], static_cast<Eigen::Index>(cz) * interval.p_per_cell(),
                        cb.ncols(), interval.p_per_cell()) = coeff;
      }
    }
  }
  return out;
}

std::vector<SylvesterProblem> assemble_sylvester(const GlobalOperators& ops2d,
                                                 const IntervalBasis& interval,
                                                 const CylinderRhs& rhs) {
  const DofLayout& layout = ops2d.layout;
  std::vector<SylvesterProblem> problems;
  problems.reserve(layout.num_modes());
  for (int fm = 0; fm < layout.num_modes(); ++fm) {
    SylvesterProblem p;
    p.mode = ModeIndex{layout.modes[fm].m, layout.modes[fm].j};
    p.Mphi = ops2d.mass.blocks[fm].matrix;
    p.K = combine<double, double>({1.0, 1.0}, {&ops2d.stiffness.blocks[fm].matrix,
                                               &ops2d.weighted_mass.blocks[fm].matrix});
    p.Mq = &interval.mass;
    p.Aq = &interval.stiffness;
    // H = (G_{Phi,Psi} F) G_{Q,P}^T assembled cell by cell with hat weights.
    const Eigen::Index nphi = layout.modes[fm].size;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nphi, interval.p_size());
    Eigen::Index psi_off = 0;
    for (int c = 0; c < layout.mesh.num_cells(); ++c) {
      const CellModeBasis& cb = layout.cell_basis(c, fm);
      const auto& refs = layout.cell_dofs[fm][c];
      const Eigen::MatrixXd bloc =
          cb.psi_norm2() * cb.raising().transpose() *
          rhs.F[fm].block(psi_off, 0, cb.ncols(), interval.p_size());
      for (int i = 0; i < cb.ncols(); ++i) {
        if (refs[i].global >= 0) {
          B.row(refs[i].global - layout.modes[fm].offset) += refs[i].weight * bloc.row(i);
        }
      }
      psi_off += cb.ncols();
    }
    p.H = B * interval.gram.transpose();
    problems.push_back(std::move(p));
  }
  return problems;
}

double power_iteration_extreme(const SymmetricOperator& op, bool largest, int max_iter,
                               double tol) {
  std::mt19937 rng(12345);
  std::normal_distribution<double> dist;
  Eigen::VectorXd v(op.dim);
  for (Eigen::Index i = 0; i < op.dim; ++i) v[i] = dist(rng);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = largest ? op.apply(v) : op.apply_inverse(v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    w /= nw;
    const double rq = w.dot(largest ? op.apply(w) : op.apply_inverse(w));
    if (it > 2 && std::abs(rq - lambda) <= tol * std::abs(rq)) {
      return largest ? rq : 1.0 / rq;
    }
    lambda = rq;
    v = w;
  }
  throw NumericalError("eigenvalue iteration did not converge within the step limit");
}

AdiBounds estimate_bounds(const SylvesterProblem& problem) {
  const auto L = reverse_cholesky(*problem.Aq);
  const auto Mq_f = reverse_cholesky(*problem.Mq);
  const auto V = reverse_cholesky(problem.K);
  const auto Mphi_f = reverse_cholesky(problem.Mphi);

  // S = U^{-1} M U^{-T} (spectrum of L^{-T} M L^{-1} with L = U^T);
  // S^{-1} = U^T M^{-1} U.
  SymmetricOperator qside{
      [&](const Eigen::VectorXd& x) {
        return L.solve_u(problem.Mq->apply(L.solve_ut(x)));
      },
      [&](const Eigen::VectorXd& x) {
        return L.apply_ut(Mq_f.solve(L.apply_u(x)));
      },
      problem.Mq->size()};
  SymmetricOperator vside{
      [&](const Eigen::VectorXd& x) {
        return V.solve_u(problem.Mphi.apply(V.solve_ut(x)));
      },
      [&](const Eigen::VectorXd& x) {
        return V.apply_ut(Mphi_f.solve(V.apply_u(x)));
      },
      problem.Mphi.size()};

  AdiBounds b;
  const double qmax = power_iteration_extreme(qside, true);
  const double qmin = power_iteration_extreme(qside, false);
  const double vmax = power_iteration_extreme(vside, true);
  const double vmin = power_iteration_extreme(vside, false);
  b.mu_a = 0.95 * qmin;
  b.mu_b = 1.05 * qmax;
  b.mu_c = -1.05 * vmax;
  b.mu_d = -0.95 * vmin;
  return b;
}

namespace {

// K and dn parameterized by the complementary modulus k' (accurate when the
// modulus k is within roundoff of 1, i.e. for large cross-ratios).
double elliptic_K_kp(double kp) {
  double a = 1.0, b = kp;
  for (int i = 0; i < 80 && std::abs(a - b) > 1e-17 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return kPi / (2.0 * a);
}

double elliptic_dn_kp(double u, double kp) {
  // Descending AGM (Abramowitz & Stegun 16.4).
  if (kp >= 1.0) return 1.0;  // k = 0
  std::vector<double> a_list, c_list;
  double a = 1.0, b = kp;
  a_list.push_back(a);
  c_list.push_back(std::sqrt(std::max(0.0, (1.0 - kp) * (1.0 + kp))));
  int n = 0;
  while (std::abs(a - b) > 1e-17 * a && n < 60) {
    const double an = 0.5 * (a + b);
    const double c = 0.5 * (a - b);
    b = std::sqrt(a * b);
    a = an;
    ++n;
    a_list.push_back(a);
    c_list.push_back(c);
  }
  double phi = std::ldexp(1.0, n) * a * u;
  for (int i = n; i >= 1; --i) {
    phi = 0.5 * (phi + std::asin(std::clamp(c_list[i] / a_list[i] * std::sin(phi), -1.0, 1.0)));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  return std::sqrt(cn * cn + kp * kp * sn * sn);
}

// Moebius map with M(s_i) = w_i for three point pairs, built by a small linear
// solve: M(s) = (A s + B)/(C s + 1).
struct Mobius {
  double A, B, C;
  double operator()(double s) const { return (A * s + B) / (C * s + 1.0); }
};

Mobius mobius_three_points(double s1, double s2, double s3, double w1, double w2, double w3) {
  Eigen::Matrix3d M;
  Eigen::Vector3d rhs;
  M << s1, 1.0, -w1 * s1, s2, 1.0, -w2 * s2, s3, 1.0, -w3 * s3;
  rhs << w1, w2, w3;
  const Eigen::Vector3d sol = M.fullPivLu().solve(rhs);
  return Mobius{sol[0], sol[1], sol[2]};
}

}  // namespace

double elliptic_K(double k) {
  return elliptic_K_kp(std::sqrt(std::max(0.0, (1.0 - k) * (1.0 + k))));
}

double elliptic_dn(double u, double k) {
  return elliptic_dn_kp(u, std::sqrt(std::max(0.0, (1.0 - k) * (1.0 + k))));
}

AdiPlan adi_shifts(const AdiBounds& bounds, double eps, bool geometric) {
  AdiPlan plan;
  plan.mu_a = bounds.mu_a;
  plan.mu_b = bounds.mu_b;
  plan.mu_c = bounds.mu_c;
  plan.mu_d = bounds.mu_d;
  plan.eps = eps;
  if (!(bounds.mu_a <= bounds.mu_b) || !(bounds.mu_c <= bounds.mu_d) ||
      !(bounds.mu_d < bounds.mu_a)) {
    throw NumericalError("ADI spectral intervals overlap or are empty");
  }
  const double a = bounds.mu_a, b = bounds.mu_b, c = bounds.mu_c, d = bounds.mu_d;
  plan.gamma = std::abs(c - a) * std::abs(d - b) / (std::abs(c - b) * std::abs(d - a));
  plan.lmax = static_cast<int>(
      std::ceil(std::log(16.0 * plan.gamma) * std::log(4.0 / eps) / (kPi * kPi)));
  plan.lmax = std::max(plan.lmax, 1);
  plan.p.resize(plan.lmax);
  plan.q.resize(plan.lmax);
  if (geometric) {
    // Geometric fallback: shifts sweep each interval logarithmically.
    for (int l = 0; l < plan.lmax; ++l) {
      const double s = (plan.lmax == 1) ? 0.5 : static_cast<double>(l) / (plan.lmax - 1);
      plan.p[l] = a * std::pow(b / a, s);
      plan.q[l] = -std::abs(d) * std::pow(std::abs(c) / std::abs(d), s);
    }
    return plan;
  }
  const double gamma = plan.gamma;
  const double alpha = -1.0 + 2.0 * gamma + 2.0 * std::sqrt(gamma * gamma - gamma);
  const double kp = 1.0 / alpha;
  const double K = elliptic_K_kp(kp);
  // T maps (a, b, c) -> (-alpha, -1, 1); the shifts pull -z and +z back.
  const Mobius Tinv = mobius_three_points(-alpha, -1.0, 1.0, a, b, c);
  for (int l = 1; l <= plan.lmax; ++l) {
    const double dn = elliptic_dn_kp((2.0 * l - 1.0) * K / (2.0 * plan.lmax), kp);
    const double z = alpha * dn;  // in [1, alpha]
    plan.p[l - 1] = Tinv(-z);
    plan.q[l - 1] = Tinv(+z);
  }
  for (int l = 0; l < plan.lmax; ++l) {
    if (!(plan.p[l] > 0.0) || !(plan.q[l] < 0.0)) {
      throw NumericalError("ADI shifts violated the sign conditions (bounds bug)");
    }
  }
  return plan;
}

namespace {

Eigen::MatrixXd solve_columns(const ReverseCholeskyFactor<double>& F, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd X(B.rows(), B.cols());
  for (Eigen::Index j = 0; j < B.cols(); ++j) X.col(j) = F.solve(B.col(j));
  return X;
}

Eigen::MatrixXd apply_columns(const B3Arrowhead<double>& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd X(B.rows(), B.cols());
  for (Eigen::Index j = 0; j < B.cols(); ++j) X.col(j) = A.apply(B.col(j));
  return X;
}

}  // namespace

Eigen::MatrixXd adi_solve(const SylvesterProblem& problem, const AdiPlan& plan) {
  const Eigen::Index nphi = problem.K.size();
  const Eigen::Index nq = problem.Mq->size();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(nphi, nq);

  std::map<double, ReverseCholeskyFactor<double>> qfactors;  // M^Q + p A^Q
  std::map<double, ReverseCholeskyFactor<double>> vfactors;  // M^Phi + |q| K

  for (int l = 0; l < plan.lmax; ++l) {
    const double p = plan.p[l];
    const double q = plan.q[l];
    if (!qfactors.count(p)) {
      qfactors.emplace(p, reverse_cholesky(combine<double, double>(
                              {1.0, p}, {problem.Mq, problem.Aq})));
    }
    if (!vfactors.count(q)) {
      vfactors.emplace(q, reverse_cholesky(combine<double, double>(
                              {1.0, -q}, {&problem.Mphi, &problem.K})));
    }
    // W_{l-1/2} = [H - (M^Phi - p K) W_{l-1}] (-M^Q - p A^Q)^{-1}
    Eigen::MatrixXd T1 = problem.H - apply_columns(problem.Mphi, W) +
                         p * apply_columns(problem.K, W);
    // (-M^Q - p A^Q) = -(M^Q + p A^Q); transpose-solve by symmetry.
    Eigen::MatrixXd Whalf = -solve_columns(qfactors.at(p), T1.transpose()).transpose();
    // W_l = (M^Phi - q K)^{-1} [H - W_{l-1/2} (-M^Q - q A^Q)]
    Eigen::MatrixXd T2 =
        problem.H + (apply_columns(*problem.Mq, Whalf.transpose()) +
                     q * apply_columns(*problem.Aq, Whalf.transpose()))
                        .transpose();
    W = solve_columns(vfactors.at(q), T2);
  }
  // U = W (A^Q)^{-1}
  const auto Af = reverse_cholesky(*problem.Aq);
  return solve_columns(Af, W.transpose()).transpose();
}

CylinderSolveReport solve_cylinder(const RadialMesh& mesh, const std::vector<double>& zbreaks,
                                   const LambdaSpec& lambda,
                                   const std::function<double(double, double, double)>& f,
                                   int Np, double eps, bool geometric_shifts) {
  GlobalOperators ops = assemble_global(mesh, Np, lambda, /*dirichlet=*/true);
  IntervalBasis interval = build_interval_basis(zbreaks, Np);
  CylinderRhs rhs = analyze_rhs_cylinder(f, ops.layout, interval);
  std::vector<SylvesterProblem> problems = assemble_sylvester(ops, interval, rhs);

  CylinderSolveReport report;
  report.field.layout2d = ops.layout;
  report.field.interval = interval;
  report.field.U.resize(problems.size());
  double lsum = 0.0;
  for (size_t i = 0; i < problems.size(); ++i) {
    if (problems[i].K.size() == 0) continue;
    const AdiBounds bounds = estimate_bounds(problems[i]);
    const AdiPlan plan = adi_shifts(bounds, eps, geometric_shifts);
    report.field.U[i] = adi_solve(problems[i], plan);
    lsum += plan.lmax;
    report.max_lmax = std::max(report.max_lmax, plan.lmax);
  }
  report.mean_lmax = lsum / static_cast<double>(problems.size());
  return report;
}

Eigen::VectorXd synthesize_cylinder_slice(const TensorField& field, double z,
                                          const std::vector<std::pair<double, double>>& xy) {
  const Eigen::VectorXd qv = field.interval.eval_all(z);
  CoefficientField slice;
  slice.layout = field.layout2d;
  slice.data = Eigen::VectorXd::Zero(field.layout2d.total);
  for (int fm = 0; fm < field.layout2d.num_modes(); ++fm) {
    const auto& ml = field.layout2d.modes[fm];
    if (ml.size == 0 || field.U[fm].size() == 0) continue;
    slice.data.segment(ml.offset, ml.size) = field.U[fm] * qv;
  }
  return synthesize(slice, xy);
}

}  // namespace diskfem
