#include "diskfem/femspace.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace diskfem {

namespace {
constexpr double kPi = std::numbers::pi;
}

double RadialMesh::ratio() const {
  double r = 1.0;
  for (int k = 1; k + 1 < static_cast<int>(breakpoints.size()); ++k) {
    r = std::min(r, breakpoints[k] / breakpoints[k + 1]);
  }
  return r;
}

std::optional<WarningRecord> RadialMesh::conditioning_warning(int Np) const {
  const double r = ratio();
  if (std::pow(r, Np) < 1e-8) {
    return WarningRecord{
        "conditioning",
        "ratio(T_h)^Np = " + std::to_string(std::pow(r, Np)) +
            " < 1e-8; hat continuity factors may degrade the per-mode conditioning"};
  }
  return std::nullopt;
}

int RadialMesh::find_cell(double r) const {
  const int nh = num_cells();
  for (int c = 0; c < nh; ++c) {
    if (r <= breakpoints[c + 1] || c == nh - 1) return c;
  }
  return nh - 1;
}

RadialMesh build_mesh(const std::vector<double>& breakpoints) {
  if (breakpoints.size() < 2) throw ConfigError("mesh needs at least two breakpoints");
  for (size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    if (!(breakpoints[k] < breakpoints[k + 1])) {
      throw ConfigError("mesh breakpoints must be strictly increasing");
    }
  }
  if (breakpoints.front() < 0.0) throw ConfigError("mesh breakpoints must be nonnegative");
  RadialMesh mesh;
  mesh.breakpoints = Eigen::Map<const Eigen::VectorXd>(breakpoints.data(),
                                                       static_cast<Eigen::Index>(breakpoints.size()));
  return mesh;
}

double hat_kappa(double rho1, double rho2, int m) {
  const double s = rho1 / rho2;
  return (1.0 - s * s) * std::pow(s, m);
}

double hat_gamma(double rho1, double rho2, double rho3, int m) {
  const double s23 = rho2 / rho3;
  const double s12 = rho1 / rho2;
  return (1.0 - s23 * s23) * std::pow(s23, m) / (1.0 - s12 * s12);
}

HatRaisingColumns hat_raising_columns(double t, int m) {
  // <Q^{(0,0,m)}_i, x Q^{(1,0,m)}_0> and <Q^{(0,0,m)}_i, (1-x) Q^{(0,1,m)}_0>
  // against (t-x)^m, i = 0,1.
  SemiParams base{t, 0.0, 0.0, static_cast<double>(m)};
  SemiBasis q00 = build_semibasis(base, 6);
  SemiParams pa{t, 1.0, 0.0, static_cast<double>(m)};
  SemiParams pb{t, 0.0, 1.0, static_cast<double>(m)};
  SemiBasis q10 = build_semibasis(pa, 1);
  SemiBasis q01 = build_semibasis(pb, 1);
  QuadRule rule = semi_gauss_rule(q00, 6);
  HatRaisingColumns out{0.0, 0.0, 0.0, 0.0};
  for (Eigen::Index q = 0; q < rule.size(); ++q) {
    const double x = rule.nodes[q];
    const double w = rule.weights[q];
    const Eigen::VectorXd v = eval_semi_all(q00, 1, x);
    const double qa = eval_semi(q10, 0, x);
    const double qb = eval_semi(q01, 0, x);
    out.r11 += w * v[0] * x * qa;
    out.r21 += w * v[1] * x * qa;
    out.r12 += w * v[0] * (1.0 - x) * qb;
    out.r22 += w * v[1] * (1.0 - x) * qb;
  }
  return out;
}

Eigen::MatrixXd raising_operator_disk(int m, int N) {
  if (N < 1) throw std::invalid_argument("raising_operator_disk requires N >= 1");
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(N, N);
  R(0, 0) = 1.0;
  if (N > 1) {
    Eigen::MatrixXd Ra = raising_jacobi_a(m, N);
    R.rightCols(N - 1) = 0.5 * Ra.leftCols(N - 1);
  }
  return R;
}

Eigen::MatrixXd raising_operator_annulus(const AnnulusParams& params, int m, int N) {
  if (N < 2) throw std::invalid_argument("raising_operator_annulus requires N >= 2");
  const double t = params.t;
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(N, N);
  const HatRaisingColumns cols = hat_raising_columns(t, m);
  R(0, 0) = cols.r11 / t;
  R(1, 0) = cols.r21 / t;
  R(0, 1) = cols.r12 / t;
  R(1, 1) = cols.r22 / t;
  if (N > 2) {
    Eigen::MatrixXd Rab = raising_ab(t, m, N);
    R.rightCols(N - 2) = Rab.leftCols(N - 2) / (t * t);
  }
  return R;
}

CellModeBasis::CellModeBasis(const CellGeometry& geom, int m, int ncols)
    : geom_(geom), m_(m), ncols_(ncols) {
  if (ncols_ < num_hats()) throw std::invalid_argument("cell basis needs >= one column per hat");
  if (geom_.is_disk) {
    raising_ = raising_operator_disk(m_, ncols_);
    return;
  }
  const double sigma = geom_.sigma();
  t_ = 1.0 / (1.0 - sigma * sigma);
  const double md = static_cast<double>(m_);
  q00_ = build_semibasis(SemiParams{t_, 0.0, 0.0, md}, ncols_ + 4);
  q11_ = build_semibasis(SemiParams{t_, 1.0, 1.0, md}, std::max(ncols_ - 1, 1));
  q10_ = build_semibasis(SemiParams{t_, 1.0, 0.0, md}, 1);
  q01_ = build_semibasis(SemiParams{t_, 0.0, 1.0, md}, 1);

  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(ncols_, ncols_);
  // First two columns from the weighted first columns of R_a and R_b.
  QuadRule rule = semi_gauss_rule(q00_, std::min<int>(q00_.size(), 6));
  double r11 = 0, r21 = 0, r12 = 0, r22 = 0;
  for (Eigen::Index q = 0; q < rule.size(); ++q) {
    const double x = rule.nodes[q];
    const double w = rule.weights[q];
    const Eigen::VectorXd v = eval_semi_all(q00_, 1, x);
    const double qa = eval_semi(q10_, 0, x);
    const double qb = eval_semi(q01_, 0, x);
    r11 += w * v[0] * x * qa;
    r21 += w * v[1] * x * qa;
    r12 += w * v[0] * (1.0 - x) * qb;
    r22 += w * v[1] * (1.0 - x) * qb;
  }
  R(0, 0) = r11 / t_;
  R(1, 0) = r21 / t_;
  R(0, 1) = r12 / t_;
  R(1, 1) = r22 / t_;
  if (ncols_ > 2) {
    Eigen::MatrixXd Rab = raising_ab_from(q00_, q11_, ncols_ - 1);
    R.rightCols(ncols_ - 2) = Rab.leftCols(ncols_ - 2) / (t_ * t_);
  }
  raising_ = R;
}

RadialValue CellModeBasis::z_radial(int k, double r) const {
  if (geom_.is_disk) return zernike_radial_disk(0.0, m_, k, r, geom_.r1);
  return zernike_radial_annulus(q00_, m_, k, r, geom_.r1);
}

Eigen::VectorXd CellModeBasis::z_radial_values(double r) const {
  const double s = r / geom_.r1;
  const double sm = std::pow(s, m_);
  if (geom_.is_disk) {
    return sm * eval_jacobi_all(JacobiParams{0.0, static_cast<double>(m_)}, ncols_ - 1,
                                2.0 * s * s - 1.0);
  }
  return sm * eval_semi_all(q00_, ncols_ - 1, t_ * (1.0 - s * s));
}

RadialValue CellModeBasis::local_radial(int loc, double r) const {
  const double s = r / geom_.r1;
  if (geom_.is_disk) {
    if (loc == 0) return zernike_radial_disk(0.0, m_, 0, r, geom_.r1);
    const RadialValue z = zernike_radial_disk(1.0, m_, loc - 1, r, geom_.r1);
    const double w = 1.0 - s * s;
    return RadialValue{w * z.value, -2.0 * s / geom_.r1 * z.value + w * z.dr};
  }
  const double sig = geom_.sigma();
  if (loc == 0) {
    const RadialValue z = zernike_radial_annulus(q10_, m_, 0, r, geom_.r1);
    const double w = 1.0 - s * s;
    return RadialValue{w * z.value, -2.0 * s / geom_.r1 * z.value + w * z.dr};
  }
  if (loc == 1) {
    const RadialValue z = zernike_radial_annulus(q01_, m_, 0, r, geom_.r1);
    const double w = s * s - sig * sig;
    return RadialValue{w * z.value, 2.0 * s / geom_.r1 * z.value + w * z.dr};
  }
  const RadialValue z = zernike_radial_annulus(q11_, m_, loc - 2, r, geom_.r1);
  const double w = (1.0 - s * s) * (s * s - sig * sig);
  const double dw = (-2.0 * s * (s * s - sig * sig) + (1.0 - s * s) * 2.0 * s) / geom_.r1;
  return RadialValue{w * z.value, dw * z.value + w * z.dr};
}

double CellModeBasis::hat_in_edge_value() const {
  return local_radial(0, geom_.r0).value;
}

double CellModeBasis::hat_out_edge_value() const {
  return local_radial(geom_.is_disk ? 0 : 1, geom_.r1).value;
}

double CellModeBasis::psi_norm2() const {
  const double scale = geom_.r1 * geom_.r1;
  if (geom_.is_disk) return scale * pi_m(m_) / std::pow(2.0, m_ + 2);
  return scale * pi_m(m_) / (2.0 * std::pow(t_, m_ + 1));
}

namespace {

int bubble_groups_for_mode(int Np, int m) { return std::max(0, (Np - m) / 2); }

CellGeometry cell_geometry(const RadialMesh& mesh, int cell) {
  return CellGeometry{mesh.inner_radius(cell), mesh.outer_radius(cell),
                      mesh.cell_is_disk(cell)};
}

}  // namespace

DofLayout build_layout(const RadialMesh& mesh, int Np, bool dirichlet) {
  if (Np < 2 || Np % 2 != 0) {
    throw ConfigError("Np must be an even integer >= 2 (degree bookkeeping assumes even Np); "
                      "round up to the next even degree");
  }
  DofLayout layout;
  layout.mesh = mesh;
  layout.Np = Np;
  layout.dirichlet = dirichlet;
  if (auto w = mesh.conditioning_warning(Np)) layout.warnings.push_back(*w);

  const int nh = mesh.num_cells();
  const bool disk_domain = mesh.disk_domain();
  const int n_modes = 2 * Np + 1;

  auto bank = std::make_shared<std::vector<std::vector<CellModeBasis>>>();
  bank->resize(nh);
  for (int c = 0; c < nh; ++c) {
    const CellGeometry geom = cell_geometry(mesh, c);
    (*bank)[c].reserve(n_modes);
    for (int f = 0; f < n_modes; ++f) {
      const ModeIndex mode = mode_from_flat_index(f);
      const int B = bubble_groups_for_mode(Np, mode.m);
      const int ncols = B + (geom.is_disk ? 1 : 2);
      (*bank)[c].emplace_back(geom, mode.m, ncols);
    }
  }
  layout.bank = bank;

  // Continuity weight of the inner-cell restriction of each interior hat.
  std::vector<std::vector<double>> alpha(n_modes);  // [mode][interface-1]
  for (int f = 0; f < n_modes; ++f) {
    alpha[f].resize(std::max(nh - 1, 0));
    for (int k = 1; k < nh; ++k) {
      const double inner = (*bank)[k][f].hat_in_edge_value();
      const double outer = (*bank)[k - 1][f].hat_out_edge_value();
      alpha[f][k - 1] = inner / outer;
    }
  }

  layout.modes.resize(n_modes);
  layout.cell_dofs.assign(n_modes, std::vector<std::vector<CellDofRef>>(nh));
  Eigen::Index offset = 0;
  for (int f = 0; f < n_modes; ++f) {
    const ModeIndex mode = mode_from_flat_index(f);
    const int B = bubble_groups_for_mode(Np, mode.m);
    const bool has_inner_boundary_hat = !disk_domain;
    const int hats_all = nh + (has_inner_boundary_hat ? 1 : 0);
    const int hats = hats_all - (dirichlet ? (has_inner_boundary_hat ? 2 : 1) : 0);

    auto& ml = layout.modes[f];
    ml.m = mode.m;
    ml.j = mode.j;
    ml.hats = hats;
    ml.bubble_groups = B;
    ml.size = hats + static_cast<Eigen::Index>(B) * nh;
    ml.offset = offset;

    // Global hat indices in layout order.
    // inner boundary (annulus domain), interfaces 1..nh-1, outer boundary.
    Eigen::Index next = offset;
    Eigen::Index inner_hat = -1, outer_hat = -1;
    std::vector<Eigen::Index> interface_hat(std::max(nh - 1, 0), -1);
    if (has_inner_boundary_hat && !dirichlet) inner_hat = next++;
    for (int k = 1; k < nh; ++k) interface_hat[k - 1] = next++;
    if (!dirichlet) outer_hat = next++;
    const Eigen::Index bubble_base = next;

    for (int c = 0; c < nh; ++c) {
      const CellModeBasis& cb = (*bank)[c][f];
      std::vector<CellDofRef> refs(cb.ncols());
      int loc = 0;
      if (!cb.geometry().is_disk) {
        // hat_in: hat at the inner edge of this cell.
        if (c == 0) {
          refs[loc++] = CellDofRef{inner_hat, 1.0};
        } else {
          refs[loc++] = CellDofRef{interface_hat[c - 1], 1.0};
        }
      }
      // hat_out: hat at the outer edge.
      if (c == nh - 1) {
        refs[loc++] = CellDofRef{outer_hat, 1.0};
      } else {
        refs[loc++] = CellDofRef{interface_hat[c], alpha[f][c]};
      }
      for (int g = 0; g < B; ++g) {
        refs[loc++] = CellDofRef{bubble_base + static_cast<Eigen::Index>(g) * nh + c, 1.0};
      }
      layout.cell_dofs[f][c] = std::move(refs);
    }
    offset += ml.size;
  }
  layout.total = offset;
  return layout;
}

double angular_factor(const ModeIndex& mode, double x, double y) {
  mode.validate();
  if (mode.m == 0) return 1.0;
  const double r = std::hypot(x, y);
  if (r == 0.0) return 0.0;
  const std::complex<double> u = std::pow(std::complex<double>(x / r, y / r), mode.m);
  return (mode.j == 1) ? u.real() : u.imag();
}

double eval_hat(const RadialMesh& mesh, int hat, const ModeIndex& mode, double x, double y) {
  mode.validate();
  const int nh = mesh.num_cells();
  const bool inner_bnd = !mesh.disk_domain();
  const int hats_all = nh + (inner_bnd ? 1 : 0);
  if (hat < 0 || hat >= hats_all) throw std::invalid_argument("hat index out of range");
  const double r = std::hypot(x, y);
  const double ang = angular_factor(mode, x, y);

  auto make_basis = [&](int cell) {
    const CellGeometry geom = cell_geometry(mesh, cell);
    return CellModeBasis(geom, mode.m, geom.is_disk ? 2 : 3);
  };

  // Map the hat index to (breakpoint radius, supporting cells).
  if (inner_bnd && hat == 0) {
    CellModeBasis cb = make_basis(0);
    if (r < mesh.inner_radius(0) - 1e-14 || r > mesh.outer_radius(0) + 1e-14) return 0.0;
    return cb.local_radial(0, r).value * ang;
  }
  const int iface = inner_bnd ? hat : hat + 1;  // breakpoint index rho_iface
  if (iface == nh) {
    CellModeBasis cb = make_basis(nh - 1);
    if (r < mesh.inner_radius(nh - 1) - 1e-14 || r > mesh.outer_radius(nh - 1) + 1e-14)
      return 0.0;
    return cb.local_radial(cb.geometry().is_disk ? 0 : 1, r).value * ang;
  }
  CellModeBasis below = make_basis(iface - 1);
  CellModeBasis above = make_basis(iface);
  const double alpha = above.hat_in_edge_value() / below.hat_out_edge_value();
  if (r >= mesh.inner_radius(iface - 1) - 1e-14 && r <= mesh.breakpoints[iface]) {
    return alpha * below.local_radial(below.geometry().is_disk ? 0 : 1, r).value * ang;
  }
  if (r > mesh.breakpoints[iface] && r <= mesh.outer_radius(iface) + 1e-14) {
    return above.local_radial(0, r).value * ang;
  }
  return 0.0;
}

double eval_bubble(const RadialMesh& mesh, int cell, const ZernikeIndex& idx, double x,
                   double y) {
  idx.validate();
  if (cell < 0 || cell >= mesh.num_cells()) throw std::invalid_argument("cell out of range");
  const double r = std::hypot(x, y);
  if (r < mesh.inner_radius(cell) - 1e-14 || r > mesh.outer_radius(cell) + 1e-14) return 0.0;
  const CellGeometry geom = cell_geometry(mesh, cell);
  const int k = idx.radial_index();
  CellModeBasis cb(geom, idx.mode.m, k + 1 + (geom.is_disk ? 1 : 2));
  return cb.local_radial((geom.is_disk ? 1 : 2) + k, r).value * angular_factor(idx.mode, x, y);
}

namespace {

template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> synthesize_impl(
    const CoefficientFieldT<Scalar>& field,
    const std::vector<std::pair<double, double>>& points) {
  const DofLayout& layout = field.layout;
  const int nh = layout.mesh.num_cells();
  const int n_modes = layout.num_modes();

  // Z-space coefficients per (cell, mode): u_tilde = R * (weighted local coeffs).
  std::vector<std::vector<Eigen::Vector<Scalar, Eigen::Dynamic>>> ztilde(nh);
  for (int c = 0; c < nh; ++c) {
    ztilde[c].resize(n_modes);
    for (int f = 0; f < n_modes; ++f) {
      const CellModeBasis& cb = layout.cell_basis(c, f);
      const auto& refs = layout.cell_dofs[f][c];
      Eigen::Vector<Scalar, Eigen::Dynamic> loc =
          Eigen::Vector<Scalar, Eigen::Dynamic>::Zero(cb.ncols());
      for (int i = 0; i < cb.ncols(); ++i) {
        if (refs[i].global >= 0) loc[i] = refs[i].weight * field.data[refs[i].global];
      }
      ztilde[c][f] = cb.raising() * loc;
    }
  }

  Eigen::Vector<Scalar, Eigen::Dynamic> out(points.size());
  for (size_t p = 0; p < points.size(); ++p) {
    const double x = points[p].first;
    const double y = points[p].second;
    const double r = std::hypot(x, y);
    const int c = layout.mesh.find_cell(r);
    Scalar acc{};
    for (int f = 0; f < n_modes; ++f) {
      const CellModeBasis& cb = layout.cell_basis(c, f);
      const ModeIndex mode = mode_from_flat_index(f);
      const double ang = angular_factor(mode, x, y);
      if (ang == 0.0) continue;
      const Eigen::VectorXd zv = cb.z_radial_values(r);
      Scalar radial{};
      for (int k = 0; k < cb.ncols(); ++k) radial += ztilde[c][f][k] * zv[k];
      acc += radial * ang;
    }
    out[p] = acc;
  }
  return out;
}

}  // namespace

Eigen::VectorXd synthesize(const CoefficientField& field,
                           const std::vector<std::pair<double, double>>& points) {
  return synthesize_impl(field, points);
}

Eigen::VectorXcd synthesize(const ComplexCoefficientField& field,
                            const std::vector<std::pair<double, double>>& points) {
  return synthesize_impl(field, points);
}

DiscontinuousField analyze_rhs(const std::function<double(double, double)>& f,
                               const DofLayout& layout) {
  DiscontinuousField out;
  out.layout = layout;
  const int nh = layout.mesh.num_cells();
  const int n_modes = layout.num_modes();
  out.offsets.assign(n_modes, std::vector<Eigen::Index>(nh, 0));
  Eigen::Index total = 0;
  for (int f = 0; f < n_modes; ++f) {
    for (int c = 0; c < nh; ++c) {
      out.offsets[f][c] = total;
      total += layout.cell_basis(c, f).ncols();
    }
  }
  out.data = Eigen::VectorXd::Zero(total);

  const int Np = layout.Np;
  const int ntheta = 2 * Np + 8;
  const int nrad = Np + 10;
  QuadRule leg = gauss_rule(JacobiParams{0.0, 0.0}, nrad);

  // trig table T(k, fm) = trig(m theta_k) * dtheta, shared across cells.
  const double dtheta = 2.0 * kPi / ntheta;
  Eigen::MatrixXd T(ntheta, n_modes);
  for (int k = 0; k < ntheta; ++k) {
    const double theta = k * dtheta;
    for (int fm = 0; fm < n_modes; ++fm) {
      const ModeIndex mode = mode_from_flat_index(fm);
      T(k, fm) = ((mode.j == 1) ? std::cos(mode.m * theta) : std::sin(mode.m * theta)) * dtheta;
    }
  }

  for (int c = 0; c < nh; ++c) {
    const double u0 = layout.mesh.inner_radius(c) * layout.mesh.inner_radius(c);
    const double u1 = layout.mesh.outer_radius(c) * layout.mesh.outer_radius(c);
    Eigen::VectorXd rs(nrad), rw(nrad);
    for (int i = 0; i < nrad; ++i) {
      const double u = 0.5 * (u0 + u1) + 0.5 * (u1 - u0) * leg.nodes[i];
      rs[i] = std::sqrt(u);
      rw[i] = 0.25 * (u1 - u0) * leg.weights[i];  // r dr = du/2
    }
    Eigen::MatrixXd F(nrad, ntheta);
    for (int k = 0; k < ntheta; ++k) {
      const double ct = std::cos(k * dtheta), st = std::sin(k * dtheta);
      for (int i = 0; i < nrad; ++i) F(i, k) = f(rs[i] * ct, rs[i] * st);
    }
    Eigen::MatrixXd gmodes = F * T;  // (nrad x n_modes)
    for (int fm = 0; fm < n_modes; ++fm) {
      const CellModeBasis& cb = layout.cell_basis(c, fm);
      const double norm2 = cb.psi_norm2();
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(cb.ncols());
      for (int i = 0; i < nrad; ++i) {
        acc += (rw[i] * gmodes(i, fm)) * cb.z_radial_values(rs[i]);
      }
      out.data.segment(out.offsets[fm][c], cb.ncols()) = acc / norm2;
    }
  }
  return out;
}

Eigen::VectorXd synthesize_discontinuous(const DiscontinuousField& field,
                                         const std::vector<std::pair<double, double>>& points) {
  const DofLayout& layout = field.layout;
  Eigen::VectorXd out(points.size());
  for (size_t p = 0; p < points.size(); ++p) {
    const double x = points[p].first;
    const double y = points[p].second;
    const double r = std::hypot(x, y);
    const int c = layout.mesh.find_cell(r);
    double acc = 0.0;
    for (int f = 0; f < layout.num_modes(); ++f) {
      const CellModeBasis& cb = layout.cell_basis(c, f);
      const ModeIndex mode = mode_from_flat_index(f);
      const double ang = angular_factor(mode, x, y);
      if (ang == 0.0) continue;
      const Eigen::VectorXd zv = cb.z_radial_values(r);
      const double radial =
          field.data.segment(field.segment_offset(f, c), cb.ncols()).dot(zv);
      acc += radial * ang;
    }
    out[p] = acc;
  }
  return out;
}

}  // namespace diskfem
