#include "diskfem/assembly.hpp"

#include <cmath>
#include <numbers>

namespace diskfem {

namespace {
constexpr double kPi = std::numbers::pi;
}

CoefficientField BlockDiagonalOperator::apply(const CoefficientField& x) const {
  CoefficientField y;
  y.layout = x.layout;
  y.data = Eigen::VectorXd::Zero(x.data.size());
  for (size_t f = 0; f < blocks.size(); ++f) {
    const auto& ml = x.layout.modes[f];
    if (ml.size == 0) continue;
    y.data.segment(ml.offset, ml.size) =
        blocks[f].matrix.apply(x.data.segment(ml.offset, ml.size));
  }
  return y;
}

ComplexCoefficientField BlockDiagonalOperator::apply(const ComplexCoefficientField& x) const {
  ComplexCoefficientField y;
  y.layout = x.layout;
  y.data = Eigen::VectorXcd::Zero(x.data.size());
  for (size_t f = 0; f < blocks.size(); ++f) {
    const auto& ml = x.layout.modes[f];
    if (ml.size == 0) continue;
    Eigen::VectorXd re = blocks[f].matrix.apply(
        Eigen::VectorXd(x.data.segment(ml.offset, ml.size).real()));
    Eigen::VectorXd im = blocks[f].matrix.apply(
        Eigen::VectorXd(x.data.segment(ml.offset, ml.size).imag()));
    y.data.segment(ml.offset, ml.size) = re + std::complex<double>(0, 1) * im;
  }
  return y;
}

Eigen::MatrixXd mass_disk(int m, int N) {
  const Eigen::MatrixXd R = raising_operator_disk(m, N);
  return pi_m(m) / std::pow(2.0, m + 2) * R.transpose() * R;
}

Eigen::MatrixXd mass_annulus(const AnnulusParams& params, int m, int N) {
  const Eigen::MatrixXd R = raising_operator_annulus(params, m, N);
  return pi_m(m) / (2.0 * std::pow(params.t, m + 1)) * R.transpose() * R;
}

Eigen::MatrixXd stiffness_disk(int m, int N) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  A(0, 0) = m * kPi / normalization_p(JacobiParams{0.0, static_cast<double>(m)});
  if (N > 1) {
    A.bottomRightCorner(N - 1, N - 1) =
        -pi_m(m) / std::pow(2.0, m + 3) * laplacian_disk(m, N - 1);
  }
  return A;
}

AnnulusStiffnessArrowhead stiffness_annulus_arrowhead(const AnnulusParams& params, int m) {
  const double rho = params.rho;
  const double t = params.t;
  const double md = static_cast<double>(m);
  const double qa = normalization_q(t, 1.0, 0.0, md);
  const double qb = normalization_q(t, 0.0, 1.0, md);
  const double qab = normalization_q(t, 1.0, 1.0, md);
  const double pm = pi_m(m);
  const double r2m = std::pow(rho, 2 * m);
  const double r4 = std::pow(rho, 4);
  AnnulusStiffnessArrowhead out;
  out.a = pm *
          (2.0 - r2m * (md * (md + 2.0) - 2.0 * md * (md + 2.0) * rho * rho +
                        (md * (md + 2.0) + 2.0) * r4)) /
          ((md + 2.0) * qa);
  out.b = -2.0 * pm * (1.0 - r2m * r4) / ((md + 2.0) * std::sqrt(qa * qb));
  out.c = pm * (2.0 - 2.0 * r2m * r4 + md * (md + 2.0) / (t * t)) / ((md + 2.0) * qb);
  out.d = 2.0 * pm * (md + 1.0) * std::sqrt(qab / qa) / std::pow(t, m + 3);
  out.e = -2.0 * pm * (md + 1.0) * std::sqrt(qab / qb) / std::pow(t, m + 3);
  return out;
}

Eigen::MatrixXd stiffness_annulus(const AnnulusParams& params, int m, int N) {
  if (N < 2) throw std::invalid_argument("stiffness_annulus requires N >= 2");
  const AnnulusStiffnessArrowhead ah = stiffness_annulus_arrowhead(params, m);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  A(0, 0) = ah.a;
  A(0, 1) = A(1, 0) = ah.b;
  A(1, 1) = ah.c;
  if (N > 2) {
    A(0, 2) = A(2, 0) = ah.d;
    A(1, 2) = A(2, 1) = ah.e;
    A.bottomRightCorner(N - 2, N - 2) =
        -pi_m(m) / (2.0 * std::pow(params.t, m + 3)) * laplacian_annulus(params, m, N - 2);
  }
  return A;
}

Eigen::MatrixXd weighted_mass_disk(const ChebCoeffs& lambda, int m, int N) {
  const Eigen::MatrixXd R = raising_operator_disk(m, N);
  const Eigen::MatrixXd J = r2_matrix_disk(0.0, m, N, 1.0);
  const Eigen::MatrixXd L = clenshaw_matrix(lambda, J);
  return pi_m(m) / std::pow(2.0, m + 2) * R.transpose() * L * R;
}

Eigen::MatrixXd weighted_mass_annulus(const AnnulusParams& params, const ChebCoeffs& lambda,
                                      int m, int N) {
  const Eigen::MatrixXd R = raising_operator_annulus(params, m, N);
  const Eigen::MatrixXd J = r2_matrix_annulus(params.rho, 1.0, 0.0, 0.0, m, N);
  const Eigen::MatrixXd L = clenshaw_matrix(lambda, J);
  return pi_m(m) / (2.0 * std::pow(params.t, m + 1)) * R.transpose() * L * R;
}

Eigen::MatrixXd gram_load_disk(int m, int N) {
  return pi_m(m) / std::pow(2.0, m + 2) * raising_operator_disk(m, N).transpose();
}

Eigen::MatrixXd gram_load_annulus(const AnnulusParams& params, int m, int N) {
  return pi_m(m) / (2.0 * std::pow(params.t, m + 1)) *
         raising_operator_annulus(params, m, N).transpose();
}

Eigen::SparseMatrix<double> weighted_mass_anisotropic_x(const AnnulusParams& params,
                                                        int max_mode, int N) {
  const int pad = 4;
  const int Npad = N + pad;
  XJacobiAnnulus X = xjacobi_annulus(params, max_mode, Npad);
  std::vector<Eigen::MatrixXd> R(2 * max_mode + 1);
  for (int f = 0; f < 2 * max_mode + 1; ++f) {
    R[f] = raising_operator_annulus(params, mode_from_flat_index(f).m, Npad);
  }
  std::vector<Eigen::Triplet<double>> trips;
  for (int fc = 0; fc < 2 * max_mode + 1; ++fc) {
    const ModeIndex col = mode_from_flat_index(fc);
    for (int fr = 0; fr < 2 * max_mode + 1; ++fr) {
      const ModeIndex row = mode_from_flat_index(fr);
      if (!X.coupled(row, col)) continue;
      const double drow = pi_m(row.m) / (2.0 * std::pow(params.t, row.m + 1));
      Eigen::MatrixXd blk =
          (drow * R[fr].transpose() * X.block(row, col) * R[fc]).topLeftCorner(N, N);
      for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
          if (blk(i, j) != 0.0) {
            trips.emplace_back(fr * N + i, fc * N + j, blk(i, j));
          }
        }
      }
    }
  }
  Eigen::SparseMatrix<double> out((2 * max_mode + 1) * N, (2 * max_mode + 1) * N);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

LambdaSpec LambdaSpec::zero() { return LambdaSpec{}; }

LambdaSpec LambdaSpec::make_constant(double c) {
  LambdaSpec s;
  s.kind = Kind::Constant;
  s.constant = c;
  return s;
}

LambdaSpec LambdaSpec::piecewise(std::vector<double> radii, std::vector<double> values) {
  if (radii.size() != values.size() || radii.empty()) {
    throw std::invalid_argument("piecewise lambda needs matching radii/values");
  }
  LambdaSpec s;
  s.kind = Kind::PiecewiseConstant;
  s.radii = std::move(radii);
  s.values = std::move(values);
  return s;
}

LambdaSpec LambdaSpec::function_of_r2(std::function<double(double)> f) {
  LambdaSpec s;
  s.kind = Kind::FunctionOfR2;
  s.f_of_r2 = std::move(f);
  return s;
}

double LambdaSpec::value_at_r2(double r2) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return constant;
    case Kind::PiecewiseConstant: {
      const double r = std::sqrt(r2);
      for (size_t i = 0; i < radii.size(); ++i) {
        if (r <= radii[i]) return values[i];
      }
      return values.back();
    }
    case Kind::FunctionOfR2:
      return f_of_r2(r2);
  }
  return 0.0;
}

std::optional<double> LambdaSpec::cell_constant(double r0, double r1) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return constant;
    case Kind::PiecewiseConstant: {
      const double mid = 0.5 * (r0 + r1);
      double v = values.back();
      for (size_t i = 0; i < radii.size(); ++i) {
        if (mid <= radii[i]) {
          v = values[i];
          break;
        }
      }
      // Constant on the cell only if no break lies strictly inside.
      for (double rb : radii) {
        if (rb > r0 + 1e-14 && rb < r1 - 1e-14) return std::nullopt;
      }
      return v;
    }
    case Kind::FunctionOfR2:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

ChebCoeffs adaptive_cheb(const std::function<double(double)>& f, double lo, double hi,
                         int max_len, WarningList* warnings) {
  int N = 8;
  ChebCoeffs c;
  while (true) {
    c = cheb_expand(f, lo, hi, N);
    const double scale = c.coeffs.cwiseAbs().maxCoeff();
    const double tail = c.coeffs.tail(3).cwiseAbs().maxCoeff();
    if (tail <= 1e-14 * scale || N >= max_len) break;
    N *= 2;
  }
  const double scale = c.coeffs.cwiseAbs().maxCoeff();
  if (c.coeffs.tail(3).cwiseAbs().maxCoeff() > 1e-14 * scale && warnings) {
    warnings->push_back({"lambda-expansion",
                         "Chebyshev expansion of lambda(r^2) hit the cap without converging"});
  }
  // Trim the converged tail to keep Lambda_m banded.
  int last = 0;
  for (int i = 0; i < c.coeffs.size(); ++i) {
    if (std::abs(c.coeffs[i]) > 1e-14 * scale) last = i;
  }
  c.coeffs.conservativeResize(last + 1);
  return c;
}

}  // namespace

Eigen::MatrixXd cell_mass(const CellModeBasis& cb) {
  const auto& g = cb.geometry();
  const double jac = g.r1 * g.r1;
  const Eigen::MatrixXd& R = cb.raising();
  const double norm = g.is_disk ? pi_m(cb.mode_m()) / std::pow(2.0, cb.mode_m() + 2)
                                : pi_m(cb.mode_m()) / (2.0 * std::pow(cb.annulus_t(),
                                                                      cb.mode_m() + 1));
  return jac * norm * R.transpose() * R;
}

Eigen::MatrixXd cell_stiffness(const CellModeBasis& cb) {
  const int m = cb.mode_m();
  const int N = cb.ncols();
  if (cb.geometry().is_disk) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
    A(0, 0) = m * kPi / normalization_p(JacobiParams{0.0, static_cast<double>(m)});
    if (N > 1) {
      A.bottomRightCorner(N - 1, N - 1) =
          -pi_m(m) / std::pow(2.0, m + 3) * laplacian_disk(m, N - 1);
    }
    return A;
  }
  const AnnulusParams ref(cb.geometry().sigma());
  const AnnulusStiffnessArrowhead ah = stiffness_annulus_arrowhead(ref, m);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  A(0, 0) = ah.a;
  A(0, 1) = A(1, 0) = ah.b;
  A(1, 1) = ah.c;
  if (N > 2) {
    A(0, 2) = A(2, 0) = ah.d;
    A(1, 2) = A(2, 1) = ah.e;
    A.bottomRightCorner(N - 2, N - 2) =
        -pi_m(m) / (2.0 * std::pow(ref.t, m + 3)) *
        laplacian_annulus_prebuilt(cb.q00(), cb.q11(), ref.rho, m, N - 2);
  }
  return A;
}

Eigen::MatrixXd cell_weighted_mass(const CellModeBasis& cb, const LambdaSpec& lambda,
                                   WarningList* warnings) {
  const auto& g = cb.geometry();
  if (auto c = lambda.cell_constant(g.r0, g.r1)) {
    return *c * cell_mass(cb);
  }
  const int m = cb.mode_m();
  const int N = cb.ncols();
  const double u0 = g.r0 * g.r0;
  const double u1 = g.r1 * g.r1;
  auto f = [&](double u) { return lambda.value_at_r2(u); };
  const ChebCoeffs coeffs = adaptive_cheb(f, u0, u1, lambda.max_cheb, warnings);
  Eigen::MatrixXd J;
  double norm;
  if (g.is_disk) {
    J = r2_matrix_disk(0.0, m, N, g.r1);
    norm = pi_m(m) / std::pow(2.0, m + 2);
  } else {
    J = r2_matrix_annulus(g.r0, g.r1, 0.0, 0.0, m, N);
    norm = pi_m(m) / (2.0 * std::pow(cb.annulus_t(), m + 1));
  }
  const Eigen::MatrixXd L = clenshaw_matrix(coeffs, J);
  const Eigen::MatrixXd& R = cb.raising();
  return g.r1 * g.r1 * norm * R.transpose() * L * R;
}

Eigen::MatrixXd cell_gram_load(const CellModeBasis& cb) {
  return cb.psi_norm2() * cb.raising().transpose();
}

namespace {

// Max degree-group distance of nonzero bubble-bubble coupling in a local block.
int local_group_band(const Eigen::MatrixXd& local, int nhats) {
  int band = 0;
  for (int i = nhats; i < local.rows(); ++i) {
    for (int j = nhats; j < local.cols(); ++j) {
      if (local(i, j) != 0.0) band = std::max(band, std::abs(i - j));
    }
  }
  return band;
}

BlockDiagonalOperator stitch(const DofLayout& layout,
                             const std::vector<std::vector<Eigen::MatrixXd>>& locals,
                             BlockKind kind) {
  const int nh = layout.mesh.num_cells();
  BlockDiagonalOperator op;
  op.blocks.resize(layout.num_modes());
  for (int f = 0; f < layout.num_modes(); ++f) {
    const auto& ml = layout.modes[f];
    int group_band = 1;
    for (int c = 0; c < nh; ++c) {
      group_band = std::max(group_band,
                            local_group_band(locals[f][c],
                                             layout.cell_basis(c, f).num_hats()));
    }
    const int band = std::max(1, group_band * nh);
    FourierBlock blk;
    blk.mode = ModeIndex{ml.m, ml.j};
    blk.kind = kind;
    blk.matrix = B3Arrowhead<double>(ml.size, ml.hats, band);
    for (int c = 0; c < nh; ++c) {
      const auto& refs = layout.cell_dofs[f][c];
      const Eigen::MatrixXd& L = locals[f][c];
      for (int i = 0; i < L.rows(); ++i) {
        if (refs[i].global < 0) continue;
        for (int j = 0; j < L.cols(); ++j) {
          if (refs[j].global < 0 || L(i, j) == 0.0) continue;
          blk.matrix.add_entry(refs[i].global - ml.offset, refs[j].global - ml.offset,
                               refs[i].weight * refs[j].weight * L(i, j));
        }
      }
    }
    op.blocks[f] = std::move(blk);
  }
  return op;
}

}  // namespace

GlobalOperators assemble_global(const RadialMesh& mesh, int Np, const LambdaSpec& lambda,
                                bool dirichlet) {
  GlobalOperators out;
  out.layout = build_layout(mesh, Np, dirichlet);
  out.warnings = out.layout.warnings;
  const int nh = mesh.num_cells();
  const int n_modes = out.layout.num_modes();

  std::vector<std::vector<Eigen::MatrixXd>> masses(n_modes), stiffs(n_modes), weighted(n_modes);
  for (int f = 0; f < n_modes; ++f) {
    masses[f].resize(nh);
    stiffs[f].resize(nh);
    weighted[f].resize(nh);
    for (int c = 0; c < nh; ++c) {
      const CellModeBasis& cb = out.layout.cell_basis(c, f);
      masses[f][c] = cell_mass(cb);
      stiffs[f][c] = cell_stiffness(cb);
      if (!lambda.is_zero()) {
        weighted[f][c] = cell_weighted_mass(cb, lambda, &out.warnings);
      } else {
        weighted[f][c] = Eigen::MatrixXd::Zero(cb.ncols(), cb.ncols());
      }
    }
  }
  out.mass = stitch(out.layout, masses, BlockKind::Mass);
  out.stiffness = stitch(out.layout, stiffs, BlockKind::Stiffness);
  out.weighted_mass = stitch(out.layout, weighted, BlockKind::WeightedMass);
  return out;
}

CoefficientField assemble_load(const DiscontinuousField& f) {
  const DofLayout& layout = f.layout;
  CoefficientField b;
  b.layout = layout;
  b.data = Eigen::VectorXd::Zero(layout.total);
  for (int fm = 0; fm < layout.num_modes(); ++fm) {
    for (int c = 0; c < layout.mesh.num_cells(); ++c) {
      const CellModeBasis& cb = layout.cell_basis(c, fm);
      const auto& refs = layout.cell_dofs[fm][c];
      const Eigen::VectorXd floc = f.data.segment(f.segment_offset(fm, c), cb.ncols());
      const Eigen::VectorXd bloc =
          cb.psi_norm2() * (cb.raising().transpose() * floc);
      for (int i = 0; i < cb.ncols(); ++i) {
        if (refs[i].global >= 0) b.data[refs[i].global] += refs[i].weight * bloc[i];
      }
    }
  }
  return b;
}

Eigen::SparseMatrix<double> assemble_global_anisotropic_x(const DofLayout& layout) {
  const int nh = layout.mesh.num_cells();
  const int n_modes = layout.num_modes();
  std::vector<Eigen::Triplet<double>> trips;
  const int pad = 4;
  for (int c = 0; c < nh; ++c) {
    if (layout.mesh.cell_is_disk(c)) {
      throw NumericalError("anisotropic x-term is implemented for annulus cells only");
    }
    const double r1 = layout.mesh.outer_radius(c);
    const AnnulusParams ref(layout.mesh.inner_radius(c) / r1);
    // Padded raising operators and X blocks; truncate products afterwards.
    int max_cols = 0;
    for (int f = 0; f < n_modes; ++f) max_cols = std::max(max_cols, layout.cell_cols(f, c));
    const int Npad = max_cols + pad;
    XJacobiAnnulus X = xjacobi_annulus(ref, layout.Np, Npad);
    std::vector<Eigen::MatrixXd> R(n_modes);
    for (int f = 0; f < n_modes; ++f) {
      R[f] = raising_operator_annulus(ref, mode_from_flat_index(f).m, Npad);
    }
    for (int fc = 0; fc < n_modes; ++fc) {
      const ModeIndex col = mode_from_flat_index(fc);
      for (int fr = 0; fr < n_modes; ++fr) {
        const ModeIndex row = mode_from_flat_index(fr);
        if (!X.coupled(row, col)) continue;
        const double drow = pi_m(row.m) / (2.0 * std::pow(ref.t, row.m + 1));
        const double scale = r1 * r1 * r1 * drow;
        const int nr = layout.cell_cols(fr, c);
        const int nc = layout.cell_cols(fc, c);
        Eigen::MatrixXd blk =
            (scale * R[fr].transpose() * X.block(row, col) * R[fc]).topLeftCorner(nr, nc);
        const auto& rrefs = layout.cell_dofs[fr][c];
        const auto& crefs = layout.cell_dofs[fc][c];
        for (int i = 0; i < nr; ++i) {
          if (rrefs[i].global < 0) continue;
          for (int j = 0; j < nc; ++j) {
            if (crefs[j].global < 0 || blk(i, j) == 0.0) continue;
            trips.emplace_back(rrefs[i].global, crefs[j].global,
                               rrefs[i].weight * crefs[j].weight * blk(i, j));
          }
        }
      }
    }
  }
  Eigen::SparseMatrix<double> out(layout.total, layout.total);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Eigen::SparseMatrix<double> flatten_block_diagonal(const DofLayout& layout,
                                                   const BlockDiagonalOperator& op) {
  std::vector<Eigen::Triplet<double>> trips;
  for (int f = 0; f < layout.num_modes(); ++f) {
    const auto& ml = layout.modes[f];
    const auto& B = op.blocks[f].matrix;
    for (Eigen::Index j = 0; j < B.size(); ++j) {
      B.for_each_row_in_column(j, [&](Eigen::Index i) {
        const double v = B.coeff(i, j);
        if (v != 0.0) trips.emplace_back(ml.offset + i, ml.offset + j, v);
      });
    }
  }
  Eigen::SparseMatrix<double> out(layout.total, layout.total);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

}  // namespace diskfem
