#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "diskfem/errors.hpp"
#include "diskfem/jacobi.hpp"
#include "diskfem/semiclassical.hpp"
#include "diskfem/zernike.hpp"

namespace diskfem {

/// Concentric mesh 0 = rho_0 < rho_1 < ... < rho_{N_h} (disk domain) or
/// rho_0 > 0 (annulus domain).
struct RadialMesh {
  Eigen::VectorXd breakpoints;

  int num_cells() const { return static_cast<int>(breakpoints.size()) - 1; }
  bool disk_domain() const { return breakpoints[0] == 0.0; }
  double inner_radius(int cell) const { return breakpoints[cell]; }
  double outer_radius(int cell) const { return breakpoints[cell + 1]; }
  bool cell_is_disk(int cell) const { return cell == 0 && disk_domain(); }

  /// min_{k >= 1} rho_k / rho_{k+1}; the conditioning diagnostic of the hats.
  double ratio() const;
  std::optional<WarningRecord> conditioning_warning(int Np) const;

  /// Index of the cell containing radius r (boundary points go to the inner cell).
  int find_cell(double r) const;
};

RadialMesh build_mesh(const std::vector<double>& breakpoints);

/// Continuity coefficients of the hat definitions (unit-edge-value convention).
double hat_kappa(double rho1, double rho2, int m);
double hat_gamma(double rho1, double rho2, double rho3, int m);

/// Geometry of a single cell.
struct CellGeometry {
  double r0 = 0.0;
  double r1 = 1.0;
  bool is_disk = false;
  double sigma() const { return r0 / r1; }
};

/// All per-(cell, Fourier mode) machinery: the radial bases, the raising
/// operator R^Omega_m, and evaluators for the local hat/bubble profiles.
/// Local ordering: disk cell (hat_out, b_0, b_1, ...); annulus cell
/// (hat_in, hat_out, b_0, ...).
class CellModeBasis {
 public:
  CellModeBasis(const CellGeometry& geom, int m, int ncols);

  const CellGeometry& geometry() const { return geom_; }
  int mode_m() const { return m_; }
  int ncols() const { return ncols_; }
  int num_hats() const { return geom_.is_disk ? 1 : 2; }
  int num_bubbles() const { return ncols_ - num_hats(); }

  /// Raising operator: Phi = Z R, square ncols x ncols.
  const Eigen::MatrixXd& raising() const { return raising_; }

  /// Radial profile of the k-th unweighted Zernike member Z_{m+2k,m,j} on the
  /// scaled cell (the Psi basis entry).
  RadialValue z_radial(int k, double r) const;

  /// Values of all ncols Psi radial profiles at r in one recurrence sweep.
  Eigen::VectorXd z_radial_values(double r) const;

  /// Radial profile of the loc-th local basis function (hats first).
  RadialValue local_radial(int loc, double r) const;

  /// Value of the inner-edge-supported hat profile at r = r0 (annulus only).
  double hat_in_edge_value() const;
  /// Value of the outer-edge-supported hat profile at r = r1.
  double hat_out_edge_value() const;

  /// L2 norm^2 of one Psi basis member on this scaled cell:
  /// pi_m/2^{m+2} r1^2 (disk) or pi_m/(2 t^{m+1}) r1^2 (annulus).
  double psi_norm2() const;

  // Annulus-only accessors used by assembly (Jacobi matrices, q-norms).
  const SemiBasis& q00() const { return q00_; }
  const SemiBasis& q11() const { return q11_; }
  double annulus_t() const { return t_; }

 private:
  CellGeometry geom_;
  int m_ = 0;
  int ncols_ = 0;
  double t_ = 0.0;  // annulus: (1 - sigma^2)^{-1}
  SemiBasis q00_, q11_, q10_, q01_;
  Eigen::MatrixXd raising_;
};

/// First column entries (r11, r21) of R^{t,(0,0,m)}_{a,(1,0,m)} and
/// (r12, r22) of R^{t,(0,0,m)}_{b,(0,1,m)}.
struct HatRaisingColumns {
  double r11, r21, r12, r22;
};
HatRaisingColumns hat_raising_columns(double t, int m);

/// Upper-triangular raising operator R^{Omega_0}_m (first column e_1, then
/// (1/2) R^{(0,m)}_{a,(1,m)}).
Eigen::MatrixXd raising_operator_disk(int m, int N);

/// Almost-upper-triangular raising operator R^{Omega_rho}_m.
Eigen::MatrixXd raising_operator_annulus(const AnnulusParams& params, int m, int N);

/// Reference to a global degree of freedom with the continuity weight of this
/// cell-local restriction; global < 0 marks a Dirichlet-removed hat.
struct CellDofRef {
  Eigen::Index global = -1;
  double weight = 1.0;
};

/// Layout of the global hierarchical basis: per mode, hats first (ordered
/// inner boundary -> interfaces -> outer boundary) then bubbles grouped by
/// degree with cells ordered within each group.
struct DofLayout {
  RadialMesh mesh;
  int Np = 0;
  bool dirichlet = false;
  WarningList warnings;

  struct ModeLayout {
    int m = 0;
    int j = 1;
    int hats = 0;           // retained hats (after any boundary removal)
    int bubble_groups = 0;  // degree groups; each group holds one bubble per cell
    Eigen::Index size = 0;
    Eigen::Index offset = 0;
  };
  std::vector<ModeLayout> modes;
  Eigen::Index total = 0;

  // Per (flat mode, cell): global refs of the cell-local basis functions in
  // local order.
  std::vector<std::vector<std::vector<CellDofRef>>> cell_dofs;

  // Shared per-(cell, flat mode) basis bank.
  std::shared_ptr<const std::vector<std::vector<CellModeBasis>>> bank;

  int num_modes() const { return static_cast<int>(modes.size()); }
  const CellModeBasis& cell_basis(int cell, int mode_flat) const {
    return (*bank)[cell][mode_flat];
  }
  /// Local basis size of a cell in a mode (hats + bubbles = Zernike labels kept).
  int cell_cols(int mode_flat, int cell) const {
    return cell_basis(cell, mode_flat).ncols();
  }
};

/// Layout with the per-mode rule: all hats plus, per cell, the bubbles with
/// Zernike label n <= Np - 2.  Np must be even.
DofLayout build_layout(const RadialMesh& mesh, int Np, bool dirichlet);

/// Hat evaluation on the mesh. Hats are indexed in layout order: annulus
/// domains start with the inner-boundary hat, then interfaces in increasing
/// radius, then the outer-boundary hat. Returns 0 outside the support.
double eval_hat(const RadialMesh& mesh, int hat, const ModeIndex& mode, double x, double y);

/// Bubble evaluation; zero outside cell k.
double eval_bubble(const RadialMesh& mesh, int cell, const ZernikeIndex& idx, double x,
                   double y);

/// Coefficients of a function in the global continuous basis.
template <typename Scalar>
struct CoefficientFieldT {
  DofLayout layout;
  Eigen::Vector<Scalar, Eigen::Dynamic> data;
};
using CoefficientField = CoefficientFieldT<double>;
using ComplexCoefficientField = CoefficientFieldT<std::complex<double>>;

/// Per-cell coefficients in the discontinuous Zernike (annular) basis Psi.
struct DiscontinuousField {
  DofLayout layout;
  Eigen::VectorXd data;
  // offset of (flat mode, cell) segment; segment length = layout.cell_cols(mode).
  std::vector<std::vector<Eigen::Index>> offsets;

  Eigen::Index segment_offset(int mode_flat, int cell) const { return offsets[mode_flat][cell]; }
};

/// cos/sin(m theta) from the normalized direction (branch-free).
double angular_factor(const ModeIndex& mode, double x, double y);

/// Evaluate the field at Cartesian points.
Eigen::VectorXd synthesize(const CoefficientField& field,
                           const std::vector<std::pair<double, double>>& points);
Eigen::VectorXcd synthesize(const ComplexCoefficientField& field,
                            const std::vector<std::pair<double, double>>& points);

/// Expand f cell-by-cell in the discontinuous basis by tensor quadrature.
DiscontinuousField analyze_rhs(const std::function<double(double, double)>& f,
                               const DofLayout& layout);

/// Evaluate a discontinuous field at Cartesian points (Psi synthesis).
Eigen::VectorXd synthesize_discontinuous(const DiscontinuousField& field,
                                         const std::vector<std::pair<double, double>>& points);

}  // namespace diskfem
