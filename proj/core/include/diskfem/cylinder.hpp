#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "diskfem/assembly.hpp"
#include "diskfem/femspace.hpp"
#include "diskfem/sparse.hpp"

namespace diskfem {

/// Univariate continuous hierarchical basis on an interval mesh: piecewise
/// linear hats at interior breakpoints plus per-cell bubbles
/// (1-xi^2) P_k^{(1,1)}(xi).  Boundary hats are removed (Q vanishes at the
/// endpoints).  Ordering: hats, then bubbles grouped by degree.
struct IntervalBasis {
  Eigen::VectorXd breakpoints;
  int Np = 0;

  int num_cells() const { return static_cast<int>(breakpoints.size()) - 1; }
  int hats = 0;           // interior breakpoints
  int bubble_groups = 0;  // Np - 1 groups, one bubble per cell each
  Eigen::Index size = 0;

  B3Arrowhead<double> mass;       // M^Q
  B3Arrowhead<double> stiffness;  // A^Q
  Eigen::MatrixXd gram;           // G_{Q,P}: size x p_size

  int p_per_cell() const { return Np + 1; }
  Eigen::Index p_size() const {
    return static_cast<Eigen::Index>(num_cells()) * p_per_cell();
  }

  /// Values of all basis functions at z.
  Eigen::VectorXd eval_all(double z) const;
  /// Value of the orthonormal piecewise Legendre member (cell, degree n).
  double eval_p(int cell, int n, double z) const;
  int find_cell(double z) const;
};

IntervalBasis build_interval_basis(const std::vector<double>& breakpoints, int Np);

/// Right-hand side of the cylinder problem as Psi (x) P coefficients.
struct CylinderRhs {
  DofLayout layout2d;
  std::vector<Eigen::MatrixXd> F;  // per flat mode: (psi mode size) x p_size
};

CylinderRhs analyze_rhs_cylinder(const std::function<double(double, double, double)>& f,
                                 const DofLayout& layout2d, const IntervalBasis& interval);

/// One per-mode generalized Sylvester problem
/// K U M^Q + M^Phi U A^Q = H.
struct SylvesterProblem {
  ModeIndex mode;
  B3Arrowhead<double> K;     // [M_lambda]_m + A_m  (SPD in the screened regime)
  B3Arrowhead<double> Mphi;  // M_m
  const B3Arrowhead<double>* Mq = nullptr;
  const B3Arrowhead<double>* Aq = nullptr;
  Eigen::MatrixXd H;
};

std::vector<SylvesterProblem> assemble_sylvester(const GlobalOperators& ops2d,
                                                 const IntervalBasis& interval,
                                                 const CylinderRhs& rhs);

/// Enclosing spectral intervals (widened 5%) of L^{-T} M^Q L^{-1} (positive)
/// and -V^{-T} M^Phi V^{-1} (negative), via power/inverse iteration through
/// the reverse Cholesky factors.
struct AdiBounds {
  double mu_a, mu_b;  // sigma(L^{-T} M^Q L^{-1})
  double mu_c, mu_d;  // sigma(-V^{-T} M^Phi V^{-1})
};
AdiBounds estimate_bounds(const SylvesterProblem& problem);

/// Extremal eigenvalue estimation used by estimate_bounds; exposed for tests.
struct SymmetricOperator {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply_inverse;
  Eigen::Index dim;
};
double power_iteration_extreme(const SymmetricOperator& op, bool largest, int max_iter = 500,
                               double tol = 1e-11);

struct AdiPlan {
  double mu_a, mu_b, mu_c, mu_d;
  double gamma = 0.0;
  double eps = 0.0;
  int lmax = 0;
  std::vector<double> p;  // > 0
  std::vector<double> q;  // < 0
};

/// Optimal shifts from the elliptic-integral recipe after the Moebius map of
/// the two intervals to [-alpha,-1] u [1,alpha]; lmax = ceil(ln(16 gamma)
/// ln(4/eps) / pi^2).  Set geometric = true for the fallback geometric shifts.
AdiPlan adi_shifts(const AdiBounds& bounds, double eps, bool geometric = false);

/// ADI iteration for the generalized Sylvester problem; returns U with
/// ||V (U - Uexact) L^T||_2 <= eps ||V Uexact L^T||_2.
Eigen::MatrixXd adi_solve(const SylvesterProblem& problem, const AdiPlan& plan);

/// Tensor-product coefficient field u(x,y,z) = Phi(x,y) U Q(z)^T.
struct TensorField {
  DofLayout layout2d;
  IntervalBasis interval;
  std::vector<Eigen::MatrixXd> U;  // per flat mode: (2d mode size) x size
};

struct CylinderSolveReport {
  TensorField field;
  double mean_lmax = 0.0;
  int max_lmax = 0;
};

/// Assemble + plan + ADI-solve the screened Poisson problem on the cylinder.
CylinderSolveReport solve_cylinder(const RadialMesh& mesh, const std::vector<double>& zbreaks,
                                   const LambdaSpec& lambda,
                                   const std::function<double(double, double, double)>& f,
                                   int Np, double eps, bool geometric_shifts = false);

/// Evaluate on a tensor grid: one z-slice at a time.
Eigen::VectorXd synthesize_cylinder_slice(const TensorField& field, double z,
                                          const std::vector<std::pair<double, double>>& xy);

// AGM-based Jacobi elliptic helpers (exposed for tests).
double elliptic_K(double k);
double elliptic_dn(double u, double k);

}  // namespace diskfem
