#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "diskfem/femspace.hpp"
#include "diskfem/sparse.hpp"
#include "diskfem/zernike.hpp"

namespace diskfem {

enum class BlockKind { Mass, Stiffness, WeightedMass, Gram };

/// One per-mode block of a global block-diagonal operator.
struct FourierBlock {
  ModeIndex mode;
  BlockKind kind = BlockKind::Mass;
  B3Arrowhead<double> matrix;

  Eigen::MatrixXd dense() const { return matrix.dense(); }
};

/// Block-diagonal operator over the modes of a DofLayout.
struct BlockDiagonalOperator {
  std::vector<FourierBlock> blocks;  // indexed by flat mode

  CoefficientField apply(const CoefficientField& x) const;
  ComplexCoefficientField apply(const ComplexCoefficientField& x) const;
};

// ---- Reference-cell blocks (outer radius 1), local order (hats..., bubbles...) ----

/// pi_m/2^{m+2} (R^{Omega_0}_m)^T R^{Omega_0}_m (tridiagonal).
Eigen::MatrixXd mass_disk(int m, int N);

/// pi_m/(2 t^{m+1}) (R^{Omega_rho}_m)^T R^{Omega_rho}_m (4x4 arrowhead +
/// pentadiagonal tail).
Eigen::MatrixXd mass_annulus(const AnnulusParams& params, int m, int N);

/// diag(m pi / p_{(0,m)}, -pi_m/2^{m+3} D_m).
Eigen::MatrixXd stiffness_disk(int m, int N);

/// Hat arrowhead (a_m..e_m) + bubble block -pi_m/(2 t^{m+3}) D^rho_m
/// (3x3 arrowhead + tridiagonal tail).
Eigen::MatrixXd stiffness_annulus(const AnnulusParams& params, int m, int N);

/// Closed-form hat entries of the annulus stiffness block.
struct AnnulusStiffnessArrowhead {
  double a, b, c, d, e;
};
AnnulusStiffnessArrowhead stiffness_annulus_arrowhead(const AnnulusParams& params, int m);

/// pi_m/2^{m+2} R^T Lambda_m R with Lambda_m = sum lambda_n T_n((I+X_{(0,m)})/2);
/// lambda holds Chebyshev coefficients of lambda(r^2) on [0,1] in the r^2 variable.
Eigen::MatrixXd weighted_mass_disk(const ChebCoeffs& lambda, int m, int N);

/// Annulus analogue; lambda expanded on the r^2 interval the matrix argument
/// rho2^2 (I - t^{-1} X) maps into (reference cell: [rho^2, 1]).
Eigen::MatrixXd weighted_mass_annulus(const AnnulusParams& params, const ChebCoeffs& lambda,
                                      int m, int N);

/// Load Gram <Phi^T, Z>: pi_m/2^{m+2} R^T resp. pi_m/(2 t^{m+1}) R^T.
Eigen::MatrixXd gram_load_disk(int m, int N);
Eigen::MatrixXd gram_load_annulus(const AnnulusParams& params, int m, int N);

/// Mode-coupled <Phi^T, x Phi> on the reference annulus for modes 0..max_mode,
/// assembled as (R)^T D X R per mode pair.  Symmetric, not block diagonal.
Eigen::SparseMatrix<double> weighted_mass_anisotropic_x(const AnnulusParams& params,
                                                        int max_mode, int N);

// ---- lambda(r^2) descriptor ----

struct LambdaSpec {
  enum class Kind { Zero, Constant, PiecewiseConstant, FunctionOfR2 } kind = Kind::Zero;
  double constant = 0.0;
  // Piecewise constant in r: value[i] on (radius[i-1], radius[i]); radius.back()
  // covers the rest of the domain.
  std::vector<double> radii;
  std::vector<double> values;
  std::function<double(double)> f_of_r2;
  int max_cheb = 200;

  static LambdaSpec zero();
  static LambdaSpec make_constant(double c);
  static LambdaSpec piecewise(std::vector<double> radii, std::vector<double> values);
  static LambdaSpec function_of_r2(std::function<double(double)> f);

  double value_at_r2(double r2) const;
  bool is_zero() const { return kind == Kind::Zero; }
  /// Constant value on the cell, when the spec is constant there.
  std::optional<double> cell_constant(double r0, double r1) const;
};

// ---- Global assembly over a mesh ----

struct GlobalOperators {
  DofLayout layout;
  BlockDiagonalOperator mass;
  BlockDiagonalOperator stiffness;
  BlockDiagonalOperator weighted_mass;  // empty blocks when lambda is zero
  WarningList warnings;
};

GlobalOperators assemble_global(const RadialMesh& mesh, int Np, const LambdaSpec& lambda,
                                bool dirichlet);

/// Cell-local scaled blocks used by the global stitch (exposed for oracles).
Eigen::MatrixXd cell_mass(const CellModeBasis& cb);
Eigen::MatrixXd cell_stiffness(const CellModeBasis& cb);
Eigen::MatrixXd cell_weighted_mass(const CellModeBasis& cb, const LambdaSpec& lambda,
                                   WarningList* warnings);
Eigen::MatrixXd cell_gram_load(const CellModeBasis& cb);

/// Load vector b = G_{Phi,Psi} f for an analyzed right-hand side.
CoefficientField assemble_load(const DiscontinuousField& f);

/// Global coefficient * <Phi^T, x Phi> over all modes of the layout as one
/// coupled sparse matrix (annulus-domain meshes).
Eigen::SparseMatrix<double> assemble_global_anisotropic_x(const DofLayout& layout);

/// Global A + M_lambda (+ anisotropic term) flattened to one sparse matrix.
Eigen::SparseMatrix<double> flatten_block_diagonal(const DofLayout& layout,
                                                   const BlockDiagonalOperator& op);

}  // namespace diskfem
