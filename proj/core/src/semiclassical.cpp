#include "diskfem/semiclassical.hpp"

#include <cmath>
#include <stdexcept>

#include "diskfem/errors.hpp"

namespace diskfem {

void SemiParams::validate() const {
  if (!(t > 1.0)) throw std::invalid_argument("semiclassical weight requires t > 1");
  if (!(a > -1.0) || !(b > -1.0)) {
    throw std::invalid_argument("semiclassical weight requires a, b > -1");
  }
}

namespace {

// Gauss rule for x^a (1-x)^b on (0,1) with the extra factor (t-x)^c folded
// into the weights.  (t-x)^c > 0 on [0,1] keeps the discrete measure positive.
QuadRule semiclassical_discrete_measure(const SemiParams& p, int points) {
  QuadRule base = gauss_rule(JacobiParams{p.b, p.a}, points);
  QuadRule out;
  out.nodes.resize(points);
  out.weights.resize(points);
  const double scale = std::pow(2.0, -(p.a + p.b + 1.0));
  for (int i = 0; i < points; ++i) {
    const double x = 0.5 * (1.0 + base.nodes[i]);
    out.nodes[i] = x;
    out.weights[i] = scale * base.weights[i] * std::pow(p.t - x, p.c);
  }
  return out;
}

// Discrete Stieltjes procedure: recurrence coefficients of the orthonormal
// polynomials of the measure sum w_i delta_{x_i}.
TridiagonalSym stieltjes(const QuadRule& measure, int n, double& mu0) {
  const Eigen::Index npts = measure.size();
  Eigen::VectorXd pim1 = Eigen::VectorXd::Zero(npts);
  Eigen::VectorXd pik = Eigen::VectorXd::Ones(npts);
  TridiagonalSym X;
  X.diagonal.resize(n);
  X.offdiagonal.resize(n > 1 ? n - 1 : 0);
  mu0 = measure.weights.sum();
  double nu = mu0;
  Eigen::VectorXd beta(n);
  for (int k = 0; k < n; ++k) {
    const double alpha =
        (measure.weights.array() * measure.nodes.array() * pik.array().square()).sum() / nu;
    X.diagonal[k] = alpha;
    if (k + 1 < n) {
      Eigen::VectorXd pik1 = ((measure.nodes.array() - alpha) * pik.array()).matrix();
      if (k > 0) pik1 -= beta[k] * pim1;
      const double nu1 = (measure.weights.array() * pik1.array().square()).sum();
      beta[k + 1] = nu1 / nu;
      X.offdiagonal[k] = std::sqrt(beta[k + 1]);
      pim1 = pik;
      pik = pik1;
      nu = nu1;
    }
  }
  return X;
}

// Largest deviation of the Gram matrix from the identity under an independent
// quadrature rule of the given size.
double gram_deviation(const SemiBasis& basis, int check_points) {
  QuadRule rule = semiclassical_discrete_measure(basis.params, check_points);
  const int n = basis.size();
  Eigen::MatrixXd V(rule.size(), n);
  for (Eigen::Index q = 0; q < rule.size(); ++q) {
    V.row(q) = eval_semi_all(basis, n - 1, rule.nodes[q]).transpose();
  }
  Eigen::MatrixXd G = V.transpose() * rule.weights.asDiagonal() * V;
  return (G - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

SemiBasis build_at_order(const SemiParams& params, int n, int points) {
  QuadRule measure = semiclassical_discrete_measure(params, points);
  SemiBasis basis;
  basis.params = params;
  basis.recurrence = stieltjes(measure, n, basis.mu0);
  return basis;
}

}  // namespace

SemiBasis build_semibasis(const SemiParams& params, int n) {
  params.validate();
  if (n < 1) throw std::invalid_argument("build_semibasis requires n >= 1");
  const int order = 2 * n + static_cast<int>(std::ceil(std::abs(params.c))) + 8;
  SemiBasis basis = build_at_order(params, n, order);
  if (gram_deviation(basis, 2 * order) > 1e-9) {
    basis = build_at_order(params, n, 2 * order);
    if (gram_deviation(basis, 4 * order) > 1e-9) {
      throw NumericalError(
          "semiclassical basis lost orthogonality: quadrature order insufficient "
          "even after doubling");
    }
  }
  return basis;
}

namespace {

template <bool WithDerivative>
void semi_recurrence(const SemiBasis& basis, int degree, double x, double& value,
                     double& derivative) {
  const auto& diag = basis.recurrence.diagonal;
  const auto& off = basis.recurrence.offdiagonal;
  double pkm1 = 0.0, pk = 1.0 / std::sqrt(basis.mu0);
  double dkm1 = 0.0, dk = 0.0;
  for (int k = 0; k < degree; ++k) {
    const double sbk = (k == 0) ? 0.0 : off[k - 1];
    const double pk1 = ((x - diag[k]) * pk - sbk * pkm1) / off[k];
    if constexpr (WithDerivative) {
      const double dk1 = ((x - diag[k]) * dk + pk - sbk * dkm1) / off[k];
      dkm1 = dk;
      dk = dk1;
    }
    pkm1 = pk;
    pk = pk1;
  }
  value = pk;
  derivative = dk;
}

}  // namespace

double eval_semi(const SemiBasis& basis, int degree, double x) {
  if (degree < 0 || degree >= basis.size()) {
    throw std::invalid_argument("eval_semi degree out of range of the built basis");
  }
  double v, d;
  semi_recurrence<false>(basis, degree, x, v, d);
  return v;
}

void eval_semi_with_derivative(const SemiBasis& basis, int degree, double x, double& value,
                               double& derivative) {
  if (degree < 0 || degree >= basis.size()) {
    throw std::invalid_argument("eval_semi degree out of range of the built basis");
  }
  semi_recurrence<true>(basis, degree, x, value, derivative);
}

Eigen::VectorXd eval_semi_all(const SemiBasis& basis, int nmax, double x) {
  if (nmax >= basis.size()) {
    throw std::invalid_argument("eval_semi_all degree out of range of the built basis");
  }
  Eigen::VectorXd out(nmax + 1);
  const auto& diag = basis.recurrence.diagonal;
  const auto& off = basis.recurrence.offdiagonal;
  double pkm1 = 0.0, pk = 1.0 / std::sqrt(basis.mu0);
  out[0] = pk;
  for (int k = 0; k < nmax; ++k) {
    const double sbk = (k == 0) ? 0.0 : off[k - 1];
    const double pk1 = ((x - diag[k]) * pk - sbk * pkm1) / off[k];
    pkm1 = pk;
    pk = pk1;
    out[k + 1] = pk;
  }
  return out;
}

QuadRule semi_gauss_rule(const SemiBasis& basis) {
  return gauss_rule_from_recurrence(basis.recurrence, basis.mu0);
}

QuadRule semi_gauss_rule(const SemiBasis& basis, int npoints) {
  if (npoints < 1 || npoints > basis.size()) {
    throw std::invalid_argument("semi_gauss_rule truncation out of range");
  }
  TridiagonalSym head;
  head.diagonal = basis.recurrence.diagonal.head(npoints);
  head.offdiagonal = basis.recurrence.offdiagonal.head(npoints > 1 ? npoints - 1 : 0);
  return gauss_rule_from_recurrence(head, basis.mu0);
}

Eigen::MatrixXd raising_ab_from(const SemiBasis& q00, const SemiBasis& q11, int n) {
  if (q00.size() < n + 2 || q11.size() < n) {
    throw std::invalid_argument("raising_ab_from: bases too small for requested size");
  }
  QuadRule rule = semi_gauss_rule(q00, n + 2);
  Eigen::MatrixXd Vl(rule.size(), n), Vu(rule.size(), n);
  Eigen::VectorXd fw(rule.size());
  for (Eigen::Index q = 0; q < rule.size(); ++q) {
    Vl.row(q) = eval_semi_all(q00, n - 1, rule.nodes[q]).transpose();
    Vu.row(q) = eval_semi_all(q11, n - 1, rule.nodes[q]).transpose();
    fw[q] = rule.nodes[q] * (1.0 - rule.nodes[q]) * rule.weights[q];
  }
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = j; i <= std::min(j + 2, n - 1); ++i) {
      R(i, j) = (fw.array() * Vl.col(i).array() * Vu.col(j).array()).sum();
    }
  }
  return R;
}

namespace {

// Connection coefficients R_{ij} = <Q^{lower}_i, factor * Q^{upper}_j> against
// (t-x)^m using the Gauss rule of the (0,0,m) family, whose nodes live where
// the measure has mass (evaluating the polynomials elsewhere overflows for
// large m).
Eigen::MatrixXd connection_matrix(double t, int m, int n, double ua, double ub,
                                  const std::function<double(double)>& factor,
                                  int band_lo) {
  SemiParams lower{t, 0.0, 0.0, static_cast<double>(m)};
  SemiParams upper{t, ua, ub, static_cast<double>(m)};
  SemiBasis qlow = build_semibasis(lower, n + 4);
  SemiBasis qup = build_semibasis(upper, n + 4);
  QuadRule rule = semi_gauss_rule(build_semibasis(lower, n + 6));
  Eigen::MatrixXd Vl(rule.size(), n), Vu(rule.size(), n);
  Eigen::VectorXd fw(rule.size());
  for (Eigen::Index q = 0; q < rule.size(); ++q) {
    Vl.row(q) = eval_semi_all(qlow, n - 1, rule.nodes[q]).transpose();
    Vu.row(q) = eval_semi_all(qup, n - 1, rule.nodes[q]).transpose();
    fw[q] = factor(rule.nodes[q]) * rule.weights[q];
  }
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = j; i <= std::min(j + band_lo, n - 1); ++i) {
      R(i, j) = (fw.array() * Vl.col(i).array() * Vu.col(j).array()).sum();
    }
  }
  return R;
}

}  // namespace

Eigen::MatrixXd raising_ab(double t, int m, int n) {
  if (n < 1) throw std::invalid_argument("raising_ab requires n >= 1");
  return connection_matrix(t, m, n, 1.0, 1.0, [](double x) { return x * (1.0 - x); }, 2);
}

Eigen::MatrixXd raising_a(double t, int m, int n) {
  if (n < 1) throw std::invalid_argument("raising_a requires n >= 1");
  return connection_matrix(t, m, n, 1.0, 0.0, [](double x) { return x; }, 1);
}

Eigen::MatrixXd raising_b(double t, int m, int n) {
  if (n < 1) throw std::invalid_argument("raising_b requires n >= 1");
  return connection_matrix(t, m, n, 0.0, 1.0, [](double x) { return 1.0 - x; }, 1);
}

Eigen::MatrixXd raising_c(const SemiParams& params, int n) {
  params.validate();
  if (n < 1) throw std::invalid_argument("raising_c requires n >= 1");
  // Q^{(a,b,c)} = Q^{(a,b,c+1)} R, so R_{ij} = <Q^{(a,b,c+1)}_i, Q^{(a,b,c)}_j>
  // in the (c+1)-weighted inner product.  All entries are computed; tests
  // measure the observed band.
  SemiParams upper = params;
  upper.c += 1.0;
  SemiBasis qup = build_semibasis(upper, n + 4);
  SemiBasis qlow = build_semibasis(params, n + 4);
  QuadRule rule = semi_gauss_rule(build_semibasis(upper, n + 6));
  Eigen::MatrixXd Vu(rule.size(), n), Vl(rule.size(), n);
  for (Eigen::Index q = 0; q < rule.size(); ++q) {
    Vu.row(q) = eval_semi_all(qup, n - 1, rule.nodes[q]).transpose();
    Vl.row(q) = eval_semi_all(qlow, n - 1, rule.nodes[q]).transpose();
  }
  return Vu.transpose() * rule.weights.asDiagonal() * Vl;
}

}  // namespace diskfem
