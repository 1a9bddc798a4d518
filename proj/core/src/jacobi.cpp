#include "diskfem/jacobi.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "diskfem/errors.hpp"

namespace diskfem {

namespace {
constexpr double kPi = std::numbers::pi;
}

void JacobiParams::validate() const {
  if (!(a > -1.0) || !(b > -1.0)) {
    throw std::invalid_argument("Jacobi parameters require a > -1 and b > -1");
  }
}

Eigen::MatrixXd TridiagonalSym::dense() const {
  const Eigen::Index n = diagonal.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i, i) = diagonal[i];
    if (i + 1 < n) {
      out(i, i + 1) = offdiagonal[i];
      out(i + 1, i) = offdiagonal[i];
    }
  }
  return out;
}

double QuadRule::integrate(const std::function<double(double)>& f) const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
  return acc;
}

namespace {

double beta_fn(double x, double y) {
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

// Recurrence coefficients of the monic Jacobi family: x pi_k = pi_{k+1} +
// alpha_k pi_k + beta_k pi_{k-1}.
double monic_alpha(double a, double b, int k) {
  if (k == 0) return (b - a) / (a + b + 2.0);
  const double s = 2.0 * k + a + b;
  return (b * b - a * a) / (s * (s + 2.0));
}

double monic_beta(double a, double b, int k) {
  if (k == 1) {
    const double s = a + b + 2.0;
    return 4.0 * (1.0 + a) * (1.0 + b) / (s * s * (s + 1.0));
  }
  const double s = 2.0 * k + a + b;
  return 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
}

}  // namespace

TridiagonalSym jacobi_matrix(const JacobiParams& params, int n) {
  params.validate();
  if (n < 1) throw std::invalid_argument("jacobi_matrix requires n >= 1");
  TridiagonalSym X;
  X.diagonal.resize(n);
  X.offdiagonal.resize(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) X.diagonal[k] = monic_alpha(params.a, params.b, k);
  for (int k = 0; k + 1 < n; ++k) X.offdiagonal[k] = std::sqrt(monic_beta(params.a, params.b, k + 1));
  return X;
}

namespace {

// Forward orthonormal recurrence shared by value-only and value+derivative paths.
template <bool WithDerivative>
void jacobi_recurrence(const JacobiParams& params, int degree, double x, double& value,
                       double& derivative) {
  const double a = params.a;
  const double b = params.b;
  const double mu0 = normalization_p(params);
  double pkm1 = 0.0, pk = 1.0 / std::sqrt(mu0);
  double dkm1 = 0.0, dk = 0.0;
  if (degree == 0) {
    value = pk;
    derivative = 0.0;
    return;
  }
  for (int k = 0; k < degree; ++k) {
    const double alpha = monic_alpha(a, b, k);
    const double sbk = (k == 0) ? 0.0 : std::sqrt(monic_beta(a, b, k));
    const double sbk1 = std::sqrt(monic_beta(a, b, k + 1));
    const double pk1 = ((x - alpha) * pk - sbk * pkm1) / sbk1;
    if constexpr (WithDerivative) {
      const double dk1 = ((x - alpha) * dk + pk - sbk * dkm1) / sbk1;
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

double eval_jacobi(const JacobiParams& params, int degree, double x) {
  params.validate();
  if (degree < 0) throw std::invalid_argument("eval_jacobi requires degree >= 0");
  double v, d;
  jacobi_recurrence<false>(params, degree, x, v, d);
  return v;
}

void eval_jacobi_with_derivative(const JacobiParams& params, int degree, double x,
                                 double& value, double& derivative) {
  params.validate();
  if (degree < 0) throw std::invalid_argument("eval_jacobi requires degree >= 0");
  jacobi_recurrence<true>(params, degree, x, value, derivative);
}

Eigen::VectorXd eval_jacobi_all(const JacobiParams& params, int nmax, double x) {
  params.validate();
  Eigen::VectorXd out(nmax + 1);
  const double mu0 = normalization_p(params);
  double pkm1 = 0.0, pk = 1.0 / std::sqrt(mu0);
  out[0] = pk;
  for (int k = 0; k < nmax; ++k) {
    const double alpha = monic_alpha(params.a, params.b, k);
    const double sbk = (k == 0) ? 0.0 : std::sqrt(monic_beta(params.a, params.b, k));
    const double sbk1 = std::sqrt(monic_beta(params.a, params.b, k + 1));
    const double pk1 = ((x - alpha) * pk - sbk * pkm1) / sbk1;
    pkm1 = pk;
    pk = pk1;
    out[k + 1] = pk;
  }
  return out;
}

QuadRule gauss_rule_from_recurrence(const TridiagonalSym& recurrence, double mu0) {
  const Eigen::Index n = recurrence.size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(recurrence.diagonal, recurrence.offdiagonal);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Golub-Welsch eigensolve failed");
  }
  QuadRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double q0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * q0 * q0;
  }
  return rule;
}

QuadRule gauss_rule(const JacobiParams& params, int n) {
  if (n < 1) throw std::invalid_argument("gauss_rule requires n >= 1");
  return gauss_rule_from_recurrence(jacobi_matrix(params, n), normalization_p(params));
}

double normalization_p(const JacobiParams& params) {
  params.validate();
  return std::pow(2.0, params.a + params.b + 1.0) * beta_fn(params.a + 1.0, params.b + 1.0);
}

namespace detail {

double normalization_q_series(double t, double a, double b, double c, bool& ok) {
  // q = t^c B(1+a, 1+b) 2F1(1+a, -c; 2+a+b; 1/t)
  const double z = 1.0 / t;
  double term = 1.0;
  double sum = 1.0;
  double peak = 1.0;
  ok = false;
  const bool terminating = (c >= 0.0) && (std::floor(c) == c);
  const int kmax = terminating ? static_cast<int>(c) : 500;
  for (int k = 0; k < kmax; ++k) {
    term *= (1.0 + a + k) * (-c + k) / ((2.0 + a + b + k) * (k + 1.0)) * z;
    sum += term;
    peak = std::max(peak, std::abs(term));
    if (!terminating && std::abs(term) < 1e-17 * std::abs(sum)) {
      ok = true;
      break;
    }
  }
  if (terminating) ok = true;
  // For positive integer c the series alternates; reject it when cancellation
  // would eat more than ~4 of the 16 available digits.
  if (std::abs(sum) < 1e-12 * peak) ok = false;
  return std::pow(t, c) * beta_fn(1.0 + a, 1.0 + b) * sum;
}

double normalization_q_quadrature(double t, double a, double b, double c) {
  // Gauss rule for x^a (1-x)^b on (0,1) (Jacobi (b,a) mapped), with the smooth
  // remainder (t-x)^c folded into the integrand.  (t-x)^c is analytic on [0,1]
  // for t > 1; 160 points covers every c used in this project to ~1e-15.
  const int npts = 160;
  QuadRule base = gauss_rule(JacobiParams{b, a}, npts);
  double acc = 0.0;
  const double scale = std::pow(2.0, -(a + b + 1.0));
  for (Eigen::Index i = 0; i < base.size(); ++i) {
    const double x = 0.5 * (1.0 + base.nodes[i]);
    acc += scale * base.weights[i] * std::pow(t - x, c);
  }
  return acc;
}

double jacobi_weight_moment(const JacobiParams& params, int k) {
  // int x^k (1-x)^a (1+x)^b dx = 2^{a+b+1} sum_j C(k,j) 2^j (-1)^{k-j} B(b+1+j, a+1)
  // after x = 2y - 1.
  double sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
    sum += binom * std::pow(2.0, j) * sign * beta_fn(params.b + 1.0 + j, params.a + 1.0);
    binom *= static_cast<double>(k - j) / (j + 1.0);
  }
  return std::pow(2.0, params.a + params.b + 1.0) * sum;
}

}  // namespace detail

QNormPath normalization_q_path(double t, double a, double b, double c) {
  if (!(t > 1.0)) throw std::invalid_argument("normalization_q requires t > 1");
  if (1.0 / t < 0.9) {
    bool ok = false;
    (void)detail::normalization_q_series(t, a, b, c, ok);
    if (ok) return QNormPath::HypergeometricSeries;
  }
  return QNormPath::Quadrature;
}

double normalization_q(double t, double a, double b, double c) {
  if (!(t > 1.0)) throw std::invalid_argument("normalization_q requires t > 1");
  if (!(a > -1.0) || !(b > -1.0)) throw std::invalid_argument("normalization_q requires a,b > -1");
  if (1.0 / t < 0.9) {
    bool ok = false;
    const double value = detail::normalization_q_series(t, a, b, c, ok);
    if (ok) return value;
  }
  return detail::normalization_q_quadrature(t, a, b, c);
}

Eigen::MatrixXd raising_jacobi_a(int m, int n) {
  if (m < 0 || n < 1) throw std::invalid_argument("raising_jacobi_a requires m >= 0, n >= 1");
  const JacobiParams p0{0.0, static_cast<double>(m)};
  const JacobiParams p1{1.0, static_cast<double>(m)};
  // R_{ij} = int P^{(0,m)}_i P^{(1,m)}_j (1-x)(1+x)^m dx; integrand degree
  // i + j + 1 <= 2n, so n + 2 Gauss points in the (0,m) weight are exact.
  QuadRule rule = gauss_rule(p0, n + 2);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd V0(rule.size(), n), V1(rule.size(), n);
  for (Eigen::Index q = 0; q < rule.size(); ++q) {
    V0.row(q) = eval_jacobi_all(p0, n - 1, rule.nodes[q]).transpose();
    V1.row(q) = eval_jacobi_all(p1, n - 1, rule.nodes[q]).transpose();
  }
  for (int j = 0; j < n; ++j) {
    for (int i = j; i <= std::min(j + 1, n - 1); ++i) {
      double acc = 0.0;
      for (Eigen::Index q = 0; q < rule.size(); ++q) {
        acc += rule.weights[q] * (1.0 - rule.nodes[q]) * V0(q, i) * V1(q, j);
      }
      R(i, j) = acc;
    }
  }
  return R;
}

ChebCoeffs cheb_expand(const std::function<double(double)>& f, double lo, double hi, int N) {
  if (!(lo < hi)) throw std::invalid_argument("cheb_expand requires lo < hi");
  if (N < 0) throw std::invalid_argument("cheb_expand requires N >= 0");
  ChebCoeffs out;
  out.lo = lo;
  out.hi = hi;
  out.coeffs.resize(N + 1);
  if (N == 0) {
    out.coeffs[0] = f(0.5 * (lo + hi));
    return out;
  }
  Eigen::VectorXd fv(N + 1);
  for (int k = 0; k <= N; ++k) {
    const double xk = std::cos(k * kPi / N);  // second-kind points
    fv[k] = f(0.5 * (lo + hi) + 0.5 * (hi - lo) * xk);
  }
  for (int j = 0; j <= N; ++j) {
    double acc = 0.5 * (fv[0] + ((j % 2 == 0) ? fv[N] : -fv[N]));
    for (int k = 1; k < N; ++k) acc += fv[k] * std::cos(j * k * kPi / N);
    const double scale = (j == 0 || j == N) ? 1.0 / N : 2.0 / N;
    out.coeffs[j] = scale * acc;
  }
  return out;
}

Eigen::MatrixXd clenshaw_matrix(const ChebCoeffs& coeffs, const Eigen::MatrixXd& J) {
  const Eigen::Index n = J.rows();
  const Eigen::Index N = coeffs.coeffs.size() - 1;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  // Affine map of J onto [-1,1].
  const Eigen::MatrixXd S = (2.0 * J - (coeffs.lo + coeffs.hi) * I) / (coeffs.hi - coeffs.lo);
  Eigen::MatrixXd bk1 = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd bk2 = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = N; k >= 1; --k) {
    Eigen::MatrixXd bk = 2.0 * S * bk1 - bk2 + coeffs.coeffs[k] * I;
    bk2.swap(bk1);
    bk1.swap(bk);
  }
  return S * bk1 - bk2 + coeffs.coeffs[0] * I;
}

}  // namespace diskfem
