#include "hqr/gauss.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "hqr/core.hpp"

namespace hqr {
namespace {

// Extended precision keeps 1 - x accurate for nodes clustered at the endpoints.
using Real = long double;

struct JacobiValue {
  Real p;       // P_n(x)
  Real p_prev;  // P_{n-1}(x)
};

JacobiValue jacobi_eval(int n, Real a, Real b, Real x) {
  Real p0 = 1.0L;
  if (n == 0) return {p0, 0.0L};
  Real p1 = (a + 1.0L) + 0.5L * (a + b + 2.0L) * (x - 1.0L);
  for (int k = 2; k <= n; ++k) {
    const Real c = 2.0L * k + a + b;
    const Real num1 = (c - 1.0L) * (c * (c - 2.0L) * x + a * a - b * b);
    const Real num2 = 2.0L * (k + a - 1.0L) * (k + b - 1.0L) * c;
    const Real den = 2.0L * k * (k + a + b) * (c - 2.0L);
    const Real p2 = (num1 * p1 - num2 * p0) / den;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

// P_n'(x) (1 - x^2), which stays finite at the endpoints.
Real jacobi_deriv_scaled(int n, Real a, Real b, Real x, const JacobiValue& v) {
  const Real c = 2.0L * n + a + b;
  return (n * (a - b - c * x) * v.p + 2.0L * (n + a) * (n + b) * v.p_prev) / c;
}

}  // namespace

GaussRule build_gauss_jacobi(int n, double alpha, double beta) {
  require(n >= 1, "Gauss rule needs at least one node");
  require(alpha > -1.0 && beta > -1.0, "Jacobi exponents must exceed -1");
  const double a = alpha, b = beta, ab = alpha + beta;

  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));
  for (int k = 0; k < n; ++k) {
    const double c = 2.0 * k + ab;
    if (k == 0) {
      diag[k] = (b - a) / (ab + 2.0);
    } else {
      diag[k] = (b * b - a * a) / (c * (c + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    const double c = 2.0 * k + ab;
    const double num = 4.0 * k * (k + a) * (k + b) * (k + ab);
    const double den = c * c * (c + 1.0) * (c - 1.0);
    sub[k - 1] = std::sqrt(num / den);
  }

  std::vector<double> x(static_cast<std::size_t>(n));
  if (n == 1) {
    x[0] = diag[0];
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
  }

  const Real la = a, lb = b;
  const Real log_c = (la + lb + 1.0L) * std::log(2.0L) + std::lgamma(n + la + 1.0L) +
                     std::lgamma(n + lb + 1.0L) - std::lgamma(n + la + lb + 1.0L) -
                     std::lgamma(n + 1.0L);
  const Real cst = std::exp(log_c);

  GaussRule rule;
  rule.nodes.resize(x.size());
  rule.weights.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    Real xi = x[i];
    for (int it = 0; it < 4; ++it) {
      const JacobiValue v = jacobi_eval(n, la, lb, xi);
      const Real one_m_x2 = (1.0L - xi) * (1.0L + xi);
      const Real d = jacobi_deriv_scaled(n, la, lb, xi, v) / one_m_x2;
      const Real step = v.p / d;
      if (!std::isfinite(static_cast<double>(step))) break;
      xi -= step;
      if (std::abs(step) < 1e-19L) break;
    }
    const JacobiValue v = jacobi_eval(n, la, lb, xi);
    const Real one_m_x2 = (1.0L - xi) * (1.0L + xi);
    const Real ds = jacobi_deriv_scaled(n, la, lb, xi, v);
    rule.nodes[i] = static_cast<double>(xi);
    rule.weights[i] = static_cast<double>(cst * one_m_x2 / (ds * ds));
  }
  return rule;
}

const GaussRule& gauss_jacobi(int n, double alpha, double beta) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, alpha, beta}];
  if (!slot) slot = std::make_unique<GaussRule>(build_gauss_jacobi(n, alpha, beta));
  return *slot;
}

}  // namespace hqr
