#pragma once

#include <vector>

namespace hqr {

/// Nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Gauss-Jacobi rule for the weight (1 - x)^alpha (1 + x)^beta, alpha, beta > -1.
/// Nodes from the Jacobi matrix eigenvalues, polished by Newton steps on
/// P_n^{(alpha, beta)}; weights from the closed form. Rules are cached and the
/// returned reference stays valid for the life of the process.
const GaussRule& gauss_jacobi(int n, double alpha, double beta);

inline const GaussRule& gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

/// Uncached construction, for tests.
GaussRule build_gauss_jacobi(int n, double alpha, double beta);

}  // namespace hqr
