#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "hqr/core.hpp"
#include "hqr/mobius.hpp"

namespace hqr {

struct QuadratureConfig {
  int radial = 128;
  int angular = 256;
  int refinement_cap = 4;
  double tol = 1e-8;
  /// Throw an accuracy error when the cap is reached without meeting tol.
  /// When false, the result carries converged = false instead.
  bool strict = true;
};

/// Tensor rule on the disk: Gauss-Jacobi in t = r^2 for the weight
/// (1 - t)^alpha_absorbed, times an M-point trapezoid in theta starting at 0.
/// Radial weights integrate against (1 - t)^alpha dt on [0, 1], so they sum to
/// 1/(alpha + 1); the area element is dA = (1/2) dt dtheta.
struct QuadratureGrid {
  std::vector<double> radial_nodes;
  std::vector<double> radial_weights;
  int angular_count = 0;
  double alpha_absorbed = 0.0;

  static QuadratureGrid make(int radial, int angular, double alpha);

  std::size_t size() const noexcept { return radial_nodes.size() * static_cast<std::size_t>(angular_count); }
  QuadratureGrid doubled() const { return make(2 * static_cast<int>(radial_nodes.size()), 2 * angular_count, alpha_absorbed); }

  /// Nodes in row-major order (radial index outer), with the full area weight
  /// w_t * pi / M attached, so sum_i weight_i * phi(z_i) ~ int phi (1-|z|^2)^alpha dA.
  void nodes(std::vector<Complex>& z, std::vector<double>& w) const;
};

struct IntegralResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int refinements_used = 0;
  bool converged = true;
};

using DiskIntegrand = std::function<double(Complex)>;

/// One application of a fixed grid, no refinement.
double apply_grid(const QuadratureGrid& grid, const DiskIntegrand& f);

/// int_D f(z) (1 - |z|^2)^alpha dA(z) with node-count doubling.
IntegralResult disk_integral_alpha(const DiskIntegrand& f, double alpha,
                                   const QuadratureConfig& cfg = {});

/// int_D f(z) (1 - |z|^2)^q (1 - |sigma_a(z)|^2)^s dA(z).
IntegralResult disk_integral_mobius_weight(const DiskIntegrand& f, double q, double s,
                                           const MobiusMap& m, const QuadratureConfig& cfg = {});

/// int_D f(z) (1 - |z|^2)^q g(z, a)^s dA(z), Green weight, via the pull-back
/// z = sigma_a(zeta) and a log-substituted cap |zeta| < delta.
IntegralResult disk_integral_green(const DiskIntegrand& f, double q, double s, const MobiusMap& m,
                                   const QuadratureConfig& cfg = {});

void validate_mobius_exponents(double q, double s);

/// Mobius-weighted integrals of one tabulated integrand X for many a:
///   I(a) = (1 - |a|^2)^s sum_i c_i |1 - conj(a) z_i|^{-2s},  c_i = X(z_i) w_i,
/// where the rule absorbs (1 - t)^{jacobi}. With jacobi = q + s this is
/// int X (1-|z|^2)^q (1-|sigma_a|^2)^s dA.
class MobiusWeightTable {
 public:
  /// Raw node coordinates and coefficients c_i; zero coefficients are dropped.
  MobiusWeightTable(std::span<const double> x, std::span<const double> y,
                    std::span<const double> c, double s);

  /// Tabulates X over the grid, in parallel over radial rows.
  static MobiusWeightTable from_grid(const QuadratureGrid& grid, const DiskIntegrand& x, double s);
  /// Precomputed X values in QuadratureGrid::nodes order.
  static MobiusWeightTable from_values(const QuadratureGrid& grid, std::span<const double> x_values,
                                       double s);

  double operator()(Complex a) const;
  std::size_t active_nodes() const noexcept { return c_.size(); }
  double exponent() const noexcept { return s_; }

 private:
  std::vector<double> x_, y_, c_;
  double s_;
};

/// I(a) on a base grid and its doubling. value is the fine result,
/// error the difference. Strict configs add levels on demand up to the cap.
class MobiusWeightIntegrator {
 public:
  MobiusWeightIntegrator(DiskIntegrand x, double jacobi, double s, const QuadratureConfig& cfg);

  IntegralResult operator()(Complex a) const;
  const QuadratureConfig& config() const noexcept { return cfg_; }

 private:
  const MobiusWeightTable& level(int k) const;

  DiskIntegrand x_;
  double jacobi_, s_;
  QuadratureConfig cfg_;
  mutable std::mutex mu_;
  mutable std::vector<std::unique_ptr<MobiusWeightTable>> levels_;
};

/// Annular panels [R_{j-1}, R_j], R_j = 1 - 2^{-j}, j = 1..J, with Gauss-
/// Legendre nodes in t = r^2 and nested angular counts. Partial sums over the
/// first j panels give integrals truncated to |z| <= R_j.
class GradedMesh {
 public:
  struct Panel {
    double r_inner, r_outer;
    int angular;
    std::vector<double> x, y, t, w;  // w includes dA and the angular factor
  };

  GradedMesh(int levels, int nodes_per_panel = 12, int min_angular = 256, int angular_per_level = 16);

  const std::vector<Panel>& panels() const noexcept { return panels_; }
  int levels() const noexcept { return static_cast<int>(panels_.size()); }
  std::size_t size() const noexcept;
  double radius(int j) const { return 1.0 - std::ldexp(1.0, -j); }

 private:
  std::vector<Panel> panels_;
};

/// Truncated Mobius-weight integrals on a graded mesh: for each a, the
/// cumulative values int_{|z| <= R_j} X (1-|z|^2)^q (1-|sigma_a|^2)^s dA.
class TruncatedMobiusTable {
 public:
  /// x_values[j] holds X at the nodes of panel j.
  TruncatedMobiusTable(const GradedMesh& mesh, const std::vector<std::vector<double>>& x_values,
                       double q, double s);

  std::vector<double> cumulative(Complex a) const;

 private:
  std::vector<MobiusWeightTable> panels_;
  double s_;
};

}  // namespace hqr
