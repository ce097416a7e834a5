#include "hqr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hqr/gauss.hpp"
#include "hqr/kernels.hpp"
#include "hqr/parallel.hpp"

namespace hqr {
namespace {

// Runs value(level) for level = 0, 1, ... until two successive levels agree.
template <class F>
IntegralResult refine_levels(F&& value, const QuadratureConfig& cfg, const char* what) {
  IntegralResult r;
  double prev = value(0);
  for (int k = 1; k <= std::max(1, cfg.refinement_cap); ++k) {
    const double cur = value(k);
    r.value = cur;
    r.abs_error_estimate = std::abs(cur - prev);
    r.refinements_used = k;
    if (r.abs_error_estimate <= cfg.tol * std::abs(cur)) return r;
    if (!cfg.strict) {
      r.converged = false;
      return r;
    }
    prev = cur;
  }
  if (!std::isfinite(r.value) || r.abs_error_estimate > cfg.tol * std::abs(r.value)) {
    std::ostringstream os;
    os << what << " did not reach relative tolerance " << cfg.tol << " after "
       << r.refinements_used << " doublings (change " << r.abs_error_estimate << ")";
    fail(ErrorKind::Accuracy, os.str());
  }
  return r;
}

void check_config(const QuadratureConfig& cfg) {
  require(cfg.radial >= 1 && cfg.angular >= 1, "node counts must be positive");
  require(cfg.refinement_cap >= 0, "refinement cap must be nonnegative");
  require(cfg.tol > 0.0, "tolerance must be positive");
}

int scaled(int n, int k) { return n << k; }

}  // namespace

QuadratureGrid QuadratureGrid::make(int radial, int angular, double alpha) {
  require(alpha > -1.0, "Jacobi exponent must exceed -1");
  require(radial >= 1 && angular >= 1, "node counts must be positive");
  // (1 - x)^alpha on [-1, 1] with t = (1 + x)/2 gives (1 - t)^alpha = 2^-alpha (1 - x)^alpha.
  const GaussRule& gj = gauss_jacobi(radial, alpha, 0.0);
  QuadratureGrid g;
  g.angular_count = angular;
  g.alpha_absorbed = alpha;
  g.radial_nodes.resize(gj.size());
  g.radial_weights.resize(gj.size());
  const double scale = std::pow(2.0, -alpha - 1.0);
  for (std::size_t i = 0; i < gj.size(); ++i) {
    g.radial_nodes[i] = 0.5 * (1.0 + gj.nodes[i]);
    g.radial_weights[i] = gj.weights[i] * scale;
  }
  return g;
}

void QuadratureGrid::nodes(std::vector<Complex>& z, std::vector<double>& w) const {
  const std::size_t m = static_cast<std::size_t>(angular_count);
  z.resize(size());
  w.resize(size());
  std::vector<Complex> dirs(m);
  for (std::size_t k = 0; k < m; ++k) dirs[k] = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(m));
  const double ang = kPi / static_cast<double>(m);
  for (std::size_t i = 0; i < radial_nodes.size(); ++i) {
    const double r = std::sqrt(radial_nodes[i]);
    const double wi = radial_weights[i] * ang;
    for (std::size_t k = 0; k < m; ++k) {
      z[i * m + k] = r * dirs[k];
      w[i * m + k] = wi;
    }
  }
}

double apply_grid(const QuadratureGrid& grid, const DiskIntegrand& f) {
  const std::size_t m = static_cast<std::size_t>(grid.angular_count);
  const std::size_t nr = grid.radial_nodes.size();
  std::vector<double> rows(nr);
  parallel_for(nr, [&](std::size_t i) {
    const double r = std::sqrt(grid.radial_nodes[i]);
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      s += f(std::polar(r, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(m)));
    }
    rows[i] = s * grid.radial_weights[i];
  });
  double total = 0.0;
  for (double v : rows) total += v;
  return total * kPi / static_cast<double>(m);
}

IntegralResult disk_integral_alpha(const DiskIntegrand& f, double alpha, const QuadratureConfig& cfg) {
  require(alpha > -1.0, "alpha must exceed -1");
  check_config(cfg);
  auto value = [&](int k) {
    return apply_grid(QuadratureGrid::make(scaled(cfg.radial, k), scaled(cfg.angular, k), alpha), f);
  };
  return refine_levels(value, cfg, "alpha-weighted disk integral");
}

void validate_mobius_exponents(double q, double s) {
  require(q > -2.0, "q must exceed -2");
  require(s > 0.0, "s must be positive");
  require(q + s > -1.0, "q + s must exceed -1");
}

MobiusWeightTable::MobiusWeightTable(std::span<const double> x, std::span<const double> y,
                                     std::span<const double> c, double s)
    : s_(s) {
  x_.reserve(c.size());
  y_.reserve(c.size());
  c_.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    x_.push_back(x[i]);
    y_.push_back(y[i]);
    c_.push_back(c[i]);
  }
}

MobiusWeightTable MobiusWeightTable::from_values(const QuadratureGrid& grid,
                                                 std::span<const double> xv, double s) {
  std::vector<Complex> z;
  std::vector<double> w;
  grid.nodes(z, w);
  require(xv.size() == z.size(), "tabulated values do not match the grid");
  std::vector<double> x(z.size()), y(z.size()), c(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    x[i] = z[i].real();
    y[i] = z[i].imag();
    c[i] = xv[i] * w[i];
    if (!std::isfinite(c[i])) {
      std::ostringstream os;
      os << "integrand is not finite at z = " << z[i];
      fail(ErrorKind::Accuracy, os.str());
    }
  }
  return MobiusWeightTable(x, y, c, s);
}

MobiusWeightTable MobiusWeightTable::from_grid(const QuadratureGrid& grid, const DiskIntegrand& f,
                                               double s) {
  std::vector<Complex> z;
  std::vector<double> w;
  grid.nodes(z, w);
  std::vector<double> xv(z.size());
  const std::size_t m = static_cast<std::size_t>(grid.angular_count);
  parallel_for(grid.radial_nodes.size(), [&](std::size_t i) {
    for (std::size_t k = 0; k < m; ++k) xv[i * m + k] = f(z[i * m + k]);
  });
  return from_values(grid, xv, s);
}

double MobiusWeightTable::operator()(Complex a) const {
  const double one_minus = 1.0 - std::norm(a);
  const double sum = kernels::active().mobius_weighted_sum(x_.data(), y_.data(), c_.data(),
                                                           c_.size(), a.real(), a.imag(), s_);
  return std::pow(one_minus, s_) * sum;
}

IntegralResult disk_integral_mobius_weight(const DiskIntegrand& f, double q, double s,
                                           const MobiusMap& m, const QuadratureConfig& cfg) {
  validate_mobius_exponents(q, s);
  check_config(cfg);
  const Complex a = m.parameter();
  auto value = [&](int k) {
    const auto grid = QuadratureGrid::make(scaled(cfg.radial, k), scaled(cfg.angular, k), q + s);
    return MobiusWeightTable::from_grid(grid, f, s)(a);
  };
  return refine_levels(value, cfg, "Mobius-weighted disk integral");
}

MobiusWeightIntegrator::MobiusWeightIntegrator(DiskIntegrand x, double jacobi, double s,
                                               const QuadratureConfig& cfg)
    : x_(std::move(x)), jacobi_(jacobi), s_(s), cfg_(cfg) {
  require(jacobi > -1.0, "Jacobi exponent must exceed -1");
  check_config(cfg);
}

const MobiusWeightTable& MobiusWeightIntegrator::level(int k) const {
  std::lock_guard<std::mutex> lock(mu_);
  while (static_cast<int>(levels_.size()) <= k) {
    const int j = static_cast<int>(levels_.size());
    const auto grid = QuadratureGrid::make(scaled(cfg_.radial, j), scaled(cfg_.angular, j), jacobi_);
    levels_.push_back(std::make_unique<MobiusWeightTable>(MobiusWeightTable::from_grid(grid, x_, s_)));
  }
  return *levels_[static_cast<std::size_t>(k)];
}

IntegralResult MobiusWeightIntegrator::operator()(Complex a) const {
  auto value = [&](int k) { return level(k)(a); };
  return refine_levels(value, cfg_, "Mobius-weighted disk integral");
}

IntegralResult disk_integral_green(const DiskIntegrand& f, double q, double s, const MobiusMap& m,
                                   const QuadratureConfig& cfg) {
  require(q > -2.0, "q must exceed -2");
  require(s > 0.0, "s must be positive");
  require(q + s > -1.0, "q + s must exceed -1");
  check_config(cfg);

  const Complex a = m.parameter();
  const Complex abar = std::conj(a);
  const double pre = std::pow(1.0 - std::norm(a), q + 2.0);
  // Pulled-back integrand without the radial weights.
  auto pulled = [&](Complex zeta) {
    return f(m(zeta)) * std::pow(std::norm(1.0 - abar * zeta), -q - 2.0);
  };

  auto angular_sum = [&](double rho, int mcount) {
    double acc = 0.0;
    for (int k = 0; k < mcount; ++k) {
      acc += pulled(std::polar(rho, 2.0 * kPi * k / mcount));
    }
    return acc * 2.0 * kPi / mcount;
  };

  auto at = [&](int level, double delta) {
    const int nr = scaled(cfg.radial, level);
    const int mc = scaled(cfg.angular, level);
    const double d2 = delta * delta;

    // |zeta| in [delta, 1]: Gauss-Jacobi in t absorbing (1 - t)^(q + s).
    const GaussRule& gj = gauss_jacobi(nr, q + s, 0.0);
    const double span = 1.0 - d2;
    std::vector<double> rows(gj.size());
    parallel_for(gj.size(), [&](std::size_t i) {
      const double one_m_t = 0.5 * span * (1.0 - gj.nodes[i]);
      const double t = 1.0 - one_m_t;
      const double ell = -0.5 * std::log1p(-one_m_t) / one_m_t;
      rows[i] = gj.weights[i] * std::pow(ell, s) * angular_sum(std::sqrt(t), mc);
    });
    double outer = 0.0;
    for (double v : rows) outer += v;
    // int_{d2}^{1} (1-t)^{q+s} phi dt = (span/2)^{q+s+1} sum w_i phi(t_i); dA = (1/2) dt dtheta.
    outer *= 0.5 * std::pow(0.5 * span, q + s + 1.0);

    // |zeta| < delta: rho = delta e^{-u}, rho drho = delta^2 e^{-2u} du.
    const GaussRule& gl = gauss_legendre(8);
    constexpr int kPanels = 30;
    const double log_delta = std::log(delta);
    std::vector<double> cap_rows(kPanels * gl.size());
    parallel_for(cap_rows.size(), [&](std::size_t idx) {
      const std::size_t p = idx / gl.size(), i = idx % gl.size();
      const double u = static_cast<double>(p) + 0.5 * (1.0 + gl.nodes[i]);
      const double rho = delta * std::exp(-u);
      const double wt = 0.5 * gl.weights[i] * d2 * std::exp(-2.0 * u) *
                        std::pow(u - log_delta, s) * std::pow(1.0 - rho * rho, q);
      cap_rows[idx] = wt * angular_sum(rho, mc);
    });
    double cap = 0.0;
    for (double v : cap_rows) cap += v;
    return pre * (outer + cap);
  };

  // Split radius: halve until the split no longer moves the result.
  double delta = 0.5;
  double prev = at(0, delta);
  for (int h = 0; h < 6; ++h) {
    const double cur = at(0, 0.5 * delta);
    const bool stable = std::abs(cur - prev) <= cfg.tol * std::abs(cur);
    delta *= 0.5;
    prev = cur;
    if (stable) break;
  }
  auto value = [&](int k) { return k == 0 ? prev : at(k, delta); };
  return refine_levels(value, cfg, "Green-weighted disk integral");
}

GradedMesh::GradedMesh(int levels, int nodes_per_panel, int min_angular, int angular_per_level) {
  require(levels >= 1 && levels <= 30, "graded mesh levels must be in [1, 30]");
  require(nodes_per_panel >= 1 && min_angular >= 1 && angular_per_level >= 1,
          "graded mesh node counts must be positive");
  const GaussRule& gl = gauss_legendre(nodes_per_panel);
  double r_prev = 0.0;
  for (int j = 1; j <= levels; ++j) {
    Panel p;
    p.r_inner = r_prev;
    p.r_outer = radius(j);
    p.angular = std::max(min_angular, angular_per_level << j);
    const double t0 = p.r_inner * p.r_inner, t1 = p.r_outer * p.r_outer;
    const double half = 0.5 * (t1 - t0);
    const std::size_t m = static_cast<std::size_t>(p.angular);
    const double ang = kPi / static_cast<double>(m);
    std::vector<Complex> dirs(m);
    for (std::size_t k = 0; k < m; ++k) dirs[k] = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(m));
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const double t = t0 + half * (1.0 + gl.nodes[i]);
      const double r = std::sqrt(t);
      const double w = gl.weights[i] * half * ang;
      for (std::size_t k = 0; k < m; ++k) {
        p.x.push_back(r * dirs[k].real());
        p.y.push_back(r * dirs[k].imag());
        p.t.push_back(t);
        p.w.push_back(w);
      }
    }
    panels_.push_back(std::move(p));
    r_prev = radius(j);
  }
}

std::size_t GradedMesh::size() const noexcept {
  std::size_t n = 0;
  for (const auto& p : panels_) n += p.w.size();
  return n;
}

TruncatedMobiusTable::TruncatedMobiusTable(const GradedMesh& mesh,
                                           const std::vector<std::vector<double>>& xv, double q,
                                           double s)
    : s_(s) {
  validate_mobius_exponents(q, s);
  require(xv.size() == mesh.panels().size(), "tabulated values do not match the mesh");
  panels_.reserve(xv.size());
  for (std::size_t j = 0; j < xv.size(); ++j) {
    const auto& p = mesh.panels()[j];
    require(xv[j].size() == p.w.size(), "tabulated values do not match the panel");
    std::vector<double> c(p.w.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      c[i] = xv[j][i] * p.w[i] * std::pow(1.0 - p.t[i], q + s);
    }
    panels_.emplace_back(p.x, p.y, c, s);
  }
}

std::vector<double> TruncatedMobiusTable::cumulative(Complex a) const {
  std::vector<double> out(panels_.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < panels_.size(); ++j) {
    acc += panels_[j](a);
    out[j] = acc;
  }
  return out;
}

}  // namespace hqr
