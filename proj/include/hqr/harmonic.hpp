#pragma once

#include <span>
#include <string>
#include <vector>

#include "hqr/analytic.hpp"
#include "hqr/core.hpp"
#include "hqr/mobius.hpp"

namespace hqr {

/// f = h + conj(g) with g(0) = 0.
class HarmonicMap {
 public:
  /// Requires |g(0)| <= 1e-12.
  HarmonicMap(AnalyticFn h, AnalyticFn g, std::string label = {});

  /// Moves g(0) into h so that the invariant holds: h + conj(g(0)), g - g(0).
  static HarmonicMap normalized(const AnalyticFn& h, const AnalyticFn& g, std::string label = {});
  static HarmonicMap analytic(const AnalyticFn& h, std::string label = {});

  const AnalyticFn& h() const noexcept { return h_; }
  const AnalyticFn& g() const noexcept { return g_; }
  const std::string& label() const noexcept { return label_; }

  Complex value(Complex z) const { return h_.value(z) + std::conj(g_.value(z)); }

 private:
  AnalyticFn h_, g_;
  std::string label_;
};

struct WirtingerData {
  Complex fz;
  Complex fzbar;
  double lambda_big = 0.0;
  double lambda_small = 0.0;
  double jacobian = 0.0;
};

WirtingerData wirtinger(const HarmonicMap& f, Complex z);
WirtingerData wirtinger_from(Complex hprime, Complex gprime);

/// sqrt(|f_x|^2 + |f_y|^2) with f_x = f_z + f_zbar, f_y = i (f_z - f_zbar).
double gradient_norm(const WirtingerData& w);

struct QrParams {
  double K = 1.0;
  double Kprime = 0.0;
  double k = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;

  static QrParams make(double K, double Kprime = 0.0);
  /// K = (1 + k) / (1 - k).
  static double K_from_k(double k);
};

/// F = h + g and G = h - g, so that u = Re F and v = Im G.
struct ConjugateParts {
  AnalyticFn F;
  AnalyticFn G;
};

ConjugateParts conjugate_parts(const HarmonicMap& f);

/// u = Re f as the harmonic map h = g = F/2 (shifted to keep g(0) = 0).
HarmonicMap real_part_map(const HarmonicMap& f);
/// v = Im f as h = g = -i G / 2.
HarmonicMap imag_part_map(const HarmonicMap& f);

struct AngularRadial {
  Complex f_theta;
  Complex b_f_b;
};

/// Both values are 0 at z = 0.
AngularRadial angular_radial(const HarmonicMap& f, Complex z);

struct QrSampling {
  int radial = 48;
  int angular = 96;
  double r_max = 0.95;
  /// Local grid side used once around the maximiser of D_f.
  int refine = 8;
};

struct QrEstimate {
  double K_est = 1.0;
  Complex K_argmax{0.0, 0.0};
  /// max of Lambda^2 - K J for the caller's K.
  double K_for_residual = 1.0;
  double Kprime_residual = 0.0;
  /// Some sample had lambda = 0 < Lambda.
  bool unbounded_dilatation = false;
  double min_jacobian = 0.0;
  std::size_t samples = 0;
  QrSampling grid;
};

/// Samples D_f = Lambda / lambda over a polar grid. With pure_K set, an
/// unbounded dilatation raises a non-quasiregular error.
QrEstimate estimate_quasiregularity(const HarmonicMap& f, const QrSampling& grid = {},
                                    double K_for_residual = 1.0, bool pure_K = false);

/// Sample points of a polar grid, radii j / N * r_max for j = 1..N.
std::vector<Complex> polar_samples(const QrSampling& grid);

struct MarginReport {
  double min_margin = 0.0;
  Complex argmin{0.0, 0.0};
  std::size_t samples = 0;
};

/// min over samples of K |F'| + sqrt(K') - |G'|. Throws a hypothesis
/// violation below -1e-10.
MarginReport pointwise_conjugate_bound(const HarmonicMap& f, const QrParams& params,
                                       std::span<const Complex> samples);

}  // namespace hqr
