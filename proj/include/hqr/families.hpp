#pragma once

#include <span>
#include <string>
#include <vector>

#include "hqr/analytic.hpp"
#include "hqr/harmonic.hpp"

namespace hqr {

struct ShearSpec {
  AnalyticFn phi;
  AnalyticFn w;
  /// Rescale to h(0) = 0, h'(0) = 1, g(0) = 0.
  bool normalize = false;
};

/// Sampling used to check sup|w| < 1 and 1 - w != 0 before construction.
inline QrSampling dilatation_check_grid() { return {64, 128, 0.999, 0}; }

/// sup |w| over the check grid.
double sampled_sup_modulus(const AnalyticFn& w, const QrSampling& grid = dilatation_check_grid());

/// h = int h', g = int w h' (both vanishing at 0). Throws a non-quasiregular
/// error when sampled sup|w| >= 1.
HarmonicMap from_dilatation(const AnalyticFn& hprime, const AnalyticFn& w);

/// h' = phi' / (1 - w), g' = w phi' / (1 - w), h(0) = phi(0), g(0) = 0, so
/// h - g = phi. With normalize, (h - h(0)) / h'(0) and (g - g(0)) / conj(h'(0)).
/// Univalence is not checked; outputs are S_H(K) candidates only.
HarmonicMap shear(const ShearSpec& spec);

/// z + sign k conj(z).
HarmonicMap affine_extremal(double k, int sign);

/// z + conj(z): Lambda = 2, J = 0, a (1, 4)-quasiregular map.
HarmonicMap kkprime_example();

/// h = z, g = k z + eps z^2. For k + 2 eps > 1 the dilatation reaches 1
/// inside the disk, so the map is (K, K') but not K-quasiregular.
HarmonicMap perturbed_affine(double k, double eps);

/// Smallest K' with Lambda^2 <= K J + K' on a fine grid reaching r = 1 - 1e-9,
/// times (1 + margin). Meant for polynomial maps whose sup sits on the circle.
double sampled_kprime(const HarmonicMap& f, double K, double margin = 1e-6);

struct OrderModel {
  double K = 1.0;
  double alpha_K = 2.0;

  /// alpha_K = (3K + 1) / (K + 1) unless overridden.
  static OrderModel conjectured(double K);
  static OrderModel with_order(double K, double alpha_K);
};

enum class GrowthTarget { HPrime, HSecond, GPrime, GSecond, FItself };

std::string to_string(GrowthTarget t);
GrowthTarget growth_target_from(const std::string& name);

struct GrowthFit {
  double beta = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of the log fit
  std::vector<double> radii;
  std::vector<double> maxima;
  /// M(r) decreased somewhere by more than noise.
  bool non_monotone = false;
};

/// 1 - 2^{-j}, j = first..last.
std::vector<double> dyadic_radii(int first = 3, int last = 12);

/// Least squares of log M(r) against -log(1 - r^2), M(r) the max over
/// `angular` equally spaced angles starting at 0.
GrowthFit growth_exponent(const HarmonicMap& f, GrowthTarget which,
                          std::span<const double> radii, int angular = 256);

}  // namespace hqr
