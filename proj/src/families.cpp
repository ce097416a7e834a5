#include "hqr/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hqr/parallel.hpp"

namespace hqr {

double sampled_sup_modulus(const AnalyticFn& w, const QrSampling& grid) {
  const auto pts = polar_samples(grid);
  std::vector<double> m(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { m[i] = std::abs(w.value(pts[i])); });
  return *std::max_element(m.begin(), m.end());
}

namespace {

void check_dilatation(const AnalyticFn& w) {
  const double sup = sampled_sup_modulus(w);
  if (!(sup < 1.0)) {
    std::ostringstream os;
    os << "dilatation " << w.description() << " reaches modulus " << sup << " >= 1 on samples";
    fail(ErrorKind::NonQuasiregular, os.str());
  }
}

}  // namespace

HarmonicMap from_dilatation(const AnalyticFn& hprime, const AnalyticFn& w) {
  check_dilatation(w);
  const auto h = antiderivative(hprime, 0.0);
  const auto g = antiderivative(w * hprime, 0.0);
  return HarmonicMap(h, g, "dilatation(h'=" + hprime.description() + ", w=" + w.description() + ")");
}

HarmonicMap shear(const ShearSpec& spec) {
  check_dilatation(spec.w);
  const auto one_minus_w = constant(1.0) - spec.w;
  const auto dphi = derivative(spec.phi);
  const auto hprime = dphi / one_minus_w;
  const auto gprime = spec.w * hprime;
  auto h = antiderivative(hprime, spec.phi.value(0.0));
  auto g = antiderivative(gprime, 0.0);
  std::string label = "shear(phi=" + spec.phi.description() + ", w=" + spec.w.description() + ")";
  if (!spec.normalize) return HarmonicMap(h, g, label);

  const Complex c = hprime.value(0.0);
  if (c == Complex(0.0, 0.0)) fail(ErrorKind::InvalidParameter, "cannot normalize: h'(0) = 0");
  const auto hn = antiderivative((1.0 / c) * hprime, 0.0);
  const auto gn = antiderivative((1.0 / std::conj(c)) * gprime, 0.0);
  return HarmonicMap(hn, gn, "normalized " + label);
}

HarmonicMap affine_extremal(double k, int sign) {
  require(k >= 0.0 && k < 1.0, "k must lie in [0, 1)");
  require(sign == 1 || sign == -1, "sign must be +1 or -1");
  std::ostringstream os;
  os << "z " << (sign > 0 ? "+ " : "- ") << k << " conj(z)";
  return HarmonicMap(identity(), poly({0.0, sign * k}), os.str());
}

HarmonicMap kkprime_example() { return HarmonicMap(identity(), identity(), "z + conj(z)"); }

HarmonicMap perturbed_affine(double k, double eps) {
  require(k >= 0.0 && eps >= 0.0, "perturbation parameters must be nonnegative");
  std::ostringstream os;
  os << "z + conj(" << k << " z + " << eps << " z^2)";
  return HarmonicMap(identity(), poly({0.0, k, eps}), os.str());
}

double sampled_kprime(const HarmonicMap& f, double K, double margin) {
  const auto e = estimate_quasiregularity(f, {256, 256, 1.0 - 1e-9, 0}, K);
  return std::max(0.0, e.Kprime_residual) * (1.0 + margin);
}

OrderModel OrderModel::conjectured(double K) {
  require(K >= 1.0, "K must be at least 1");
  return {K, (3.0 * K + 1.0) / (K + 1.0)};
}

OrderModel OrderModel::with_order(double K, double alpha_K) {
  require(K >= 1.0, "K must be at least 1");
  require(alpha_K > 0.0, "order must be positive");
  return {K, alpha_K};
}

std::string to_string(GrowthTarget t) {
  switch (t) {
    case GrowthTarget::HPrime: return "hprime";
    case GrowthTarget::HSecond: return "hsecond";
    case GrowthTarget::GPrime: return "gprime";
    case GrowthTarget::GSecond: return "gsecond";
    case GrowthTarget::FItself: return "f";
  }
  return "?";
}

GrowthTarget growth_target_from(const std::string& name) {
  for (auto t : {GrowthTarget::HPrime, GrowthTarget::HSecond, GrowthTarget::GPrime,
                 GrowthTarget::GSecond, GrowthTarget::FItself}) {
    if (name == to_string(t)) return t;
  }
  fail(ErrorKind::InvalidParameter, "unknown growth target '" + name + "'");
}

std::vector<double> dyadic_radii(int first, int last) {
  require(first >= 0 && last >= first && last <= 50, "bad dyadic radius range");
  std::vector<double> r;
  for (int j = first; j <= last; ++j) r.push_back(1.0 - std::ldexp(1.0, -j));
  return r;
}

GrowthFit growth_exponent(const HarmonicMap& f, GrowthTarget which, std::span<const double> radii,
                          int angular) {
  require(radii.size() >= 2, "growth fit needs at least two radii");
  require(angular >= 1, "growth fit needs angular samples");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] > 0.0 && radii[i] < 1.0, "radii must lie in (0, 1)");
    if (i) require(radii[i] > radii[i - 1], "radii must increase");
  }
  const std::size_t nr = radii.size();
  std::vector<double> table(nr * static_cast<std::size_t>(angular));
  parallel_for(static_cast<std::size_t>(angular), [&](std::size_t m) {
    const Complex dir = std::polar(1.0, 2.0 * kPi * static_cast<double>(m) / angular);
    if (which == GrowthTarget::FItself) {
      std::vector<Complex> hv(nr), gv(nr);
      f.h().values_on_ray(dir, radii, hv);
      f.g().values_on_ray(dir, radii, gv);
      for (std::size_t i = 0; i < nr; ++i) table[m * nr + i] = std::abs(hv[i] + std::conj(gv[i]));
      return;
    }
    const bool use_h = which == GrowthTarget::HPrime || which == GrowthTarget::HSecond;
    const int order = (which == GrowthTarget::HSecond || which == GrowthTarget::GSecond) ? 2 : 1;
    const AnalyticFn& fn = use_h ? f.h() : f.g();
    for (std::size_t i = 0; i < nr; ++i) table[m * nr + i] = std::abs(fn.prime_jet(radii[i] * dir, order - 1)[order - 1]);
  });

  GrowthFit fit;
  fit.radii.assign(radii.begin(), radii.end());
  fit.maxima.assign(nr, 0.0);
  for (std::size_t m = 0; m < static_cast<std::size_t>(angular); ++m) {
    for (std::size_t i = 0; i < nr; ++i) fit.maxima[i] = std::max(fit.maxima[i], table[m * nr + i]);
  }
  for (std::size_t i = 1; i < nr; ++i) {
    if (fit.maxima[i] < fit.maxima[i - 1] * (1.0 - 1e-9)) fit.non_monotone = true;
  }
  if (*std::min_element(fit.maxima.begin(), fit.maxima.end()) <= 0.0) {
    // Identically zero quantity: no growth.
    fit.beta = 0.0;
    fit.intercept = -std::numeric_limits<double>::infinity();
    return fit;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs(nr), ys(nr);
  for (std::size_t i = 0; i < nr; ++i) {
    xs[i] = -std::log1p(-radii[i] * radii[i]);
    ys[i] = std::log(fit.maxima[i]);
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double n = static_cast<double>(nr);
  fit.beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.beta * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < nr; ++i) {
    const double e = ys[i] - fit.intercept - fit.beta * xs[i];
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace hqr
