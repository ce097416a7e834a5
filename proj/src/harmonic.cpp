#include "hqr/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hqr/parallel.hpp"

namespace hqr {

HarmonicMap::HarmonicMap(AnalyticFn h, AnalyticFn g, std::string label)
    : h_(std::move(h)), g_(std::move(g)), label_(std::move(label)) {
  const Complex g0 = g_.value(0.0);
  if (std::abs(g0) > 1e-12) {
    std::ostringstream os;
    os << "harmonic map needs g(0) = 0, got " << g0;
    fail(ErrorKind::InvalidParameter, os.str());
  }
  if (label_.empty()) label_ = "h=" + h_.description() + ", g=" + g_.description();
}

HarmonicMap HarmonicMap::normalized(const AnalyticFn& h, const AnalyticFn& g, std::string label) {
  const Complex g0 = g.value(0.0);
  if (g0 == Complex(0.0, 0.0)) return HarmonicMap(h, g, std::move(label));
  return HarmonicMap(h + constant(std::conj(g0)), g - constant(g0), std::move(label));
}

HarmonicMap HarmonicMap::analytic(const AnalyticFn& h, std::string label) {
  return HarmonicMap(h, constant(0.0), std::move(label));
}

WirtingerData wirtinger_from(Complex hprime, Complex gprime) {
  WirtingerData w;
  w.fz = hprime;
  w.fzbar = std::conj(gprime);
  const double a = std::abs(hprime), b = std::abs(gprime);
  w.lambda_big = a + b;
  w.lambda_small = std::abs(a - b);
  w.jacobian = (a - b) * (a + b);
  return w;
}

WirtingerData wirtinger(const HarmonicMap& f, Complex z) {
  return wirtinger_from(f.h().derivative(z), f.g().derivative(z));
}

double gradient_norm(const WirtingerData& w) {
  const Complex fx = w.fz + w.fzbar;
  const Complex fy = Complex(0.0, 1.0) * (w.fz - w.fzbar);
  return std::sqrt(std::norm(fx) + std::norm(fy));
}

double QrParams::K_from_k(double k) {
  require(k >= 0.0 && k < 1.0, "k must lie in [0, 1)");
  return (1.0 + k) / (1.0 - k);
}

QrParams QrParams::make(double K, double Kprime) {
  require(std::isfinite(K) && K >= 1.0, "K must be at least 1");
  require(std::isfinite(Kprime) && Kprime >= 0.0, "K' must be nonnegative");
  QrParams p;
  p.K = K;
  p.Kprime = Kprime;
  p.k = (K - 1.0) / (K + 1.0);
  p.mu1 = p.k;
  p.mu2 = std::sqrt(Kprime) / (1.0 + K);
  return p;
}

ConjugateParts conjugate_parts(const HarmonicMap& f) {
  return {f.h() + f.g(), f.h() - f.g()};
}

HarmonicMap real_part_map(const HarmonicMap& f) {
  const auto F = conjugate_parts(f).F;
  const auto half = 0.5 * F;
  return HarmonicMap::normalized(half, half, "Re(" + f.label() + ")");
}

HarmonicMap imag_part_map(const HarmonicMap& f) {
  const auto G = conjugate_parts(f).G;
  const auto part = Complex(0.0, -0.5) * G;
  return HarmonicMap::normalized(part, part, "Im(" + f.label() + ")");
}

AngularRadial angular_radial(const HarmonicMap& f, Complex z) {
  if (z == Complex(0.0, 0.0)) return {};
  const Complex a = z * f.h().derivative(z);
  const Complex b = std::conj(z) * std::conj(f.g().derivative(z));
  return {Complex(0.0, 1.0) * (a - b), a + b};
}

std::vector<Complex> polar_samples(const QrSampling& grid) {
  require(grid.radial >= 1 && grid.angular >= 1, "sampling grid needs nodes");
  require(grid.r_max > 0.0 && grid.r_max < 1.0, "sampling radius must lie in (0, 1)");
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(grid.radial) * static_cast<std::size_t>(grid.angular) + 1);
  out.emplace_back(0.0, 0.0);
  for (int j = 1; j <= grid.radial; ++j) {
    const double r = grid.r_max * j / grid.radial;
    for (int m = 0; m < grid.angular; ++m) out.push_back(std::polar(r, 2.0 * kPi * m / grid.angular));
  }
  return out;
}

namespace {

struct SampleStats {
  double D = 0.0;  // -1 when not sense preserving
  double residual = 0.0;
  double jacobian = 0.0;
  bool unbounded = false;
};

SampleStats sample(const HarmonicMap& f, Complex z, double K) {
  const auto w = wirtinger(f, z);
  SampleStats s;
  s.jacobian = w.jacobian;
  s.residual = w.lambda_big * w.lambda_big - K * w.jacobian;
  if (w.lambda_big == 0.0) {
    s.D = -1.0;
  } else if (w.lambda_small <= 1e-300) {
    s.unbounded = true;
    s.D = -1.0;
  } else if (w.jacobian > 0.0) {
    s.D = w.lambda_big / w.lambda_small;
  } else {
    s.D = -1.0;
  }
  return s;
}

void accumulate(QrEstimate& e, const SampleStats& s, Complex z) {
  ++e.samples;
  if (s.D > e.K_est) {
    e.K_est = s.D;
    e.K_argmax = z;
  }
  e.Kprime_residual = std::max(e.Kprime_residual, s.residual);
  e.min_jacobian = std::min(e.min_jacobian, s.jacobian);
  e.unbounded_dilatation = e.unbounded_dilatation || s.unbounded;
}

}  // namespace

QrEstimate estimate_quasiregularity(const HarmonicMap& f, const QrSampling& grid,
                                    double K_for_residual, bool pure_K) {
  require(K_for_residual >= 1.0, "K must be at least 1");
  const auto pts = polar_samples(grid);
  std::vector<SampleStats> stats(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { stats[i] = sample(f, pts[i], K_for_residual); });

  QrEstimate e;
  e.grid = grid;
  e.K_for_residual = K_for_residual;
  e.K_est = 1.0;
  e.Kprime_residual = -1e300;
  e.min_jacobian = 1e300;
  for (std::size_t i = 0; i < pts.size(); ++i) accumulate(e, stats[i], pts[i]);

  if (grid.refine > 1 && e.K_est > 1.0) {
    const double dr = grid.r_max / grid.radial;
    const double dt = 2.0 * kPi / grid.angular;
    const double r0 = std::abs(e.K_argmax), t0 = std::arg(e.K_argmax);
    for (int i = 0; i <= grid.refine; ++i) {
      const double r = r0 + dr * (2.0 * i / grid.refine - 1.0);
      if (r <= 0.0 || r > grid.r_max) continue;
      for (int j = 0; j <= grid.refine; ++j) {
        const Complex z = std::polar(r, t0 + dt * (2.0 * j / grid.refine - 1.0));
        accumulate(e, sample(f, z, K_for_residual), z);
      }
    }
  }
  if (pure_K && e.unbounded_dilatation) {
    fail(ErrorKind::NonQuasiregular,
         "dilatation is unbounded: lambda_f vanishes where Lambda_f does not (" + f.label() + ")");
  }
  return e;
}

MarginReport pointwise_conjugate_bound(const HarmonicMap& f, const QrParams& params,
                                       std::span<const Complex> samples) {
  const auto parts = conjugate_parts(f);
  const double root = std::sqrt(params.Kprime);
  MarginReport r;
  r.min_margin = 1e300;
  for (const Complex z : samples) {
    const double m = params.K * std::abs(parts.F.derivative(z)) + root - std::abs(parts.G.derivative(z));
    ++r.samples;
    if (m < r.min_margin) {
      r.min_margin = m;
      r.argmin = z;
    }
  }
  if (r.samples == 0) r.min_margin = 0.0;
  if (r.min_margin < -1e-10) {
    std::ostringstream os;
    os << "|G'| <= K|F'| + sqrt(K') fails at z = " << r.argmin << " with margin " << r.min_margin;
    fail(ErrorKind::HypothesisViolation, os.str());
  }
  return r;
}

}  // namespace hqr
