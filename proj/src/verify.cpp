#include "hqr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "hqr/gauss.hpp"
#include "hqr/parallel.hpp"

namespace hqr {

RangeCheck RangeCheck::make(double p, double q, double s, double gamma) {
  require(p > 0.0 && gamma > 0.0, "range check needs p > 0 and gamma > 0");
  RangeCheck r;
  r.p = p;
  r.q = q;
  r.s = s;
  r.gamma = gamma;
  r.t = q + s - p * gamma;
  r.c = s - q - 2.0 + p * gamma;
  r.bound = std::min((q + s + 1.0) / gamma, (q + 2.0) / gamma);
  r.in_range = p < r.bound;
  if (r.t <= -1.0) {
    r.regime = "t<=-1";
  } else if (std::abs(r.c) <= 1e-12) {
    r.regime = "c=0";
  } else {
    r.regime = r.c < 0.0 ? "c<0" : "c>0";
  }
  r.identity_residual = std::abs(2.0 + r.t + r.c - 2.0 * s);
  return r;
}

std::string to_string(MembershipTarget t) {
  switch (t) {
    case MembershipTarget::F: return "f";
    case MembershipTarget::Fz: return "fz";
    case MembershipTarget::Fzbar: return "fzbar";
    case MembershipTarget::FTheta: return "ftheta";
    case MembershipTarget::BFb: return "bfb";
  }
  return "?";
}

MembershipTarget membership_target_from(const std::string& name) {
  for (auto t : {MembershipTarget::F, MembershipTarget::Fz, MembershipTarget::Fzbar, MembershipTarget::FTheta,
                 MembershipTarget::BFb}) {
    if (name == to_string(t)) return t;
  }
  fail(ErrorKind::InvalidParameter, "unknown membership target '" + name + "'");
}

void settle(VerificationReport& r) {
  r.margin = r.rhs - r.lhs;
  r.pass = r.margin >= -r.tol * r.rhs;
}

namespace {

void check_quasiregular(const HarmonicMap& f, double K, const VerifyOptions& o) {
  require(std::isfinite(K) && K >= 1.0, "K must be at least 1");
  if (!o.check_hypotheses) return;
  const auto e = estimate_quasiregularity(f, o.qr_grid);
  if (e.unbounded_dilatation || e.K_est > K + 1e-9) {
    std::ostringstream os;
    os << f.label() << " is not " << K << "-quasiregular on samples (";
    if (e.unbounded_dilatation) {
      os << "lambda_f vanishes where Lambda_f does not";
    } else {
      os << "dilatation " << e.K_est << " at " << e.K_argmax;
    }
    os << ")";
    fail(ErrorKind::NonQuasiregular, os.str());
  }
}

void check_kkprime(const HarmonicMap& f, double K, double Kprime, const VerifyOptions& o) {
  require(std::isfinite(K) && K >= 1.0, "K must be at least 1");
  require(std::isfinite(Kprime) && Kprime >= 0.0, "K' must be nonnegative");
  if (!o.check_hypotheses) return;
  const auto e = estimate_quasiregularity(f, o.qr_grid, K);
  if (e.Kprime_residual > Kprime * (1.0 + 1e-9) + 1e-12) {
    std::ostringstream os;
    os << f.label() << " violates Lambda^2 <= " << K << " J + " << Kprime << " on samples (needs K' >= "
       << e.Kprime_residual << ")";
    fail(ErrorKind::HypothesisViolation, os.str());
  }
}

struct Joint {
  NormResult u, v;
};

// v first, then u seeded with the argmax of v, so the u trace contains the
// point where v peaks.
template <class NormFn>
Joint joint_norms(const HarmonicMap& f, const SupSearchSpec& spec, NormFn norm_of) {
  Joint j;
  j.v = norm_of(imag_part_map(f), spec);
  SupSearchSpec seeded = spec;
  seeded.seeds.push_back(j.v.sup_a);
  j.u = norm_of(real_part_map(f), seeded);
  return j;
}

VerificationReport base_report(const std::string& check, const HarmonicMap& f, double K, double Kprime,
                               const std::string& scale, double p, const Joint& j, const VerifyOptions& o) {
  VerificationReport r;
  r.check = check;
  r.map_description = f.label();
  r.scale = scale;
  r.K = K;
  r.Kprime = Kprime;
  r.p = p;
  r.tol = o.tol;
  r.sup_a_u = j.u.sup_a;
  r.sup_a_v = j.v.sup_a;
  r.converged = j.u.converged && j.v.converged;
  r.grid_radial = j.u.grid_radial;
  r.grid_angular = j.u.grid_angular;
  for (const auto* n : {&j.u, &j.v}) {
    for (const auto& w : n->warnings) r.warnings.push_back(w);
  }
  if (!r.converged) {
    r.warnings.push_back("per-a integrals did not converge; the map may lie outside " + scale);
  }
  return r;
}

double power_factor(double p) { return std::pow(2.0, std::max(p - 1.0, 0.0)); }

void check_q_range(double p, double alpha) {
  require(std::isfinite(alpha) && alpha > -1.0, "alpha must exceed -1");
  require(alpha + 1.0 < p && p < alpha + 2.0, "the Q bound needs alpha + 1 < p < alpha + 2");
}

Joint q_joint(const HarmonicMap& f, double p, double alpha, const VerifyOptions& o) {
  const Qnpa params{1, p, alpha};
  return joint_norms(f, o.search, [&](const HarmonicMap& m, const SupSearchSpec& s) {
    return qh_npa_norm(m, params, s, o.cfg, QRoute::ChangeOfVariables);
  });
}

Joint f_joint(const HarmonicMap& f, const Fpqs& params, const VerifyOptions& o) {
  return joint_norms(f, o.search, [&](const HarmonicMap& m, const SupSearchSpec& s) {
    return fh_pqs_norm(m, params, s, WeightForm::Mobius, o.cfg);
  });
}

VerificationReport kkprime_report(const std::string& check, const HarmonicMap& f, double K, double Kprime,
                                  const std::string& scale, double p, const Joint& j, const ConstantSpec& which,
                                  const VerifyOptions& o) {
  const NormResult c = space_constant(which, o.constant_search, o.cfg);
  VerificationReport r = base_report(check, f, K, Kprime, scale, p, j, o);
  r.power_scale = true;
  r.constant_name = describe(which);
  r.constant_value = c.value;
  r.lhs = j.v.sup_integral;
  r.rhs = power_factor(p) * (std::pow(K, p) * j.u.sup_integral + std::pow(Kprime, p / 2.0) * c.value);
  settle(r);
  return r;
}

VerificationReport f_kkprime_impl(const std::string& check, const HarmonicMap& f, double K, double Kprime,
                                  const Fpqs& params, const std::string& scale, const ConstantSpec& which,
                                  const VerifyOptions& o) {
  validate(params);
  check_kkprime(f, K, Kprime, o);
  const Joint j = f_joint(f, params, o);
  return kkprime_report(check, f, K, Kprime, scale, params.p, j, which, o);
}

}  // namespace

VerificationReport verify_q_conjugate(const HarmonicMap& f, double K, double p, double alpha,
                                      const VerifyOptions& opts) {
  check_q_range(p, alpha);
  check_quasiregular(f, K, opts);
  const Joint j = q_joint(f, p, alpha, opts);
  VerificationReport r = base_report("q-conjugate", f, K, 0.0, describe(Qnpa{1, p, alpha}), p, j, opts);
  r.lhs = j.v.value;
  r.rhs = K * j.u.value;
  settle(r);
  return r;
}

VerificationReport verify_f_conjugate(const HarmonicMap& f, double K, const Fpqs& params,
                                      const VerifyOptions& opts) {
  validate(params);
  check_quasiregular(f, K, opts);
  const Joint j = f_joint(f, params, opts);
  VerificationReport r = base_report("f-conjugate", f, K, 0.0, describe(params), params.p, j, opts);
  r.lhs = j.v.value;
  r.rhs = K * j.u.value;
  settle(r);
  return r;
}

VerificationReport verify_q_kkprime(const HarmonicMap& f, double K, double Kprime, double p, double alpha,
                                    const VerifyOptions& opts) {
  check_q_range(p, alpha);
  check_kkprime(f, K, Kprime, opts);
  const Joint j = q_joint(f, p, alpha, opts);
  return kkprime_report("q-kkprime", f, K, Kprime, describe(Qnpa{1, p, alpha}), p, j, CpAlpha{p, alpha}, opts);
}

VerificationReport verify_f_kkprime(const HarmonicMap& f, double K, double Kprime, const Fpqs& params,
                                    const VerifyOptions& opts) {
  return f_kkprime_impl("f-kkprime", f, K, Kprime, params, describe(params), Cqs{params.q, params.s}, opts);
}

VerificationReport verify_scale_bound(const HarmonicMap& f, double K, double Kprime, const SpecialScale& scale,
                                      bool with_kprime, const VerifyOptions& opts) {
  struct Mapped {
    std::string name;
    Fpqs params;
    ConstantSpec constant;
  };
  const Mapped m = std::visit(
      [](const auto& sc) -> Mapped {
        using T = std::decay_t<decltype(sc)>;
        if constexpr (std::is_same_v<T, Morrey>) {
          return {"morrey", as_f_scale(sc), CLambda{sc.lambda}};
        } else if constexpr (std::is_same_v<T, BergmanMorrey>) {
          return {"bergman-morrey", as_f_scale(sc), CpLambda{sc.p, sc.lambda}};
        } else if constexpr (std::is_same_v<T, Qs>) {
          return {"qs", as_f_scale(sc), Cs{sc.s}};
        } else {
          fail(ErrorKind::InvalidParameter, "no conjugate bound is stated for Bloch-type scales");
        }
      },
      scale);
  const std::string label = std::visit([](const auto& sc) { return describe(SpaceParams(sc)); }, scale);
  validate(std::visit([](const auto& sc) { return SpaceParams(sc); }, scale));
  if (!with_kprime) {
    VerificationReport r = verify_f_conjugate(f, K, m.params, opts);
    r.check = m.name + "-conjugate";
    r.scale = label + " = " + r.scale;
    return r;
  }
  return f_kkprime_impl(m.name + "-kkprime", f, K, Kprime, m.params, label + " = " + describe(m.params), m.constant,
                        opts);
}

namespace {

// Modulus of the target (M) or its Lambda (F) from first and second derivatives.
double target_magnitude(const HarmonicMap& f, Complex z, bool f_scale, MembershipTarget t, Complex f_value) {
  if (!f_scale && t == MembershipTarget::F) return std::abs(f_value);
  const Jet hj = f.h().prime_jet(z, f_scale ? 1 : 0);
  const Jet gj = f.g().prime_jet(z, f_scale ? 1 : 0);
  if (!f_scale) {
    switch (t) {
      case MembershipTarget::Fz: return std::abs(hj[0]);
      case MembershipTarget::Fzbar: return std::abs(gj[0]);
      case MembershipTarget::FTheta: return std::abs(z * hj[0] - std::conj(z * gj[0]));
      case MembershipTarget::BFb: return std::abs(z * hj[0] + std::conj(z * gj[0]));
      case MembershipTarget::F: break;
    }
    return 0.0;
  }
  switch (t) {
    case MembershipTarget::F: return std::abs(hj[0]) + std::abs(gj[0]);
    case MembershipTarget::Fz: return std::abs(hj[1]);
    case MembershipTarget::Fzbar: return std::abs(gj[1]);
    case MembershipTarget::FTheta:
    case MembershipTarget::BFb: return std::abs(hj[0] + z * hj[1]) + std::abs(gj[0] + z * gj[1]);
  }
  return 0.0;
}

}  // namespace

namespace {

constexpr int kRadialFit = 24;

// Legendre P_0..P_n at x.
void legendre_row(double x, int n, double* p) {
  p[0] = 1.0;
  if (n >= 1) p[1] = x;
  for (int k = 1; k < n; ++k) p[k + 1] = ((2.0 * k + 1.0) * x * p[k] - k * p[k - 1]) / (k + 1.0);
}

// Values of fn on the nodes of a graded mesh from fn' alone: the circle
// |z| = R_{j-1} is carried outward, new angles are reached by short arc
// integrals, and each panel is crossed with a Legendre fit of fn' along the
// ray. Returns the largest relative size of the two highest fit coefficients.
double mesh_values(const AnalyticFn& fn, const GradedMesh& mesh, std::vector<std::vector<Complex>>& out) {
  const auto& panels = mesh.panels();
  const GaussRule& gl = gauss_legendre(kRadialFit);
  const GaussRule& arc = gauss_legendre(16);
  const int N = kRadialFit;
  std::vector<double> ptab(static_cast<std::size_t>(N * (N + 1)));
  for (int i = 0; i < N; ++i) legendre_row(gl.nodes[i], N, &ptab[static_cast<std::size_t>(i * (N + 1))]);

  out.assign(panels.size(), {});
  std::vector<Complex> edge(static_cast<std::size_t>(panels.front().angular), fn.value(0.0));
  double r_prev = 0.0;
  std::vector<double> tails(static_cast<std::size_t>(panels.back().angular), 0.0);
  for (std::size_t j = 0; j < panels.size(); ++j) {
    const auto& pan = panels[j];
    const std::size_t m = static_cast<std::size_t>(pan.angular);
    const double dth = 2.0 * kPi / static_cast<double>(m);
    if (edge.size() < m) {
      const std::size_t ratio = m / edge.size();
      std::vector<Complex> fine(m);
      parallel_for(edge.size(), [&](std::size_t i) {
        Complex v = edge[i];
        fine[i * ratio] = v;
        for (std::size_t q = 1; q < ratio; ++q) {
          const double th0 = dth * static_cast<double>(i * ratio + q - 1);
          Complex acc(0.0, 0.0);
          for (std::size_t n = 0; n < arc.size(); ++n) {
            const Complex z = std::polar(r_prev, th0 + 0.5 * dth * (1.0 + arc.nodes[n]));
            acc += arc.weights[n] * fn.derivative(z) * Complex(0.0, 1.0) * z;
          }
          v += 0.5 * dth * acc;
          fine[i * ratio + q] = v;
        }
      });
      edge.swap(fine);
    }
    const std::size_t nr = pan.w.size() / m;
    const double half = 0.5 * (pan.r_outer - r_prev), mid = 0.5 * (pan.r_outer + r_prev);
    out[j].resize(pan.w.size());
    std::vector<Complex> next(m);
    parallel_for(m, [&](std::size_t k) {
      const Complex dir = std::polar(1.0, dth * static_cast<double>(k));
      Complex c[kRadialFit];
      for (int n = 0; n < N; ++n) c[n] = 0.0;
      for (int i = 0; i < N; ++i) {
        const Complex d = fn.derivative((mid + half * gl.nodes[i]) * dir) * dir * gl.weights[i];
        const double* p = &ptab[static_cast<std::size_t>(i * (N + 1))];
        for (int n = 0; n < N; ++n) c[n] += d * p[n];
      }
      double total = 0.0;
      for (int n = 0; n < N; ++n) {
        c[n] *= 0.5 * (2.0 * n + 1.0);
        total += std::abs(c[n]);
      }
      if (total > 0.0) {
        const double tail = (std::abs(c[N - 1]) + std::abs(c[N - 2])) / total;
        tails[k] = std::max(tails[k], tail);
      }
      // int_{-1}^{y} sum c_n P_n = c_0 (y + 1) + sum_{n>=1} c_n (P_{n+1} - P_{n-1}) / (2n + 1)
      auto integral_to = [&](double r) {
        const double y = (r - mid) / half;
        double p[kRadialFit + 1];
        legendre_row(y, N, p);
        Complex s = c[0] * (y + 1.0);
        for (int n = 1; n < N; ++n) s += c[n] * ((p[n + 1] - p[n - 1]) / (2.0 * n + 1.0));
        return half * s;
      };
      for (std::size_t i = 0; i < nr; ++i) out[j][i * m + k] = edge[k] + integral_to(std::sqrt(pan.t[i * m]));
      next[k] = edge[k] + integral_to(pan.r_outer);
    });
    edge.swap(next);
    r_prev = pan.r_outer;
  }
  return *std::max_element(tails.begin(), tails.end());
}

}  // namespace

MembershipSamples::MembershipSamples(const HarmonicMap& f, MembershipTarget target, bool f_scale, int levels)
    : f_(f), target_(target), f_scale_(f_scale) {
  require(levels >= 2 && levels <= 20, "membership levels must be in [2, 20]");
  mesh_ = std::make_shared<GradedMesh>(levels);
  const auto& panels = mesh_->panels();
  mag_.resize(panels.size());
  for (std::size_t j = 0; j < panels.size(); ++j) mag_[j].resize(panels[j].w.size());

  if (!f_scale) {
    switch (target) {
      case MembershipTarget::F: f0_ = std::abs(f.value(0.0)); break;
      case MembershipTarget::Fz: f0_ = std::abs(f.h().derivative(0.0)); break;
      case MembershipTarget::Fzbar: f0_ = std::abs(f.g().derivative(0.0)); break;
      default: break;
    }
  }

  std::vector<std::vector<Complex>> hv, gv;
  if (!f_scale && target == MembershipTarget::F) {
    fit_tail_ = std::max(mesh_values(f.h(), *mesh_, hv), mesh_values(f.g(), *mesh_, gv));
  }
  for (std::size_t j = 0; j < panels.size(); ++j) {
    const auto& pan = panels[j];
    parallel_for(pan.w.size(), [&](std::size_t i) {
      const Complex z(pan.x[i], pan.y[i]);
      const Complex fz = hv.empty() ? Complex(0.0, 0.0) : hv[j][i] + std::conj(gv[j][i]);
      mag_[j][i] = target_magnitude(f, z, f_scale, target, fz);
    });
  }
}

VerificationReport verify_membership(const MembershipSamples& samples, const OrderModel& model,
                                     const std::variant<Mpqs, Fpqs>& scale, const MembershipOptions& opts) {
  const int J = samples.mesh().levels();
  require(opts.first_reported >= 1 && opts.first_reported < J, "bad first reported level");
  require(opts.fit_points >= 2, "divergence fit needs two points");
  require(opts.stabilization > 0.0, "stabilization threshold must be positive");
  require(model.K >= 1.0 && model.alpha_K > 0.0, "bad order model");
  const bool f_scale = std::holds_alternative<Fpqs>(scale);
  require(f_scale == samples.f_scale(), "samples were tabulated for the other scale family");
  double p, q, s;
  if (f_scale) {
    const auto& x = std::get<Fpqs>(scale);
    validate(x);
    p = x.p, q = x.q, s = x.s;
  } else {
    const auto& x = std::get<Mpqs>(scale);
    validate(x);
    p = x.p, q = x.q, s = x.s;
  }
  const MembershipTarget target = samples.target();
  const HarmonicMap& f = samples.map();
  const double gamma = model.alpha_K + (target == MembershipTarget::F ? 0.0 : 1.0) + (f_scale ? 1.0 : 0.0);

  VerificationReport r;
  r.check = "membership";
  r.map_description = f.label();
  r.scale = f_scale ? describe(std::get<Fpqs>(scale)) : describe(std::get<Mpqs>(scale));
  r.K = model.K;
  r.p = p;

  MembershipData md;
  md.range = RangeCheck::make(p, q, s, gamma);
  md.alpha_K = model.alpha_K;
  md.target = to_string(target);
  md.mesh_nodes = samples.mesh().size();

  if (samples.fit_tail() > 1e-10) {
    std::ostringstream os;
    os << "radial value fit resolved only to " << samples.fit_tail();
    r.warnings.push_back(os.str());
  }
  if (std::abs(f.h().value(0.0)) > 1e-12 || std::abs(f.g().value(0.0)) > 1e-12 ||
      std::abs(f.h().derivative(0.0) - 1.0) > 1e-12) {
    r.warnings.push_back("map is not normalized (h(0) = g(0) = 0, h'(0) = 1)");
  }

  std::vector<std::vector<double>> xv = samples.magnitudes();
  for (auto& panel : xv) {
    for (double& v : panel) v = std::pow(v, p);
  }
  const TruncatedMobiusTable table(samples.mesh(), xv, q, s);

  std::mutex mu;
  std::map<std::pair<double, double>, std::vector<double>> cache;
  auto eval = [&](Complex a) {
    auto cum = table.cumulative(a);
    IntegralResult ir;
    ir.value = cum.back();
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(std::make_pair(a.real(), a.imag()), std::move(cum));
    return ir;
  };
  const NormResult sr = sup_search(eval, opts.search);

  std::vector<double> sup_j(static_cast<std::size_t>(J), 0.0);
  for (const auto& t : sr.trace) {
    const auto& cum = cache.at({t.a.real(), t.a.imag()});
    for (int j = 0; j < J; ++j) sup_j[j] = std::max(sup_j[j], cum[j]);
  }
  for (int j = opts.first_reported; j <= J; ++j) {
    md.radii.push_back(samples.mesh().radius(j));
    md.values.push_back(samples.f0() + std::pow(sup_j[j - 1], 1.0 / p));
  }
  for (std::size_t i = 1; i < md.values.size(); ++i) {
    const double v = md.values[i];
    md.relative_changes.push_back(v > 0.0 ? std::abs(v - md.values[i - 1]) / v : 0.0);
  }
  const double last_change = md.relative_changes.empty() ? 0.0 : md.relative_changes.back();
  md.stabilized = last_change < opts.stabilization;
  md.status = md.stabilized ? "finite" : "divergent";

  const std::size_t n = md.values.size();
  const std::size_t nf = std::min<std::size_t>(static_cast<std::size_t>(opts.fit_points), n);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  bool positive = true;
  for (std::size_t i = n - nf; i < n; ++i) positive = positive && md.values[i] > 0.0;
  if (positive) {
    for (std::size_t i = n - nf; i < n; ++i) {
      const double x = -std::log1p(-md.radii[i]);
      const double y = std::log(md.values[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double dn = static_cast<double>(nf);
    md.divergence_exponent = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  }

  bool pointwise_ok = true;
  if (target == MembershipTarget::FTheta || target == MembershipTarget::BFb) {
    const double k = (model.K - 1.0) / (model.K + 1.0);
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double rmax = samples.mesh().radius(J);
    double worst = 0.0;
    for (int i = 0; i < opts.pointwise_samples; ++i) {
      const Complex z = std::polar(rmax * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
      const Complex hp = f.h().derivative(z), gp = f.g().derivative(z);
      const Complex val = target == MembershipTarget::FTheta ? z * hp - std::conj(z * gp) : z * hp + std::conj(z * gp);
      const double bound = (1.0 + k) * std::abs(hp);
      if (bound > 0.0) worst = std::max(worst, std::abs(val) / bound);
    }
    md.pointwise_ratio = worst;
    if (worst > 1.0 + opts.pointwise_tol) {
      pointwise_ok = false;
      std::ostringstream os;
      os << "pointwise bound |" << md.target << "| <= (1 + k)|h'| fails: ratio " << worst;
      r.warnings.push_back(os.str());
    }
  }

  r.lhs = last_change;
  r.rhs = opts.stabilization;
  r.tol = 0.0;
  r.margin = r.rhs - r.lhs;
  r.pass = pointwise_ok && (!md.range.in_range || md.stabilized);
  if (!md.range.in_range) {
    r.warnings.push_back("parameters outside the sufficient range; divergence is informational");
  }
  r.sup_a_u = sr.sup_a;
  r.membership = std::move(md);
  return r;
}

VerificationReport verify_membership(const HarmonicMap& f, const OrderModel& model,
                                     const std::variant<Mpqs, Fpqs>& scale, MembershipTarget target,
                                     const MembershipOptions& opts) {
  const MembershipSamples samples(f, target, std::holds_alternative<Fpqs>(scale), opts.levels);
  return verify_membership(samples, model, scale, opts);
}

RatioReport green_mobius_ratio(const AnalyticFn& f, double p, double q, double s, const std::vector<Complex>& a_grid,
                               const QuadratureConfig& cfg) {
  validate_mobius_exponents(q, s);
  require(p > 0.0, "p must be positive");
  require(!a_grid.empty(), "empty a grid");
  const DiskIntegrand x = [f, p](Complex z) { return std::pow(std::abs(f.derivative(z)), p); };
  RatioReport rep;
  rep.entries.resize(a_grid.size());
  parallel_for(a_grid.size(), [&](std::size_t i) {
    const MobiusMap m{DiskPoint(a_grid[i])};
    auto& e = rep.entries[i];
    e.a = a_grid[i];
    e.mobius = disk_integral_mobius_weight(x, q, s, m, cfg).value;
    e.green = disk_integral_green(x, q, s, m, cfg).value;
    e.ratio = e.mobius > 0.0 ? e.green / e.mobius : std::nan("");
  });
  rep.min_ratio = rep.max_ratio = rep.entries.front().ratio;
  for (const auto& e : rep.entries) {
    rep.min_ratio = std::min(rep.min_ratio, e.ratio);
    rep.max_ratio = std::max(rep.max_ratio, e.ratio);
  }
  return rep;
}

double power_inequality_slack(double A, double B, double p) {
  require(A >= 0.0 && B >= 0.0 && p > 0.0, "power inequality needs A, B >= 0 and p > 0");
  return power_factor(p) * (std::pow(A, p) + std::pow(B, p)) - std::pow(A + B, p);
}

}  // namespace hqr
