#include "hqr/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include "hqr/parallel.hpp"

namespace hqr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double x, const char* what) {
  require(std::isfinite(x) && x > 0.0, std::string(what) + " must be positive");
}

void validate_fqs(double p, double q, double s) {
  require_positive(p, "p");
  require(std::isfinite(q) && q > -2.0, "q must exceed -2");
  require_positive(s, "s");
  require(q + s > -1.0, "q + s must exceed -1");
}

std::string join(std::initializer_list<double> xs) {
  std::ostringstream os;
  bool first = true;
  for (double x : xs) {
    if (!first) os << ",";
    os << x;
    first = false;
  }
  return os.str();
}

std::vector<double> parse_numbers(const std::string& body) {
  std::vector<double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidParameter, "not a number: '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) fail(ErrorKind::InvalidParameter, "not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

// "Name(a,b)" or "Name:a,b"
std::pair<std::string, std::vector<double>> split_call(const std::string& text) {
  static const std::regex paren(R"(^\s*([A-Za-z_]+)\s*\(([^)]*)\)\s*$)");
  static const std::regex colon(R"(^\s*([A-Za-z_]+)\s*:\s*(.*)$)");
  std::smatch m;
  if (std::regex_match(text, m, paren) || std::regex_match(text, m, colon)) {
    return {m[1].str(), parse_numbers(m[2].str())};
  }
  fail(ErrorKind::InvalidParameter, "malformed scale '" + text + "'");
}

void expect_count(const std::string& text, const std::vector<double>& v, std::size_t n) {
  if (v.size() != n) {
    std::ostringstream os;
    os << "'" << text << "' needs " << n << " parameter" << (n == 1 ? "" : "s");
    fail(ErrorKind::InvalidParameter, os.str());
  }
}

int as_positive_int(double x) {
  require(x >= 1.0 && x == std::floor(x) && x < 1e6, "n must be a positive integer");
  return static_cast<int>(x);
}

double lambda_of(const HarmonicMap& f, Complex z, double p) {
  const double l = std::abs(f.h().derivative(z)) + std::abs(f.g().derivative(z));
  return p == 1.0 ? l : std::pow(l, p);
}

void finish_root(NormResult& r, double p) {
  r.root = p;
  r.value = p == 1.0 ? r.sup_integral : std::pow(r.sup_integral, 1.0 / p);
  r.error_estimate = r.sup_integral > 0.0
                         ? r.value / (p * r.sup_integral) * r.integral_error
                         : std::pow(r.integral_error, 1.0 / p);
}

void attach_grid(NormResult& r, const QuadratureConfig& cfg) {
  r.grid_radial = cfg.radial;
  r.grid_angular = cfg.angular;
}

}  // namespace

void validate(const SpaceParams& params) {
  std::visit(overloaded{
                 [](const Qnpa& q) {
                   require(q.n >= 1, "n must be a positive integer");
                   require_positive(q.p, "p");
                   require(std::isfinite(q.alpha) && q.alpha > -1.0, "alpha must exceed -1");
                 },
                 [](const Fpqs& f) { validate_fqs(f.p, f.q, f.s); },
                 [](const Mpqs& m) { validate_fqs(m.p, m.q, m.s); },
                 [](const Morrey& m) {
                   require(m.lambda > 0.0 && m.lambda <= 1.0, "Morrey lambda must lie in (0, 1]");
                 },
                 [](const BergmanMorrey& b) {
                   require_positive(b.p, "p");
                   require(b.lambda > 0.0 && b.lambda < 2.0, "Bergman-Morrey lambda must lie in (0, 2)");
                 },
                 [](const Qs& q) { require_positive(q.s, "s"); },
                 [](const BlochAlpha& b) { require_positive(b.alpha, "Bloch alpha"); },
             },
             params);
}

bool is_trivial(const Qnpa& params) { return params.n * params.p > params.alpha + 2.0; }

std::string describe(const SpaceParams& params) {
  return std::visit(
      overloaded{
          [](const Qnpa& q) { return "Q(" + std::to_string(q.n) + "," + join({q.p, q.alpha}) + ")"; },
          [](const Fpqs& f) { return "F(" + join({f.p, f.q, f.s}) + ")"; },
          [](const Mpqs& m) { return "M(" + join({m.p, m.q, m.s}) + ")"; },
          [](const Morrey& m) { return "Morrey(" + join({m.lambda}) + ")"; },
          [](const BergmanMorrey& b) { return "BergmanMorrey(" + join({b.p, b.lambda}) + ")"; },
          [](const Qs& q) { return "Qs(" + join({q.s}) + ")"; },
          [](const BlochAlpha& b) { return "Bloch(" + join({b.alpha}) + ")"; },
      },
      params);
}

SpaceParams parse_space(const std::string& text) {
  const auto [name, v] = split_call(text);
  SpaceParams out;
  if (name == "Q") {
    expect_count(text, v, 3);
    out = Qnpa{as_positive_int(v[0]), v[1], v[2]};
  } else if (name == "F") {
    expect_count(text, v, 3);
    out = Fpqs{v[0], v[1], v[2]};
  } else if (name == "M") {
    expect_count(text, v, 3);
    out = Mpqs{v[0], v[1], v[2]};
  } else if (name == "Morrey") {
    expect_count(text, v, 1);
    out = Morrey{v[0]};
  } else if (name == "BergmanMorrey") {
    expect_count(text, v, 2);
    out = BergmanMorrey{v[0], v[1]};
  } else if (name == "Qs") {
    expect_count(text, v, 1);
    out = Qs{v[0]};
  } else if (name == "Bloch") {
    expect_count(text, v, 1);
    out = BlochAlpha{v[0]};
  } else {
    fail(ErrorKind::InvalidParameter, "unknown scale '" + name + "'");
  }
  validate(out);
  return out;
}

Fpqs as_f_scale(const Morrey& m) { return {2.0, 1.0 - m.lambda, m.lambda}; }
Fpqs as_f_scale(const BergmanMorrey& m) { return {m.p, m.p - m.lambda, m.lambda}; }
Fpqs as_f_scale(const Qs& m) { return {2.0, 0.0, m.s}; }

std::vector<double> SupSearchSpec::default_radii() {
  std::vector<double> r;
  for (int j = 0; j <= 10; ++j) r.push_back(1.0 - std::ldexp(1.0, -j));
  return r;
}

double SupSearchSpec::radius_cap() const {
  double cap = 0.0;
  for (double r : radii) cap = std::max(cap, r);
  for (Complex s : seeds) cap = std::max(cap, std::abs(s));
  return cap;
}

QuadratureConfig norm_quadrature() {
  QuadratureConfig cfg;
  cfg.refinement_cap = 1;
  cfg.strict = false;
  return cfg;
}

NormResult sup_search(const PerPointEvaluator& eval, const SupSearchSpec& spec) {
  require(spec.angles_per_radius >= 1, "need at least one angle per radius");
  require(!spec.radii.empty() || !spec.seeds.empty(), "empty search");
  require(spec.min_step > 0.0 && spec.initial_step >= spec.min_step, "bad compass steps");
  require(spec.step_shrink > 0.0 && spec.step_shrink < 1.0, "step shrink must lie in (0, 1)");

  std::vector<Complex> pts;
  bool zero_done = false;
  for (double r : spec.radii) {
    require(r >= 0.0 && r < 1.0, "search radii must lie in [0, 1)");
    if (r == 0.0) {
      if (!zero_done) pts.emplace_back(0.0, 0.0);
      zero_done = true;
      continue;
    }
    for (int m = 0; m < spec.angles_per_radius; ++m) {
      pts.push_back(std::polar(r, 2.0 * kPi * m / spec.angles_per_radius));
    }
  }
  for (Complex s : spec.seeds) {
    require(std::abs(s) < 1.0, "search seeds must lie in the disk");
    pts.push_back(s);
  }

  NormResult res;
  auto run = [&](const std::vector<Complex>& batch) {
    std::vector<IntegralResult> out(batch.size());
    parallel_for(batch.size(), [&](std::size_t i) { out[i] = eval(batch[i]); });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (!std::isfinite(out[i].value)) {
        std::ostringstream os;
        os << "per-point value is not finite at a = " << batch[i];
        fail(ErrorKind::Accuracy, os.str());
      }
      res.trace.push_back({batch[i], out[i].value, out[i].abs_error_estimate, out[i].converged});
    }
    return out;
  };
  auto best_index = [&] {
    std::size_t b = 0;
    for (std::size_t i = 1; i < res.trace.size(); ++i) {
      if (res.trace[i].value > res.trace[b].value) b = i;
    }
    return b;
  };

  run(pts);
  if (spec.refine) {
    const double cap = spec.radius_cap();
    const std::size_t b = best_index();
    Complex c = res.trace[b].a;
    double fc = res.trace[b].value;
    double h = spec.initial_step;
    const Complex dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    while (h >= spec.min_step && static_cast<int>(res.trace.size()) < spec.max_evaluations) {
      const double scale = h * (1.0 - std::norm(c));
      std::vector<Complex> cand;
      for (Complex d : dirs) {
        const Complex p = c + scale * d;
        if (std::abs(p) <= cap) cand.push_back(p);
      }
      const auto vals = run(cand);
      std::size_t k = cand.size();
      double fk = fc;
      for (std::size_t i = 0; i < cand.size(); ++i) {
        if (vals[i].value > fk) {
          fk = vals[i].value;
          k = i;
        }
      }
      if (k < cand.size()) {
        c = cand[k];
        fc = fk;
      } else {
        h *= spec.step_shrink;
      }
    }
    // Quadratic polish along both axes at the final step.
    const double scale = spec.min_step * (1.0 - std::norm(c));
    for (Complex d : {Complex(1, 0), Complex(0, 1)}) {
      const Complex lo = c - scale * d, hi = c + scale * d;
      if (std::abs(lo) > cap || std::abs(hi) > cap) continue;
      const auto v = run({lo, hi});
      const double denom = v[0].value - 2.0 * fc + v[1].value;
      if (!(denom < 0.0)) continue;
      const double t = 0.5 * (v[0].value - v[1].value) / denom;
      if (std::abs(t) > 1.0) continue;
      const Complex p = c + t * scale * d;
      const auto pv = run({p});
      if (pv[0].value > fc) {
        c = p;
        fc = pv[0].value;
      }
    }
  }
  const auto& best = res.trace[best_index()];
  res.sup_a = best.a;
  res.sup_integral = best.value;
  res.integral_error = best.error;
  res.converged = best.converged;
  res.value = best.value;
  return res;
}

namespace {

PerPointEvaluator compose_evaluator(const HarmonicMap& f, const Qnpa& params, const QuadratureConfig& cfg) {
  const int n = params.n;
  require(n <= kMaxComposeOrder, "compose route supports n <= 6");
  const double p = params.p, alpha = params.alpha;
  return [f, n, p, alpha, cfg](Complex a) {
    const MobiusMap m{DiskPoint(a)};
    const auto hs = compose_mobius(f.h(), m);
    const auto gs = compose_mobius(f.g(), m);
    auto integrand = [&](Complex z) {
      const double v = std::abs(hs.prime_jet(z, n - 1)[static_cast<std::size_t>(n - 1)]) +
                       std::abs(gs.prime_jet(z, n - 1)[static_cast<std::size_t>(n - 1)]);
      return std::pow(v, p);
    };
    return disk_integral_alpha(integrand, alpha, cfg);
  };
}

PerPointEvaluator table_evaluator(DiskIntegrand x, double jacobi, double s, const QuadratureConfig& cfg) {
  auto integ = std::make_shared<MobiusWeightIntegrator>(std::move(x), jacobi, s, cfg);
  return [integ](Complex a) { return (*integ)(a); };
}

}  // namespace

NormResult qh_npa_norm(const HarmonicMap& f, const Qnpa& params, const SupSearchSpec& search,
                       const QuadratureConfig& cfg, QRoute route) {
  validate(params);
  const double s_cov = 2.0 - params.p + params.alpha;
  const bool cov_ok = params.n == 1 && s_cov >= 0.0;
  if (route == QRoute::ChangeOfVariables) {
    require(cov_ok, "change of variables needs n = 1 and p <= alpha + 2");
  }
  const bool use_cov = route == QRoute::ChangeOfVariables || (route == QRoute::Auto && cov_ok);

  PerPointEvaluator eval;
  if (use_cov) {
    const double p = params.p;
    eval = table_evaluator([f, p](Complex z) { return lambda_of(f, z, p); }, params.alpha, s_cov, cfg);
  } else {
    eval = compose_evaluator(f, params, cfg);
  }
  NormResult r = sup_search(eval, search);
  r.scale = describe(params);
  r.route = use_cov ? "change-of-variables" : "compose";
  if (is_trivial(params)) {
    r.warnings.push_back("n p > alpha + 2: " + r.scale + " contains only constants");
  }
  r.f0_term = std::abs(f.value(0.0));
  finish_root(r, params.p);
  attach_grid(r, cfg);
  return r;
}

NormResult q_npa_norm(const AnalyticFn& f, const Qnpa& params, const SupSearchSpec& search,
                      const QuadratureConfig& cfg, QRoute route) {
  return qh_npa_norm(HarmonicMap::analytic(f), params, search, cfg, route);
}

NormResult fh_pqs_norm(const HarmonicMap& f, const Fpqs& params, const SupSearchSpec& search,
                       WeightForm form, const QuadratureConfig& cfg) {
  validate(params);
  const double p = params.p, q = params.q, s = params.s;
  DiskIntegrand x = [f, p](Complex z) { return lambda_of(f, z, p); };
  PerPointEvaluator eval;
  if (form == WeightForm::Mobius) {
    eval = table_evaluator(x, q + s, s, cfg);
  } else {
    eval = [x, q, s, cfg](Complex a) { return disk_integral_green(x, q, s, MobiusMap(DiskPoint(a)), cfg); };
  }
  NormResult r = sup_search(eval, search);
  r.scale = describe(params);
  r.route = form == WeightForm::Mobius ? "mobius-weight" : "green-weight";
  r.f0_term = std::abs(f.value(0.0));
  finish_root(r, p);
  attach_grid(r, cfg);
  return r;
}

NormResult m_pqs_norm(const DiskFunction& f, Complex f0, const Mpqs& params, const SupSearchSpec& search,
                      const QuadratureConfig& cfg) {
  validate(params);
  const double p = params.p;
  auto eval = table_evaluator([f, p](Complex z) { return std::pow(std::abs(f(z)), p); },
                              params.q + params.s, params.s, cfg);
  NormResult r = sup_search(eval, search);
  r.scale = describe(params);
  r.route = "mobius-weight";
  finish_root(r, p);
  r.f0_term = std::abs(f0);
  r.f0_included = true;
  r.value += r.f0_term;
  attach_grid(r, cfg);
  return r;
}

NormResult specialized_norm(const HarmonicMap& f, const SpecialScale& scale, const SupSearchSpec& search,
                            const QuadratureConfig& cfg) {
  auto delegate = [&](const auto& sp) {
    validate(SpaceParams(sp));
    NormResult r = fh_pqs_norm(f, as_f_scale(sp), search, WeightForm::Mobius, cfg);
    r.scale = describe(SpaceParams(sp)) + " = " + r.scale;
    return r;
  };
  return std::visit(
      overloaded{
          [&](const Morrey& m) { return delegate(m); },
          [&](const BergmanMorrey& m) { return delegate(m); },
          [&](const Qs& m) { return delegate(m); },
          [&](const BlochAlpha& b) {
            validate(SpaceParams(b));
            const double al = b.alpha;
            auto eval = [f, al](Complex z) {
              IntegralResult ir;
              ir.value = std::pow(1.0 - std::norm(z), al) * lambda_of(f, z, 1.0);
              return ir;
            };
            NormResult r = sup_search(eval, search);
            r.scale = describe(SpaceParams(b));
            r.route = "pointwise";
            r.root = 1.0;
            r.f0_term = std::abs(f.value(0.0));
            r.f0_included = true;
            r.value = r.f0_term + r.sup_integral;
            r.error_estimate = 0.0;
            return r;
          },
      },
      scale);
}

NormResult norm(const HarmonicMap& f, const SpaceParams& params, const SupSearchSpec& search,
                const QuadratureConfig& cfg) {
  return std::visit(
      overloaded{
          [&](const Qnpa& q) { return qh_npa_norm(f, q, search, cfg); },
          [&](const Fpqs& x) { return fh_pqs_norm(f, x, search, WeightForm::Mobius, cfg); },
          [&](const Mpqs& m) {
            return m_pqs_norm([f](Complex z) { return f.value(z); }, f.value(0.0), m, search, cfg);
          },
          [&](const Morrey& m) { return specialized_norm(f, m, search, cfg); },
          [&](const BergmanMorrey& m) { return specialized_norm(f, m, search, cfg); },
          [&](const Qs& m) { return specialized_norm(f, m, search, cfg); },
          [&](const BlochAlpha& m) { return specialized_norm(f, m, search, cfg); },
      },
      params);
}

std::string describe(const ConstantSpec& which) {
  return std::visit(overloaded{
                        [](const CpAlpha& c) { return "C_p_alpha(" + join({c.p, c.alpha}) + ")"; },
                        [](const Cqs& c) { return "C_q_s(" + join({c.q, c.s}) + ")"; },
                        [](const CLambda& c) { return "C_lambda(" + join({c.lambda}) + ")"; },
                        [](const CpLambda& c) { return "C_p_lambda(" + join({c.p, c.lambda}) + ")"; },
                        [](const Cs& c) { return "C_s(" + join({c.s}) + ")"; },
                    },
                    which);
}

ConstantSpec parse_constant(const std::string& text) {
  const auto [name, v] = split_call(text);
  if (name == "C_p_alpha") {
    expect_count(text, v, 2);
    return CpAlpha{v[0], v[1]};
  }
  if (name == "C_q_s") {
    expect_count(text, v, 2);
    return Cqs{v[0], v[1]};
  }
  if (name == "C_lambda") {
    expect_count(text, v, 1);
    return CLambda{v[0]};
  }
  if (name == "C_p_lambda") {
    expect_count(text, v, 2);
    return CpLambda{v[0], v[1]};
  }
  if (name == "C_s") {
    expect_count(text, v, 1);
    return Cs{v[0]};
  }
  fail(ErrorKind::InvalidParameter, "unknown constant '" + name + "'");
}

ConstantIntegrand::ConstantIntegrand(const ConstantSpec& which, const QuadratureConfig& cfg) {
  double jacobi = 0.0;
  std::visit(overloaded{
                 [&](const CpAlpha& c) {
                   require_positive(c.p, "p");
                   require(std::isfinite(c.alpha) && c.alpha > -1.0, "alpha must exceed -1");
                   jacobi = c.alpha;
                   if (c.p <= c.alpha + 2.0) {
                     // int |sigma_a'|^p (1-|z|^2)^alpha after w = sigma_a(z).
                     q_ = c.p - 2.0;
                     s_ = c.alpha + 2.0 - c.p;
                   } else {
                     // Direct form; (1-|a|^2)^p sum |1 - conj(a) z|^{-2p} grows without bound.
                     finite_ = false;
                     q_ = c.alpha - c.p;
                     s_ = c.p;
                   }
                 },
                 [&](const Cqs& c) {
                   validate_mobius_exponents(c.q, c.s);
                   q_ = c.q;
                   s_ = c.s;
                   jacobi = q_ + s_;
                 },
                 [&](const CLambda& c) {
                   require(c.lambda > 0.0 && c.lambda <= 1.0, "lambda must lie in (0, 1]");
                   q_ = 1.0 - c.lambda;
                   s_ = c.lambda;
                   jacobi = 1.0;
                 },
                 [&](const CpLambda& c) {
                   require_positive(c.p, "p");
                   require(c.lambda > 0.0 && c.lambda < 2.0, "lambda must lie in (0, 2)");
                   q_ = c.p - c.lambda;
                   s_ = c.lambda;
                   jacobi = c.p;
                 },
                 [&](const Cs& c) {
                   require_positive(c.s, "s");
                   q_ = 0.0;
                   s_ = c.s;
                   jacobi = c.s;
                 },
             },
             which);
  integ_ = std::make_shared<MobiusWeightIntegrator>([](Complex) { return 1.0; }, jacobi, s_, cfg);
}

IntegralResult ConstantIntegrand::operator()(Complex a) const { return (*integ_)(a); }

NormResult space_constant(const ConstantSpec& which, const ConstantSearch& search, const QuadratureConfig& cfg) {
  const ConstantIntegrand integrand(which, cfg);
  std::vector<double> rhos = search.rhos;
  if (rhos.empty()) {
    for (int i = 0; i < 20; ++i) rhos.push_back(0.05 * i);
    for (int j = 5; j <= 10; ++j) rhos.push_back(1.0 - std::ldexp(1.0, -j));
  }
  std::sort(rhos.begin(), rhos.end());
  rhos.erase(std::unique(rhos.begin(), rhos.end()), rhos.end());
  for (double r : rhos) require(r >= 0.0 && r < 1.0, "constant scan radii must lie in [0, 1)");

  NormResult res;
  res.scale = describe(which);
  res.route = "rho-scan";
  std::vector<IntegralResult> scan(rhos.size());
  parallel_for(rhos.size(), [&](std::size_t i) { scan[i] = integrand(rhos[i]); });
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    res.trace.push_back({rhos[i], scan[i].value, scan[i].abs_error_estimate, scan[i].converged});
  }

  const std::size_t n = rhos.size();
  double tail_ratio = 0.0;
  bool growing = false;
  if (n >= 3) {
    const double r1 = scan[n - 2].value / scan[n - 3].value;
    const double r2 = scan[n - 1].value / scan[n - 2].value;
    tail_ratio = r2;
    growing = r1 > search.growth_ratio && r2 > search.growth_ratio;
  }
  if (!integrand.finite() || growing) {
    std::ostringstream os;
    os << res.scale << " is infinite: the defining integral grows by a factor " << tail_ratio
       << " between the last scan radii";
    if (!integrand.finite()) os << " (p > alpha + 2)";
    fail(ErrorKind::InfiniteConstant, os.str());
  }

  std::size_t b = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (scan[i].value > scan[b].value) b = i;
  }
  double lo = rhos[b == 0 ? 0 : b - 1];
  double hi = rhos[b + 1 < n ? b + 1 : b];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto eval = [&](double r) {
    const auto ir = integrand(r);
    res.trace.push_back({r, ir.value, ir.abs_error_estimate, ir.converged});
    return ir.value;
  };
  if (hi > lo) {
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = eval(x1), f2 = eval(x2);
    for (int it = 0; it < 200 && hi - lo > search.rho_tol; ++it) {
      if (f1 >= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = eval(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = eval(x2);
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    if (res.trace[i].value > res.trace[best].value) best = i;
  }
  res.sup_a = res.trace[best].a;
  res.sup_integral = res.trace[best].value;
  res.value = res.sup_integral;
  res.integral_error = res.error_estimate = res.trace[best].error;
  res.converged = res.trace[best].converged;
  res.root = 1.0;
  attach_grid(res, cfg);
  return res;
}

}  // namespace hqr
