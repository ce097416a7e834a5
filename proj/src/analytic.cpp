#include "hqr/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hqr/gauss.hpp"

namespace hqr {

Jet::Jet(int order) : order_(order) {
  require(order >= 0 && order <= kMaxJetOrder, "jet order out of range");
}

double AnalyticEvaluator::error_estimate(Complex, int) const { return 0.0; }

Jet AnalyticEvaluator::prime_jet(Complex z, int order) const {
  const Jet a = jet(z, order + 1);
  Jet out(order);
  for (int j = 0; j <= order; ++j) out[j] = a[j + 1];
  return out;
}

void AnalyticEvaluator::values_on_ray(Complex direction, std::span<const double> radii,
                                      std::span<Complex> out) const {
  for (std::size_t i = 0; i < radii.size(); ++i) out[i] = jet(radii[i] * direction, 0)[0];
}

AnalyticFn::AnalyticFn(std::shared_ptr<const AnalyticEvaluator> impl) : impl_(std::move(impl)) {
  require(impl_ != nullptr, "null evaluator");
}

Jet AnalyticFn::jet(Complex z, int order) const {
  if (order < 0 || order > impl_->max_order()) {
    std::ostringstream os;
    os << "order " << order << " exceeds max order " << impl_->max_order() << " of "
       << impl_->description();
    fail(ErrorKind::InvalidParameter, os.str());
  }
  return impl_->jet(z, order);
}

Complex AnalyticFn::derivative(Complex z) const { return prime_jet(z, 0)[0]; }

Jet AnalyticFn::prime_jet(Complex z, int order) const {
  if (order < 0 || order + 1 > impl_->max_order()) {
    std::ostringstream os;
    os << "derivative order " << order + 1 << " exceeds max order " << impl_->max_order() << " of "
       << impl_->description();
    fail(ErrorKind::InvalidParameter, os.str());
  }
  return impl_->prime_jet(z, order);
}

void AnalyticFn::values_on_ray(Complex direction, std::span<const double> radii,
                               std::span<Complex> out) const {
  require(out.size() >= radii.size(), "output span too short");
  impl_->values_on_ray(direction, radii, out);
}

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::string format_coeffs(const std::vector<Complex>& c) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < c.size() && i < 6; ++i) {
    if (i) os << ",";
    if (c[i].imag() == 0.0) os << c[i].real(); else os << c[i];
  }
  if (c.size() > 6) os << ",...";
  os << ")";
  return os.str();
}

class PolyEval final : public AnalyticEvaluator {
 public:
  explicit PolyEval(std::vector<Complex> c) : c_(std::move(c)) {}

  Jet jet(Complex z, int order) const override {
    // Horner with derivative accumulation, then scale entry j by j!.
    Jet out(order);
    for (std::size_t m = c_.size(); m-- > 0;) {
      for (int j = order; j >= 1; --j) out[j] = out[j] * z + out[j - 1];
      out[0] = out[0] * z + c_[m];
    }
    double fact = 1.0;
    for (int j = 2; j <= order; ++j) {
      fact *= j;
      out[j] *= fact;
    }
    return out;
  }
  int max_order() const override { return kMaxJetOrder; }
  std::string description() const override { return "poly" + format_coeffs(c_); }

 private:
  std::vector<Complex> c_;
};

class SeriesEval final : public AnalyticEvaluator {
 public:
  SeriesEval(std::vector<Complex> c, std::size_t n) : c_(std::move(c)) {
    c_.resize(std::min(c_.size(), n));
  }

  Jet jet(Complex z, int order) const override {
    Jet out(order);
    const std::size_t n = c_.size();
    std::vector<Complex> powers(n + 1);
    powers[0] = 1.0;
    for (std::size_t m = 1; m <= n; ++m) powers[m] = powers[m - 1] * z;
    for (int j = 0; j <= order; ++j) {
      Complex s(0.0, 0.0);
      for (std::size_t m = n; m-- > static_cast<std::size_t>(j);) {
        double ff = 1.0;
        for (int i = 0; i < j; ++i) ff *= static_cast<double>(m - i);
        s += c_[m] * ff * powers[m - j];
      }
      out[j] = s;
    }
    const Tail t = tail(z, 0);
    if (t.diverging) {
      std::ostringstream os;
      os << "power series tail not decreasing at z = " << z;
      fail(ErrorKind::Accuracy, os.str());
    }
    return out;
  }
  int max_order() const override { return kMaxJetOrder; }
  std::string description() const override {
    std::ostringstream os;
    os << "series" << format_coeffs(c_) << "[N=" << c_.size() << "]";
    return os.str();
  }
  double error_estimate(Complex z, int order) const override { return tail(z, order).error; }

 private:
  struct Tail {
    double error = 0.0;
    bool diverging = false;
  };

  // Geometric tail estimate from the largest terms of the last two blocks.
  Tail tail(Complex z, int order) const {
    const std::size_t n = c_.size();
    Tail t;
    if (n < 4) return t;
    const std::size_t len = std::max<std::size_t>(1, n / 8);
    const double r = std::abs(z);
    auto term = [&](std::size_t m) {
      if (m < static_cast<std::size_t>(order)) return 0.0;
      double ff = 1.0;
      for (int i = 0; i < order; ++i) ff *= static_cast<double>(m - i);
      return std::abs(c_[m]) * ff * std::pow(r, static_cast<double>(m - order));
    };
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t m = n - 2 * len; m < n - len; ++m) b1 = std::max(b1, term(m));
    for (std::size_t m = n - len; m < n; ++m) b2 = std::max(b2, term(m));
    if (b2 == 0.0) return t;
    if (b1 == 0.0 || b2 >= b1) {
      t.diverging = b2 > 1e-300;
      t.error = b2 * static_cast<double>(n);
      return t;
    }
    const double ratio = std::pow(b2 / b1, 1.0 / static_cast<double>(len));
    t.error = b2 * ratio / (1.0 - ratio);
    return t;
  }

  std::vector<Complex> c_;
};

class KoebeEval final : public AnalyticEvaluator {
 public:
  Jet jet(Complex z, int order) const override {
    // f^{(j)} = j! (j + z) / (1 - z)^{j + 2}
    Jet out(order);
    const Complex inv = 1.0 / (1.0 - z);
    Complex p = inv * inv;
    double fact = 1.0;
    for (int j = 0; j <= order; ++j) {
      if (j > 0) {
        fact *= j;
        p *= inv;
      }
      out[j] = fact * (static_cast<double>(j) + z) * p;
    }
    return out;
  }
  int max_order() const override { return kMaxJetOrder; }
  std::string description() const override { return "koebe"; }
};

class CayleyHalfEval final : public AnalyticEvaluator {
 public:
  Jet jet(Complex z, int order) const override {
    // z/(1 - z) = 1/(1 - z) - 1, so f^{(j)} = j!/(1 - z)^{j + 1} for j >= 1
    Jet out(order);
    const Complex inv = 1.0 / (1.0 - z);
    out[0] = z * inv;
    Complex p = inv;
    double fact = 1.0;
    for (int j = 1; j <= order; ++j) {
      fact *= j;
      p *= inv;
      out[j] = fact * p;
    }
    return out;
  }
  int max_order() const override { return kMaxJetOrder; }
  std::string description() const override { return "cayley_half"; }
};

const char* op_name(CombineOp op) {
  switch (op) {
    case CombineOp::Add: return "+";
    case CombineOp::Sub: return "-";
    case CombineOp::Mul: return "*";
    case CombineOp::Div: return "/";
  }
  return "?";
}

class CombineEval final : public AnalyticEvaluator {
 public:
  CombineEval(CombineOp op, AnalyticFn f, AnalyticFn g) : op_(op), f_(std::move(f)), g_(std::move(g)) {}

  Jet jet(Complex z, int order) const override {
    const Jet a = f_.jet(z, order);
    const Jet b = g_.jet(z, order);
    Jet out(order);
    switch (op_) {
      case CombineOp::Add:
        for (int j = 0; j <= order; ++j) out[j] = a[j] + b[j];
        break;
      case CombineOp::Sub:
        for (int j = 0; j <= order; ++j) out[j] = a[j] - b[j];
        break;
      case CombineOp::Mul:
        for (int n = 0; n <= order; ++n) {
          Complex s(0.0, 0.0);
          for (int k = 0; k <= n; ++k) s += binom(n, k) * a[k] * b[n - k];
          out[n] = s;
        }
        break;
      case CombineOp::Div: {
        if (!(std::abs(b[0]) > 0.0) || !std::isfinite(std::abs(b[0]))) {
          std::ostringstream os;
          os << "denominator " << g_.description() << " vanishes at z = " << z;
          fail(ErrorKind::Pole, os.str());
        }
        const Complex inv = 1.0 / b[0];
        for (int n = 0; n <= order; ++n) {
          Complex s = a[n];
          for (int k = 1; k <= n; ++k) s -= binom(n, k) * b[k] * out[n - k];
          out[n] = s * inv;
        }
        break;
      }
    }
    return out;
  }
  Jet prime_jet(Complex z, int order) const override {
    if (op_ != CombineOp::Add && op_ != CombineOp::Sub) return AnalyticEvaluator::prime_jet(z, order);
    const Jet a = f_.prime_jet(z, order);
    const Jet b = g_.prime_jet(z, order);
    Jet out(order);
    for (int j = 0; j <= order; ++j) out[j] = op_ == CombineOp::Add ? a[j] + b[j] : a[j] - b[j];
    return out;
  }
  int max_order() const override { return std::min(f_.max_order(), g_.max_order()); }
  std::string description() const override {
    return "(" + f_.description() + " " + op_name(op_) + " " + g_.description() + ")";
  }
  double error_estimate(Complex z, int order) const override {
    const double ef = f_.error_estimate(z, order);
    const double eg = g_.error_estimate(z, order);
    if (ef == 0.0 && eg == 0.0) return 0.0;
    if (op_ == CombineOp::Add || op_ == CombineOp::Sub) return ef + eg;
    const double fa = std::abs(f_.value(z)), ga = std::abs(g_.value(z));
    if (op_ == CombineOp::Mul) return ga * ef + fa * eg;
    return (ef + fa / ga * eg) / ga;
  }

 private:
  CombineOp op_;
  AnalyticFn f_, g_;
};

class ScaleEval final : public AnalyticEvaluator {
 public:
  ScaleEval(Complex c, AnalyticFn f) : c_(c), f_(std::move(f)) {}
  Jet jet(Complex z, int order) const override {
    Jet out = f_.jet(z, order);
    for (int j = 0; j <= order; ++j) out[j] *= c_;
    return out;
  }
  Jet prime_jet(Complex z, int order) const override {
    Jet out = f_.prime_jet(z, order);
    for (int j = 0; j <= order; ++j) out[j] *= c_;
    return out;
  }
  int max_order() const override { return f_.max_order(); }
  std::string description() const override {
    std::ostringstream os;
    os << c_ << "*" << f_.description();
    return os.str();
  }
  double error_estimate(Complex z, int order) const override {
    return std::abs(c_) * f_.error_estimate(z, order);
  }
  void values_on_ray(Complex d, std::span<const double> radii, std::span<Complex> out) const override {
    f_.values_on_ray(d, radii, out);
    for (std::size_t i = 0; i < radii.size(); ++i) out[i] *= c_;
  }

 private:
  Complex c_;
  AnalyticFn f_;
};

// Entries 1..order of (f o sigma_a) from fj = f^{(k)}(sigma_a(z)); entry 0 is copied.
Jet faa_di_bruno(const Jet& fj, const MobiusMap& m, Complex z, int order) {
  Jet out(order);
  out[0] = fj[0];
  if (order == 0) return out;

  std::array<Complex, kMaxComposeOrder> s{};
  m.derivatives_into(z, std::span<Complex>(s.data(), static_cast<std::size_t>(order)));
  out[1] = fj[1] * s[0];
  if (order == 1) return out;

  // Partial Bell polynomials B[n][k](s_1, ..., s_{n-k+1}).
  constexpr int N = kMaxComposeOrder + 1;
  std::array<std::array<Complex, N>, N> bell{};
  bell[0][0] = 1.0;
  for (int n = 1; n <= order; ++n) {
    for (int k = 1; k <= n; ++k) {
      Complex acc(0.0, 0.0);
      for (int i = 1; i <= n - k + 1; ++i) {
        acc += binom(n - 1, i - 1) * s[static_cast<std::size_t>(i - 1)] * bell[n - i][k - 1];
      }
      bell[n][k] = acc;
    }
  }
  for (int n = 2; n <= order; ++n) {
    Complex acc(0.0, 0.0);
    for (int k = 1; k <= n; ++k) acc += fj[k] * bell[n][k];
    out[n] = acc;
  }
  return out;
}

class ComposeEval final : public AnalyticEvaluator {
 public:
  ComposeEval(AnalyticFn f, MobiusMap m) : f_(std::move(f)), m_(m) {}
  Jet jet(Complex z, int order) const override { return compose_jet(f_, m_, z, order); }
  Jet prime_jet(Complex z, int order) const override {
    const Jet pj = f_.prime_jet(m_(z), order);
    Jet fj(order + 1);
    for (int k = 1; k <= order + 1; ++k) fj[k] = pj[k - 1];
    const Jet full = faa_di_bruno(fj, m_, z, order + 1);
    Jet out(order);
    for (int j = 0; j <= order; ++j) out[j] = full[j + 1];
    return out;
  }
  int max_order() const override { return std::min(f_.max_order(), kMaxComposeOrder); }
  std::string description() const override {
    std::ostringstream os;
    os << f_.description() << " o sigma_" << m_.parameter().value();
    return os.str();
  }
  double error_estimate(Complex z, int order) const override {
    const double e = f_.error_estimate(m_(z), order);
    return e * std::pow(std::abs(m_.first_derivative(z)), order);
  }

 private:
  AnalyticFn f_;
  MobiusMap m_;
};

class DerivativeEval final : public AnalyticEvaluator {
 public:
  explicit DerivativeEval(AnalyticFn f) : f_(std::move(f)) {}
  Jet jet(Complex z, int order) const override { return f_.prime_jet(z, order); }
  Jet prime_jet(Complex z, int order) const override {
    const Jet a = f_.prime_jet(z, order + 1);
    Jet out(order);
    for (int j = 0; j <= order; ++j) out[j] = a[j + 1];
    return out;
  }
  int max_order() const override { return f_.max_order() - 1; }
  std::string description() const override { return "d(" + f_.description() + ")"; }
  double error_estimate(Complex z, int order) const override {
    return f_.error_estimate(z, order + 1);
  }

 private:
  AnalyticFn f_;
};

class AntiderivativeEval final : public AnalyticEvaluator {
 public:
  static constexpr double kRelTol = 1e-14;
  // Evaluation noise near the boundary; below it halving only chases rounding.
  static constexpr double kNoiseFloor = 1e-12;
  static constexpr int kMaxDepth = 50;

  AntiderivativeEval(AnalyticFn f, Complex base) : f_(std::move(f)), base_(base) {}

  Jet jet(Complex z, int order) const override {
    Jet out(order);
    out[0] = base_ + integrate(z, 0.0, 1.0).value;
    if (order > 0) {
      const Jet d = f_.jet(z, order - 1);
      for (int j = 1; j <= order; ++j) out[j] = d[j - 1];
    }
    return out;
  }
  Jet prime_jet(Complex z, int order) const override { return f_.jet(z, order); }
  int max_order() const override { return std::min(f_.max_order() + 1, kMaxJetOrder); }
  std::string description() const override { return "int(" + f_.description() + ")"; }
  double error_estimate(Complex z, int order) const override {
    if (order > 0) return f_.error_estimate(z, order - 1);
    return integrate(z, 0.0, 1.0).error + std::abs(z) * f_.error_estimate(z, 0);
  }

  void values_on_ray(Complex d, std::span<const double> radii, std::span<Complex> out) const override {
    Complex acc = base_;
    double prev = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (radii[i] > prev) acc += integrate(d, prev, radii[i]).value;
      prev = std::max(prev, radii[i]);
      out[i] = acc;
    }
  }

 private:
  struct Piece {
    Complex value;
    double error;
  };

  // int_{t0}^{t1} f(t d) d dt
  Piece integrate(Complex d, double t0, double t1) const {
    if (t1 <= t0 || d == Complex(0.0, 0.0)) return {Complex(0.0, 0.0), 0.0};
    // Pieces end at 1/2, 3/4, 7/8, ... so each sees bounded growth toward t = 1.
    Piece p{Complex(0.0, 0.0), 0.0};
    double a = t0;
    while (a < t1) {
      double b = t1;
      if (a < 0.5) {
        b = std::min(t1, 0.5);
      } else if (1.0 - a > 0x1p-50) {
        int j = static_cast<int>(std::floor(-std::log2(1.0 - a))) + 1;
        double nb = 1.0 - std::ldexp(1.0, -j);
        if (nb <= a) nb = 1.0 - std::ldexp(1.0, -(j + 1));
        b = std::min(t1, nb);
      }
      double mass = 0.0;
      const Complex whole = panel(d, a, b, mass);
      refine(d, a, b, whole, kRelTol * std::max(mass, 1e-300), 0, p);
      a = b;
    }
    return p;
  }

  // mass accumulates int |f| |d| dt for the rounding floor.
  Complex panel(Complex d, double t0, double t1, double& mass) const {
    const GaussRule& gl = gauss_legendre(10);
    const double half = 0.5 * (t1 - t0), mid = 0.5 * (t1 + t0);
    Complex s(0.0, 0.0);
    double m = 0.0;
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const Complex v = f_.value((mid + half * gl.nodes[i]) * d);
      s += gl.weights[i] * v;
      m += gl.weights[i] * std::abs(v);
    }
    mass = m * half * std::abs(d);
    return s * half * d;
  }

  void refine(Complex d, double t0, double t1, Complex whole, double tol, int depth, Piece& acc) const {
    const double mid = 0.5 * (t0 + t1);
    double ml = 0.0, mr = 0.0;
    const Complex left = panel(d, t0, mid, ml);
    const Complex right = panel(d, mid, t1, mr);
    const double err = std::abs(left + right - whole);
    const bool unresolvable = t1 - t0 <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t1);
    if (err <= tol || err <= kNoiseFloor * (ml + mr) || unresolvable) {
      acc.value += left + right;
      acc.error += err;
      return;
    }
    if (depth >= kMaxDepth) {
      std::ostringstream os;
      os << "antiderivative of " << f_.description() << " did not converge near t = " << t0;
      fail(ErrorKind::Accuracy, os.str());
    }
    refine(d, t0, mid, left, 0.5 * tol, depth + 1, acc);
    refine(d, mid, t1, right, 0.5 * tol, depth + 1, acc);
  }

  AnalyticFn f_;
  Complex base_;
};

}  // namespace

AnalyticFn poly(std::vector<Complex> coefficients) {
  require(!coefficients.empty(), "polynomial needs at least one coefficient");
  return AnalyticFn(std::make_shared<PolyEval>(std::move(coefficients)));
}

AnalyticFn constant(Complex c) { return poly({c}); }
AnalyticFn identity() { return poly({0.0, 1.0}); }

AnalyticFn power_series(std::vector<Complex> coefficients, std::size_t truncation) {
  require(truncation >= 1 && truncation <= 1'000'000, "series truncation must be in [1, 1e6]");
  if (coefficients.empty()) coefficients.push_back(0.0);
  return AnalyticFn(std::make_shared<SeriesEval>(std::move(coefficients), truncation));
}

AnalyticFn koebe() { return AnalyticFn(std::make_shared<KoebeEval>()); }
AnalyticFn cayley_half() { return AnalyticFn(std::make_shared<CayleyHalfEval>()); }

AnalyticFn combine(CombineOp op, const AnalyticFn& f, const AnalyticFn& g) {
  return AnalyticFn(std::make_shared<CombineEval>(op, f, g));
}

AnalyticFn operator*(Complex c, const AnalyticFn& f) {
  return AnalyticFn(std::make_shared<ScaleEval>(c, f));
}

AnalyticFn compose_mobius(const AnalyticFn& f, const MobiusMap& m) {
  return AnalyticFn(std::make_shared<ComposeEval>(f, m));
}

Jet compose_jet(const AnalyticFn& f, const MobiusMap& m, Complex z, int order) {
  require(order >= 0 && order <= kMaxComposeOrder, "composition order must be in [0, 6]");
  return faa_di_bruno(f.jet(m(z), order), m, z, order);
}

AnalyticFn antiderivative(const AnalyticFn& f, Complex base_value) {
  return AnalyticFn(std::make_shared<AntiderivativeEval>(f, base_value));
}

AnalyticFn derivative(const AnalyticFn& f) {
  require(f.max_order() >= 1, "cannot differentiate an order-0 evaluator");
  return AnalyticFn(std::make_shared<DerivativeEval>(f));
}

}  // namespace hqr
