#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hqr/core.hpp"
#include "hqr/mobius.hpp"

namespace hqr {

/// Highest derivative order any evaluator stores.
inline constexpr int kMaxJetOrder = 7;
/// Faa di Bruno composition is limited to this order.
inline constexpr int kMaxComposeOrder = 6;

/// Value and derivatives f^{(j)}(z), j = 0..order, of an analytic function.
class Jet {
 public:
  Jet() = default;
  explicit Jet(int order);

  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(order_) + 1; }

  Complex& operator[](std::size_t j) noexcept { return d_[j]; }
  const Complex& operator[](std::size_t j) const noexcept { return d_[j]; }

  std::span<const Complex> values() const noexcept { return {d_.data(), size()}; }

 private:
  std::array<Complex, kMaxJetOrder + 1> d_{};
  int order_ = 0;
};

/// Evaluator interface behind AnalyticFn. Implementations are immutable, so
/// evaluation is reentrant.
class AnalyticEvaluator {
 public:
  virtual ~AnalyticEvaluator() = default;

  /// order <= max_order() is guaranteed by AnalyticFn.
  virtual Jet jet(Complex z, int order) const = 0;
  virtual int max_order() const = 0;
  virtual std::string description() const = 0;

  /// Jet of f' of the given order, i.e. f', ..., f^{(order+1)}. The default
  /// shifts jet(z, order + 1); evaluators whose value is expensive (radial
  /// antiderivatives and anything built on them) skip f itself.
  virtual Jet prime_jet(Complex z, int order) const;

  /// Estimated absolute error of the order-th entry; zero for closed forms.
  virtual double error_estimate(Complex z, int order) const;

  /// Values at radius[i] * direction for ascending radii. The default calls
  /// jet() per point; radial antiderivatives override it to integrate
  /// cumulatively along the ray.
  virtual void values_on_ray(Complex direction, std::span<const double> radii,
                             std::span<Complex> out) const;
};

/// An analytic function on the unit disk, held by shared immutable evaluator.
class AnalyticFn {
 public:
  explicit AnalyticFn(std::shared_ptr<const AnalyticEvaluator> impl);

  Jet jet(Complex z, int order) const;
  Complex value(Complex z) const { return impl_->jet(z, 0)[0]; }
  Complex derivative(Complex z) const;
  /// f', ..., f^{(order+1)} without evaluating f.
  Jet prime_jet(Complex z, int order) const;

  int max_order() const { return impl_->max_order(); }
  std::string description() const { return impl_->description(); }
  double error_estimate(Complex z, int order) const { return impl_->error_estimate(z, order); }

  void values_on_ray(Complex direction, std::span<const double> radii,
                     std::span<Complex> out) const;

  const AnalyticEvaluator& evaluator() const noexcept { return *impl_; }

 private:
  std::shared_ptr<const AnalyticEvaluator> impl_;
};

/// Polynomial with ascending coefficients.
AnalyticFn poly(std::vector<Complex> coefficients);
AnalyticFn constant(Complex c);
AnalyticFn identity();

/// Truncated power series sum_{m < truncation} c_m z^m. Throws an accuracy
/// error at points where the tail has not started decreasing.
AnalyticFn power_series(std::vector<Complex> coefficients, std::size_t truncation);

/// z / (1 - z)^2
AnalyticFn koebe();
/// z / (1 - z)
AnalyticFn cayley_half();

enum class CombineOp { Add, Sub, Mul, Div };

/// Pointwise arithmetic with jets from the Leibniz and quotient rules.
/// Div throws a pole error where the denominator vanishes.
AnalyticFn combine(CombineOp op, const AnalyticFn& f, const AnalyticFn& g);

inline AnalyticFn operator+(const AnalyticFn& f, const AnalyticFn& g) { return combine(CombineOp::Add, f, g); }
inline AnalyticFn operator-(const AnalyticFn& f, const AnalyticFn& g) { return combine(CombineOp::Sub, f, g); }
inline AnalyticFn operator*(const AnalyticFn& f, const AnalyticFn& g) { return combine(CombineOp::Mul, f, g); }
inline AnalyticFn operator/(const AnalyticFn& f, const AnalyticFn& g) { return combine(CombineOp::Div, f, g); }
AnalyticFn operator*(Complex c, const AnalyticFn& f);

/// f o sigma_a, jets via Faa di Bruno (Bell polynomial recursion).
AnalyticFn compose_mobius(const AnalyticFn& f, const MobiusMap& m);

/// Jet of f o sigma_a at z without building an AnalyticFn. The order-1 entry
/// is exactly f'(sigma_a(z)) * sigma_a'(z).
Jet compose_jet(const AnalyticFn& f, const MobiusMap& m, Complex z, int order);

/// F with F(0) = base_value and F' = f, integrating along the radial segment
/// [0, z] with adaptive Gauss-Legendre panels.
AnalyticFn antiderivative(const AnalyticFn& f, Complex base_value);

/// f' as an analytic function (jets shifted by one).
AnalyticFn derivative(const AnalyticFn& f);

}  // namespace hqr
