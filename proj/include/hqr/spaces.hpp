#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "hqr/analytic.hpp"
#include "hqr/harmonic.hpp"
#include "hqr/quadrature.hpp"

namespace hqr {

struct Qnpa {
  int n = 1;
  double p = 2.0;
  double alpha = 0.0;
};
struct Fpqs {
  double p = 2.0;
  double q = 0.0;
  double s = 1.0;
};
struct Mpqs {
  double p = 2.0;
  double q = 0.0;
  double s = 1.0;
};
struct Morrey {
  double lambda = 0.5;
};
struct BergmanMorrey {
  double p = 2.0;
  double lambda = 1.0;
};
struct Qs {
  double s = 1.0;
};
struct BlochAlpha {
  double alpha = 1.0;
};

using SpaceParams = std::variant<Qnpa, Fpqs, Mpqs, Morrey, BergmanMorrey, Qs, BlochAlpha>;

/// Throws an invalid-parameter error when a range condition fails.
void validate(const SpaceParams& params);
/// n p > alpha + 2: the space holds only constants.
bool is_trivial(const Qnpa& params);

/// "Q(1,2,0.5)", "F(2,0,1)", "Morrey(0.5)", ...
std::string describe(const SpaceParams& params);

/// Inverse of describe, also accepting "Q:1,2,0.5" style. Throws on
/// malformed input.
SpaceParams parse_space(const std::string& text);

/// Morrey(l) = F(2, 1 - l, l), BergmanMorrey(p, l) = F(p, p - l, l), Qs(s) = F(2, 0, s).
Fpqs as_f_scale(const Morrey& m);
Fpqs as_f_scale(const BergmanMorrey& m);
Fpqs as_f_scale(const Qs& m);

struct SupSearchSpec {
  /// 0 and 1 - 2^{-j}, j = 1..10.
  std::vector<double> radii = default_radii();
  int angles_per_radius = 16;
  bool refine = true;
  double initial_step = 0.25;
  double step_shrink = 0.5;
  /// Compass steps are taken in the disk metric: a move of h changes a by
  /// h (1 - |a|^2).
  double min_step = 1e-3;
  int max_evaluations = 400;
  /// Extra candidates evaluated with the coarse grid.
  std::vector<Complex> seeds;

  static std::vector<double> default_radii();
  double radius_cap() const;
};

struct TraceEntry {
  Complex a;
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

struct NormResult {
  std::string scale;
  std::string route;
  double value = 0.0;
  /// sup over the trace of the per-a quantity (the p-th power for scales
  /// that take a root).
  double sup_integral = 0.0;
  double root = 1.0;
  double f0_term = 0.0;
  bool f0_included = false;
  Complex sup_a{0.0, 0.0};
  double error_estimate = 0.0;
  double integral_error = 0.0;
  bool converged = true;
  std::vector<TraceEntry> trace;
  std::vector<std::string> warnings;
  int grid_radial = 0;
  int grid_angular = 0;
};

/// One doubling, non-strict: norms report convergence instead of failing.
QuadratureConfig norm_quadrature();

using PerPointEvaluator = std::function<IntegralResult(Complex a)>;

/// Coarse polar scan, seeds, then compass search with shrinking steps and a
/// quadratic polish. Fills trace, sup_integral, sup_a and the error fields;
/// value is left at sup_integral.
NormResult sup_search(const PerPointEvaluator& eval, const SupSearchSpec& spec);

enum class QRoute { Auto, Compose, ChangeOfVariables };

/// Seminorm (sup_a int |(f o sigma_a)^{(n)}|^p (1-|z|^2)^alpha dA)^{1/p}.
/// For n = 1 and p <= alpha + 2 the substitution w = sigma_a(z) turns the
/// integral into int |f'|^p (1-|w|^2)^{p-2} (1-|sigma_a(w)|^2)^{2-p+alpha} dA,
/// which is tabulated once; otherwise each a composes and integrates.
NormResult q_npa_norm(const AnalyticFn& f, const Qnpa& params, const SupSearchSpec& search = {},
                      const QuadratureConfig& cfg = norm_quadrature(), QRoute route = QRoute::Auto);

/// Harmonic version with integrand (|(h o sigma_a)^{(n)}| + |(g o sigma_a)^{(n)}|)^p.
NormResult qh_npa_norm(const HarmonicMap& f, const Qnpa& params, const SupSearchSpec& search = {},
                       const QuadratureConfig& cfg = norm_quadrature(), QRoute route = QRoute::Auto);

enum class WeightForm { Mobius, Green };

/// Seminorm (sup_a int Lambda_f^p (1-|z|^2)^q W(z, a) dA)^{1/p}.
NormResult fh_pqs_norm(const HarmonicMap& f, const Fpqs& params, const SupSearchSpec& search = {},
                       WeightForm form = WeightForm::Mobius,
                       const QuadratureConfig& cfg = norm_quadrature());

using DiskFunction = std::function<Complex(Complex)>;

/// |f(0)| + (sup_a int |f|^p (1-|z|^2)^q (1-|sigma_a|^2)^s dA)^{1/p}.
NormResult m_pqs_norm(const DiskFunction& f, Complex f0, const Mpqs& params,
                      const SupSearchSpec& search = {}, const QuadratureConfig& cfg = norm_quadrature());

using SpecialScale = std::variant<Morrey, BergmanMorrey, Qs, BlochAlpha>;

/// Morrey, BergmanMorrey and Qs go through fh_pqs_norm with mapped
/// parameters. BlochAlpha is |f(0)| + sup_z (1-|z|^2)^alpha Lambda_f(z).
NormResult specialized_norm(const HarmonicMap& f, const SpecialScale& scale,
                            const SupSearchSpec& search = {},
                            const QuadratureConfig& cfg = norm_quadrature());

/// Dispatch on the scale. M scales measure |f| itself.
NormResult norm(const HarmonicMap& f, const SpaceParams& params, const SupSearchSpec& search = {},
                const QuadratureConfig& cfg = norm_quadrature());

struct CpAlpha {
  double p = 2.0;
  double alpha = 0.0;
};
struct Cqs {
  double q = 0.0;
  double s = 1.0;
};
struct CLambda {
  double lambda = 0.5;
};
struct CpLambda {
  double p = 2.0;
  double lambda = 1.0;
};
struct Cs {
  double s = 1.0;
};

using ConstantSpec = std::variant<CpAlpha, Cqs, CLambda, CpLambda, Cs>;

std::string describe(const ConstantSpec& which);
ConstantSpec parse_constant(const std::string& text);

/// Defining integral of a constant at one Mobius parameter.
class ConstantIntegrand {
 public:
  explicit ConstantIntegrand(const ConstantSpec& which, const QuadratureConfig& cfg = norm_quadrature());
  IntegralResult operator()(Complex a) const;
  /// Exponents of the equivalent form int (1-|z|^2)^q (1-|sigma_a|^2)^s dA,
  /// and whether the constant is finite.
  double q() const noexcept { return q_; }
  double s() const noexcept { return s_; }
  bool finite() const noexcept { return finite_; }

 private:
  double q_ = 0.0, s_ = 0.0;
  bool finite_ = true;
  std::shared_ptr<MobiusWeightIntegrator> integ_;
};

struct ConstantSearch {
  /// Coarse rho values; defaults to 0, 0.05, ..., 0.95 and 1 - 2^{-j}, j = 5..10.
  std::vector<double> rhos;
  double rho_tol = 1e-7;
  /// Ratio between successive scan values beyond which growth at the end of
  /// the scan counts as divergence.
  double growth_ratio = 1.25;
};

/// sup over a in [0, 1) of the defining integral: coarse rho scan, then golden
/// section around the best bracket. Throws an infinite-constant error when
/// the constant diverges.
NormResult space_constant(const ConstantSpec& which, const ConstantSearch& search = {},
                          const QuadratureConfig& cfg = norm_quadrature());

}  // namespace hqr
