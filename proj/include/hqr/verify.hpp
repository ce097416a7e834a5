#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hqr/families.hpp"
#include "hqr/harmonic.hpp"
#include "hqr/spaces.hpp"

namespace hqr {

/// Bookkeeping of the growth-exponent integral estimate
///   int (1-|z|^2)^{q + s - p gamma} |1 - conj(a) z|^{-2s} dA.
struct RangeCheck {
  double p = 0.0, q = 0.0, s = 0.0, gamma = 0.0;
  double t = 0.0;  // q + s - p gamma
  double c = 0.0;  // s - q - 2 + p gamma
  /// min((q + s + 1) / gamma, (q + 2) / gamma)
  double bound = 0.0;
  bool in_range = false;
  /// "t<=-1", "c<0", "c=0" or "c>0".
  std::string regime;
  /// |2 + t + c - 2 s|
  double identity_residual = 0.0;

  static RangeCheck make(double p, double q, double s, double gamma);
};

enum class MembershipTarget { F, Fz, Fzbar, FTheta, BFb };
std::string to_string(MembershipTarget t);
MembershipTarget membership_target_from(const std::string& name);

struct MembershipData {
  RangeCheck range;
  double alpha_K = 0.0;
  std::string target;
  /// Truncation radii R_j = 1 - 2^{-j} and truncated norms.
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> relative_changes;
  bool stabilized = false;
  /// Slope of log value against -log(1 - R) over the last fit points.
  double divergence_exponent = 0.0;
  /// "finite" or "divergent".
  std::string status;
  /// max over samples of |target| / ((1 + k) |h'|) for the angular and
  /// radial targets; negative when not checked.
  double pointwise_ratio = -1.0;
  std::size_t mesh_nodes = 0;
};

struct VerificationReport {
  std::string check;
  std::string map_description;
  std::string scale;
  double K = 1.0;
  double Kprime = 0.0;
  /// True when lhs and rhs are p-th powers.
  bool power_scale = false;
  double p = 1.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string constant_name;
  double constant_value = 0.0;
  Complex sup_a_u{0.0, 0.0};
  Complex sup_a_v{0.0, 0.0};
  bool converged = true;
  int grid_radial = 0;
  int grid_angular = 0;
  std::vector<std::string> warnings;
  std::optional<MembershipData> membership;
};

/// margin = rhs - lhs, pass = margin >= -tol * rhs.
void settle(VerificationReport& r);

struct VerifyOptions {
  SupSearchSpec search{};
  QuadratureConfig cfg = norm_quadrature();
  ConstantSearch constant_search{};
  QrSampling qr_grid{};
  double tol = 1e-6;
  /// Reject maps whose sampled dilatation exceeds K.
  bool check_hypotheses = true;
};

/// ||v|| <= K ||u|| in Q_h(1, p, alpha), alpha + 1 < p < alpha + 2.
VerificationReport verify_q_conjugate(const HarmonicMap& f, double K, double p, double alpha,
                                      const VerifyOptions& opts = {});

/// ||v|| <= K ||u|| in F_h(p, q, s).
VerificationReport verify_f_conjugate(const HarmonicMap& f, double K, const Fpqs& params,
                                      const VerifyOptions& opts = {});

/// ||v||^p <= 2^{max(p-1,0)} (K^p ||u||^p + K'^{p/2} C_{p,alpha}) in Q_h(1, p, alpha).
VerificationReport verify_q_kkprime(const HarmonicMap& f, double K, double Kprime, double p, double alpha,
                                    const VerifyOptions& opts = {});

/// ||v||^p <= 2^{max(p-1,0)} (K^p ||u||^p + K'^{p/2} C_{q,s}) in F_h(p, q, s).
VerificationReport verify_f_kkprime(const HarmonicMap& f, double K, double Kprime, const Fpqs& params,
                                    const VerifyOptions& opts = {});

/// Morrey, Bergman-Morrey and Qs versions through the F scale. With
/// with_kprime the bound carries the matching constant C_lambda, C_{p,lambda}
/// or C_s.
VerificationReport verify_scale_bound(const HarmonicMap& f, double K, double Kprime, const SpecialScale& scale,
                                      bool with_kprime, const VerifyOptions& opts = {});

struct MembershipOptions {
  int levels = 12;
  int first_reported = 3;
  double stabilization = 1e-3;
  int fit_points = 4;
  SupSearchSpec search{};
  int pointwise_samples = 1000;
  double pointwise_tol = 1e-10;
  std::uint64_t seed = 7;
};

/// Modulus of the target (M scales) or its Lambda (F scales) at the nodes of
/// a graded mesh, shared by every exponent p.
class MembershipSamples {
 public:
  MembershipSamples(const HarmonicMap& f, MembershipTarget target, bool f_scale, int levels = 12);

  const GradedMesh& mesh() const noexcept { return *mesh_; }
  const std::vector<std::vector<double>>& magnitudes() const noexcept { return mag_; }
  MembershipTarget target() const noexcept { return target_; }
  bool f_scale() const noexcept { return f_scale_; }
  /// Additive |target(0)| of M scales, 0 for F scales.
  double f0() const noexcept { return f0_; }
  const HarmonicMap& map() const noexcept { return f_; }
  /// Relative size of the highest radial fit coefficients used for values of
  /// f itself; 0 when no values were needed.
  double fit_tail() const noexcept { return fit_tail_; }

 private:
  HarmonicMap f_;
  MembershipTarget target_;
  bool f_scale_;
  double f0_ = 0.0;
  double fit_tail_ = 0.0;
  std::shared_ptr<GradedMesh> mesh_;
  std::vector<std::vector<double>> mag_;
};

/// Truncated M_h or F_h norms of the chosen target at R_j = 1 - 2^{-j}.
/// pass = (in range implies stabilized); out-of-range divergence is
/// informational.
VerificationReport verify_membership(const MembershipSamples& samples, const OrderModel& model,
                                     const std::variant<Mpqs, Fpqs>& scale, const MembershipOptions& opts = {});

VerificationReport verify_membership(const HarmonicMap& f, const OrderModel& model,
                                     const std::variant<Mpqs, Fpqs>& scale, MembershipTarget target,
                                     const MembershipOptions& opts = {});

struct RatioEntry {
  Complex a;
  double mobius = 0.0;
  double green = 0.0;
  double ratio = 0.0;
};

struct RatioReport {
  std::vector<RatioEntry> entries;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};

/// Green-weight over Mobius-weight integrals of |f'|^p (1-|z|^2)^q on a grid
/// of a. No constant is asserted.
RatioReport green_mobius_ratio(const AnalyticFn& f, double p, double q, double s, const std::vector<Complex>& a_grid,
                               const QuadratureConfig& cfg = norm_quadrature());

/// 2^{max(p-1,0)} (A^p + B^p) - (A + B)^p, nonnegative for A, B >= 0.
double power_inequality_slack(double A, double B, double p);

}  // namespace hqr
