#include "hqr/mobius.hpp"

#include <cmath>
#include <sstream>

namespace hqr {

DiskPoint::DiskPoint(Complex z) : z_(z) {
  const double r = std::abs(z);
  if (!std::isfinite(r) || r >= 1.0) {
    std::ostringstream os;
    os << "point " << z << " is not in the open unit disk";
    fail(ErrorKind::InvalidParameter, os.str());
  }
  near_boundary_ = r >= 1.0 - kBoundaryBand;
}

MobiusMap::MobiusMap(DiskPoint a)
    : a_(a), abar_(std::conj(a.value())), one_minus_a2_(1.0 - std::norm(a.value())) {}

DiskPoint MobiusMap::sigma(DiskPoint z) const {
  return DiskPoint((*this)(z.value()));
}

std::vector<Complex> MobiusMap::derivatives(Complex z, int order) const {
  require(order >= 1, "derivative order must be positive");
  std::vector<Complex> out(static_cast<std::size_t>(order));
  derivatives_into(z, out);
  return out;
}

void MobiusMap::derivatives_into(Complex z, std::span<Complex> out) const noexcept {
  // sigma^{(j)} = -(1-|a|^2) j! conj(a)^{j-1} / (1 - conj(a) z)^{j+1}
  if (out.empty()) return;
  const Complex inv = 1.0 / (1.0 - abar_ * z);
  out[0] = first_derivative(z);
  Complex term = -one_minus_a2_ * inv * inv;
  for (std::size_t j = 1; j < out.size(); ++j) {
    term *= static_cast<double>(j + 1) * abar_ * inv;
    out[j] = term;
  }
}

double MobiusMap::green(DiskPoint z) const { return green(z.value()); }

double MobiusMap::green(Complex z) const {
  const double m = std::abs((*this)(z));
  if (m == 0.0) {
    std::ostringstream os;
    os << "Green's function is singular at z = a = " << a_.value();
    fail(ErrorKind::Singularity, os.str());
  }
  return -std::log(m);
}

}  // namespace hqr
