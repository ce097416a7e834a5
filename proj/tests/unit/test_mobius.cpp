#include <random>

#include "doctest.h"
#include "hqr/mobius.hpp"
#include "oracles.hpp"

using namespace hqr;

TEST_SUITE("mobius") {

TEST_CASE("disk point rejects the boundary and flags the band") {
  CHECK_THROWS_AS(DiskPoint(1.0, 0.0), Error);
  CHECK_THROWS_AS(DiskPoint(0.8, 0.8), Error);
  CHECK_THROWS_AS(DiskPoint(Complex(std::nan(""), 0.0)), Error);
  CHECK_FALSE(DiskPoint(0.5, 0.0).near_boundary());
  CHECK(DiskPoint(1.0 - 5e-16, 0.0).near_boundary());
  try {
    DiskPoint(2.0, 0.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParameter);
  }
}

TEST_CASE("sigma examples") {
  const MobiusMap m(DiskPoint(0.5, 0.0));
  CHECK(std::abs(m.sigma(DiskPoint(0.5, 0.0)).value()) == doctest::Approx(0.0));
  CHECK(m.sigma(DiskPoint(0.0, 0.0)).re() == doctest::Approx(0.5));
  CHECK(m.sigma(DiskPoint(0.25, 0.0)).re() == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("derivative examples") {
  const MobiusMap m0(DiskPoint(0.0, 0.0));
  CHECK(m0.derivatives(0.3, 1)[0] == Complex(-1.0, 0.0));
  const MobiusMap m(DiskPoint(0.5, 0.0));
  CHECK(std::abs(m.derivatives(0.0, 1)[0] - Complex(-0.75, 0.0)) < 1e-15);
  CHECK(std::abs(m.derivatives(0.0, 2)[1] - Complex(-0.75, 0.0)) < 1e-15);
  CHECK_THROWS_AS(m.derivatives(0.0, 0), Error);
}

TEST_CASE("derivatives match finite differences") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const MobiusMap m(DiskPoint(oracle::random_disk_point(rng, 0.9)));
    const Complex z = oracle::random_disk_point(rng, 0.9);
    const auto d = m.derivatives(z, 3);
    const double h = 1e-5;
    const Complex fd1 = (m(z + h) - m(z - h)) / (2 * h);
    CHECK(std::abs(fd1 - d[0]) < 1e-6 * (1 + std::abs(d[0])));
    const auto dp = m.derivatives(z + h, 2), dm = m.derivatives(z - h, 2);
    CHECK(std::abs((dp[1] - dm[1]) / (2 * h) - d[2]) < 1e-5 * (1 + std::abs(d[2])));
  }
}

TEST_CASE("green examples") {
  const MobiusMap m0(DiskPoint(0.0, 0.0));
  CHECK(m0.green(DiskPoint(std::polar(0.5, 1.1))) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  const MobiusMap m(DiskPoint(0.5, 0.0));
  CHECK(m.green(DiskPoint(0.0, 0.0)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  const MobiusMap m3(DiskPoint(0.3, 0.0));
  try {
    m3.green(DiskPoint(0.3, 0.0));
    FAIL("expected singularity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Singularity);
  }
}

TEST_CASE("one minus sigma squared examples") {
  const MobiusMap m0(DiskPoint(0.0, 0.0));
  CHECK(m0.one_minus_sigma_sq(Complex(0.3, 0.4)) == doctest::Approx(0.75));
  const MobiusMap m(DiskPoint(0.5, 0.0));
  CHECK(m.one_minus_sigma_sq(0.0) == doctest::Approx(0.75));
  CHECK(m.one_minus_sigma_sq(0.5) == 1.0);
}

TEST_CASE("involution, chain and product identities on random pairs") {
  std::mt19937_64 rng(11);
  double worst_inv = 0, worst_chain = 0, worst_prod = 0;
  for (int i = 0; i < 1000; ++i) {
    const MobiusMap m(DiskPoint(oracle::random_disk_point(rng, 0.99)));
    const Complex z = oracle::random_disk_point(rng, 0.99);
    worst_inv = std::max(worst_inv, std::abs(m(m(z)) - z));
    worst_chain = std::max(worst_chain, std::abs(m.first_derivative(m(z)) * m.first_derivative(z) - 1.0));
    worst_prod = std::max(worst_prod, std::abs(m.one_minus_sigma_sq(z) - (1.0 - std::norm(m(z)))));
    CHECK(m.green(z) > 0.0);
  }
  CHECK(worst_inv <= 1e-12);
  CHECK(worst_chain <= 1e-12);
  CHECK(worst_prod <= 1e-12);
}

}
