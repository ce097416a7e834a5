#include <random>
#include <vector>

#include "doctest.h"
#include "hqr/kernels.hpp"
#include "oracles.hpp"

using namespace hqr;
using namespace hqr::kernels;

namespace {

struct Nodes {
  std::vector<double> x, y, c;
};

Nodes random_nodes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  Nodes s;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex z = oracle::random_disk_point(rng, 0.999);
    s.x.push_back(z.real());
    s.y.push_back(z.imag());
    s.c.push_back(u(rng));
  }
  return s;
}

std::vector<Isa> simd_sets() {
  std::vector<Isa> out;
  for (Isa i : {Isa::Avx2, Isa::Neon}) {
    if (isa_available(i)) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("active table is available") {
  const auto& t = active();
  CHECK(isa_available(t.isa));
  MESSAGE("active kernel set: " << isa_name(t.isa));
  CHECK(isa_available(Isa::Scalar));
}

TEST_CASE("scalar mobius sum matches a direct evaluation") {
  const auto s = random_nodes(101, 1);
  const Complex a(0.4, -0.7);
  for (double e : {0.5, 1.0, 1.5, 2.0, 3.0, 0.37, 1.234, -0.5}) {
    double ref = 0.0;
    for (std::size_t i = 0; i < s.c.size(); ++i) {
      ref += s.c[i] * std::pow(std::abs(1.0 - std::conj(a) * Complex(s.x[i], s.y[i])), -2.0 * e);
    }
    const double got = table_for(Isa::Scalar).mobius_weighted_sum(s.x.data(), s.y.data(), s.c.data(),
                                                                   s.c.size(), a.real(), a.imag(), e);
    CHECK(got == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("simd variants agree with the scalar reference") {
  for (Isa isa : simd_sets()) {
    CAPTURE(isa_name(isa));
    const auto& simd = table_for(isa);
    const auto& ref = table_for(Isa::Scalar);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 31u, 1000u, 4099u}) {
      const auto s = random_nodes(n, n + 5);
      for (Complex a : {Complex(0, 0), Complex(0.5, 0.2), Complex(-0.99, 0.05)}) {
        for (double e : {0.5, 1.0, 1.5, 2.0, 4.5, 0.3, 2.71}) {
          const double r = ref.mobius_weighted_sum(s.x.data(), s.y.data(), s.c.data(), n, a.real(), a.imag(), e);
          const double v = simd.mobius_weighted_sum(s.x.data(), s.y.data(), s.c.data(), n, a.real(), a.imag(), e);
          CHECK(v == doctest::Approx(r).epsilon(1e-12));
        }
      }
      std::vector<double> o1(n), o2(n), p1(n), p2(n);
      ref.modulus(s.x.data(), s.y.data(), o1.data(), n);
      simd.modulus(s.x.data(), s.y.data(), o2.data(), n);
      ref.modulus_sum(s.x.data(), s.y.data(), s.c.data(), s.x.data(), p1.data(), n);
      simd.modulus_sum(s.x.data(), s.y.data(), s.c.data(), s.x.data(), p2.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(o2[i] == doctest::Approx(o1[i]).epsilon(1e-15));
        CHECK(p2[i] == doctest::Approx(p1[i]).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("unavailable kernel sets are rejected") {
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (!isa_available(isa)) CHECK_THROWS_AS(table_for(isa), Error);
  }
}

}
