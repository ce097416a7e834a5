#include <random>

#include "doctest.h"
#include "hqr/families.hpp"
#include "oracles.hpp"

using namespace hqr;

TEST_SUITE("families") {

TEST_CASE("from_dilatation examples") {
  const auto f = from_dilatation(constant(1.0), constant(0.5));
  const Complex z(0.3, -0.2);
  CHECK(std::abs(f.value(z) - (z + 0.5 * std::conj(z))) < 1e-13);
  CHECK(estimate_quasiregularity(f).K_est == doctest::Approx(3.0).epsilon(1e-12));

  const auto an = from_dilatation(derivative(koebe()), constant(0.0));
  CHECK(an.g().value(z) == Complex(0, 0));
  CHECK(std::abs(an.h().value(z) - koebe().value(z)) < 1e-12);

  CHECK_THROWS_AS(from_dilatation(constant(1.0), constant(1.0)), Error);
  try {
    from_dilatation(constant(1.0), poly({0.0, 1.2}));
    FAIL("expected non-quasiregular");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonQuasiregular);
  }
}

TEST_CASE("recovered dilatation matches the prescribed one") {
  std::mt19937_64 rng(31);
  const auto w = poly({0.1, Complex(0.0, 0.3), 0.2});
  const auto maps = {from_dilatation(derivative(koebe()), w),
                     shear({cayley_half(), w, false}),
                     shear({koebe(), w, true})};
  for (const auto& f : maps) {
    CAPTURE(f.label());
    for (int i = 0; i < 100; ++i) {
      const Complex z = oracle::random_disk_point(rng, 0.9);
      const double got = std::abs(f.g().derivative(z)) / std::abs(f.h().derivative(z));
      CHECK(got == doctest::Approx(std::abs(w.value(z))).epsilon(1e-8));
    }
  }
}

TEST_CASE("shear examples") {
  const double k = 0.4;
  const auto f = shear({identity(), constant(k), false});
  const Complex z(0.25, 0.5);
  const Complex hz = z / (1 - k);
  CHECK(std::abs(f.value(z) - (hz + std::conj(k * hz))) < 1e-12);
  CHECK(std::abs(f.h().value(z) - f.g().value(z) - z) < 1e-12);

  const auto n = shear({identity(), constant(k), true});
  CHECK(std::abs(n.h().value(0.0)) == 0.0);
  CHECK(std::abs(n.g().value(0.0)) == 0.0);
  CHECK(std::abs(n.h().derivative(0.0) - 1.0) <= 1e-12);

  const auto plain = shear({koebe(), constant(0.0), false});
  CHECK(std::abs(plain.value(z) - koebe().value(z)) < 1e-10 * std::abs(koebe().value(z)));

  // h - g = phi for a nonconstant dilatation.
  const auto s = shear({cayley_half(), poly({0.0, 0.5}), false});
  std::mt19937_64 rng(37);
  for (int i = 0; i < 50; ++i) {
    const Complex p = oracle::random_disk_point(rng, 0.9);
    CHECK(std::abs(s.h().value(p) - s.g().value(p) - cayley_half().value(p)) < 1e-10 * (1 + std::abs(cayley_half().value(p))));
  }
  CHECK(estimate_quasiregularity(s, {48, 96, 0.999, 8}).K_est == doctest::Approx(3.0).epsilon(1e-2));
}

TEST_CASE("normalized koebe shear") {
  const auto f = shear({koebe(), poly({0.0, 0.3}), true});
  CHECK(std::abs(f.h().value(0.0)) == 0.0);
  CHECK(std::abs(f.g().value(0.0)) == 0.0);
  CHECK(std::abs(f.h().derivative(0.0) - 1.0) <= 1e-12);
  const auto e = estimate_quasiregularity(f);
  CHECK(e.min_jacobian > 0.0);
  MESSAGE("normalized koebe shear: min sampled Jacobian " << e.min_jacobian);
}

TEST_CASE("affine extremal") {
  for (double k : {0.0, 0.2, 0.5, 0.8}) {
    const auto f = affine_extremal(k, -1);
    const auto p = conjugate_parts(f);
    for (Complex z : {Complex(0.1, 0.2), Complex(-0.7, 0.1), Complex(0.0, 0.95)}) {
      CHECK(std::abs(p.G.derivative(z)) / std::abs(p.F.derivative(z)) == (1 + k) / (1 - k));
    }
    const auto g = conjugate_parts(affine_extremal(k, 1));
    CHECK(std::abs(g.G.derivative(0.3)) / std::abs(g.F.derivative(0.3)) == doctest::Approx((1 - k) / (1 + k)));
  }
  CHECK_THROWS_AS(affine_extremal(1.0, 1), Error);
  CHECK_THROWS_AS(affine_extremal(0.5, 0), Error);
}

TEST_CASE("kkprime example") {
  const auto f = kkprime_example();
  const auto e = estimate_quasiregularity(f, {}, 1.0);
  CHECK(e.unbounded_dilatation);
  CHECK(e.Kprime_residual == 4.0);
  CHECK(sampled_kprime(f, 1.0, 0.0) == 4.0);
  const std::vector<Complex> pts{Complex(0.1, 0.1), Complex(-0.5, 0.2)};
  CHECK(pointwise_conjugate_bound(f, QrParams::make(1.0, 4.0), pts).min_margin == 4.0);
}

TEST_CASE("perturbed affine maps") {
  const auto f = perturbed_affine(0.5, 0.4);
  // |g'| = |0.5 + 0.8 z| reaches 1.3, so lambda vanishes on |0.5 + 0.8 z| = 1.
  CHECK(sampled_sup_modulus(poly({0.5, 0.8})) > 1.0);
  const double K = 3.0;
  const double kp = sampled_kprime(f, K);
  CHECK(kp > 0.0);
  // At z = 1: Lambda = 2.3, J = 1 - 1.69.
  CHECK(kp >= (2.3 * 2.3 - K * (1 - 1.69)) * (1 - 1e-6));
  std::mt19937_64 rng(41);
  for (int i = 0; i < 500; ++i) {
    const auto w = wirtinger(f, oracle::random_disk_point(rng, 0.999));
    CHECK(w.lambda_big * w.lambda_big <= K * w.jacobian + kp);
  }
}

TEST_CASE("order model") {
  CHECK(OrderModel::conjectured(1.0).alpha_K == 2.0);
  CHECK(OrderModel::conjectured(3.0).alpha_K == 2.5);
  for (double K : {1.0, 1.5, 4.0, 100.0}) CHECK(OrderModel::conjectured(K).alpha_K >= 1.0);
  CHECK(OrderModel::with_order(2.0, 2.7).alpha_K == 2.7);
  CHECK_THROWS_AS(OrderModel::conjectured(0.9), Error);
}

TEST_CASE("growth exponents") {
  const auto radii = dyadic_radii(3, 12);
  CHECK(radii.size() == 10);
  const auto fit = growth_exponent(HarmonicMap::analytic(koebe()), GrowthTarget::HPrime, radii);
  CHECK(fit.beta == doctest::Approx(3.0).epsilon(0.05 / 3));
  CHECK_FALSE(fit.non_monotone);
  // Oracle: |k'(r)| = (1 + r) / (1 - r)^3 is the max over the circle.
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    CHECK(fit.maxima[i] == doctest::Approx((1 + r) / std::pow(1 - r, 3)).epsilon(1e-12));
  }
  const auto affine = affine_extremal(0.5, 1);
  for (auto t : {GrowthTarget::HPrime, GrowthTarget::GPrime, GrowthTarget::HSecond}) {
    CHECK(std::abs(growth_exponent(affine, t, radii).beta) < 1e-12);
  }
  const auto f_fit = growth_exponent(HarmonicMap::analytic(koebe()), GrowthTarget::FItself, radii);
  CHECK(f_fit.beta == doctest::Approx(2.0).epsilon(0.05));
  const auto s = shear({cayley_half(), poly({0.0, 0.5}), false});
  const auto sf = growth_exponent(s, GrowthTarget::HPrime, radii);
  MESSAGE("shear(z/(1-z), z/2) h' exponent " << sf.beta << " vs alpha_K + 1 = "
                                             << OrderModel::conjectured(3.0).alpha_K + 1);
  CHECK(sf.beta <= OrderModel::conjectured(3.0).alpha_K + 1);
  CHECK(growth_target_from("hsecond") == GrowthTarget::HSecond);
  CHECK_THROWS_AS(growth_target_from("bogus"), Error);
}

}
