#include <random>

#include "doctest.h"
#include "hqr/families.hpp"
#include "hqr/harmonic.hpp"
#include "oracles.hpp"

using namespace hqr;

namespace {

std::vector<HarmonicMap> sample_maps() {
  return {
      HarmonicMap::analytic(koebe()),
      affine_extremal(0.5, 1),
      affine_extremal(0.5, -1),
      shear({cayley_half(), poly({0.0, 0.5}), false}),
      from_dilatation(derivative(koebe()), poly({0.0, 0.3})),
      kkprime_example(),
  };
}

}  // namespace

TEST_SUITE("harmonic") {

TEST_CASE("wirtinger examples") {
  auto w = wirtinger(affine_extremal(0.5, 1), Complex(0.2, 0.1));
  CHECK(w.lambda_big == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(w.lambda_small == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(w.jacobian == doctest::Approx(0.75).epsilon(1e-15));

  const auto an = HarmonicMap::analytic(koebe());
  const Complex z(0.3, -0.4);
  w = wirtinger(an, z);
  const double d = std::abs(koebe().derivative(z));
  CHECK(w.lambda_big == d);
  CHECK(w.lambda_small == d);
  CHECK(w.jacobian == doctest::Approx(d * d).epsilon(1e-15));

  w = wirtinger(kkprime_example(), 0.5);
  CHECK(w.lambda_big == 2.0);
  CHECK(w.lambda_small == 0.0);
  CHECK(w.jacobian == 0.0);
}

TEST_CASE("g(0) normalization") {
  CHECK_THROWS_AS(HarmonicMap(identity(), poly({0.1, 1.0})), Error);
  const auto f = HarmonicMap::normalized(identity(), poly({Complex(0.1, 0.2), 1.0}));
  CHECK(std::abs(f.g().value(0.0)) == 0.0);
  const Complex z(0.3, 0.3);
  const Complex expect = z + std::conj(Complex(0.1, 0.2) + z);
  CHECK(std::abs(f.value(z) - expect) < 1e-15);
}

TEST_CASE("qr params") {
  const auto p = QrParams::make(3.0, 4.0);
  CHECK(p.k == 0.5);
  CHECK(p.mu1 == p.k);
  CHECK(p.mu2 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(QrParams::make(2.0).mu2 == 0.0);
  CHECK(QrParams::K_from_k(0.5) == 3.0);
  CHECK_THROWS_AS(QrParams::make(0.5), Error);
  CHECK_THROWS_AS(QrParams::make(2.0, -1.0), Error);
}

TEST_CASE("conjugate parts") {
  const Complex z(0.4, -0.1);
  const auto an = conjugate_parts(HarmonicMap::analytic(koebe()));
  CHECK(an.F.value(z) == koebe().value(z));
  CHECK(an.G.value(z) == koebe().value(z));
  const auto plus = conjugate_parts(affine_extremal(0.5, 1));
  CHECK(plus.F.derivative(z) == Complex(1.5, 0));
  CHECK(plus.G.derivative(z) == Complex(0.5, 0));
  const auto minus = conjugate_parts(affine_extremal(0.5, -1));
  CHECK(std::abs(minus.G.derivative(z)) / std::abs(minus.F.derivative(z)) == 3.0);
}

TEST_CASE("real and imaginary part maps") {
  std::mt19937_64 rng(21);
  for (const auto& f : sample_maps()) {
    CAPTURE(f.label());
    const auto u = real_part_map(f);
    const auto v = imag_part_map(f);
    const auto parts = conjugate_parts(f);
    for (int i = 0; i < 50; ++i) {
      const Complex z = oracle::random_disk_point(rng, 0.8);
      const Complex fz = f.value(z);
      const double scale = 1 + std::abs(fz);
      CHECK(std::abs(u.value(z) - fz.real()) <= 1e-12 * scale);
      CHECK(std::abs(v.value(z) - fz.imag()) <= 1e-12 * scale);
      CHECK(std::abs(u.value(z).imag()) <= 1e-12 * scale);
      // Lambda of a real harmonic function is |grad| = |F'| (resp. |G'|).
      CHECK(wirtinger(u, z).lambda_big == doctest::Approx(std::abs(parts.F.derivative(z))).epsilon(1e-13));
      CHECK(wirtinger(v, z).lambda_big == doctest::Approx(std::abs(parts.G.derivative(z))).epsilon(1e-13));
    }
  }
}

TEST_CASE("gradient of u from finite differences") {
  const auto f = from_dilatation(derivative(koebe()), poly({0.0, 0.3}));
  const auto F = conjugate_parts(f).F;
  const Complex z(0.2, 0.35);
  const double h = 1e-5;
  const double ux = (f.value(z + h).real() - f.value(z - h).real()) / (2 * h);
  const double uy = (f.value(z + Complex(0, h)).real() - f.value(z - Complex(0, h)).real()) / (2 * h);
  CHECK(std::hypot(ux, uy) == doctest::Approx(std::abs(F.derivative(z))).epsilon(1e-7));
}

TEST_CASE("angular and radial derivatives") {
  const auto id = HarmonicMap::analytic(identity());
  const Complex z(0.3, 0.4);
  auto ar = angular_radial(id, z);
  CHECK(std::abs(ar.f_theta - Complex(0, 1) * z) < 1e-16);
  CHECK(std::abs(ar.b_f_b - z) < 1e-16);
  ar = angular_radial(kkprime_example(), 0.0);
  CHECK(ar.f_theta == Complex(0, 0));
  CHECK(ar.b_f_b == Complex(0, 0));
  ar = angular_radial(kkprime_example(), 0.5);
  CHECK(std::abs(ar.f_theta) < 1e-16);
  CHECK(std::abs(ar.b_f_b - 1.0) < 1e-16);

  // Polar differences of f(b e^{i theta}).
  const auto f = shear({cayley_half(), poly({0.0, 0.5}), false});
  const double b = 0.6, t = 0.7, d = 1e-5;
  const Complex ft = (f.value(std::polar(b, t + d)) - f.value(std::polar(b, t - d))) / (2 * d);
  const Complex fb = (f.value(std::polar(b + d, t)) - f.value(std::polar(b - d, t))) / (2 * d);
  ar = angular_radial(f, std::polar(b, t));
  CHECK(std::abs(ar.f_theta - ft) < 1e-7);
  CHECK(std::abs(ar.b_f_b - b * fb) < 1e-7);
}

TEST_CASE("pointwise comparability of Lambda and the gradient") {
  std::mt19937_64 rng(23);
  for (const auto& f : sample_maps()) {
    CAPTURE(f.label());
    for (int i = 0; i < 200; ++i) {
      const Complex z = oracle::random_disk_point(rng, 0.95);
      const auto w = wirtinger(f, z);
      const double grad = gradient_norm(w);
      CHECK(w.lambda_big <= grad * (1 + 1e-12));
      CHECK(grad <= std::sqrt(2.0) * w.lambda_big * (1 + 1e-12));
      const double sign = std::abs(w.fz) >= std::abs(w.fzbar) ? 1.0 : -1.0;
      CHECK(w.jacobian == doctest::Approx(sign * w.lambda_big * w.lambda_small).epsilon(1e-14));
    }
  }
  // Upper bound attained by f = z, lower by u = Re z.
  const auto id = wirtinger(HarmonicMap::analytic(identity()), 0.3);
  CHECK(gradient_norm(id) == doctest::Approx(std::sqrt(2.0) * id.lambda_big).epsilon(1e-15));
  const auto re = wirtinger(real_part_map(HarmonicMap::analytic(identity())), 0.3);
  CHECK(gradient_norm(re) == doctest::Approx(re.lambda_big).epsilon(1e-15));
}

TEST_CASE("quasiregularity estimates") {
  auto e = estimate_quasiregularity(affine_extremal(0.5, 1));
  CHECK(e.K_est == doctest::Approx(3.0).epsilon(1e-14));
  CHECK_FALSE(e.unbounded_dilatation);
  e = estimate_quasiregularity(HarmonicMap::analytic(koebe()));
  CHECK(e.K_est == 1.0);
  e = estimate_quasiregularity(kkprime_example(), {}, 1.0);
  CHECK(e.Kprime_residual == 4.0);
  CHECK(e.unbounded_dilatation);
  try {
    estimate_quasiregularity(kkprime_example(), {}, 1.0, true);
    FAIL("expected non-quasiregular error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NonQuasiregular);
  }
  // Dilatation k z: D_f = (1 + k|z|) / (1 - k|z|), largest at r_max.
  const auto f = from_dilatation(derivative(koebe()), poly({0.0, 0.5}));
  QrSampling grid;
  e = estimate_quasiregularity(f, grid);
  const double kr = 0.5 * grid.r_max;
  CHECK(e.K_est == doctest::Approx((1 + kr) / (1 - kr)).epsilon(1e-12));
  CHECK(e.min_jacobian > 0.0);
}

TEST_CASE("pointwise conjugate bound") {
  std::mt19937_64 rng(29);
  std::vector<Complex> pts;
  for (int i = 0; i < 300; ++i) pts.push_back(oracle::random_disk_point(rng, 0.95));
  auto m = pointwise_conjugate_bound(affine_extremal(0.5, -1), QrParams::make(3.0), pts);
  CHECK(std::abs(m.min_margin) <= 1e-15);
  m = pointwise_conjugate_bound(HarmonicMap::analytic(koebe()), QrParams::make(1.0), pts);
  CHECK(m.min_margin == 0.0);
  // z + conj(z): F = 2z, G = 0, so the margin is K*2 + 2.
  m = pointwise_conjugate_bound(kkprime_example(), QrParams::make(1.0, 4.0), pts);
  CHECK(m.min_margin == 4.0);
  // z - conj(z): F = 0, G = 2z, so |G'| = 2 = sqrt(K') exactly.
  m = pointwise_conjugate_bound(HarmonicMap(identity(), poly({0.0, -1.0})), QrParams::make(1.0, 4.0), pts);
  CHECK(m.min_margin == 0.0);
  CHECK(m.samples == pts.size());
  try {
    pointwise_conjugate_bound(affine_extremal(0.5, -1), QrParams::make(2.0), pts);
    FAIL("expected hypothesis violation");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::HypothesisViolation);
  }
  // Any dilatation with sup|w| <= k satisfies |G'| <= K |F'|.
  for (const auto& f : {shear({koebe(), poly({0.0, 0.5}), false}),
                        from_dilatation(derivative(koebe()), poly({0.2, 0.0, 0.3}))}) {
    const double K = QrParams::K_from_k(0.5);
    CHECK(pointwise_conjugate_bound(f, QrParams::make(K * (1 + 1e-12)), pts).min_margin >= 0.0);
  }
}

}
