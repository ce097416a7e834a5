#include <random>

#include "doctest.h"
#include "hqr/families.hpp"
#include "hqr/spaces.hpp"
#include "oracles.hpp"

using namespace hqr;

namespace {

SupSearchSpec small_search() {
  SupSearchSpec s;
  s.radii = {0.0, 0.3, 0.6};
  s.angles_per_radius = 4;
  s.refine = false;
  return s;
}

QuadratureConfig compose_cfg() {
  QuadratureConfig c = norm_quadrature();
  c.radial = 48;
  c.angular = 96;
  return c;
}

}  // namespace

TEST_SUITE("spaces") {

TEST_CASE("parameter validation and parsing") {
  CHECK_THROWS_AS(validate(Fpqs{2.0, -1.5, 0.4}), Error);
  CHECK_THROWS_AS(validate(Fpqs{2.0, -2.5, 2.0}), Error);
  CHECK_THROWS_AS(validate(Mpqs{0.0, 0.0, 1.0}), Error);
  CHECK_THROWS_AS(validate(Qnpa{0, 2.0, 0.0}), Error);
  CHECK_THROWS_AS(validate(Morrey{1.5}), Error);
  CHECK_NOTHROW(validate(Morrey{1.0}));
  CHECK(is_trivial(Qnpa{1, 3.0, 0.5}));
  CHECK_FALSE(is_trivial(Qnpa{1, 2.0, 0.0}));

  for (const SpaceParams& p : {SpaceParams(Qnpa{2, 1.5, 0.5}), SpaceParams(Fpqs{2, 0, 1}), SpaceParams(Mpqs{3, 0.5, 0.25}),
                               SpaceParams(Morrey{0.5}), SpaceParams(BergmanMorrey{2, 1.5}), SpaceParams(Qs{0.5}),
                               SpaceParams(BlochAlpha{1})}) {
    CHECK(describe(parse_space(describe(p))) == describe(p));
  }
  CHECK(describe(parse_space("Q:1,2,0.5")) == "Q(1,2,0.5)");
  CHECK_THROWS_AS(parse_space("Q(1,2)"), Error);
  CHECK_THROWS_AS(parse_space("F(2,x,1)"), Error);
  CHECK_THROWS_AS(parse_space("Nope(1)"), Error);
  CHECK_THROWS_AS(parse_space("F(2,-1.5,0.4)"), Error);
  CHECK(describe(parse_constant("C_p_alpha(2,0.5)")) == "C_p_alpha(2,0.5)");
}

TEST_CASE("constant maps have zero seminorm") {
  const auto c = constant(Complex(2.0, -1.0));
  for (const Qnpa& p : {Qnpa{1, 2.0, 0.0}, Qnpa{1, 1.5, 0.5}}) {
    const auto r = q_npa_norm(c, p);
    CHECK(r.value == 0.0);
    CHECK(r.f0_term == doctest::Approx(std::sqrt(5.0)));
  }
  CHECK(q_npa_norm(c, Qnpa{2, 2.0, 3.0}, small_search(), compose_cfg()).value == 0.0);
}

TEST_CASE("identity map in Q(1,2,0)") {
  const auto r = q_npa_norm(identity(), Qnpa{1, 2.0, 0.0});
  CHECK(r.route == "change-of-variables");
  CHECK(r.sup_integral == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
  // Every a gives the area of the disk.
  for (const auto& t : r.trace) CHECK(t.value == doctest::Approx(kPi).epsilon(1e-12));
  const auto c = q_npa_norm(identity(), Qnpa{1, 2.0, 0.0}, small_search(), compose_cfg(), QRoute::Compose);
  CHECK(c.sup_integral == doctest::Approx(kPi).epsilon(1e-8));
}

TEST_CASE("routes agree") {
  const auto f = poly({0.0, 0.5, Complex(0.2, 0.1), 0.3});
  for (const Qnpa& p : {Qnpa{1, 2.0, 0.5}, Qnpa{1, 1.5, 0.0}, Qnpa{1, 3.0, 1.5}}) {
    CAPTURE(describe(p));
    const auto a = q_npa_norm(f, p, small_search(), norm_quadrature(), QRoute::ChangeOfVariables);
    const auto b = q_npa_norm(f, p, small_search(), compose_cfg(), QRoute::Compose);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
      const double gap = std::abs(a.trace[i].value - b.trace[i].value);
      CHECK(gap <= std::max(1e-7 * a.trace[i].value, 2.0 * (a.trace[i].error + b.trace[i].error)));
    }
  }
  CHECK_THROWS_AS(q_npa_norm(f, Qnpa{2, 1.0, 0.0}, small_search(), compose_cfg(), QRoute::ChangeOfVariables), Error);
}

TEST_CASE("mobius invariance of the Q seminorm") {
  const auto f = poly({0.0, 0.0, 1.0});
  const Qnpa p{1, 2.0, 0.5};
  const auto base = q_npa_norm(f, p);
  for (Complex b : {Complex(0.3, 0.0), Complex(0.0, 0.6), Complex(-0.5, 0.4)}) {
    CAPTURE(b);
    const auto moved = q_npa_norm(compose_mobius(f, MobiusMap(DiskPoint(b))), p);
    CHECK(std::abs(moved.value - base.value) <= 1e-6 * base.value);
  }
}

TEST_CASE("trivial scale warns") {
  const auto r = q_npa_norm(identity(), Qnpa{2, 2.0, 0.5}, small_search(), compose_cfg());
  // (sigma_a)'' does not vanish, so z has a finite but nonzero integral at each a.
  CHECK(r.route == "compose");
  CHECK(r.value > 0.0);
  REQUIRE(r.warnings.size() == 1);
  const auto t = q_npa_norm(poly({0.0, 0.0, 1.0}), Qnpa{1, 3.0, 0.5}, small_search(), compose_cfg());
  CHECK(t.warnings.size() == 1);
  CHECK(t.value > 0.0);
}

TEST_CASE("harmonic Q seminorm") {
  const auto h = poly({0.0, 1.0, 0.5});
  const Qnpa p{1, 2.0, 0.5};
  const auto an = q_npa_norm(h, p);
  const auto hm = qh_npa_norm(HarmonicMap(h, constant(0.0)), p);
  CHECK(std::abs(an.value - hm.value) <= 1e-10 * an.value);

  // z + k conj(z): Lambda = 1 + k.
  const auto id = q_npa_norm(identity(), p);
  for (double k : {0.25, 0.5}) {
    const auto r = qh_npa_norm(affine_extremal(k, 1), p);
    CHECK(r.value == doctest::Approx((1 + k) * id.value).epsilon(1e-12));
    const auto c = qh_npa_norm(affine_extremal(k, -1), p, small_search(), compose_cfg(), QRoute::Compose);
    CHECK(c.sup_integral == doctest::Approx(std::pow(1 + k, 2.0) * q_npa_norm(identity(), p, small_search()).sup_integral).epsilon(1e-8));
  }

  // Real part u of f: per-a integrand |F' o sigma_a|^p |sigma_a'|^p.
  const auto f = from_dilatation(derivative(koebe()), poly({0.0, 0.3}));
  const auto u = real_part_map(f);
  const auto F = conjugate_parts(f).F;
  const auto ru = qh_npa_norm(u, p, small_search(), compose_cfg(), QRoute::Compose);
  const auto rF = q_npa_norm(F, p, small_search(), compose_cfg(), QRoute::Compose);
  for (std::size_t i = 0; i < ru.trace.size(); ++i) {
    CHECK(ru.trace[i].value == doctest::Approx(rF.trace[i].value).epsilon(1e-12));
  }
  // |grad (u o sigma_a)| by differences equals |(F o sigma_a)'|.
  const MobiusMap m(DiskPoint(Complex(0.3, 0.2)));
  const Complex z(0.1, -0.4);
  const double d = 1e-5;
  auto uf = [&](Complex w) { return u.value(m(w)).real(); };
  const double gx = (uf(z + d) - uf(z - d)) / (2 * d), gy = (uf(z + Complex(0, d)) - uf(z - Complex(0, d))) / (2 * d);
  CHECK(std::hypot(gx, gy) == doctest::Approx(std::abs(compose_mobius(F, m).derivative(z))).epsilon(1e-7));
}

TEST_CASE("F scale") {
  const auto id = HarmonicMap::analytic(identity());
  const auto r = fh_pqs_norm(id, Fpqs{2, 0, 1});
  CHECK(r.sup_integral == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(std::abs(r.sup_a) < 1e-3);
  for (const auto& t : r.trace) CHECK(t.value <= kPi / 2 * (1 + 1e-12));

  // z - k conj(z): constant Lambda.
  const double k = 0.5;
  const Fpqs p{3.0, 0.5, 0.75};
  const auto fr = fh_pqs_norm(affine_extremal(k, -1), p);
  const auto c = space_constant(Cqs{p.q, p.s});
  CHECK(fr.sup_integral == doctest::Approx(std::pow(1 + k, 3.0) * c.value).epsilon(1e-7));

  // Green form at a = 0: int (1-|z|^2) log(1/|z|) dA = 3 pi / 8.
  SupSearchSpec zero;
  zero.radii = {0.0};
  zero.refine = false;
  const auto g = fh_pqs_norm(id, Fpqs{2, 1, 1}, zero, WeightForm::Green);
  CHECK(g.sup_integral == doctest::Approx(3 * kPi / 8).epsilon(1e-8));
  CHECK(g.route == "green-weight");
}

TEST_CASE("M scale") {
  const auto zero = m_pqs_norm([](Complex) { return Complex(0.0, 0.0); }, 0.0, Mpqs{2, 0, 1});
  CHECK(zero.value == 0.0);
  const auto one = m_pqs_norm([](Complex) { return Complex(1.0, 0.0); }, 1.0, Mpqs{2, 0, 1});
  CHECK(one.value == doctest::Approx(1 + std::sqrt(kPi / 2)).epsilon(1e-12));
  CHECK(one.f0_included);
  // Truncated Koebe grows with the cut radius.
  double prev = 0.0;
  for (double R : {0.5, 0.75, 0.9}) {
    const auto kb = koebe();
    const auto r = m_pqs_norm([kb, R](Complex z) { return std::abs(z) <= R ? kb.value(z) : Complex(0, 0); }, 0.0,
                              Mpqs{2, 0, 1}, small_search());
    CHECK(r.value > prev);
    prev = r.value;
  }
}

TEST_CASE("specialized scales") {
  const auto f = HarmonicMap(poly({0.0, 1.0, 0.3}), poly({0.0, 0.2}));
  const auto qs = specialized_norm(f, Qs{1.0});
  const auto fq = fh_pqs_norm(f, Fpqs{2, 0, 1});
  CHECK(qs.value == fq.value);
  const auto mo = specialized_norm(f, Morrey{0.5});
  CHECK(mo.value == fh_pqs_norm(f, Fpqs{2, 0.5, 0.5}).value);
  const auto bm = norm(f, BergmanMorrey{3, 1.5});
  CHECK(bm.value == fh_pqs_norm(f, Fpqs{3, 1.5, 1.5}).value);

  const auto b = specialized_norm(HarmonicMap::analytic(identity()), BlochAlpha{1.0});
  CHECK(b.value == 1.0);
  CHECK(b.sup_a == Complex(0, 0));
  const auto shifted = specialized_norm(HarmonicMap::analytic(poly({2.0, 1.0})), BlochAlpha{1.0});
  CHECK(shifted.value == 3.0);
}

TEST_CASE("sup search") {
  // Smooth bump with its peak off the coarse grid.
  const Complex peak(0.41, -0.27);
  auto eval = [peak](Complex a) {
    IntegralResult r;
    r.value = std::exp(-8.0 * std::norm(a - peak));
    return r;
  };
  const auto r = sup_search(eval, {});
  CHECK(std::abs(r.sup_a - peak) < 2e-3);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-4));
  for (const auto& t : r.trace) {
    CHECK(std::abs(t.a) <= (1.0 - std::ldexp(1.0, -10)) * (1 + 1e-15));
    CHECK(t.value <= r.value);
  }
  // Deterministic regardless of thread scheduling.
  const auto again = sup_search(eval, {});
  REQUIRE(again.trace.size() == r.trace.size());
  for (std::size_t i = 0; i < r.trace.size(); ++i) CHECK(again.trace[i].a == r.trace[i].a);

  SupSearchSpec bad;
  bad.seeds = {Complex(1.0, 0.0)};
  CHECK_THROWS_AS(sup_search(eval, bad), Error);
  auto nan_eval = [](Complex) {
    IntegralResult r;
    r.value = std::nan("");
    return r;
  };
  CHECK_THROWS_AS(sup_search(nan_eval, small_search()), Error);
}

TEST_CASE("constants") {
  const auto c1 = space_constant(Cs{1.0});
  CHECK(c1.value == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(std::abs(c1.sup_a) < 1e-6);
  // Series oracle in rho = |a|^2 along the scan.
  for (const auto& t : c1.trace) {
    if (t.a.real() < 0.97) CHECK(t.value == doctest::Approx(oracle::c1_series(std::norm(t.a))).epsilon(1e-9));
  }

  for (double alpha : {0.0, 0.5, 2.0}) {
    const ConstantIntegrand ci(CpAlpha{2.0, alpha});
    CHECK(ci(0.0).value == doctest::Approx(kPi / (alpha + 1)).epsilon(1e-13));
    // p = alpha + 2 makes the integral independent of a.
    const ConstantIntegrand flat(CpAlpha{alpha + 2, alpha});
    CHECK(flat(0.7).value == doctest::Approx(kPi / (alpha + 1)).epsilon(1e-12));
  }
  const auto cpa = space_constant(CpAlpha{1.5, 0.0});
  CHECK(cpa.value >= kPi * (1 - 1e-12));
  MESSAGE("C_p_alpha(1.5,0) = " << cpa.value << " at rho = " << cpa.sup_a.real());

  const ConstantIntegrand q(Cqs{0.5, 0.75});
  for (double rho : {0.0, 0.4, 0.8}) {
    CHECK(q(rho).value == doctest::Approx(oracle::mobius_constant_series(rho, 0.5, 0.75)).epsilon(1e-9));
  }

  const auto cl = space_constant(CLambda{0.5});
  CHECK(std::isfinite(cl.value));
  CHECK(cl.value > 0.0);
  CHECK(space_constant(CLambda{0.5}).value == space_constant(Cqs{0.5, 0.5}).value);
  CHECK(space_constant(CpLambda{2.0, 0.5}).value == space_constant(Cqs{1.5, 0.5}).value);
}

TEST_CASE("constant rotation invariance") {
  for (const ConstantSpec& c : {ConstantSpec(CpAlpha{1.5, 0.5}), ConstantSpec(Cqs{0.5, 0.75}), ConstantSpec(CLambda{0.5}),
                                ConstantSpec(Cs{0.6})}) {
    CAPTURE(describe(c));
    const ConstantIntegrand ci(c);
    for (double rho : {0.3, 0.9}) {
      const double ref = ci(rho).value;
      for (int m = 1; m < 8; ++m) {
        CHECK(ci(std::polar(rho, 2 * kPi * m / 8)).value == doctest::Approx(ref).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("infinite constants") {
  try {
    space_constant(CpAlpha{3.0, 0.0});
    FAIL("expected infinite constant");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InfiniteConstant);
  }
  CHECK_THROWS_AS(space_constant(Cqs{-1.5, 0.2}), Error);
  CHECK_THROWS_AS(space_constant(CLambda{0.0}), Error);
}

TEST_CASE("monotone under integrand domination") {
  const MobiusWeightIntegrator lo([](Complex z) { return std::norm(z); }, 1.0, 0.5, norm_quadrature());
  const MobiusWeightIntegrator hi([](Complex z) { return std::norm(z) + 0.1 * std::abs(z.real()); }, 1.0, 0.5,
                                  norm_quadrature());
  std::mt19937_64 rng(43);
  for (int i = 0; i < 50; ++i) {
    const Complex a = oracle::random_disk_point(rng, 0.99);
    CHECK(lo(a).value <= hi(a).value);
  }
}

}
