#include "doctest.h"
#include "support.hpp"

#include "dimer/core.hpp"

#include <cmath>

using namespace dimer;

TEST_CASE("bloch_from_canonical examples") {
  const auto n = bloch_from_canonical(1.0, 0.7);
  CHECK(n.sx == doctest::Approx(0.0));
  CHECK(n.sy == doctest::Approx(0.0));
  CHECK(n.sz == doctest::Approx(0.5));

  const auto e = bloch_from_canonical(0.0, 0.0);
  CHECK(e.sx == doctest::Approx(0.5));
  CHECK(e.sz == doctest::Approx(0.0));

  // p = 1/2, q = pi/6: sqrt(3/4)/2 = 0.4330, times cos(pi/3), sin(pi/3)
  const auto s = bloch_from_canonical(0.5, kPi / 6.0);
  CHECK(s.sx == doctest::Approx(0.21650635094611).epsilon(1e-12));
  CHECK(s.sy == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(s.sz == doctest::Approx(0.25));

  CHECK_THROWS_AS(bloch_from_canonical(1.0 + 1e-9, 0.0), DomainError);
}

TEST_CASE("canonical_from_bloch examples") {
  auto a = canonical_from_bloch({0.5, 0.0, 0.0});
  CHECK(a.p == doctest::Approx(0.0));
  CHECK(a.q == doctest::Approx(0.0));
  CHECK_FALSE(a.at_pole);

  auto b = canonical_from_bloch({0.0, 0.5, 0.0});
  CHECK(b.q == doctest::Approx(kPi / 4.0));

  auto c = canonical_from_bloch({0.0, 0.0, -0.5});
  CHECK(c.p == doctest::Approx(-1.0));
  CHECK(c.q == 0.0);
  CHECK(c.at_pole);

  // negative sy lands in the upper half of [0, pi)
  auto d = canonical_from_bloch({0.0, -0.5, 0.0});
  CHECK(d.q == doctest::Approx(3.0 * kPi / 4.0));
}

TEST_CASE("bloch_from_spinor examples") {
  auto a = bloch_from_spinor({{1.0, 0.0}, {0.0, 0.0}});
  CHECK(a.sz == doctest::Approx(0.5));
  const double r = 1.0 / std::sqrt(2.0);
  auto b = bloch_from_spinor({{r, 0.0}, {r, 0.0}});
  CHECK(b.sx == doctest::Approx(0.5));
  auto c = bloch_from_spinor({{r, 0.0}, {0.0, r}});
  CHECK(c.sx == doctest::Approx(0.0));
  CHECK(c.sy == doctest::Approx(0.5));
  CHECK(c.sz == doctest::Approx(0.0));
  CHECK_THROWS_AS(bloch_from_spinor({{0.0, 0.0}, {0.0, 0.0}}), DomainError);
}

TEST_CASE("sphere conservation of the canonical chart") {
  testing::Rng rng(1);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto s = bloch_from_canonical(rng.uniform(-1.0, 1.0), rng.uniform(-10.0, 10.0));
    worst = std::max(worst, s.sphere_defect());
  }
  CHECK(worst <= 4e-16);
}

TEST_CASE("spinor gauge invariance") {
  testing::Rng rng(2);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    SpinorState psi{rng.cnormal(), rng.cnormal()};
    const double mag = std::pow(10.0, rng.uniform(-6.0, 6.0));
    const cplx lambda = std::polar(mag, rng.uniform(0.0, 2.0 * kPi));
    const auto a = bloch_from_spinor(psi);
    const auto b = bloch_from_spinor({lambda * psi.psi1, lambda * psi.psi2});
    worst = std::max(worst, max_abs_diff(a, b));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("canonical round trip away from the poles") {
  testing::Rng rng(3);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double p = rng.uniform(-0.999, 0.999);
    const double q = rng.uniform(0.0, kPi);
    const auto back = canonical_from_bloch(bloch_from_canonical(p, q));
    worst = std::max({worst, std::abs(back.p - p),
                      std::abs(std::remainder(back.q - q, kPi))});
    const auto s = rng.sphere();
    if (std::abs(2.0 * s.sz) > 0.999) continue;
    worst = std::max(worst, max_abs_diff(bloch_from_canonical(canonical_from_bloch(s)), s));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("angles and spinors agree") {
  testing::Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const double th = rng.uniform(0.0, kPi);
    const double ph = rng.uniform(-kPi, kPi);
    const auto s = bloch_from_angles(th, ph);
    CHECK(max_abs_diff(bloch_from_spinor(spinor_from_angles(th, ph)), s) <= 1e-14);
    CHECK(max_abs_diff(bloch_from_spinor(spinor_from_bloch(s)), s) <= 1e-13);
  }
}

TEST_CASE("params validation") {
  SystemParams p;
  CHECK_NOTHROW(p.validate());
  p.v = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.v = 1.0;
  p.gamma = -0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.gamma = 0.1;
  p.n_particles = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.n_particles = 4;
  p.g = 2.0;
  CHECK(p.c() == doctest::Approx(0.5));
  CHECK(variant_from_string("pt") == Variant::PTShifted);
  CHECK_THROWS_AS(variant_from_string("foo"), std::invalid_argument);
}

TEST_CASE("trajectory invariants") {
  Trajectory tr;
  tr.times = {0.0, 1.0};
  tr.states = {{0.0, 0.0, 0.5}, {0.5, 0.0, 0.0}};
  tr.norms = {1.0, 0.5};
  CHECK_NOTHROW(tr.check_invariants());
  tr.times[1] = 0.0;
  CHECK_THROWS(tr.check_invariants());
}
