#include "doctest.h"
#include "support.hpp"

#include "dimer/linear2.hpp"
#include "dimer/numerics/eig.hpp"
#include "dimer/numerics/expm.hpp"
#include "dimer/numerics/ode.hpp"

#include <cmath>

using namespace dimer;
using namespace dimer::linear2;
using numerics::ComplexMatrix;

namespace {

SystemParams pt(double eps, double v, double gamma) {
  SystemParams p;
  p.epsilon = eps;
  p.v = v;
  p.gamma = gamma;
  p.variant = Variant::PTShifted;
  return p;
}

double max_entry_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

std::vector<double> integrate_bloch(const SystemParams& p, const BlochVector& s0, const std::vector<double>& ts,
                                    double tend) {
  auto rhs = [&](double, std::span<const double> y, std::span<double> dy) {
    const auto d = bloch_rhs_linear({y[0], y[1], y[2]}, p);
    dy[0] = d.sx;
    dy[1] = d.sy;
    dy[2] = d.sz;
  };
  numerics::OdeOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-13;
  auto sol = numerics::integrate_ode(rhs, {s0.sx, s0.sy, s0.sz}, 0.0, tend, ts, o);
  std::vector<double> flat;
  for (const auto& y : sol.y_out) flat.insert(flat.end(), y.begin(), y.end());
  return flat;
}

}  // namespace

TEST_CASE("eigenvalues_pt examples against the dense solver") {
  for (double gamma : {0.5, 1.0, 2.0}) {
    const auto p = pt(0.0, 1.0, gamma);
    const auto e = eigenvalues_pt(p);
    const auto sp = numerics::eig_complex(hamiltonian(p), false);
    const double emax = gamma == 1.0 ? 1e-7 : 1e-13;  // Jordan block at the EP
    const cplx a = sp.eigenvalues[0], b = sp.eigenvalues[1];
    const double d1 = std::max(std::abs(a - e.lambda_plus), std::abs(b - e.lambda_minus));
    const double d2 = std::max(std::abs(b - e.lambda_plus), std::abs(a - e.lambda_minus));
    CHECK(std::min(d1, d2) <= emax);
  }
  CHECK(std::abs(eigenvalues_pt(pt(0, 1, 0.5)).lambda_plus - std::sqrt(0.75)) <= 1e-15);
  const auto ep = eigenvalues_pt(pt(0, 1, 1));
  CHECK(ep.is_ep);
  CHECK(std::abs(ep.lambda_plus) == 0.0);
  const auto broken = eigenvalues_pt(pt(0, 1, 2));
  CHECK(std::abs(broken.lambda_plus.real()) <= 1e-15);
  CHECK(std::abs(std::abs(broken.lambda_plus.imag()) - std::sqrt(3.0)) <= 1e-14);
  CHECK(std::abs(broken.omega - 0.5 * (broken.lambda_plus - broken.lambda_minus)) <= 1e-15);

  // decaying variant: the same pair shifted by -i gamma
  auto d = pt(0.3, 1.0, 0.4);
  d.variant = Variant::Decaying;
  const auto ed = eigenvalues_pt(d);
  const auto ep2 = eigenvalues_pt(pt(0.3, 1.0, 0.4));
  CHECK(std::abs(ed.lambda_plus - ep2.lambda_plus + cplx(0, 0.4)) <= 1e-15);
}

TEST_CASE("propagator_pt examples") {
  CHECK(max_entry_diff(propagator_pt(pt(0.2, 1, 0.3), 0.0), ComplexMatrix::identity(2)) <= 1e-15);

  // at the EP from level 1: n(t) = 1 - 2vt + 2v^2t^2
  const auto u = propagator_pt(pt(0, 1, 1), 0.5);
  const double n = std::norm(u(0, 0)) + std::norm(u(1, 0));
  CHECK(std::abs(n - 0.5) <= 1e-15);

  const auto p = pt(0, 1, 0.5);
  const auto ref = numerics::expm(cplx(0, -2.0) * hamiltonian(p));
  CHECK(max_entry_diff(propagator_pt(p, 2.0), ref) <= 1e-10);
}

TEST_CASE("propagator matches expm over a parameter sweep and both variants") {
  testing::Rng rng(40);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = pt(rng.uniform(-1, 1), rng.uniform(0.2, 2), rng.uniform(0, 2));
    if (trial % 2) p.variant = Variant::Decaying;
    const double t = rng.uniform(0, 5);
    const auto ref = numerics::expm(cplx(0, -t) * hamiltonian(p));
    CHECK(max_entry_diff(propagator(p, t), ref) <= 1e-10 * std::max(1.0, numerics::norm_frobenius(ref)));
  }
}

TEST_CASE("propagator is continuous across the EP switch") {
  // gamma slightly off v so that |omega| crosses each threshold
  const double t = 1.7;
  const auto uep = propagator_pt(pt(0, 1, 1), t);
  double prev = 0.0;
  for (double dg : {1e-16, 1e-13, 1e-10, 1e-8, 1e-7, 1e-6, 1e-5}) {
    // omega^2 = 1 - (1+dg)^2 ~ -2 dg, |omega| ~ sqrt(2 dg)
    const auto u = propagator_pt(pt(0, 1, 1 + dg), t);
    const auto ref = numerics::expm(cplx(0, -t) * hamiltonian(pt(0, 1, 1 + dg)));
    CHECK(max_entry_diff(u, ref) <= 1e-10);
    const double diff = max_entry_diff(u, uep);
    CHECK(diff >= prev - 1e-15);
    prev = diff;
  }
  // also approached from the unbroken side
  for (double dg : {1e-12, 1e-9, 1e-7}) {
    const auto p = pt(0, 1, 1 - dg);
    CHECK(max_entry_diff(propagator_pt(p, t), numerics::expm(cplx(0, -t) * hamiltonian(p))) <= 1e-10);
  }
}

TEST_CASE("propagator composition") {
  testing::Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = pt(rng.uniform(-1, 1), rng.uniform(0.5, 1.5), rng.uniform(0, 2));
    const double t1 = rng.uniform(0, 2), t2 = rng.uniform(0, 2);
    const auto lhs = propagator_pt(p, t1 + t2);
    const auto rhs = propagator_pt(p, t2) * propagator_pt(p, t1);
    CHECK(max_entry_diff(lhs, rhs) <= 1e-10 * std::max(1.0, numerics::norm_frobenius(lhs)));
  }
}

TEST_CASE("EP norm law over [0, 3]") {
  double worst = 0.0;
  for (int i = 0; i <= 300; ++i) {
    const double t = 0.01 * i;
    const auto u = propagator_pt(pt(0, 1, 1), t);
    const double n = std::norm(u(0, 0)) + std::norm(u(1, 0));
    worst = std::max(worst, std::abs(n - (1 - 2 * t + 2 * t * t)));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("bloch_rhs_linear examples and orthogonality") {
  const auto a = bloch_rhs_linear({0.5, 0, 0}, pt(0, 1, 0));
  CHECK(std::sqrt(a.norm_squared()) == 0.0);
  const auto b = bloch_rhs_linear({0, 0, 0.5}, pt(0, 1, 0.5));
  CHECK(b.sx == doctest::Approx(0.0));
  CHECK(b.sy == doctest::Approx(-1.0));
  CHECK(b.sz == doctest::Approx(0.0));

  testing::Rng rng(42);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto s = rng.sphere();
    const auto p = pt(rng.uniform(-2, 2), rng.uniform(0.1, 2), rng.uniform(0, 2));
    worst = std::max(worst, std::abs(dot(s, bloch_rhs_linear(s, p))));
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("Bloch flow agrees with the closed-form propagator") {
  testing::Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = pt(rng.uniform(-1, 1), rng.uniform(0.5, 1.5), rng.uniform(0, 1.5));
    const auto s0 = rng.sphere();
    const auto psi0 = spinor_from_bloch(s0);
    std::vector<double> ts{0.5, 1.0, 2.0, 4.0};
    const auto flat = integrate_bloch(p, s0, ts, 4.0);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const auto u = propagator_pt(p, ts[k]);
      const SpinorState psi{u(0, 0) * psi0.psi1 + u(0, 1) * psi0.psi2, u(1, 0) * psi0.psi1 + u(1, 1) * psi0.psi2};
      const auto s = bloch_from_spinor(psi);
      CHECK(max_abs_diff(s, {flat[3 * k], flat[3 * k + 1], flat[3 * k + 2]}) <= 1e-9);
    }
  }
}

TEST_CASE("periodic Bloch trajectory below the EP") {
  const auto p = pt(0, 1, 0.6);
  const double w = std::sqrt(1 - 0.36);
  const double period = 2 * kPi / (2 * w);
  const BlochVector s0{0, 0, 0.5};
  const auto flat = integrate_bloch(p, s0, {period}, period);
  CHECK(max_abs_diff({flat[0], flat[1], flat[2]}, s0) <= 1e-6);
}

TEST_CASE("norm_rate_linear examples") {
  const auto p = pt(0, 1, 0.1);
  CHECK(norm_rate_linear({0, 0, -0.5}, p, Variant::Decaying) == 0.0);
  CHECK(norm_rate_linear({0, 0, 0.5}, p, Variant::Decaying) == doctest::Approx(-0.4));
  CHECK(norm_rate_linear({0.5, 0, 0}, p, Variant::PTShifted) == 0.0);
  CHECK(norm_rate_linear({0, 0, 0.5}, p) == doctest::Approx(-0.2));
}

TEST_CASE("norm rate reproduces the propagator norm") {
  testing::Rng rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    auto p = pt(rng.uniform(-1, 1), rng.uniform(0.5, 1.5), rng.uniform(0, 1.5));
    if (trial % 2) p.variant = Variant::Decaying;
    const auto psi = spinor_from_bloch(rng.sphere());
    const double h = 1e-5;
    auto norm_at = [&](double t) {
      const auto u = propagator(p, t);
      return std::norm(u(0, 0) * psi.psi1 + u(0, 1) * psi.psi2) + std::norm(u(1, 0) * psi.psi1 + u(1, 1) * psi.psi2);
    };
    const double fd = (std::log(norm_at(h)) - std::log(norm_at(-h))) / (2 * h);
    CHECK(std::abs(fd - norm_rate_linear(bloch_from_spinor(psi), p)) <= 1e-8);
  }
}

TEST_CASE("fixed_points_linear examples") {
  auto a = fixed_points_linear(pt(0, 1, 0.75));
  REQUIRE(a.size() == 2);
  for (const auto& s : a) {
    CHECK(std::abs(s.sz) <= 1e-15);
    CHECK(s.sy == doctest::Approx(0.375));
    CHECK(std::abs(std::abs(s.sx) - 0.330719) <= 1e-6);
    CHECK(std::sqrt(bloch_rhs_linear(s, pt(0, 1, 0.75)).norm_squared()) <= 1e-10);
  }
  CHECK(a[0].sx * a[1].sx < 0);

  auto b = fixed_points_linear(pt(0, 1, 1));
  REQUIRE(b.size() == 1);
  CHECK(max_abs_diff(b[0], {0, 0.5, 0}) <= 1e-12);

  auto c = fixed_points_linear(pt(0, 1, 2));
  REQUIRE(c.size() == 2);
  for (const auto& s : c) {
    CHECK(std::abs(std::abs(s.sz) - 0.433013) <= 1e-6);
    CHECK(std::sqrt(bloch_rhs_linear(s, pt(0, 1, 2)).norm_squared()) <= 1e-10);
  }
}

TEST_CASE("exactly two linear fixed points for random parameters") {
  testing::Rng rng(45);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = pt(rng.uniform(-2, 2), rng.uniform(0.1, 2), rng.uniform(0, 3));
    if (std::abs(p.epsilon) < 1e-3 && std::abs(p.gamma - p.v) < 1e-3) continue;
    const auto fps = fixed_points_linear(p);
    CHECK(fps.size() == 2);
    for (const auto& s : fps) {
      CHECK(s.sphere_defect() <= 1e-12);
      CHECK(std::sqrt(bloch_rhs_linear(s, p).norm_squared()) <= 1e-10);
    }
  }
}
