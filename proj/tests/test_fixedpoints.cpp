#include "dimer/fixedpoints.hpp"

#include "doctest.h"
#include "support.hpp"

#include <algorithm>
#include <cmath>

using namespace dimer;
using namespace dimer::fixedpoints;

namespace {

SystemParams unbiased(double gamma, double g) {
  SystemParams p;
  p.v = 1.0;
  p.gamma = gamma;
  p.g = g;
  return p;
}

// closed-form locations for eps = 0, written out independently of the solver
std::vector<BlochVector> closed_forms(const SystemParams& p) {
  std::vector<BlochVector> out;
  const double v = p.v, gm = p.gamma, g = p.g;
  if (gm < v) {
    const double x = 0.5 * std::sqrt(1 - gm * gm / (v * v));
    out.push_back({x, gm / (2 * v), 0});
    out.push_back({-x, gm / (2 * v), 0});
  }
  const double r2 = g * g + gm * gm;
  if (r2 > v * v) {
    const double z = 0.5 * std::sqrt(1 - v * v / r2);
    out.push_back({g * v / (2 * r2), gm * v / (2 * r2), z});
    out.push_back({g * v / (2 * r2), gm * v / (2 * r2), -z});
  }
  return out;
}

double nearest(const std::vector<BlochVector>& pts, const BlochVector& s) {
  double d = 1e300;
  for (const auto& q : pts) d = std::min(d, distance(q, s));
  return d;
}

// trace and determinant of the flow linearized in the (theta, phi) chart by
// central differences; chart-independent at a fixed point
void chart_trace_det(const BlochVector& s, const SystemParams& p, double& tr, double& det) {
  double th, ph;
  angles_from_bloch(s, th, ph);
  // rates in the chart: project the field onto the (orthogonal) chart tangents
  auto field = [&](double a, double b, double& da, double& db) {
    const double k = 1e-7;
    const BlochVector x = bloch_from_angles(a, b);
    const BlochVector xa = (0.5 / k) * (bloch_from_angles(a + k, b) - bloch_from_angles(a - k, b));
    const BlochVector xb = (0.5 / k) * (bloch_from_angles(a, b + k) - bloch_from_angles(a, b - k));
    const BlochVector f = meanfield::bloch_rhs_nonlinear(x, p);
    da = dot(f, xa) / dot(xa, xa);
    db = dot(f, xb) / dot(xb, xb);
  };
  const double h = 1e-6;
  double a1, b1, a2, b2, a3, b3, a4, b4;
  field(th + h, ph, a1, b1);
  field(th - h, ph, a2, b2);
  field(th, ph + h, a3, b3);
  field(th, ph - h, a4, b4);
  const double j11 = (a1 - a2) / (2 * h), j21 = (b1 - b2) / (2 * h);
  const double j12 = (a3 - a4) / (2 * h), j22 = (b3 - b4) / (2 * h);
  tr = j11 + j22;
  det = j11 * j22 - j12 * j21;
}

}  // namespace

TEST_CASE("region 2 example has four points on the closed forms") {
  const auto p = unbiased(0.75, 3.0);
  const auto pts = solve_fixed_points(p);
  REQUIRE(pts.size() == 4);
  for (const auto& c : closed_forms(p)) CHECK(nearest(pts, c) <= 1e-10);
  for (const auto& s : pts) CHECK(flow_residual(s, p) <= 1e-10);
  double zmax = 0;
  for (const auto& s : pts) zmax = std::max(zmax, s.sz);
  CHECK(zmax == doctest::Approx(0.5 * std::sqrt(1 - 1 / 9.5625)).epsilon(1e-12));
  CHECK(zmax == doctest::Approx(0.4731344).epsilon(1e-7));
}

TEST_CASE("region 3 example keeps only the off-equator pair") {
  const auto pts = solve_fixed_points(unbiased(1.25, 3.0));
  REQUIRE(pts.size() == 2);
  for (const auto& s : pts) CHECK(std::abs(s.sz) > 0.1);
}

TEST_CASE("region 1 example has two points on the equator") {
  const auto pts = solve_fixed_points(unbiased(0.7, 0.7));
  REQUIRE(pts.size() == 2);
  for (const auto& s : pts) CHECK(std::abs(s.sz) <= 1e-14);
}

TEST_CASE("closed forms and residuals over random unbiased parameters") {
  testing::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto p = unbiased(rng.uniform(0, 2), rng.uniform(-3, 3));
    const auto pts = solve_fixed_points(p);
    const auto ref = closed_forms(p);
    CHECK(pts.size() == ref.size());
    for (const auto& c : ref) CHECK(nearest(pts, c) <= 1e-10);
    for (const auto& s : pts) {
      CHECK(flow_residual(s, p) <= 1e-9);
      CHECK(std::abs(s.norm_squared() - 0.25) <= 1e-12);
    }
  }
}

TEST_CASE("biased fixed points are genuine zeros of the flow") {
  testing::Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    SystemParams p = unbiased(rng.uniform(0, 1.5), rng.uniform(-3, 3));
    p.epsilon = rng.uniform(-1, 1);
    const auto pts = solve_fixed_points(p);
    CHECK(pts.size() >= 2);
    CHECK(pts.size() <= 4);
    for (const auto& s : pts) CHECK(flow_residual(s, p) <= 1e-9);
    const auto rep = analyse(p);
    CHECK(rep.index_sum == 2);
    CHECK_FALSE(rep.region.has_value());
  }
}

TEST_CASE("Rabi center") {
  const auto fp = classify({0.5, 0, 0}, unbiased(0, 0));
  CHECK(fp.kind == Kind::Center);
  CHECK(fp.index == 1);
  CHECK(std::abs(fp.jacobian_eigenvalues[0].real()) <= 1e-15);
  CHECK(std::abs(std::abs(fp.jacobian_eigenvalues[0].imag()) - 2.0) <= 1e-14);
  CHECK(poincare_index({0.5, 0, 0}, unbiased(0, 0)) == 1);
}

TEST_CASE("northern off-equator point is a source for gamma > 0") {
  const auto p = unbiased(0.75, 3.0);
  for (const auto& s : solve_fixed_points(p)) {
    const auto fp = classify(s, p);
    if (s.sz > 0.1) CHECK(fp.kind == Kind::UnstableFocus);
    if (s.sz < -0.1) CHECK(fp.kind == Kind::StableFocus);
  }
}

TEST_CASE("linear region 3 points are nodes") {
  const auto p = unbiased(1.25, 0.0);
  const auto pts = solve_fixed_points(p);
  REQUIRE(pts.size() == 2);
  for (const auto& s : pts) {
    const auto k = classify(s, p).kind;
    CHECK((k == Kind::StableNode || k == Kind::UnstableNode));
    CHECK(k == (s.sz > 0 ? Kind::UnstableNode : Kind::StableNode));
  }
}

TEST_CASE("Jacobian eigenvalues agree with a chart finite-difference oracle") {
  testing::Rng rng(13);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    const auto p = unbiased(rng.uniform(0, 1.8), rng.uniform(-3, 3));
    for (const auto& s : solve_fixed_points(p)) {
      if (std::abs(s.sz) > 0.45) continue;  // chart singular near the poles
      const auto fp = classify(s, p);
      double tr, det;
      chart_trace_det(s, p, tr, det);
      const cplx l0 = fp.jacobian_eigenvalues[0], l1 = fp.jacobian_eigenvalues[1];
      CHECK(std::abs((l0 + l1).real() - tr) <= 1e-5);
      CHECK(std::abs((l0 * l1).real() - det) <= 1e-5 * std::max(1.0, std::abs(det)));
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("tangent Jacobian is well defined at a pole") {
  const auto m = tangent_jacobian({0, 0, 0.5}, unbiased(0.3, 1.0));
  for (double x : m) CHECK(std::isfinite(x));
  const auto j = jacobian({0, 0, 0.5}, unbiased(0.3, 1.0));
  // at the north pole the tangent plane is the x-y plane
  CHECK(std::abs((m[0] + m[3]) - (j[0] + j[4])) <= 1e-14);
}

TEST_CASE("classification is consistent with the stored eigenvalues and index") {
  testing::Rng rng(14);
  for (int i = 0; i < 100; ++i) {
    const auto p = unbiased(rng.uniform(0, 2), rng.uniform(-3, 3));
    for (const auto& s : solve_fixed_points(p)) {
      FixedPoint fp;
      try {
        fp = classify(s, p);
      } catch (const NumericalError&) {
        continue;
      }
      CHECK(kind_from_eigenvalues(fp.jacobian_eigenvalues) == fp.kind);
      CHECK((fp.index == -1) == (fp.kind == Kind::Saddle));
    }
  }
}

TEST_CASE("index theorem and region counts") {
  testing::Rng rng(15);
  int seen[3] = {0, 0, 0};
  for (int i = 0; i < 200; ++i) {
    SystemParams p;
    do {
      p = unbiased(rng.uniform(0, 2), rng.uniform(-3, 3));
    } while (std::abs(p.gamma * p.gamma + p.g * p.g - 1) < 1e-3 || std::abs(p.gamma - 1) < 1e-3 ||
             std::abs(p.g) < 1e-3);
    const auto rep = analyse(p);
    CHECK(rep.index_sum == 2);
    REQUIRE(rep.region.has_value());
    const Region r = rep.region->region;
    ++seen[static_cast<int>(r)];
    const std::size_t want = r == Region::R2 ? 4 : 2;
    CHECK(rep.points.size() == want);
    if (r == Region::R2) {
      int saddles = 0, centers = 0;
      for (const auto& fp : rep.points) {
        saddles += fp.kind == Kind::Saddle;
        centers += fp.kind == Kind::Center;
      }
      CHECK(saddles == 1);
      CHECK(centers == 1);
    }
  }
  for (int k : seen) CHECK(k > 10);
}

TEST_CASE("hermitian self-trapping: saddle plus three centers") {
  const auto rep = analyse(unbiased(0.0, 3.0));
  int centers = 0, saddles = 0;
  for (const auto& fp : rep.points) {
    centers += fp.kind == Kind::Center;
    saddles += fp.kind == Kind::Saddle;
  }
  CHECK(centers == 3);
  CHECK(saddles == 1);
  CHECK(rep.region->hermitian);
}

TEST_CASE("winding fails when another fixed point is too close") {
  // just above g_crit the new pair is within 1e-5 of s_c+
  const double gc = 1.0;
  const auto p = unbiased(0.0, gc + 1e-10);
  const auto pts = solve_fixed_points(p);
  REQUIRE(pts.size() == 4);
  CHECK_THROWS_AS(poincare_index(pts[0], p), NumericalError);
}

TEST_CASE("regions and boundary flags") {
  CHECK(region_of(unbiased(0.7, 0.7)).region == Region::R1);
  CHECK(region_of(unbiased(0.75, 3)).region == Region::R2);
  CHECK(region_of(unbiased(1.25, 3)).region == Region::R3);
  CHECK(region_of(unbiased(0.6, 0.8)).on_circle);
  CHECK(region_of(unbiased(0.6, 0.8)).region == Region::R1);
  CHECK(region_of(unbiased(1.0, 2)).on_gamma_line);
  CHECK(region_of(unbiased(0.0, 2)).hermitian);
  SystemParams b = unbiased(0.5, 1);
  b.epsilon = 0.1;
  CHECK_THROWS_AS(region_of(b), std::invalid_argument);
}

TEST_CASE("critical interaction") {
  CHECK(critical_interaction(unbiased(0, 0)) == doctest::Approx(1.0));
  CHECK(critical_interaction(unbiased(0.6, 0)) == doctest::Approx(0.8));
  CHECK(critical_interaction(unbiased(1.0, 0)) == 0.0);
  CHECK_THROWS_AS(critical_interaction(unbiased(1.1, 0)), std::invalid_argument);
  for (double gm : {0.0, 0.3, 0.6, 0.9}) {
    const double gc = critical_interaction(unbiased(gm, 0));
    CHECK(solve_fixed_points(unbiased(gm, gc - 1e-6)).size() == 2);
    CHECK(solve_fixed_points(unbiased(gm, gc + 1e-6)).size() == 4);
  }
}

TEST_CASE("new pair emerges continuously from the saddle") {
  const double gm = 0.4;
  const double gc = critical_interaction(unbiased(gm, 0));
  BlochVector saddle{};
  for (const auto& s : solve_fixed_points(unbiased(gm, gc + 1e-3))) {
    if (std::abs(s.sz) < 1e-12 && classify(s, unbiased(gm, gc + 1e-3)).kind == Kind::Saddle) saddle = s;
  }
  // the equator point at +x turns into the saddle; the off-equator pair starts there
  double prev = 0;
  for (double dg : {1e-8, 1e-6, 1e-4, 1e-2}) {
    double d = 1e300;
    const auto pts = solve_fixed_points(unbiased(gm, gc + dg));
    for (const auto& s : pts)
      if (std::abs(s.sz) > 1e-12) d = std::min(d, distance(s, saddle));
    CHECK(d < 0.1);
    CHECK(d > prev);
    prev = d;
  }
}

TEST_CASE("energies") {
  auto e = meanfield_energies(unbiased(0.5, 0.5));
  REQUIRE(e.size() == 2);
  std::sort(e.begin(), e.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  CHECK(std::abs(e[0] - cplx(-std::sqrt(0.75), 0)) <= 1e-12);
  CHECK(std::abs(e[1] - cplx(std::sqrt(0.75), 0)) <= 1e-12);
  for (const auto& z : meanfield_energies(unbiased(1.2, 0.9))) CHECK(std::abs(z.imag()) > 1e-3);
  for (const auto& z : meanfield_energies(unbiased(0.0, 2.5))) CHECK(z.imag() == 0.0);
}

TEST_CASE("classify rejects a point off the fixed set") {
  CHECK_THROWS_AS(classify({0, 0, 0.5}, unbiased(0.3, 1)), std::invalid_argument);
}
