#include "dimer/fixedpoints.hpp"

#include "dimer/numerics/poly.hpp"
#include "fixed_point_candidates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dimer::fixedpoints {
namespace {

BlochVector unit(const BlochVector& a) {
  const double n = std::sqrt(a.norm_squared());
  return {a.sx / n, a.sy / n, a.sz / n};
}

// Orthonormal frame (e1, e2) with e1 x e2 = n.
void tangent_frame(const BlochVector& n, BlochVector& e1, BlochVector& e2) {
  BlochVector a{1.0, 0.0, 0.0};
  const double ax = std::abs(n.sx), ay = std::abs(n.sy), az = std::abs(n.sz);
  if (ay <= ax && ay <= az) a = {0.0, 1.0, 0.0};
  else if (az <= ax && az <= ay) a = {0.0, 0.0, 1.0};
  const double d = dot(a, n);
  e1 = unit({a.sx - d * n.sx, a.sy - d * n.sy, a.sz - d * n.sz});
  e2 = cross(n, e1);
}

BlochVector jmul(const std::array<double, 9>& j, const BlochVector& u) {
  return {j[0] * u.sx + j[1] * u.sy + j[2] * u.sz, j[3] * u.sx + j[4] * u.sy + j[5] * u.sz,
          j[6] * u.sx + j[7] * u.sy + j[8] * u.sz};
}

double rate_scale(const SystemParams& p) {
  return std::max({std::abs(p.epsilon), p.v, p.gamma, std::abs(p.g)});
}

// Winding number at one radius, or nullopt if the sampling is not trustworthy.
std::optional<int> winding(const BlochVector& s, const SystemParams& p, double radius) {
  const BlochVector n = unit(s);
  BlochVector e1, e2;
  tangent_frame(n, e1, e2);
  const double alpha = radius / 0.5;  // angular radius on the sphere of radius 1/2
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  double total = 0.0;
  double prev = 0.0;
  for (int k = 0; k <= kIndexSamples; ++k) {
    const double th = 2.0 * kPi * k / kIndexSamples;
    const double c = std::cos(th), sn = std::sin(th);
    const BlochVector dir{c * e1.sx + sn * e2.sx, c * e1.sy + sn * e2.sy, c * e1.sz + sn * e2.sz};
    const BlochVector xhat{ca * n.sx + sa * dir.sx, ca * n.sy + sa * dir.sy, ca * n.sz + sa * dir.sz};
    const BlochVector x{0.5 * xhat.sx, 0.5 * xhat.sy, 0.5 * xhat.sz};
    // transport the frame at s to x by projection, which is continuous along the circle
    const double d = dot(e1, xhat);
    const BlochVector t1 = unit({e1.sx - d * xhat.sx, e1.sy - d * xhat.sy, e1.sz - d * xhat.sz});
    const BlochVector t2 = cross(xhat, t1);
    const BlochVector f = meanfield::bloch_rhs_nonlinear(x, p);
    const double fa = dot(f, t1), fb = dot(f, t2);
    if (std::hypot(fa, fb) <= 1e-14 * rate_scale(p)) return std::nullopt;
    const double ang = std::atan2(fb, fa);
    if (k == 0) {
      prev = ang;
      continue;
    }
    double step = ang - prev;
    step -= 2.0 * kPi * std::round(step / (2.0 * kPi));
    if (std::abs(step) > kPi / 2) return std::nullopt;  // undersampled
    total += step;
    prev = ang;
  }
  const double turns = total / (2.0 * kPi);
  const double r = std::round(turns);
  if (std::abs(turns - r) > 1e-6) return std::nullopt;
  return static_cast<int>(r);
}

}  // namespace

std::string to_string(Kind k) {
  switch (k) {
    case Kind::StableNode: return "StableNode";
    case Kind::UnstableNode: return "UnstableNode";
    case Kind::Saddle: return "Saddle";
    case Kind::StableFocus: return "StableFocus";
    case Kind::UnstableFocus: return "UnstableFocus";
    case Kind::Center: return "Center";
  }
  return "?";
}

int table_index(Kind k) { return k == Kind::Saddle ? -1 : 1; }

std::string to_string(Region r) {
  switch (r) {
    case Region::R1: return "R1";
    case Region::R2: return "R2";
    case Region::R3: return "R3";
  }
  return "?";
}

double flow_residual(const BlochVector& s, const SystemParams& p) {
  return std::sqrt(meanfield::bloch_rhs_nonlinear(s, p).norm_squared());
}

std::vector<BlochVector> solve_fixed_points(const SystemParams& p) {
  p.validate();
  const double e = p.epsilon, g = p.g, gm = p.gamma, v = p.v;
  const auto roots = numerics::roots_quartic(4.0 * (g * g + gm * gm), 4.0 * g * e,
                                             e * e + v * v - g * g - gm * gm, -g * e, -e * e / 4.0);
  auto pts = detail::points_from_sz_roots(
      roots, p, [&](const BlochVector& s) { return meanfield::bloch_rhs_nonlinear(s, p); });
  if (pts.size() < 2) {
    std::ostringstream os;
    os << "solve_fixed_points: only " << pts.size()
       << " fixed point(s) found, the index theorem requires at least two";
    throw NumericalError(os.str());
  }
  return pts;
}

std::array<double, 9> jacobian(const BlochVector& s, const SystemParams& p) {
  const double e = p.epsilon, v = p.v, gm = p.gamma, g = p.g;
  return {4 * gm * s.sz,         -2 * e - 4 * g * s.sz, 4 * gm * s.sx - 4 * g * s.sy,
          2 * e + 4 * g * s.sz,  4 * gm * s.sz,         -2 * v + 4 * gm * s.sy + 4 * g * s.sx,
          0.0,                  2 * v,                8 * gm * s.sz};
}

void tangent_basis(const BlochVector& s, BlochVector& e1, BlochVector& e2) { tangent_frame(unit(s), e1, e2); }

std::array<double, 4> tangent_jacobian(const BlochVector& s, const SystemParams& p) {
  const auto j = jacobian(s, p);
  BlochVector e1, e2;
  tangent_frame(unit(s), e1, e2);
  const BlochVector j1 = jmul(j, e1), j2 = jmul(j, e2);
  return {dot(e1, j1), dot(e1, j2), dot(e2, j1), dot(e2, j2)};
}

Kind kind_from_eigenvalues(const std::array<cplx, 2>& lambda) {
  const cplx a = lambda[0], b = lambda[1];
  if (a.imag() != 0.0 || b.imag() != 0.0) {
    const double re = 0.5 * (a.real() + b.real());
    if (std::abs(re) <= kCenterTol * std::abs(a)) return Kind::Center;
    return re < 0 ? Kind::StableFocus : Kind::UnstableFocus;
  }
  if (a.real() * b.real() < 0) return Kind::Saddle;
  return a.real() < 0 ? Kind::StableNode : Kind::UnstableNode;
}

FixedPoint classify(const BlochVector& s, const SystemParams& p) {
  const double res = flow_residual(s, p);
  if (res > kResidualTol) {
    std::ostringstream os;
    os << "classify: flow residual " << res << " exceeds " << kResidualTol;
    throw std::invalid_argument(os.str());
  }
  const auto m = tangent_jacobian(s, p);
  const double tr = m[0] + m[3];
  const double det = m[0] * m[3] - m[1] * m[2];
  const double disc = 0.25 * tr * tr - det;
  FixedPoint fp;
  fp.location = s;
  if (disc >= 0) {
    const double r = std::sqrt(disc);
    // avoid cancellation in the smaller root
    const double big = tr >= 0 ? 0.5 * tr + r : 0.5 * tr - r;
    const double small = big != 0.0 ? det / big : 0.0;
    fp.jacobian_eigenvalues = {cplx(std::max(big, small)), cplx(std::min(big, small))};
  } else {
    const double w = std::sqrt(-disc);
    fp.jacobian_eigenvalues = {cplx(0.5 * tr, w), cplx(0.5 * tr, -w)};
  }
  const double lmin = std::min(std::abs(fp.jacobian_eigenvalues[0]), std::abs(fp.jacobian_eigenvalues[1]));
  if (lmin <= 1e-10 * rate_scale(p)) {
    std::ostringstream os;
    os << "classify: zero Jacobian eigenvalue at (" << s.sx << ", " << s.sy << ", " << s.sz
       << "), the point is degenerate (bifurcation)";
    throw NumericalError(os.str());
  }
  fp.kind = kind_from_eigenvalues(fp.jacobian_eigenvalues);
  fp.index = table_index(fp.kind);
  fp.energy = meanfield::hamiltonian_value(s, p);
  return fp;
}

int poincare_index(const BlochVector& s, const SystemParams& p) {
  const auto all = solve_fixed_points(p);
  double nearest = 1.0;
  for (const auto& q : all) {
    const double d = distance(q, s);
    if (d > detail::kMergeTol) nearest = std::min(nearest, d);
  }
  double radius = kIndexRadius;
  bool crowded = false;
  for (int attempt = 0; attempt <= kIndexHalvings; ++attempt, radius *= 0.5) {
    crowded = nearest <= 10.0 * radius;
    if (crowded) continue;
    if (const auto w = winding(s, p, radius); w && (*w == 1 || *w == -1)) return *w;
  }
  std::ostringstream os;
  os << "poincare_index: ";
  if (crowded) os << "another fixed point lies within " << nearest << ", use a smaller radius";
  else os << "ambiguous winding down to radius " << 2.0 * radius << ", use a smaller radius";
  throw NumericalError(os.str());
}

RegionLabel region_of(const SystemParams& p) {
  p.validate();
  if (p.epsilon != 0.0)
    throw std::invalid_argument("region_of: the region taxonomy is defined only for eps = 0");
  const double v2 = p.v * p.v, r2 = p.gamma * p.gamma + p.g * p.g;
  RegionLabel out;
  out.on_circle = std::abs(r2 - v2) <= kBoundaryTol;
  out.on_gamma_line = std::abs(std::abs(p.gamma) - p.v) <= kBoundaryTol;
  out.hermitian = std::abs(p.gamma) <= kBoundaryTol;
  if (r2 <= v2) out.region = Region::R1;
  else if (std::abs(p.gamma) < p.v) out.region = Region::R2;
  else out.region = Region::R3;
  return out;
}

double critical_interaction(const SystemParams& p) {
  p.validate();
  if (std::abs(p.gamma) > p.v)
    throw std::invalid_argument("critical_interaction: undefined for gamma > v");
  return std::sqrt(p.v * p.v - p.gamma * p.gamma);
}

std::vector<cplx> meanfield_energies(const SystemParams& p) {
  std::vector<cplx> out;
  for (const auto& s : solve_fixed_points(p)) out.push_back(meanfield::hamiltonian_value(s, p).value());
  return out;
}

Report analyse(const SystemParams& p) {
  Report r;
  r.params = p;
  if (p.epsilon == 0.0) r.region = region_of(p);
  for (const auto& s : solve_fixed_points(p)) {
    FixedPoint fp = classify(s, p);
    const int w = poincare_index(s, p);
    if (w != fp.index) {
      std::ostringstream os;
      os << "analyse: winding number " << w << " disagrees with " << to_string(fp.kind);
      throw NumericalError(os.str());
    }
    fp.index = w;
    r.index_sum += w;
    r.points.push_back(fp);
  }
  return r;
}

}  // namespace dimer::fixedpoints
