#include "dimer/linear2.hpp"

#include "dimer/numerics/poly.hpp"
#include "fixed_point_candidates.hpp"

#include <cmath>

namespace dimer::linear2 {

using numerics::ComplexMatrix;

namespace {

constexpr cplx I{0.0, 1.0};

ComplexMatrix pt_matrix(const SystemParams& p) {
  const cplx zeta(p.epsilon, -p.gamma);
  ComplexMatrix h(2, 2);
  h(0, 0) = zeta;
  h(1, 1) = -zeta;
  h(0, 1) = h(1, 0) = p.v;
  return h;
}

}  // namespace

TwoLevelEigen eigenvalues_pt(const SystemParams& p) {
  TwoLevelEigen e;
  e.zeta = cplx(p.epsilon, -p.gamma);
  e.omega = std::sqrt(e.zeta * e.zeta + p.v * p.v);
  e.is_ep = std::abs(e.omega) <= kEpThreshold * p.v;
  const cplx shift = p.variant == Variant::Decaying ? cplx(0.0, -p.gamma) : cplx(0.0);
  e.lambda_plus = e.omega + shift;
  e.lambda_minus = -e.omega + shift;
  return e;
}

ComplexMatrix hamiltonian(const SystemParams& p) {
  ComplexMatrix h = pt_matrix(p);
  if (p.variant == Variant::Decaying) {
    h(0, 0) -= I * p.gamma;
    h(1, 1) -= I * p.gamma;
  }
  return h;
}

ComplexMatrix propagator_pt(const SystemParams& p, double t) {
  const ComplexMatrix h = pt_matrix(p);
  const cplx zeta(p.epsilon, -p.gamma);
  const cplx w2 = zeta * zeta + p.v * p.v;
  const cplx w = std::sqrt(w2);
  const double aw = std::abs(w);

  // U = cos(wt) I - i [sin(wt)/w] H; both factors are entire in w^2.
  cplx c, sinc_t;
  if (aw <= kEpLimitThreshold * p.v) {
    c = 1.0;
    sinc_t = t;
  } else if (aw <= kEpSeriesThreshold * p.v && aw * std::abs(t) <= 1.0) {
    const cplx x = -w2 * t * t;
    cplx term_c = 1.0, term_s = 1.0;
    c = 1.0;
    cplx s = 1.0;
    for (int k = 1; k <= 12; ++k) {
      term_c *= x / (static_cast<double>(2 * k - 1) * (2 * k));
      term_s *= x / (static_cast<double>(2 * k) * (2 * k + 1));
      c += term_c;
      s += term_s;
    }
    sinc_t = s * t;
  } else {
    c = std::cos(w * t);
    sinc_t = std::sin(w * t) / w;
  }
  ComplexMatrix u(2, 2);
  u(0, 0) = c - I * sinc_t * h(0, 0);
  u(0, 1) = -I * sinc_t * h(0, 1);
  u(1, 0) = -I * sinc_t * h(1, 0);
  u(1, 1) = c - I * sinc_t * h(1, 1);
  return u;
}

ComplexMatrix propagator(const SystemParams& p, double t) {
  ComplexMatrix u = propagator_pt(p, t);
  if (p.variant == Variant::Decaying) u *= cplx(std::exp(-p.gamma * t));
  return u;
}

BlochVector bloch_rhs_linear(const BlochVector& s, const SystemParams& p) {
  const double e = p.epsilon, v = p.v, g = p.gamma;
  return {-2.0 * e * s.sy + 4.0 * g * s.sx * s.sz,
          2.0 * e * s.sx - 2.0 * v * s.sz + 4.0 * g * s.sy * s.sz,
          2.0 * v * s.sy - g * (1.0 - 4.0 * s.sz * s.sz)};
}

double norm_rate_linear(const BlochVector& s, const SystemParams& p, Variant variant) {
  return variant == Variant::Decaying ? -4.0 * p.gamma * (s.sz + 0.5) : -4.0 * p.gamma * s.sz;
}

double norm_rate_linear(const BlochVector& s, const SystemParams& p) {
  return norm_rate_linear(s, p, p.variant);
}

std::vector<BlochVector> fixed_points_linear(const SystemParams& p) {
  const double e = p.epsilon, v = p.v, g = p.gamma;
  const auto roots = numerics::roots_quartic(16.0 * g * g, 0.0, 4.0 * (e * e + v * v - g * g), 0.0, -e * e);
  return detail::points_from_sz_roots(roots, p.with_g(0.0),
                                      [&](const BlochVector& s) { return bloch_rhs_linear(s, p); });
}

}  // namespace dimer::linear2
