#include "dimer/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dimer {

std::string to_string(Variant v) {
  return v == Variant::Decaying ? "decaying" : "pt";
}

Variant variant_from_string(const std::string& name) {
  if (name == "decaying") return Variant::Decaying;
  if (name == "pt") return Variant::PTShifted;
  throw std::invalid_argument("unknown variant '" + name + "' (expected decaying|pt)");
}

void SystemParams::validate() const {
  if (!std::isfinite(epsilon) || !std::isfinite(v) || !std::isfinite(gamma) ||
      !std::isfinite(g)) {
    throw std::invalid_argument("SystemParams: parameters must be finite");
  }
  if (!(v > 0.0)) throw std::invalid_argument("SystemParams: v must be > 0");
  if (gamma < 0.0) throw std::invalid_argument("SystemParams: gamma must be >= 0");
  if (n_particles && *n_particles < 1) {
    throw std::invalid_argument("SystemParams: n_particles must be >= 1");
  }
}

double SystemParams::c() const {
  if (!n_particles) throw std::invalid_argument("SystemParams: c requires n_particles");
  return g / static_cast<double>(*n_particles);
}

SystemParams SystemParams::with_gamma(double value) const {
  SystemParams p = *this;
  p.gamma = value;
  return p;
}

SystemParams SystemParams::with_g(double value) const {
  SystemParams p = *this;
  p.g = value;
  return p;
}

SystemParams SystemParams::with_variant(Variant value) const {
  SystemParams p = *this;
  p.variant = value;
  return p;
}

double BlochVector::sphere_defect() const { return std::abs(norm_squared() - 0.25); }

BlochVector BlochVector::projected() const {
  const double r = std::sqrt(norm_squared());
  if (r == 0.0) throw DomainError("cannot project the zero vector onto the sphere");
  const double k = 0.5 / r;
  return {k * sx, k * sy, k * sz};
}

double dot(const BlochVector& a, const BlochVector& b) {
  return a.sx * b.sx + a.sy * b.sy + a.sz * b.sz;
}

BlochVector cross(const BlochVector& a, const BlochVector& b) {
  return {a.sy * b.sz - a.sz * b.sy, a.sz * b.sx - a.sx * b.sz, a.sx * b.sy - a.sy * b.sx};
}

double distance(const BlochVector& a, const BlochVector& b) {
  return std::sqrt((a - b).norm_squared());
}

double max_abs_diff(const BlochVector& a, const BlochVector& b) {
  return std::max({std::abs(a.sx - b.sx), std::abs(a.sy - b.sy), std::abs(a.sz - b.sz)});
}

SpinorState SpinorState::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw DomainError("spinor has zero norm");
  const double k = 1.0 / std::sqrt(n);
  return {k * psi1, k * psi2};
}

void Trajectory::check_invariants(double sphere_tol) const {
  if (states.size() != times.size() || norms.size() != times.size()) {
    throw std::logic_error("Trajectory: length mismatch");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw std::logic_error("Trajectory: times not increasing");
  }
  for (const auto& s : states) {
    if (s.sphere_defect() > sphere_tol) throw std::logic_error("Trajectory: state off sphere");
  }
  for (double n : norms) {
    if (!(n >= 0.0)) throw std::logic_error("Trajectory: invalid norm");
  }
}

BlochVector bloch_from_canonical(double p, double q) {
  if (!(std::abs(p) <= 1.0)) throw DomainError("bloch_from_canonical: |p| > 1");
  const double r = 0.5 * std::sqrt((1.0 - p) * (1.0 + p));
  return {r * std::cos(2.0 * q), r * std::sin(2.0 * q), 0.5 * p};
}

BlochVector bloch_from_canonical(const CanonicalPoint& pt) {
  return bloch_from_canonical(pt.p, pt.q);
}

CanonicalPoint canonical_from_bloch(const BlochVector& s) {
  CanonicalPoint pt;
  pt.p = std::clamp(2.0 * s.sz, -1.0, 1.0);
  if (s.sx == 0.0 && s.sy == 0.0) {
    pt.q = 0.0;
    pt.at_pole = true;
    return pt;
  }
  if (std::abs(std::abs(pt.p) - 1.0) <= kSphereTolConversion) {
    pt.at_pole = true;
  }
  // atan2 lands in (-pi, pi]; halving gives (-pi/2, pi/2], shift the negative half.
  const double q = 0.5 * std::atan2(s.sy, s.sx);
  pt.q = q < 0.0 ? q + kPi : q;
  return pt;
}

BlochVector bloch_from_spinor(const SpinorState& psi) {
  const double n = psi.norm();
  if (!(n > 0.0)) throw DomainError("bloch_from_spinor: zero norm");
  const cplx c = std::conj(psi.psi1) * psi.psi2;
  return {c.real() / n, c.imag() / n, 0.5 * (std::norm(psi.psi1) - std::norm(psi.psi2)) / n};
}

BlochVector bloch_from_angles(double theta, double phi) {
  return {0.5 * std::sin(theta) * std::cos(phi), 0.5 * std::sin(theta) * std::sin(phi),
          0.5 * std::cos(theta)};
}

void angles_from_bloch(const BlochVector& s, double& theta, double& phi) {
  theta = std::acos(std::clamp(2.0 * s.sz / (2.0 * std::sqrt(s.norm_squared())), -1.0, 1.0));
  phi = std::atan2(s.sy, s.sx);
}

SpinorState spinor_from_angles(double theta, double phi) {
  return {std::cos(0.5 * theta) * std::exp(cplx(0.0, -phi)), cplx(std::sin(0.5 * theta), 0.0)};
}

SpinorState spinor_from_bloch(const BlochVector& s) {
  double theta = 0.0;
  double phi = 0.0;
  angles_from_bloch(s, theta, phi);
  return spinor_from_angles(theta, phi);
}

}  // namespace dimer
