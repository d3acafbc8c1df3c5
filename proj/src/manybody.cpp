#include "dimer/manybody.hpp"

#include "dimer/numerics/eig.hpp"
#include "dimer/numerics/expm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dimer::manybody {
namespace {

using numerics::ComplexMatrix;
using numerics::cquad;
using numerics::quad;
using Amps = std::vector<cplx>;

void check_n(int n) {
  if (n < 1) throw std::invalid_argument("manybody: the particle number must be >= 1");
}

double sq_norm(const Amps& a) {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  return s;
}

// sqrt((k + 1)(N - k)), the L+ matrix element from k to k + 1
double ladder(int n, int k) { return std::sqrt(static_cast<double>(k + 1) * static_cast<double>(n - k)); }

Amps apply_lplus(const Amps& a) {
  const int n = static_cast<int>(a.size()) - 1;
  Amps out(a.size());
  for (int k = 0; k < n; ++k) out[k + 1] = ladder(n, k) * a[k];
  return out;
}

Amps apply_lminus(const Amps& a) {
  const int n = static_cast<int>(a.size()) - 1;
  Amps out(a.size());
  for (int k = 0; k < n; ++k) out[k] = ladder(n, k) * a[k + 1];
  return out;
}

Amps apply_l(const Amps& a, int axis) {
  const int n = static_cast<int>(a.size()) - 1;
  Amps out(a.size());
  if (axis == 2) {
    for (int k = 0; k <= n; ++k) out[k] = (k - 0.5 * n) * a[k];
    return out;
  }
  const Amps up = apply_lplus(a), down = apply_lminus(a);
  for (int k = 0; k <= n; ++k)
    out[k] = axis == 0 ? 0.5 * (up[k] + down[k]) : cplx(0, -0.5) * (up[k] - down[k]);
  return out;
}

// Re <a|b>
double re_inner(const Amps& a, const Amps& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (std::conj(a[k]) * b[k]).real();
  return s;
}

template <class C, class R>
numerics::Matrix<C> hamiltonian_impl(const SystemParams& p, int n) {
  check_n(n);
  p.validate();
  using std::sqrt;
  numerics::Matrix<C> h(n + 1, n + 1);
  const R eps(p.epsilon), v(p.v), gm(p.gamma), g(p.g);
  const R c = g / R(n);
  const R half_n = R(n) / R(2);
  for (int k = 0; k <= n; ++k) {
    const R m = R(k) - half_n;
    R im = -R(2) * gm * m;
    if (p.variant == Variant::Decaying) im -= gm * R(n);
    h(k, k) = C(R(2) * eps * m + R(2) * c * m * m, im);
    if (k < n) {
      const R off = v * sqrt(R(k + 1) * R(n - k));
      h(k, k + 1) = C(off, R(0));
      h(k + 1, k) = C(off, R(0));
    }
  }
  return h;
}

}  // namespace

double FockVector::log_norm() const {
  const double s = sq_norm(amplitudes);
  if (!(s > 0.0)) throw DomainError("FockVector: zero state has no norm");
  return 2.0 * log_scale + std::log(s);
}

void FockVector::renormalize() {
  const double s = sq_norm(amplitudes);
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("FockVector: cannot renormalize a zero or non-finite state");
  const double r = std::sqrt(s);
  for (auto& z : amplitudes) z /= r;
  log_scale += std::log(r);
}

BlochVector AngularExpectations::bloch() const { return {lx / n_expect, ly / n_expect, lz / n_expect}; }

FockVector fock_state(int n_particles, int k) {
  check_n(n_particles);
  if (k < 0 || k > n_particles) throw std::invalid_argument("fock_state: k out of range");
  FockVector f;
  f.n_particles = n_particles;
  f.amplitudes.assign(n_particles + 1, cplx(0));
  f.amplitudes[k] = 1.0;
  return f;
}

ComplexMatrix build_hamiltonian(const SystemParams& p, int n_particles) {
  return hamiltonian_impl<cplx, double>(p, n_particles);
}

numerics::QuadMatrix build_hamiltonian_quad(const SystemParams& p, int n_particles) {
  return hamiltonian_impl<cquad, quad>(p, n_particles);
}

std::vector<cplx> spectrum(const SystemParams& p, int n_particles) {
  const auto spec = numerics::eig_complex(build_hamiltonian_quad(p, n_particles), false);
  std::vector<cplx> out;
  out.reserve(spec.eigenvalues.size());
  for (const auto& z : spec.eigenvalues) out.push_back(numerics::ScalarTraits<cquad>::to_double(z));
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

std::vector<cplx> linear_spectrum_closed_form(const SystemParams& p, int n_particles) {
  check_n(n_particles);
  p.validate();
  if (p.g != 0.0) throw std::invalid_argument("linear_spectrum_closed_form: requires c = 0");
  const cplx zeta(p.epsilon, -p.gamma);
  const cplx w = std::sqrt(zeta * zeta + p.v * p.v);
  const cplx shift = p.variant == Variant::Decaying ? cplx(0, -p.gamma * n_particles) : cplx(0);
  std::vector<cplx> out;
  for (int n = 0; n <= n_particles; ++n) out.push_back(shift + static_cast<double>(2 * n - n_particles) * w);
  return out;
}

FockVector coherent_state(double theta, double phi, int n_particles) {
  check_n(n_particles);
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  const double lc = std::log(std::abs(c)), ls = std::log(std::abs(s));
  const double lgn = std::lgamma(n_particles + 1.0);
  FockVector f;
  f.n_particles = n_particles;
  f.amplitudes.resize(n_particles + 1);
  for (int k = 0; k <= n_particles; ++k) {
    const int j = n_particles - k;
    if ((k > 0 && c == 0.0) || (j > 0 && s == 0.0)) {
      f.amplitudes[k] = 0.0;
      continue;
    }
    const double lbin = lgn - std::lgamma(k + 1.0) - std::lgamma(j + 1.0);
    const double mag = std::exp(0.5 * lbin + (k > 0 ? k * lc : 0.0) + (j > 0 ? j * ls : 0.0));
    // signs of cos and sin matter once theta leaves [0, pi]
    double sign = 1.0;
    if (c < 0 && (k % 2)) sign = -sign;
    if (s < 0 && (j % 2)) sign = -sign;
    f.amplitudes[k] = sign * mag * std::polar(1.0, -k * phi);
  }
  return f;
}

AngularExpectations expectations(const FockVector& psi) {
  const Amps& a = psi.amplitudes;
  const int n = static_cast<int>(a.size()) - 1;
  const double s = sq_norm(a);
  if (!(s > 0.0)) throw DomainError("expectations: zero state");
  cplx lp = 0.0;
  double lz = 0.0;
  for (int k = 0; k <= n; ++k) {
    lz += (k - 0.5 * n) * std::norm(a[k]);
    if (k < n) lp += std::conj(a[k + 1]) * ladder(n, k) * a[k];
  }
  AngularExpectations e;
  e.lx = lp.real() / s;
  e.ly = lp.imag() / s;
  e.lz = lz / s;
  e.n_expect = n;
  return e;
}

double coherent_overlap(const FockVector& psi, double theta, double phi) {
  const FockVector c = coherent_state(theta, phi, psi.n_particles);
  cplx ov = 0.0;
  for (std::size_t k = 0; k < c.amplitudes.size(); ++k) ov += std::conj(c.amplitudes[k]) * psi.amplitudes[k];
  return std::norm(ov) / sq_norm(psi.amplitudes);
}

CovarianceReport covariance_check(const FockVector& psi, const SystemParams& p) {
  p.validate();
  const Amps& a = psi.amplitudes;
  const int n = static_cast<int>(a.size()) - 1;
  const double nn = n;
  const double s = sq_norm(a);
  if (!(s > 0.0)) throw DomainError("covariance_check: zero state");
  const double c = p.g / nn, gm = p.gamma, eps = p.epsilon, v = p.v;

  const Amps l[3] = {apply_l(a, 0), apply_l(a, 1), apply_l(a, 2)};
  Amps na = a;
  for (auto& z : na) z *= nn;
  double mean[3], anti[3][3], anti_n[3];
  for (int i = 0; i < 3; ++i) {
    mean[i] = re_inner(a, l[i]) / s;
    anti_n[i] = 2.0 * re_inner(l[i], na) / s;
    for (int j = 0; j < 3; ++j) anti[i][j] = 2.0 * re_inner(l[i], l[j]) / s;
  }
  auto cov = [&](int i, int j) { return 0.5 * anti[i][j] - mean[i] * mean[j]; };
  auto cov_n = [&](int i) { return 0.5 * anti_n[i] - mean[i] * nn; };

  CovarianceReport r;
  r.rhs.sx = -2 * eps * mean[1] - 2 * c * anti[1][2] - 2 * gm * (2 * cov(0, 2) + cov_n(0));
  r.rhs.sy = 2 * eps * mean[0] + 2 * c * anti[0][2] - 2 * v * mean[2] - 2 * gm * (2 * cov(1, 2) + cov_n(1));
  r.rhs.sz = 2 * v * mean[1] - 2 * gm * (2 * cov(2, 2) + cov_n(2));

  const double h = kCovarianceStep / v;
  const ComplexMatrix hm = build_hamiltonian(p, n);
  FockVector fwd = psi, bwd = psi;
  fwd.amplitudes = numerics::matvec(numerics::expm(cplx(0, -h) * hm), std::span<const cplx>(a));
  bwd.amplitudes = numerics::matvec(numerics::expm(cplx(0, h) * hm), std::span<const cplx>(a));
  const auto ef = expectations(fwd), eb = expectations(bwd);
  r.lhs = {(ef.lx - eb.lx) / (2 * h), (ef.ly - eb.ly) / (2 * h), (ef.lz - eb.lz) / (2 * h)};
  r.heisenberg_residual = max_abs_diff(r.lhs, r.rhs);

  double f = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double want = 2.0 * (1.0 - 1.0 / nn) * mean[i] * mean[j] + (i == j ? 0.5 * nn : 0.0);
      f = std::max(f, std::abs(anti[i][j] - want));
    }
    f = std::max(f, std::abs(anti_n[i] - 2.0 * nn * mean[i]));
  }
  r.factorization_residual = f;
  return r;
}

Propagator::Propagator(const SystemParams& p, int n_particles)
    : n_(n_particles), h_(build_hamiltonian(p, n_particles)) {}

const ComplexMatrix& Propagator::step_matrix(double dt) {
  auto it = cache_.find(dt);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(dt, numerics::expm(cplx(0, -dt) * h_)).first->second;
}

FockVector Propagator::step(const FockVector& psi, double dt) {
  if (static_cast<int>(psi.amplitudes.size()) != n_ + 1)
    throw std::invalid_argument("Propagator::step: state has the wrong particle number");
  FockVector out = psi;
  if (dt == 0.0) return out;
  out.amplitudes = numerics::matvec(step_matrix(dt), std::span<const cplx>(psi.amplitudes));
  out.renormalize();
  return out;
}

std::vector<FockVector> propagate(const FockVector& psi0, const SystemParams& p,
                                  const std::vector<double>& t_grid) {
  if (t_grid.empty()) return {};
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] >= t_grid[i - 1])) throw std::invalid_argument("propagate: t_grid must be nondecreasing");
  Propagator prop(p, psi0.n_particles);

  // a uniform grid uses a single cached step, so rounding noise in the
  // differences does not trigger a fresh exponential per step
  const std::size_t n = t_grid.size();
  double h = n > 1 ? (t_grid.back() - t_grid.front()) / static_cast<double>(n - 1) : 0.0;
  bool uniform = n > 2 && h > 0;
  for (std::size_t i = 1; uniform && i < n; ++i)
    uniform = std::abs((t_grid[i] - t_grid[i - 1]) - h) <= 1e-10 * h;

  std::vector<FockVector> out;
  out.reserve(n);
  out.push_back(psi0);
  for (std::size_t i = 1; i < n; ++i)
    out.push_back(prop.step(out.back(), uniform ? h : t_grid[i] - t_grid[i - 1]));
  return out;
}

double rescaled_norm(const FockVector& psi) {
  return std::exp(psi.log_norm() / static_cast<double>(psi.n_particles));
}

}  // namespace dimer::manybody
