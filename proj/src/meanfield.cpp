#include "dimer/meanfield.hpp"

#include <algorithm>
#include <cmath>

namespace dimer::meanfield {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kChartTol = 1e-12;

numerics::OdeOptions ode_options(const MeanFieldOptions& o) {
  numerics::OdeOptions r;
  r.atol = o.atol;
  r.rtol = o.rtol;
  return r;
}

SpinorState gp_normalized_unchecked(const SpinorState& phi, const SystemParams& p) {
  const double n1 = std::norm(phi.psi1), n2 = std::norm(phi.psi2);
  const double kappa = (n1 - n2) / (n1 + n2);
  const cplx d1 = p.epsilon + p.g * kappa - I * p.gamma * (1.0 - kappa);
  const cplx d2 = -p.epsilon - p.g * kappa + I * p.gamma * (1.0 + kappa);
  // i phi' = M phi
  return {-I * (d1 * phi.psi1 + p.v * phi.psi2), -I * (p.v * phi.psi1 + d2 * phi.psi2)};
}

BlochVector bloch_from_phi(cplx phi1) {
  const double u = std::norm(phi1);
  if (u > 1.0 + 1e-12) throw DomainError("phi formulation left the chart: |phi1|^2 > 1");
  const double phi2 = std::sqrt(std::max(0.0, 1.0 - u));
  return {phi2 * phi1.real(), -phi2 * phi1.imag(), u - 0.5};
}

}  // namespace

std::string to_string(Formulation f) {
  switch (f) {
    case Formulation::Bloch: return "bloch";
    case Formulation::Canonical: return "canonical";
    case Formulation::GPUnnormalized: return "gp-unnormalized";
    case Formulation::GPNormalized: return "gp-normalized";
    case Formulation::PhiCanonical: return "phi-canonical";
  }
  return "?";
}

BlochVector bloch_rhs_nonlinear(const BlochVector& s, const SystemParams& p) {
  const double e = p.epsilon, v = p.v, g = p.g, ga = p.gamma;
  return {-2.0 * e * s.sy - 4.0 * g * s.sy * s.sz + 4.0 * ga * s.sx * s.sz,
          2.0 * e * s.sx + 4.0 * g * s.sx * s.sz - 2.0 * v * s.sz + 4.0 * ga * s.sy * s.sz,
          2.0 * v * s.sy - ga * (1.0 - 4.0 * s.sz * s.sz)};
}

double norm_rate(const BlochVector& s, const SystemParams& p) {
  return p.variant == Variant::Decaying ? -2.0 * p.gamma * (2.0 * s.sz + 1.0) : -4.0 * p.gamma * s.sz;
}

CanonicalRate canonical_rhs(const CanonicalPoint& pt, const SystemParams& p) {
  if (std::abs(pt.p) >= 1.0 - kChartTol) throw DomainError("canonical_rhs: chart singular at |p| = 1; use the Bloch form");
  const double r = std::sqrt((1.0 - pt.p) * (1.0 + pt.p));
  return {p.epsilon + p.g * pt.p - p.v * pt.p * std::cos(2.0 * pt.q) / r,
          -2.0 * p.gamma * r * r + 2.0 * p.v * r * std::sin(2.0 * pt.q)};
}

SpinorState gp_rhs_unnormalized(const SpinorState& psi, const SystemParams& p) {
  const double n = psi.norm();
  if (!(n > 0.0)) throw DomainError("gp_rhs_unnormalized: zero spinor");
  const double kappa = (std::norm(psi.psi1) - std::norm(psi.psi2)) / n;
  cplx d1 = p.epsilon + p.g * kappa;
  cplx d2 = -p.epsilon - p.g * kappa;
  if (p.variant == Variant::Decaying) {
    d1 -= 2.0 * I * p.gamma;
  } else {
    d1 -= I * p.gamma;
    d2 += I * p.gamma;
  }
  return {-I * (d1 * psi.psi1 + p.v * psi.psi2), -I * (p.v * psi.psi1 + d2 * psi.psi2)};
}

SpinorState gp_rhs_normalized(const SpinorState& phi, const SystemParams& p) {
  if (std::abs(phi.norm() - 1.0) > 1e-9) throw std::invalid_argument("gp_rhs_normalized: spinor is not normalized");
  return gp_normalized_unchecked(phi, p);
}

cplx phi_canonical_rhs(cplx phi1, const SystemParams& p) {
  const double u = std::norm(phi1);
  if (u <= kChartTol || u >= 1.0 - kChartTol) throw DomainError("phi_canonical_rhs: gauge singular at |phi1| in {0, 1}");
  const double phi2 = std::sqrt(1.0 - u);
  const double kappa = 2.0 * u - 1.0;
  // Wirtinger derivative dH/dphi1* of
  //   H = eps kappa + v phi2 (phi1 + phi1*) + (g/2) kappa^2,  kappa = 2|phi1|^2 - 1
  const cplx dH = 2.0 * (p.epsilon + p.g * kappa) * phi1 + p.v * phi2 - p.v * phi1.real() * phi1 / phi2;
  // gradient of Gamma = gamma kappa: (dGamma/dphi1, dGamma/dphi1*) = 2 gamma (phi1*, phi1)
  const cplx gr1 = 2.0 * p.gamma * std::conj(phi1);
  const cplx gr2 = 2.0 * p.gamma * phi1;
  // first row of the inverse Kaehler metric in (phi1, phi1*)
  const cplx ginv11 = phi1 * phi1 * (u - 2.0) / (2.0 * (1.0 - u));
  const double ginv12 = (2.0 - 2.0 * u + u * u) / (2.0 * (1.0 - u));
  // i phi1' = dH/dphi1* - i (G^{-1} grad Gamma)_1
  const cplx rhs = dH - I * (ginv11 * gr1 + ginv12 * gr2);
  return -I * rhs;
}

double phi2_rate(cplx phi1, cplx dphi1) {
  const double u = std::norm(phi1);
  if (u >= 1.0) throw DomainError("phi2_rate: phi2 vanishes");
  return -(dphi1 * std::conj(phi1)).real() / std::sqrt(1.0 - u);
}

HamiltonianFunction hamiltonian_value(const BlochVector& s, const SystemParams& p) {
  return {2.0 * p.epsilon * s.sz + 2.0 * p.v * s.sx + 2.0 * p.g * s.sz * s.sz, 2.0 * p.gamma * s.sz};
}

double decay_function(const BlochVector& s, const SystemParams& p) {
  return -0.5 * norm_rate(s, p);
}

numerics::OdeRhs bloch_system(const SystemParams& p) {
  return [p](double, std::span<const double> y, std::span<double> dy) {
    const BlochVector s{y[0], y[1], y[2]};
    const auto d = bloch_rhs_nonlinear(s, p);
    dy[0] = d.sx;
    dy[1] = d.sy;
    dy[2] = d.sz;
    dy[3] = norm_rate(s, p);
  };
}

std::function<void(double, std::span<double>)> sphere_projector(double* max_drift) {
  return [max_drift](double, std::span<double> y) {
    const BlochVector s{y[0], y[1], y[2]};
    if (max_drift != nullptr) *max_drift = std::max(*max_drift, s.sphere_defect());
    const auto q = s.projected();
    y[0] = q.sx;
    y[1] = q.sy;
    y[2] = q.sz;
  };
}

Trajectory integrate_meanfield(const BlochVector& s0, const SystemParams& p, const std::vector<double>& t_grid,
                               Formulation formulation, const MeanFieldOptions& opts) {
  p.validate();
  if (t_grid.empty()) throw std::invalid_argument("integrate_meanfield: empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("integrate_meanfield: times must increase");
  if (s0.sphere_defect() > kSphereTolIntegration) throw std::invalid_argument("integrate_meanfield: s0 not on the sphere");

  const double t0 = t_grid.front();
  const double t1 = t_grid.back();
  auto ode = ode_options(opts);
  // land on every sample: reported states are step ends, not interpolants
  ode.stop_times = t_grid;
  Trajectory tr;
  tr.times = t_grid;

  std::vector<double> y0;
  numerics::OdeRhs rhs;
  std::function<BlochVector(const std::vector<double>&)> to_bloch;
  // index of ln n in the state, or -1 for the rescaled spinor (y4 + ln |y|^2)
  int log_index = -1;

  switch (formulation) {
    case Formulation::Bloch: {
      const auto s = s0.projected();
      y0 = {s.sx, s.sy, s.sz, 0.0};
      rhs = bloch_system(p);
      ode.post_step = sphere_projector(&tr.max_sphere_drift);
      to_bloch = [&tr](const std::vector<double>& y) {
        const BlochVector s{y[0], y[1], y[2]};
        tr.max_sphere_drift = std::max(tr.max_sphere_drift, s.sphere_defect());
        return s.projected();
      };
      log_index = 3;
      break;
    }
    case Formulation::Canonical: {
      const auto c = canonical_from_bloch(s0);
      if (c.at_pole) throw DomainError("integrate_meanfield: canonical chart cannot start at a pole");
      y0 = {c.q, c.p, 0.0};
      rhs = [p](double, std::span<const double> y, std::span<double> dy) {
        const auto r = canonical_rhs({y[1], y[0], false}, p);
        dy[0] = r.qdot;
        dy[1] = r.pdot;
        dy[2] = norm_rate({0.0, 0.0, 0.5 * y[1]}, p);
      };
      to_bloch = [](const std::vector<double>& y) { return bloch_from_canonical(y[1], y[0]); };
      log_index = 2;
      break;
    }
    case Formulation::GPUnnormalized: {
      const auto psi = spinor_from_bloch(s0);
      // psi = (y0..y3) * exp(y4 / 2). The flow is homogeneous of degree one, so
      // pulling the norm into y4 after each step changes nothing but keeps the
      // absolute tolerance meaningful once n is small
      y0 = {psi.psi1.real(), psi.psi1.imag(), psi.psi2.real(), psi.psi2.imag(), 0.0};
      rhs = [p](double, std::span<const double> y, std::span<double> dy) {
        const auto d = gp_rhs_unnormalized({{y[0], y[1]}, {y[2], y[3]}}, p);
        dy[0] = d.psi1.real();
        dy[1] = d.psi1.imag();
        dy[2] = d.psi2.real();
        dy[3] = d.psi2.imag();
        dy[4] = 0.0;
      };
      ode.post_step = [](double, std::span<double> y) {
        const double n = y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3];
        const double k = 1.0 / std::sqrt(n);
        for (int i = 0; i < 4; ++i) y[i] *= k;
        y[4] += std::log(n);
      };
      to_bloch = [](const std::vector<double>& y) { return bloch_from_spinor({{y[0], y[1]}, {y[2], y[3]}}); };
      break;
    }
    case Formulation::GPNormalized: {
      const auto phi = spinor_from_bloch(s0);
      y0 = {phi.psi1.real(), phi.psi1.imag(), phi.psi2.real(), phi.psi2.imag(), 0.0};
      rhs = [p](double, std::span<const double> y, std::span<double> dy) {
        const SpinorState phi{{y[0], y[1]}, {y[2], y[3]}};
        const auto d = gp_normalized_unchecked(phi, p);
        dy[0] = d.psi1.real();
        dy[1] = d.psi1.imag();
        dy[2] = d.psi2.real();
        dy[3] = d.psi2.imag();
        dy[4] = norm_rate(bloch_from_spinor(phi), p);
      };
      ode.post_step = [](double, std::span<double> y) {
        const double k = 1.0 / std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]);
        for (int i = 0; i < 4; ++i) y[i] *= k;
      };
      to_bloch = [](const std::vector<double>& y) { return bloch_from_spinor({{y[0], y[1]}, {y[2], y[3]}}); };
      log_index = 4;
      break;
    }
    case Formulation::PhiCanonical: {
      const double u = 0.5 + s0.sz;
      const double az = std::atan2(s0.sy, s0.sx);
      const cplx phi1 = std::sqrt(std::max(0.0, u)) * std::exp(cplx(0.0, -az));
      y0 = {phi1.real(), phi1.imag(), 0.0};
      rhs = [p](double, std::span<const double> y, std::span<double> dy) {
        const cplx phi1{y[0], y[1]};
        const cplx d = phi_canonical_rhs(phi1, p);
        dy[0] = d.real();
        dy[1] = d.imag();
        dy[2] = norm_rate(bloch_from_phi(phi1), p);
      };
      to_bloch = [](const std::vector<double>& y) { return bloch_from_phi({y[0], y[1]}); };
      log_index = 2;
      break;
    }
  }

  const auto sol = numerics::integrate_ode(rhs, y0, t0, t1, t_grid, ode);
  tr.states.reserve(t_grid.size());
  tr.norms.reserve(t_grid.size());
  tr.log_norms.reserve(t_grid.size());
  for (const auto& y : sol.y_out) {
    tr.states.push_back(to_bloch(y));
    double ln;
    if (log_index >= 0) {
      ln = y[static_cast<std::size_t>(log_index)];
    } else {
      ln = y[4] + std::log(y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]);
    }
    tr.log_norms.push_back(ln);
    tr.norms.push_back(std::exp(ln));
  }
  return tr;
}

}  // namespace dimer::meanfield
