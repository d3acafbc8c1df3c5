// meanfield.hpp: generalized mean-field dynamics of the non-Hermitian dimer.
//
// The same flow is available in five coordinate systems: the Bloch vector
// (reference), canonical (q, p), the unnormalized and the normalized
// nonlinear Schroedinger equations, and phi_1 with phi_2 real. The last four
// exist to cross-check the first.
#pragma once

#include "dimer/core.hpp"
#include "dimer/numerics/ode.hpp"

#include <vector>

namespace dimer::meanfield {

/// H - i Gamma, the coherent-state expectation of the Hamiltonian per particle.
struct HamiltonianFunction {
  double H = 0.0;
  double Gamma = 0.0;
  cplx value() const { return {H, -Gamma}; }
};

struct CanonicalRate {
  double qdot = 0.0;
  double pdot = 0.0;
};

enum class Formulation { Bloch, Canonical, GPUnnormalized, GPNormalized, PhiCanonical };

std::string to_string(Formulation f);

struct MeanFieldOptions {
  double atol = 1e-10;
  double rtol = 1e-9;
};

BlochVector bloch_rhs_nonlinear(const BlochVector& s, const SystemParams& p);

/// d(ln n)/dt: -2 gamma (2 sz + 1) decaying, -4 gamma sz PT.
double norm_rate(const BlochVector& s, const SystemParams& p);

/// Throws DomainError within 1e-12 of the chart poles |p| = 1.
CanonicalRate canonical_rhs(const CanonicalPoint& pt, const SystemParams& p);

/// d psi / dt for the unnormalized spinor; the norm decays with the rate of
/// the variant. Throws DomainError for a zero spinor.
SpinorState gp_rhs_unnormalized(const SpinorState& psi, const SystemParams& p);

/// d phi / dt for a unit spinor; throws std::invalid_argument if
/// | |phi|^2 - 1 | > 1e-9.
SpinorState gp_rhs_normalized(const SpinorState& phi, const SystemParams& p);

/// d phi_1 / dt in the gauge phi_2 = sqrt(1 - |phi_1|^2) > 0, from the complex
/// canonical equations with the Kaehler metric. Throws DomainError when
/// |phi_1|^2 is within 1e-12 of 0 or 1.
cplx phi_canonical_rhs(cplx phi1, const SystemParams& p);

/// d phi_2 / dt reconstructed from the phi_1 flow.
double phi2_rate(cplx phi1, cplx dphi1);

/// H = 2 eps sz + 2 v sx + 2 g sz^2, Gamma = 2 gamma sz.
HamiltonianFunction hamiltonian_value(const BlochVector& s, const SystemParams& p);

/// Gamma including the variant offset, so that n' = -2 Gamma n.
double decay_function(const BlochVector& s, const SystemParams& p);

/// Integrates from t_grid.front() with n = 1 there, sampling at every grid
/// time. Bloch states are projected back onto the sphere after each step.
Trajectory integrate_meanfield(const BlochVector& s0, const SystemParams& p, const std::vector<double>& t_grid,
                               Formulation formulation = Formulation::Bloch, const MeanFieldOptions& opts = {});

/// The Bloch system as a raw ODE on (sx, sy, sz, ln n), for callers that need
/// events or backward integration.
numerics::OdeRhs bloch_system(const SystemParams& p);

/// Post-step hook projecting (sx, sy, sz) onto the sphere; records the largest
/// defect seen into *max_drift when non-null.
std::function<void(double, std::span<double>)> sphere_projector(double* max_drift = nullptr);

}  // namespace dimer::meanfield
