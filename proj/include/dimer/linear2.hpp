// linear2.hpp: the single-particle two-level system in closed form.
//
//   decaying:  H = [[eps - 2i gamma, v], [v, -eps]]
//   PT:        H = [[eps - i gamma, v], [v, -eps + i gamma]]
//
// The two differ by the constant -i gamma, so U_dec(t) = exp(-gamma t) U_PT(t).
#pragma once

#include "dimer/core.hpp"
#include "dimer/numerics/matrix.hpp"

#include <vector>

namespace dimer::linear2 {

struct TwoLevelEigen {
  cplx lambda_plus;
  cplx lambda_minus;
  cplx omega;  // (lambda_plus - lambda_minus) / 2
  cplx zeta;   // eps - i gamma
  bool is_ep = false;
};

inline constexpr double kEpThreshold = 1e-12;        // |omega| / v for is_ep
inline constexpr double kEpLimitThreshold = 1e-6;    // propagator uses U_EP below this
inline constexpr double kEpSeriesThreshold = 1e-3;   // series for sin(wt)/w below this

/// +-sqrt(zeta^2 + v^2), shifted by -i gamma for the decaying variant.
TwoLevelEigen eigenvalues_pt(const SystemParams& p);

/// The matrix of the variant selected in p.
numerics::ComplexMatrix hamiltonian(const SystemParams& p);

/// exp(-i H_PT t) in closed form, switching to the exceptional-point
/// limit I - i H t when omega vanishes.
numerics::ComplexMatrix propagator_pt(const SystemParams& p, double t);

/// exp(-i H t) for the variant in p.
numerics::ComplexMatrix propagator(const SystemParams& p, double t);

/// Renormalized Bloch equations of the linear system.
BlochVector bloch_rhs_linear(const BlochVector& s, const SystemParams& p);

/// d(ln n)/dt: -4 gamma (sz + 1/2) decaying, -4 gamma sz PT.
double norm_rate_linear(const BlochVector& s, const SystemParams& p, Variant variant);
double norm_rate_linear(const BlochVector& s, const SystemParams& p);

/// The two fixed points of the linear flow (one when they coalesce at an EP).
std::vector<BlochVector> fixed_points_linear(const SystemParams& p);

}  // namespace dimer::linear2
