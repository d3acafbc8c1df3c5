// fixedpoints.hpp: fixed points of the nonlinear Bloch flow, their linear
// type, Poincare index and the parameter-space regions of the unbiased dimer.
#pragma once

#include "dimer/core.hpp"
#include "dimer/meanfield.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace dimer::fixedpoints {

enum class Kind { StableNode, UnstableNode, Saddle, StableFocus, UnstableFocus, Center };

std::string to_string(Kind k);

/// Index from the classification table: -1 for saddles, +1 otherwise.
int table_index(Kind k);

struct FixedPoint {
  BlochVector location;
  std::array<cplx, 2> jacobian_eigenvalues;
  Kind kind = Kind::Center;
  int index = 1;
  meanfield::HamiltonianFunction energy;
};

enum class Region { R1, R2, R3 };

std::string to_string(Region r);

struct RegionLabel {
  Region region = Region::R1;
  bool on_circle = false;      // gamma^2 + g^2 = v^2
  bool on_gamma_line = false;  // |gamma| = v
  bool hermitian = false;      // gamma = 0
};

inline constexpr double kResidualTol = 1e-9;
inline constexpr double kCenterTol = 1e-8;
inline constexpr double kBoundaryTol = 1e-12;
inline constexpr double kIndexRadius = 1e-3;
inline constexpr int kIndexSamples = 720;
inline constexpr int kIndexHalvings = 3;

double flow_residual(const BlochVector& s, const SystemParams& p);

/// Real roots of the sz quartic lifted to the sphere, duplicates merged.
/// Throws NumericalError if fewer than two points survive.
std::vector<BlochVector> solve_fixed_points(const SystemParams& p);

/// Analytic 3x3 Jacobian of the nonlinear Bloch flow, row-major.
std::array<double, 9> jacobian(const BlochVector& s, const SystemParams& p);

/// Orthonormal tangent vectors at s with e1 x e2 pointing outward; the frame
/// rows of tangent_jacobian.
void tangent_basis(const BlochVector& s, BlochVector& e1, BlochVector& e2);

/// The Jacobian restricted to the tangent plane at s, in an orthonormal frame.
std::array<double, 4> tangent_jacobian(const BlochVector& s, const SystemParams& p);

Kind kind_from_eigenvalues(const std::array<cplx, 2>& lambda);

/// Throws std::invalid_argument if the flow residual exceeds 1e-9, and
/// NumericalError for a zero eigenvalue (a bifurcation point, not covered by
/// the table).
FixedPoint classify(const BlochVector& s, const SystemParams& p);

/// Winding number of the tangent field along a small geodesic circle around s.
/// The radius is halved up to three times when another fixed point is too
/// close or the winding is ambiguous; NumericalError after that.
int poincare_index(const BlochVector& s, const SystemParams& p);

/// Requires eps = 0 (std::invalid_argument otherwise).
RegionLabel region_of(const SystemParams& p);

/// sqrt(v^2 - gamma^2); std::invalid_argument for gamma > v.
double critical_interaction(const SystemParams& p);

/// H - i Gamma at every fixed point, in the order of solve_fixed_points.
std::vector<cplx> meanfield_energies(const SystemParams& p);

struct Report {
  SystemParams params;
  std::vector<FixedPoint> points;  // index here is the measured winding number
  std::optional<RegionLabel> region;
  int index_sum = 0;
};

/// Everything above for one parameter set. Throws NumericalError if a
/// measured winding number disagrees with the table.
Report analyse(const SystemParams& p);

}  // namespace dimer::fixedpoints
