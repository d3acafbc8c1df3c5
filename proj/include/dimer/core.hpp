// core.hpp: shared domain types and coordinate maps for the two-mode dimer.
//
// Conventions used throughout the library:
//   * the Bloch sphere has radius 1/2, s_z = +1/2 is "all population in mode 1"
//     (the decaying mode), s_z = -1/2 is the stable mode;
//   * canonical coordinates (p, q) satisfy s_z = p/2 and the azimuth is 2q;
//   * energies are in units where hbar = 1.
#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dimer {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Thrown when an input lies outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when a numerical kernel fails (non-convergence, step underflow, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Which Hamiltonian is meant: the dimer decaying from mode 1, or the
/// balanced gain/loss model obtained by the shift H_PT = H + i*gamma*N.
enum class Variant { Decaying, PTShifted };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct SystemParams {
  double epsilon = 0.0;  // onsite bias
  double v = 1.0;        // coupling
  double gamma = 0.0;    // decay rate
  double g = 0.0;        // macroscopic interaction g = N c
  std::optional<int> n_particles;
  Variant variant = Variant::Decaying;

  /// Throws std::invalid_argument if v <= 0, gamma < 0, non-finite values or
  /// a non-positive particle number.
  void validate() const;

  /// Microscopic interaction c = g / N. Requires n_particles.
  double c() const;

  SystemParams with_gamma(double value) const;
  SystemParams with_g(double value) const;
  SystemParams with_variant(Variant value) const;
};

struct BlochVector {
  double sx = 0.0;
  double sy = 0.0;
  double sz = 0.0;

  double norm_squared() const { return sx * sx + sy * sy + sz * sz; }
  /// |s^2 - 1/4|
  double sphere_defect() const;
  /// Radial projection back onto the radius-1/2 sphere.
  BlochVector projected() const;

  friend BlochVector operator+(const BlochVector& a, const BlochVector& b) {
    return {a.sx + b.sx, a.sy + b.sy, a.sz + b.sz};
  }
  friend BlochVector operator-(const BlochVector& a, const BlochVector& b) {
    return {a.sx - b.sx, a.sy - b.sy, a.sz - b.sz};
  }
  friend BlochVector operator*(double k, const BlochVector& a) {
    return {k * a.sx, k * a.sy, k * a.sz};
  }
};

double dot(const BlochVector& a, const BlochVector& b);
BlochVector cross(const BlochVector& a, const BlochVector& b);
double distance(const BlochVector& a, const BlochVector& b);
/// Largest componentwise difference.
double max_abs_diff(const BlochVector& a, const BlochVector& b);

inline constexpr double kSphereTolIntegration = 1e-9;
inline constexpr double kSphereTolConversion = 1e-12;

struct CanonicalPoint {
  double p = 0.0;
  double q = 0.0;  // representative in [0, pi)
  bool at_pole = false;
};

struct SpinorState {
  cplx psi1{1.0, 0.0};
  cplx psi2{0.0, 0.0};

  double norm() const { return std::norm(psi1) + std::norm(psi2); }
  /// psi / sqrt(n); throws DomainError for a zero spinor.
  SpinorState normalized() const;
};

/// Sampled Bloch trajectory with the survival probability n(t).
struct Trajectory {
  std::vector<double> times;
  std::vector<BlochVector> states;
  std::vector<double> norms;
  std::vector<double> log_norms;
  double max_sphere_drift = 0.0;  // before projection, over all accepted steps

  std::size_t size() const { return times.size(); }
  /// Throws std::logic_error if the structural invariants do not hold.
  void check_invariants(double sphere_tol = kSphereTolIntegration) const;
};

/// sx = sqrt(1-p^2) cos(2q) / 2, sy = sqrt(1-p^2) sin(2q) / 2, sz = p / 2.
BlochVector bloch_from_canonical(const CanonicalPoint& pt);
BlochVector bloch_from_canonical(double p, double q);

/// Inverse chart. At the poles q is undefined: q = 0 and at_pole is set.
CanonicalPoint canonical_from_bloch(const BlochVector& s);

BlochVector bloch_from_spinor(const SpinorState& psi);

/// Spherical angles: s = (sin t cos f, sin t sin f, cos t) / 2.
BlochVector bloch_from_angles(double theta, double phi);
void angles_from_bloch(const BlochVector& s, double& theta, double& phi);

/// Spinor psi = (e^{-i phi} cos(theta/2), sin(theta/2)) representing the angles.
SpinorState spinor_from_angles(double theta, double phi);
SpinorState spinor_from_bloch(const BlochVector& s);

}  // namespace dimer
