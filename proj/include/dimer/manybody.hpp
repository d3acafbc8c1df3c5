// manybody.hpp: the exact N-boson dimer in the Fock basis.
//
// Basis index k = number of particles in mode 1, so m = k - N/2 is the Lz
// eigenvalue and k = N is the north pole of the Bloch sphere. The Hamiltonian
//
//   H = 2 (eps - i gamma) Lz + 2 v Lx + 2 c Lz^2 - i gamma N,   c = g / N,
//
// is tridiagonal. The PT variant drops the -i gamma N term.
#pragma once

#include "dimer/core.hpp"
#include "dimer/numerics/matrix.hpp"

#include <map>
#include <vector>

namespace dimer::manybody {

/// Amplitudes are stored rescaled: the state is exp(log_scale) * amplitudes,
/// so norms far below the double range survive long propagations.
struct FockVector {
  int n_particles = 0;
  std::vector<cplx> amplitudes;
  double log_scale = 0.0;

  /// ln <Psi|Psi>.
  double log_norm() const;
  /// Moves the amplitude norm into log_scale; throws DomainError for a zero state.
  void renormalize();
};

struct AngularExpectations {
  double lx = 0.0;
  double ly = 0.0;
  double lz = 0.0;
  double n_expect = 0.0;

  BlochVector bloch() const;  // <L>/N
};

/// Every particle in mode 1 if k = N, none if k = 0.
FockVector fock_state(int n_particles, int k);

numerics::ComplexMatrix build_hamiltonian(const SystemParams& p, int n_particles);

/// The same matrix with every entry, including the square roots and c = g/N,
/// formed in 113-bit arithmetic.
numerics::QuadMatrix build_hamiltonian_quad(const SystemParams& p, int n_particles);

/// Eigenvalues of build_hamiltonian, computed in 113-bit arithmetic because
/// the spectrum is infinitely ill conditioned at the exceptional points.
std::vector<cplx> spectrum(const SystemParams& p, int n_particles);

/// -i N gamma + (2n - N) sqrt((eps - i gamma)^2 + v^2) (the -i N gamma is
/// dropped for the PT variant). std::invalid_argument unless g = 0.
std::vector<cplx> linear_spectrum_closed_form(const SystemParams& p, int n_particles);

/// Binomial amplitudes sqrt(C(N,k)) x1^k x2^(N-k) of the product state with
/// single-particle spinor (e^{-i phi} cos(theta/2), sin(theta/2)).
FockVector coherent_state(double theta, double phi, int n_particles);

/// Throws DomainError for a zero state.
AngularExpectations expectations(const FockVector& psi);

/// |<coherent(theta, phi)|Psi>|^2 / <Psi|Psi>.
double coherent_overlap(const FockVector& psi, double theta, double phi);

struct CovarianceReport {
  /// max over x, y, z of |d<L_i>/dt (central difference) - right-hand side|
  double heisenberg_residual = 0.0;
  /// max deviation from the coherent-state factorization of the
  /// anticommutators; only small for coherent states
  double factorization_residual = 0.0;
  BlochVector lhs;  // finite-difference rates (not divided by N)
  BlochVector rhs;
};

inline constexpr double kCovarianceStep = 1e-6;  // times 1/v

CovarianceReport covariance_check(const FockVector& psi, const SystemParams& p);

/// Step exponentials exp(-i H dt), cached per distinct dt. One instance per
/// task; not safe to share between threads.
class Propagator {
 public:
  Propagator(const SystemParams& p, int n_particles);

  /// Advances psi by dt and renormalizes it. dt may be negative.
  FockVector step(const FockVector& psi, double dt);
  const numerics::ComplexMatrix& step_matrix(double dt);
  const numerics::ComplexMatrix& hamiltonian() const { return h_; }
  int n_particles() const { return n_; }

 private:
  int n_;
  numerics::ComplexMatrix h_;
  std::map<double, numerics::ComplexMatrix> cache_;
};

/// States at every grid time, psi0 being the state at t_grid.front(). The
/// grid has to be nondecreasing.
std::vector<FockVector> propagate(const FockVector& psi0, const SystemParams& p,
                                  const std::vector<double>& t_grid);

/// <Psi|Psi>^(1/N), in log space.
double rescaled_norm(const FockVector& psi);

}  // namespace dimer::manybody
