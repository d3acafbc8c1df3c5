// eig.hpp: eigen-decomposition of dense complex non-Hermitian matrices.
//
// Householder reduction to upper Hessenberg form followed by single-shift
// implicit QR (Wilkinson shifts, occasional exceptional shifts) on the complex
// Schur form. Eigenvectors come from back-substitution on the triangular
// factor. Nothing is assumed about normality, so matrices at or near
// exceptional points are handled; their eigenvectors are flagged instead of
// rejected.
#pragma once

#include "dimer/numerics/matrix.hpp"

#include <optional>
#include <vector>

namespace dimer::numerics {

template <class C>
struct Spectrum {
  std::vector<C> eigenvalues;
  std::optional<Matrix<C>> eigenvectors;  // columns, unit 2-norm
  /// Per eigenpair: back-substitution hit a near-zero divisor or the residual
  /// ||A v - lambda v|| exceeded kEigResidualTol * ||A||.
  std::vector<bool> ill_conditioned;
};

using ComplexSpectrum = Spectrum<std::complex<double>>;

inline constexpr double kEigResidualTol = 1e-8;
inline constexpr std::size_t kEigMaxDimension = 2000;

ComplexSpectrum eig_complex(const ComplexMatrix& a, bool compute_vectors = true);
Spectrum<cquad> eig_complex(const QuadMatrix& a, bool compute_vectors = false);

/// Relative residual ||A V - V diag(lambda)||_F / ||A||_F (double only).
double eig_residual(const ComplexMatrix& a, const ComplexSpectrum& spec);

}  // namespace dimer::numerics
