// poly.hpp: polynomial roots from companion-matrix eigenvalues.
#pragma once

#include <complex>
#include <vector>

namespace dimer::numerics {

/// Roots of c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0. Leading zero coefficients
/// lower the degree, so fewer than four roots may come back. The companion
/// eigenvalues are computed in quad precision and polished by Newton steps.
std::vector<std::complex<double>> roots_quartic(double c4, double c3, double c2, double c1, double c0);

/// Roots of sum_k coeffs[k] x^k (ascending order), same method.
std::vector<std::complex<double>> roots_polynomial(const std::vector<double>& coeffs);

inline bool is_real_root(std::complex<double> r, double tol = 1e-8) {
  return std::abs(r.imag()) <= tol * (1.0 + std::abs(r.real()));
}

}  // namespace dimer::numerics
