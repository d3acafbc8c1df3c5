// scalar.hpp: complex scalar types the dense kernels are instantiated for.
//
// Double precision is the default. Spectra near high-order exceptional points
// are so ill-conditioned (eigenvalue condition numbers ~1e16 for N = 20) that
// they are computed in 113-bit binary floating point instead.
#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <complex>
#include <limits>

namespace dimer::numerics {

using quad = boost::multiprecision::cpp_bin_float_quad;
using cquad = boost::multiprecision::cpp_complex_quad;

template <class C>
struct ScalarTraits;

template <>
struct ScalarTraits<std::complex<double>> {
  using real_type = double;
  static std::complex<double> from(std::complex<double> z) { return z; }
  static std::complex<double> to_double(const std::complex<double>& z) { return z; }
};

template <>
struct ScalarTraits<cquad> {
  using real_type = quad;
  static cquad from(std::complex<double> z) { return cquad(quad(z.real()), quad(z.imag())); }
  static std::complex<double> to_double(const cquad& z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
  }
};

template <class C>
using real_t = typename ScalarTraits<C>::real_type;

template <class C>
real_t<C> epsilon_of() {
  return std::numeric_limits<real_t<C>>::epsilon();
}

/// |re| + |im|, the cheap modulus used for deflation tests.
template <class C>
real_t<C> abs1(const C& z) {
  using std::abs;
  return abs(z.real()) + abs(z.imag());
}

}  // namespace dimer::numerics
