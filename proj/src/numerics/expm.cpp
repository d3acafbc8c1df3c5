#include "dimer/numerics/expm.hpp"

#include "dimer/core.hpp"

#include <array>
#include <cmath>

namespace dimer::numerics {
namespace {

constexpr std::array<double, 4> kB3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kB5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kB7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                       25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kB9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                        30270240.0,    2162160.0,    110880.0,     3960.0,
                                        90.0,          1.0};
constexpr std::array<double, 14> kB13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

constexpr std::array<double, 4> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0};
constexpr double kTheta13 = 5.371920351148152e0;

// Pade (m, m) from the coefficient list; returns (p, q) with r = q^{-1} p.
template <std::size_t M>
ComplexMatrix pade_small(const ComplexMatrix& a, const std::array<double, M>& b) {
  const std::size_t n = a.rows();
  const ComplexMatrix id = ComplexMatrix::identity(n);
  const ComplexMatrix a2 = a * a;
  ComplexMatrix u_even = cplx(b[1]) * id;
  ComplexMatrix v_even = cplx(b[0]) * id;
  ComplexMatrix pw = id;
  for (std::size_t k = 2; k < M; k += 2) {
    pw = pw * a2;
    u_even += cplx(b[k + 1]) * pw;
    v_even += cplx(b[k]) * pw;
  }
  const ComplexMatrix u = a * u_even;
  return solve(v_even - u, v_even + u);
}

ComplexMatrix pade13(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  const ComplexMatrix id = ComplexMatrix::identity(n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const auto& b = kB13;
  ComplexMatrix w1 = cplx(b[13]) * a6 + cplx(b[11]) * a4 + cplx(b[9]) * a2;
  ComplexMatrix w2 = cplx(b[7]) * a6 + cplx(b[5]) * a4 + cplx(b[3]) * a2 + cplx(b[1]) * id;
  const ComplexMatrix u = a * (a6 * w1 + w2);
  ComplexMatrix z1 = cplx(b[12]) * a6 + cplx(b[10]) * a4 + cplx(b[8]) * a2;
  ComplexMatrix z2 = cplx(b[6]) * a6 + cplx(b[4]) * a4 + cplx(b[2]) * a2 + cplx(b[0]) * id;
  const ComplexMatrix v = a6 * z1 + z2;
  return solve(v - u, v + u);
}

}  // namespace

ComplexMatrix expm(const ComplexMatrix& a) {
  if (!a.square()) throw std::invalid_argument("expm: matrix must be square");
  if (!a.all_finite()) throw std::invalid_argument("expm: non-finite entries");
  const std::size_t n = a.rows();
  if (n == 0) return a;
  const double nrm = norm1(a);
  if (nrm == 0.0) return ComplexMatrix::identity(n);

  ComplexMatrix r;
  if (nrm <= kTheta[0]) {
    r = pade_small(a, kB3);
  } else if (nrm <= kTheta[1]) {
    r = pade_small(a, kB5);
  } else if (nrm <= kTheta[2]) {
    r = pade_small(a, kB7);
  } else if (nrm <= kTheta[3]) {
    r = pade_small(a, kB9);
  } else {
    int s = 0;
    if (nrm > kTheta13) s = static_cast<int>(std::ceil(std::log2(nrm / kTheta13)));
    const ComplexMatrix scaled = cplx(std::ldexp(1.0, -s)) * a;
    r = pade13(scaled);
    for (int i = 0; i < s; ++i) r = r * r;
  }
  if (!r.all_finite()) throw NumericalError("expm: result overflowed");
  return r;
}

}  // namespace dimer::numerics
