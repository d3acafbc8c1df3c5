#include "dimer/numerics/matrix.hpp"

#include "dimer/core.hpp"

#include <cmath>
#include <utility>

namespace dimer::numerics {

ComplexMatrix solve(ComplexMatrix a, ComplexMatrix b) {
  if (!a.square() || a.rows() != b.rows()) throw std::invalid_argument("solve: dimension mismatch");
  const std::size_t n = a.rows();
  const std::size_t m = b.cols();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) throw NumericalError("solve: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      for (std::size_t j = 0; j < m; ++j) std::swap(b(k, j), b(piv, j));
    }
    const cplx inv = 1.0 / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) * inv;
      if (f == cplx{}) continue;
      a(i, k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < m; ++j) b(i, j) -= f * b(k, j);
    }
  }
  for (std::size_t kk = n; kk-- > 0;) {
    const cplx inv = 1.0 / a(kk, kk);
    for (std::size_t j = 0; j < m; ++j) {
      cplx acc = b(kk, j);
      for (std::size_t i = kk + 1; i < n; ++i) acc -= a(kk, i) * b(i, j);
      b(kk, j) = acc * inv;
    }
  }
  return b;
}

}  // namespace dimer::numerics
