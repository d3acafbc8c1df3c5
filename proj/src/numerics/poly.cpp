#include "dimer/numerics/poly.hpp"

#include "dimer/core.hpp"
#include "dimer/numerics/eig.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dimer::numerics {
namespace {

template <class C, class R>
C horner(const std::vector<R>& a, const C& x) {
  C acc(0);
  for (std::size_t k = a.size(); k-- > 0;) acc = acc * x + C(a[k]);
  return acc;
}

}  // namespace

std::vector<std::complex<double>> roots_polynomial(const std::vector<double>& coeffs_in) {
  for (double c : coeffs_in)
    if (!std::isfinite(c)) throw std::invalid_argument("roots_polynomial: non-finite coefficient");
  std::vector<double> a = coeffs_in;
  while (!a.empty() && a.back() == 0.0) a.pop_back();
  if (a.empty()) throw std::invalid_argument("roots_polynomial: all coefficients are zero");
  const std::size_t deg = a.size() - 1;
  if (deg == 0) return {};

  // zero roots peeled off exactly
  std::size_t zeros = 0;
  while (zeros < a.size() && a[zeros] == 0.0) ++zeros;
  std::vector<double> b(a.begin() + static_cast<std::ptrdiff_t>(zeros), a.end());
  const std::size_t d = b.size() - 1;

  std::vector<std::complex<double>> roots(zeros, {0.0, 0.0});
  if (d == 0) return roots;

  std::vector<quad> bq(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) bq[k] = quad(b[k]);

  QuadMatrix comp(d, d);
  for (std::size_t j = 0; j < d; ++j) comp(0, j) = cquad(-bq[d - 1 - j] / bq[d]);
  for (std::size_t i = 1; i < d; ++i) comp(i, i - 1) = cquad(1);
  const auto spec = eig_complex(comp, false);

  std::vector<quad> db(d);
  for (std::size_t k = 1; k <= d; ++k) db[k - 1] = bq[k] * quad(static_cast<double>(k));
  for (cquad r : spec.eigenvalues) {
    // a few Newton steps in quad; stop if the derivative vanishes (cluster)
    for (int it = 0; it < 3; ++it) {
      const cquad p = horner(bq, r);
      const cquad dp = horner(db, r);
      if (abs(dp) == 0) break;
      const cquad step = p / dp;
      const cquad cand = r - step;
      if (abs(horner(bq, cand)) > abs(p)) break;
      r = cand;
    }
    roots.push_back(ScalarTraits<cquad>::to_double(r));
  }
  return roots;
}

std::vector<std::complex<double>> roots_quartic(double c4, double c3, double c2, double c1, double c0) {
  return roots_polynomial({c0, c1, c2, c3, c4});
}

}  // namespace dimer::numerics
