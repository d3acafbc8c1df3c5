#include "fixed_point_candidates.hpp"

#include "dimer/numerics/poly.hpp"

#include <algorithm>
#include <cmath>

namespace dimer::detail {
namespace {

double residual(const std::function<BlochVector(const BlochVector&)>& rhs, const BlochVector& s) {
  return std::sqrt(rhs(s).norm_squared());
}

}  // namespace

std::vector<BlochVector> points_from_sz_roots(const std::vector<std::complex<double>>& roots,
                                              const SystemParams& p,
                                              const std::function<BlochVector(const BlochVector&)>& rhs) {
  const double scale = std::max({std::abs(p.epsilon), p.v, p.gamma, std::abs(p.g)});
  std::vector<BlochVector> out;
  auto add = [&](const BlochVector& s) {
    for (const auto& q : out)
      if (distance(q, s) <= kMergeTol) return;
    out.push_back(s);
  };
  for (const auto& r : roots) {
    if (!numerics::is_real_root(r, kRealRootTol)) continue;
    const double sz = r.real();
    if (std::abs(sz) > 0.5 + 1e-12) continue;
    const double sy = 2.0 * p.gamma * (0.25 - sz * sz) / p.v;
    double sx2 = 0.25 - sy * sy - sz * sz;
    if (sx2 < -1e-12) continue;
    const double sx = std::sqrt(std::max(0.0, sx2));
    const BlochVector plus{sx, sy, sz};
    const BlochVector minus{-sx, sy, sz};
    if (sx == 0.0) {
      add(plus);
      continue;
    }
    if (std::abs(p.epsilon + 2.0 * p.g * sz) <= 1e-12 * scale) {
      add(plus);
      add(minus);
      continue;
    }
    add(residual(rhs, plus) <= residual(rhs, minus) ? plus : minus);
  }
  return out;
}

}  // namespace dimer::detail
