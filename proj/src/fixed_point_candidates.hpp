// Shared by linear2 and fixedpoints: turn real roots sz of the fixed-point
// quartic into points on the sphere.
#pragma once

#include "dimer/core.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace dimer::detail {

inline constexpr double kRealRootTol = 1e-8;
inline constexpr double kMergeTol = 1e-8;

/// v sy = 2 gamma (1/4 - sz^2), sx = +-sqrt(1/4 - sy^2 - sz^2). The sign is
/// picked by the flow residual unless both signs are fixed points, which
/// happens when eps + 2 g sz = 0.
std::vector<BlochVector> points_from_sz_roots(const std::vector<std::complex<double>>& roots,
                                              const SystemParams& p,
                                              const std::function<BlochVector(const BlochVector&)>& rhs);

}  // namespace dimer::detail
