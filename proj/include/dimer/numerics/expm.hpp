// expm.hpp: matrix exponential by scaling and squaring with Pade approximants
// of degree 3, 5, 7, 9 or 13, selected from the 1-norm (Higham 2005).
#pragma once

#include "dimer/numerics/matrix.hpp"

namespace dimer::numerics {

/// Throws std::invalid_argument on non-finite input and NumericalError when
/// the result overflows.
ComplexMatrix expm(const ComplexMatrix& a);

}  // namespace dimer::numerics
