#pragma once

#include <span>

#include "weakslit/grid.hpp"

namespace weakslit {

// Unitary continuous-normalised transforms between the position and momentum
// samples of a SimGrid:
//   psi~(p_k) = dx / sqrt(2 pi) * sum_j psi(x_j) exp(-i p_k x_j)
// so that sum |psi~|^2 dp == sum |psi|^2 dx.
ComplexSamples to_momentum(const SimGrid& grid, std::span<const cplx> psi);
ComplexSamples from_momentum(const SimGrid& grid, std::span<const cplx> psi_p);

// Squared L2 norms with the grid measure.
double norm2_x(const SimGrid& grid, std::span<const cplx> psi);
double norm2_p(const SimGrid& grid, std::span<const cplx> psi_p);

}  // namespace weakslit
