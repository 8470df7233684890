#ifndef MNH_FFT_HPP
#define MNH_FFT_HPP

#include <functional>

#include "grid.hpp"

namespace mnh {

// In-place complex FFT along one grid axis (+1 forward, -1 inverse; the
// inverse is scaled by 1/n so forward+inverse is the identity).
void fft_axis(std::vector<Complex>& data, const PhaseSpaceGrid& grid, std::size_t axis, int sign);

// Fourier-space multiplication: transforms along `axis`, multiplies each
// element by factor(k, flat), where k is the signed angular frequency
// 2*pi*m/L of that element's axis mode and flat identifies the grid point
// (its other coordinates are unchanged by the transform), then transforms
// back. The workhorse behind spectral derivatives, shears and kicks.
GridField apply_dual_multiplier(const GridField& f, Coord axis,
                                const std::function<Complex(double, std::size_t)>& factor);

// d^order/dx^order by Fourier multiplication with (i k)^order. The Nyquist
// mode is zeroed for odd orders so the operator stays skew-adjoint on the
// grid. Periodic power-of-two axes only.
GridField spectral_derivative(const GridField& f, Coord axis, int order);

// Derivative dispatch used throughout the bracket machinery: exact
// polynomial differentiation for polynomial-backed fields, spectral
// otherwise.
GridField field_derivative(const GridField& f, Coord axis);

}  // namespace mnh

#endif
