#ifndef MNH_BRACKET_HPP
#define MNH_BRACKET_HPP

#include "grid.hpp"
#include "tensor.hpp"

namespace mnh {

// Odd-order truncation control for the hbar series of brackets and
// generators.
struct BracketOrder {
    enum class Mode { series, spectral };

    int n_max = 3;
    Mode mode = Mode::series;

    void validate() const;
};

// n-fold bidifferential contraction
//
//   T_n(a, b) = sum over ordered index tuples (i1..in) of
//               (d_{i1}..d_{in} a) * K_{i1}(K_{i2}(... K_{in}(b)))
//
// with K_i(g) = sum_j B_ij(x) d_j g. The tensor is re-inserted at each of
// the n applications and right derivatives act on the full B*g products, so
// x-dependent tensors are differentiated where they stand. For n = 1 this
// is the generalized Poisson contraction sum_ij (d_i a) B_ij (d_j b).
//
// `with_divergence` switches K_i to K_i(g) + (sum_j d_j B_ij) g, the
// compressibility-corrected chain used by the density-side series.
GridField bidifferential_term(const GridField& a, const GridField& b, const StructureTensor& B,
                              int n, bool with_divergence = false);

// Truncated Moyal bracket in matrix form,
//
//   {a, b}_M = sum over odd n <= n_max of (1/n!)(i hbar/2)^n [T_n(a,b) - T_n(b,a)],
//
// antisymmetric by construction for every tensor. For constant tensors the
// two one-sided halves coincide and this equals 2 sum (i hbar/2)^n/n! T_n(a,b);
// debug builds assert the even-order cancellation behind that identity.
// Multiplied by i/hbar the bracket is the time-derivative of b generated
// by a.
GridField moyal_bracket(const GridField& a, const GridField& b, const StructureTensor& B,
                        const BracketOrder& order, double hbar);

// hbar-exact bracket for the canonical tensor on an (r, p) grid, evaluated
// through Fourier-shifted arguments. Requires one argument separable as
// A_p(p) + A_r(r) (Hamiltonians in standard form qualify); if `a` is not
// separable but `b` is, the result is assembled as -{b, a}.
GridField moyal_bracket_spectral(const GridField& a, const GridField& b, double hbar);

// First-order contraction sum_ij (d_i a) B_ij (d_j b), i.e. the generalized
// Poisson bracket; the bracket series at n_max = 1 equals i*hbar times this.
GridField generalized_poisson(const GridField& a, const GridField& b, const StructureTensor& B);

}  // namespace mnh

#endif
