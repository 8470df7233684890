#ifndef MNH_WIGNER_HPP
#define MNH_WIGNER_HPP

#include <vector>

#include "grid.hpp"

namespace mnh {

// Real, unit-normalized quasi-probability field on phase space together
// with the hbar it was built with. Negativity is allowed; normalization and
// realness are enforced.
class WignerFunction {
  public:
    WignerFunction(GridField field, double hbar);

    const GridField& field() const { return field_; }
    GridField& field() { return field_; }
    double hbar() const { return hbar_; }

    WignerFunction renormalized() const;

  private:
    GridField field_;
    double hbar_;
};

// Discrete Wigner transform of a pure state sampled on [rmin, rmax) with n
// points. The momentum axis is the transform-paired one: p in
// [-pi*hbar/(2*dr), +pi*hbar/(2*dr)) with n points, which makes the p
// marginal reproduce |psi|^2 identically on the grid.
WignerFunction wigner_transform_pure_state(const std::vector<Complex>& psi, double rmin,
                                           double rmax, double hbar);

// <obs> = Riemann sum of obs * f over the common grid.
double compute_average(const GridField& obs, const WignerFunction& f);

// Integrates out every axis but `axis`.
std::vector<double> marginal(const WignerFunction& f, Coord axis);

// Rescales so the phase-space integral is exactly one.
GridField renormalize_field(const GridField& f);

}  // namespace mnh

#endif
