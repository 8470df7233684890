#ifndef MNH_STATIONARY_HPP
#define MNH_STATIONARY_HPP

#include <string>
#include <utility>
#include <vector>

#include "bracket.hpp"
#include "nose.hpp"
#include "wigner.hpp"

namespace mnh {

// Even-power hbar expansion of the canonical equilibrium Wigner function.
struct ExpansionResult {
    double beta = 1.0;
    double hbar = 1.0;
    std::vector<std::pair<int, GridField>> orders;  // (n, f^(n)); n even

    const GridField& order(int n) const;
    GridField total() const;
};

struct ResidualNorms {
    GridField residual;
    double sup = 0.0;
    double l2 = 0.0;
    // Window excluding 3 cells from each edge, separating bulk error from
    // boundary artifacts.
    double sup_interior = 0.0;
    double l2_interior = 0.0;
};

// Residual of the quantum-classical stationarity equation
//
//   sum_{n=3,5,..} (1/n!)(i hbar/2)^{n-1} V^(n)(r) d_p^n f  =  (iL^N - kappa^N) f
//
// on the extended grid; for a 2-d (r, p) candidate the thermostat variables
// are already averaged out and the right side reduces to the advection
// (p/m) d_r f - V' d_p f. Returned as LHS - RHS with sup and L2 norms.
ResidualNorms qc_stationarity_residual(const NoseSystem& sys, const GridField& candidate,
                                       const BracketOrder& order, double hbar);

// f^(0) = exp(-beta H)/Z and the order-hbar^2 correction
// f^(2) = hbar^2 f^(0) (phi2 - <phi2>), with
//   phi2 = -beta^2 V''/(8m) + beta^3 (V')^2/(24m) + beta^3 V'' p^2/(24 m^2),
// the mean subtraction keeping the total normalized. Validity heuristic:
// beta * hbar * omega_max below about one; the expansion is asymptotic.
ExpansionResult wigner_kirkwood_order2(const HamiltonianSpec& ham, double beta, double hbar,
                                       const GridPtr& grid);

// Closed-form canonical Wigner function of the harmonic oscillator,
//   f = (lambda/(pi hbar)) exp(-(2 lambda/(hbar omega)) H),
//   lambda = tanh(beta hbar omega / 2),
// renormalized on the grid. Test oracle for the expansion machinery.
WignerFunction ho_canonical_wigner_exact(double beta, double mass, double omega, double hbar,
                                         const GridPtr& grid);

// Analytic hbar^2 Taylor coefficient of the oracle above about hbar = 0:
//   (beta omega m / 2 pi) e^{-beta H} * (beta^3 omega^2 H / 12 - beta^2 omega^2 / 12)
// (obtained by expanding lambda; the mean-energy factor makes it integrate
// to zero).
GridField ho_canonical_wigner_h2_coefficient(double beta, double mass, double omega,
                                             const GridPtr& grid);

// Mean energy of the exact canonical oscillator, (hbar omega/2) coth(beta
// hbar omega/2).
double ho_mean_energy(double beta, double omega, double hbar);

void write_expansion(const ExpansionResult& exp, const std::string& dir_prefix);

}  // namespace mnh

#endif
