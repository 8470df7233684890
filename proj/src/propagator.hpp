#ifndef MNH_PROPAGATOR_HPP
#define MNH_PROPAGATOR_HPP

#include <map>
#include <string>
#include <vector>

#include "bracket.hpp"
#include "nose.hpp"
#include "wigner.hpp"

namespace mnh {

enum class Direction { observable, wigner };
enum class Stepper { rk4, split_step };

struct EvolutionConfig {
    double dt = 1e-3;
    int n_steps = 1;
    BracketOrder order;
    Direction direction = Direction::observable;
    Stepper stepper = Stepper::rk4;
    int record_every = 1;
    std::vector<std::string> observables;  // of {"norm", "l2", "r", "p", "p2", "H"}

    void validate() const;
};

// Generator in matrix form, M target = H (e^{+(i hbar/2) D} - e^{-...}) target
//   = 2 sum over odd n <= n_max of (1/n!)(i hbar/2)^n T_n(H, target),
// so (i/hbar) * result is the time derivative of the observable `target`.
GridField apply_generator(const GridField& h_field, const GridField& target,
                          const StructureTensor& B, const BracketOrder& order, double hbar);

// Adjoint generator under the phase-space pairing: sum (M a) b dV =
// sum a (M^adj b) dV on the periodic grid. Built from the
// compressibility-corrected chains K_i + (d_j B_ij); for divergence-free
// tensors it reduces to -M. The Wigner function evolves by
// (i/hbar) * M^adj, which reproduces the density continuity flow.
GridField apply_adjoint_generator(const GridField& h_field, const GridField& target,
                                  const StructureTensor& B, const BracketOrder& order, double hbar);

// Observable-side right-hand side of the truncated quantum thermostat
// dynamics on the extended grid:
//   dt chi = iL^N chi - sum_{n=3,5,..} (1/n!)(i hbar/2)^{n-1} V^(n)(r) d_p^n chi.
// Mixed and high pure derivatives of H^N vanish for standard form, which is
// what reduces the series to the V-chain; this equals (i/hbar) *
// apply_generator with the nose tensor.
GridField qnh_rhs(const NoseSystem& sys, const GridField& target, const BracketOrder& order,
                  double hbar);

// Density-side right-hand side on the extended grid, coded conservatively:
//   dt f = -sum_i d_i (xdot_i f) + sum_{n=3,5,..} (1/n!)(i hbar/2)^{n-1} V^(n) d_p^n f,
// so the grid sum of f is conserved exactly by construction.
GridField qnh_adjoint_rhs(const NoseSystem& sys, const GridField& target, const BracketOrder& order,
                          double hbar);

struct GeneratorSpec {
    TensorKind tensor = TensorKind::canonical;
    HamiltonianSpec ham;
    NoseParams nose;  // used when tensor == nose
    int n_dof = 1;
    double hbar = 1.0;
};

struct EvolveResult {
    GridField field;
    std::vector<double> times;
    std::map<std::string, std::vector<double>> series;
};

// Time evolution of a field under the chosen generator and direction.
// rk4 steps the truncated series; split_step is reserved for the canonical
// standard-form case where it is exact in hbar.
EvolveResult evolve(const GridField& initial, const GeneratorSpec& gen, const EvolutionConfig& cfg);

// One Strang split step of the canonical Wigner equation: half kinetic
// shear, potential kick, half kinetic shear, each exact in Fourier space.
// Norm and l2 norm are conserved to round-off.
GridField split_step_wigner_field(const GridField& f, const HamiltonianSpec& ham, double dt,
                                  double hbar);
WignerFunction split_step_wigner(const WignerFunction& f, const HamiltonianSpec& ham, double dt);

void write_series_csv(const EvolveResult& result, const std::string& path);

}  // namespace mnh

#endif
