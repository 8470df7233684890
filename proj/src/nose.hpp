#ifndef MNH_NOSE_HPP
#define MNH_NOSE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hamiltonian.hpp"
#include "tensor.hpp"

namespace mnh {

// Thermostat parameters. Temperatures are in energy units (k_B absorbed).
// mu = sqrt(m/m_eta) is the quantum-classical smallness diagnostic; it is
// reported but never enters the dynamics.
struct NoseParams {
    double m_eta = 1.0;
    double g = 1.0;
    double kT = 1.0;

    // g defaults to the number of thermostatted degrees of freedom and
    // m_eta to N*m*tau^2 (weak coupling at timescale tau).
    static NoseParams defaults(int n_dof, double mass, double kT, double tau = 1.0);

    void validate() const;
    double mu(double mass) const { return std::sqrt(mass / m_eta); }
};

struct NoseSystem {
    HamiltonianSpec ham;
    NoseParams nose;
    int n_dof = 1;

    // H^N = H(r,p) + p_eta^2/(2 m_eta) + g kT eta, as an exact polynomial
    // (polynomial potentials only).
    Poly extended_hamiltonian_poly() const;
    GridField extended_hamiltonian_field(const GridPtr& grid) const;
};

// A point (r, eta, p, p_eta) of the extended phase space; r and p carry the
// N physical degrees of freedom.
struct ExtendedPoint {
    std::vector<double> r;
    double eta = 0.0;
    std::vector<double> p;
    double p_eta = 0.0;
    double time = 0.0;
};

// Thermostat chain: masses and state of M links. Link 0 couples to the
// physical momenta; eta/p_eta of link 0 mirror the ExtendedPoint fields.
struct ChainSpec {
    std::vector<double> masses;
    std::vector<double> eta;
    std::vector<double> p_eta;

    static ChainSpec make(std::vector<double> masses);
    std::size_t length() const { return masses.size(); }
};

double nose_hamiltonian(const NoseSystem& sys, const ExtendedPoint& x);

// B^N for one physical degree of freedom (4x4, entries +-p).
StructureTensor nose_tensor(int n_dof = 1);

// (r., eta., p., p_eta.) = (p/m, p_eta/m_eta, -V'(r) - p p_eta/m_eta,
//                           sum p^2/m - g kT)
ExtendedPoint nose_vector_field(const NoseSystem& sys, const ExtendedPoint& x);

// kappa^N = N p_eta / m_eta; equals minus the divergence of the flow.
double compressibility(const NoseSystem& sys, const ExtendedPoint& x);

// Symmetric (time-reversible) splitting steps. nh_step is the chain update
// specialized to one link, so both share a single code path.
ExtendedPoint nh_step(const NoseSystem& sys, const ExtendedPoint& x, double dt);
ExtendedPoint nhc_step(const NoseSystem& sys, ChainSpec& chain, const ExtendedPoint& x, double dt);

// Conserved quantity of the chain flow: H(r,p) + sum_k p_eta_k^2/2Q_k
// + g kT eta_1 + kT sum_{k>=2} eta_k.
double chain_invariant(const NoseSystem& sys, const ChainSpec& chain, const ExtendedPoint& x);

struct EstimatorEntry {
    std::string name;
    double value = 0.0;
    double stderr_ = 0.0;
};

struct TrajectoryRow {
    double t = 0.0;
    std::vector<double> r;
    std::vector<double> eta;
    std::vector<double> p;
    std::vector<double> p_eta;
    double h_n = 0.0;
    double kappa = 0.0;
};

struct SampleResult {
    std::vector<TrajectoryRow> trajectory;
    std::vector<EstimatorEntry> estimators;
};

// Thermostatted trajectory sampling: nhc_step time series plus
// block-averaged canonical estimators (<p^2/m>, <p^4>/<p^2>^2, <V>, <r V'>,
// 20 blocks). Initial momenta are drawn at temperature kT from `seed`;
// rows are recorded every `stride` steps after `burn_in`.
SampleResult sample_canonical(const NoseSystem& sys, ChainSpec chain, std::int64_t n_steps,
                              double dt, std::uint64_t seed, std::int64_t burn_in,
                              std::int64_t stride = 1);

enum class StationaryForm { delta_surrogate, hoover_marginal };

// Zeroth-order stationary density data. The delta surrogate form is
// h(H^N(x)) e^{-N eta} with a smooth user h (default exp(-beta .)); the
// hoover-marginal form is the eta-reduced density exp(-beta [H(r,p) +
// p_eta^2/2 m_eta]) at fixed (r, p, p_eta).
double stationary_density_extended(const NoseSystem& sys, const ExtendedPoint& x,
                                   StationaryForm form, double beta,
                                   const std::function<double(double)>& h = {});

// Pointwise residual of (iL^N + kappa^N) applied to h(H^N) e^{-N eta},
// assembled from the module's flow/compressibility routines with the
// analytic chain rule; h and its derivative are supplied by the caller.
double zeroth_order_stationarity_residual(const NoseSystem& sys, const ExtendedPoint& x,
                                          const std::function<double(double)>& h,
                                          const std::function<double(double)>& dh);

void write_trajectory_csv(const SampleResult& result, const std::string& path);
void write_estimators_csv(const std::vector<EstimatorEntry>& est, const std::string& path);

}  // namespace mnh

#endif
