#ifndef MNH_SCENARIO_HPP
#define MNH_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grid.hpp"

namespace mnh {

// Configuration-driven experiment runner. A scenario is a flat key-value
// text file with [section] headers; see docs in README for the schema.
struct ScenarioConfig {
    std::string scenario;
    std::string output_dir = "out";
    std::optional<std::uint64_t> seed;

    // [system]
    double mass = 1.0;
    std::vector<double> potential;  // polynomial coefficients c0..cK
    double hbar = 1.0;
    double beta = 1.0;
    double m_eta = 1.0;
    double g = 1.0;
    double kT = 1.0;
    int n_dof = 1;

    // [grid]
    std::vector<Axis> axes;

    // [evolution]
    double dt = 1e-3;
    int n_steps = 100;
    int n_max = 3;
    std::string direction = "wigner";
    std::string stepper = "rk4";
    int record_every = 1;
    std::vector<std::string> observables = {"norm", "r", "p", "p2"};
    std::string initial = "gaussian";
    double init_r0 = 0.0;
    double init_p0 = 0.0;

    // [thermostat]
    int chain_length = 2;
    std::int64_t sample_steps = 100000;
    std::int64_t burn_in = 1000;
    double sample_dt = 0.01;
    std::int64_t stride = 100;

    // [stationarity]
    int n_points = 1000;
};

ScenarioConfig parse_scenario_config(const std::string& path);
void validate_scenario_config(const ScenarioConfig& cfg);

// Runs the scenario, writing CSVs, a manifest and (for assertion-bearing
// scenarios) a PASS/FAIL summary under output_dir. Returns the process exit
// status: 0 success/PASS, 2 numerical failure/FAIL. Config errors throw.
int run_scenario(const std::string& config_path);

}  // namespace mnh

#endif
