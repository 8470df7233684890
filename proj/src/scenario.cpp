#include "scenario.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "bracket.hpp"
#include "errors.hpp"
#include "fft.hpp"
#include "propagator.hpp"
#include "stationary.hpp"
#include "version.hpp"
#include "wigner.hpp"

namespace mnh {

namespace {

struct RawConfig {
    // dotted key -> (value, line number)
    std::map<std::string, std::pair<std::string, int>> entries;
    std::string path;

    [[noreturn]] void bad(const std::string& key, const std::string& why) const {
        auto it = entries.find(key);
        std::string loc = it != entries.end() ? " (line " + std::to_string(it->second.second) + ")" : "";
        fail(ErrorCode::config, "config field " + key + loc + ": " + why);
    }

    bool has(const std::string& key) const { return entries.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = entries.find(key);
        return it == entries.end() ? fallback : it->second.first;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        try {
            std::size_t used = 0;
            double v = std::stod(it->second.first, &used);
            if (used != it->second.first.size()) bad(key, "not a number");
            return v;
        } catch (const Error&) {
            throw;
        } catch (...) {
            bad(key, "not a number");
        }
    }

    std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        try {
            std::size_t used = 0;
            std::int64_t v = std::stoll(it->second.first, &used);
            if (used != it->second.first.size()) bad(key, "not an integer");
            return v;
        } catch (const Error&) {
            throw;
        } catch (...) {
            bad(key, "not an integer");
        }
    }
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

RawConfig read_raw(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::config, "cannot open config file '" + path + "'");
    RawConfig raw;
    raw.path = path;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[' && s.back() == ']') {
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        auto eq = s.find('=');
        require(eq != std::string::npos, ErrorCode::config,
                "config parse error at line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        // strip trailing comments
        auto hash = value.find('#');
        if (hash != std::string::npos) value = trim(value.substr(0, hash));
        if (!section.empty()) key = section + "." + key;
        require(!raw.entries.count(key), ErrorCode::config,
                "config field " + key + " (line " + std::to_string(lineno) + "): duplicate key");
        raw.entries[key] = {value, lineno};
    }
    return raw;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<Axis> parse_axes(const RawConfig& raw, const std::string& key) {
    std::vector<Axis> axes;
    for (const std::string& item : split_list(raw.get_string(key, ""))) {
        std::stringstream as(item);
        std::string name, smin, smax, scount;
        std::getline(as, name, ':');
        std::getline(as, smin, ':');
        std::getline(as, smax, ':');
        std::getline(as, scount, ':');
        if (name.empty() || smin.empty() || smax.empty() || scount.empty())
            raw.bad(key, "axis entries must look like name:min:max:count");
        try {
            axes.push_back(Axis{coord_from_name(name), std::stod(smin), std::stod(smax),
                                static_cast<std::size_t>(std::stoul(scount))});
        } catch (const Error&) {
            throw;
        } catch (...) {
            raw.bad(key, "axis entries must look like name:min:max:count");
        }
    }
    return axes;
}

HamiltonianSpec make_ham(const ScenarioConfig& cfg) {
    return HamiltonianSpec::polynomial(cfg.mass, cfg.potential);
}

NoseSystem make_system(const ScenarioConfig& cfg) {
    NoseParams np;
    np.m_eta = cfg.m_eta;
    np.g = cfg.g;
    np.kT = cfg.kT;
    return NoseSystem{make_ham(cfg), np, cfg.n_dof};
}

struct SummaryWriter {
    std::ofstream out;
    bool all_pass = true;
    int checks = 0;

    explicit SummaryWriter(const std::string& path) : out(path) {
        require(out.good(), ErrorCode::io, "cannot open '" + path + "'");
    }

    void check(const std::string& name, double value, double threshold) {
        bool pass = value <= threshold;
        all_pass = all_pass && pass;
        ++checks;
        out << (pass ? "PASS" : "FAIL") << " " << name << " value=" << format_double(value)
            << " threshold=" << format_double(threshold) << "\n";
    }

    void note(const std::string& line) { out << "INFO " << line << "\n"; }

    int finish() {
        out << (all_pass ? "PASS" : "FAIL") << " overall checks=" << checks << "\n";
        return all_pass ? 0 : 2;
    }
};

GridPtr config_grid(const ScenarioConfig& cfg) {
    require(!cfg.axes.empty(), ErrorCode::config, "config field grid.axes: missing");
    return PhaseSpaceGrid::make(cfg.axes);
}

GridField gaussian_blob(const GridPtr& grid, const ScenarioConfig& cfg) {
    // minimum-uncertainty blob centred at (r0, p0); on extended grids the
    // thermostat coordinates get unit-width factors about the domain centre
    const double s = cfg.hbar;
    return renormalize_field(GridField::from_function(grid, [&](const std::array<double, 4>& x) {
        double arg = 0.0;
        const PhaseSpaceGrid& g = *grid;
        for (const Axis& a : g.axes()) {
            double v = x[static_cast<int>(a.name)];
            double centre = 0.5 * (a.min + a.max);
            double width = 1.0;
            if (a.name == Coord::r) {
                centre = cfg.init_r0;
                width = s;
            } else if (a.name == Coord::p) {
                centre = cfg.init_p0;
                width = s;
            }
            arg += (v - centre) * (v - centre) / width;
        }
        return std::exp(-arg);
    }));
}

int scenario_bracket_check(const ScenarioConfig& cfg, const std::string& dir) {
    GridPtr grid = config_grid(cfg);
    require(grid->rank() == 2, ErrorCode::config, "bracket-check wants a 2-d (r, p) grid");
    HamiltonianSpec ham = make_ham(cfg);
    GridField h = ham.hamiltonian_field(grid);
    StructureTensor bc = StructureTensor::canonical(2);
    BracketOrder order;
    order.n_max = cfg.n_max;

    GridField b = GridField::from_poly(grid, Poly::monomial(Coord::p, 3));
    GridField lhs = moyal_bracket(h, b, bc, order, cfg.hbar);
    GridField swapped = moyal_bracket(b, h, bc, order, cfg.hbar);
    GridField antisym = lhs + swapped;

    BracketOrder first;
    first.n_max = 1;
    GridField n1 = moyal_bracket(h, b, bc, first, cfg.hbar);
    GridField poisson = generalized_poisson(h, b, bc) * Complex{0.0, cfg.hbar};
    GridField spectral = moyal_bracket_spectral(h, b, cfg.hbar);

    const double scale = lhs.sup_norm() + 1.0;
    SummaryWriter summary(dir + "/summary.txt");
    summary.check("antisymmetry_sup", antisym.sup_norm() / scale, 1e-12);
    summary.check("n1_equals_poisson_sup", (n1 - poisson).sup_norm() / scale, 1e-12);
    summary.check("series_vs_spectral_sup", (lhs - spectral).sup_norm() / scale, 1e-8);
    if (ham.potential_degree() <= 2)
        summary.check("quadratic_series_terminates",
                      (lhs - n1).sup_norm() / scale, 1e-12);
    write_field_csv(lhs, dir + "/bracket_h_p3.csv");
    return summary.finish();
}

int scenario_propagate(const ScenarioConfig& cfg, const std::string& dir) {
    GridPtr grid = config_grid(cfg);
    GeneratorSpec gen;
    gen.tensor = grid->rank() == 4 ? TensorKind::nose : TensorKind::canonical;
    gen.ham = make_ham(cfg);
    gen.nose = NoseParams{cfg.m_eta, cfg.g, cfg.kT};
    gen.n_dof = cfg.n_dof;
    gen.hbar = cfg.hbar;

    EvolutionConfig ecfg;
    ecfg.dt = cfg.dt;
    ecfg.n_steps = cfg.n_steps;
    ecfg.order.n_max = cfg.n_max;
    ecfg.direction = cfg.direction == "observable" ? Direction::observable : Direction::wigner;
    ecfg.stepper = cfg.stepper == "split-step" ? Stepper::split_step : Stepper::rk4;
    ecfg.record_every = cfg.record_every;
    ecfg.observables = cfg.observables;

    GridField f0 = gaussian_blob(grid, cfg);
    write_field_csv(f0, dir + "/initial.csv", 0.0);
    EvolveResult res = evolve(f0, gen, ecfg);
    write_series_csv(res, dir + "/series.csv");
    write_field_csv(res.field, dir + "/final.csv", cfg.dt * cfg.n_steps);
    return 0;
}

int scenario_thermostat(const ScenarioConfig& cfg, const std::string& dir) {
    require(cfg.seed.has_value(), ErrorCode::config,
            "config field seed: mandatory for stochastic scenarios");
    NoseSystem sys = make_system(cfg);
    std::vector<double> masses(static_cast<std::size_t>(cfg.chain_length), cfg.m_eta);
    ChainSpec chain = ChainSpec::make(masses);
    SampleResult res = sample_canonical(sys, chain, cfg.sample_steps, cfg.sample_dt, *cfg.seed,
                                        cfg.burn_in, cfg.stride);
    res.estimators.push_back(EstimatorEntry{"mu_diagnostic", sys.nose.mu(cfg.mass), 0.0});
    write_trajectory_csv(res, dir + "/trajectory.csv");
    write_estimators_csv(res.estimators, dir + "/estimators.csv");
    return 0;
}

int scenario_stationarity(const ScenarioConfig& cfg, const std::string& dir) {
    NoseSystem sys = make_system(cfg);
    std::mt19937_64 rng(cfg.seed.value_or(12345));
    std::uniform_real_distribution<double> unif(-2.0, 2.0);

    double worst_resid = 0.0, worst_dh = 0.0, worst_div = 0.0;
    auto h_exp = [&](double e) { return std::exp(-cfg.beta * e); };
    auto dh_exp = [&](double e) { return -cfg.beta * std::exp(-cfg.beta * e); };
    auto h_sq = [](double e) { return e * e; };
    auto dh_sq = [](double e) { return 2.0 * e; };

    for (int k = 0; k < cfg.n_points; ++k) {
        ExtendedPoint x;
        x.r = {unif(rng)};
        x.p = {unif(rng)};
        x.eta = unif(rng);
        x.p_eta = unif(rng);

        double f = stationary_density_extended(sys, x, StationaryForm::delta_surrogate, cfg.beta);
        worst_resid = std::max(worst_resid,
                               std::abs(zeroth_order_stationarity_residual(sys, x, h_exp, dh_exp)) /
                                   std::max(1e-300, std::abs(f)));
        double f2 = nose_hamiltonian(sys, x);
        f2 = f2 * f2 * std::exp(-x.eta);
        worst_resid = std::max(worst_resid,
                               std::abs(zeroth_order_stationarity_residual(sys, x, h_sq, dh_sq)) /
                                   std::max(1e-300, std::abs(f2)));

        // dH^N/dt along the flow
        ExtendedPoint v = nose_vector_field(sys, x);
        double dh = v.r[0] * sys.ham.potential_poly().derivative(Coord::r).eval({x.r[0], 0, 0, 0}) +
                    v.p[0] * x.p[0] / sys.ham.mass() + v.eta * sys.nose.g * sys.nose.kT +
                    v.p_eta * x.p_eta / sys.nose.m_eta;
        worst_dh = std::max(worst_dh, std::abs(dh));

        // numerical divergence vs -kappa
        double h = 1e-3, div = 0.0;
        for (int c = 0; c < 4; ++c) {
            auto shift = [&](double delta) {
                ExtendedPoint y = x;
                if (c == 0) y.r[0] += delta;
                if (c == 1) y.eta += delta;
                if (c == 2) y.p[0] += delta;
                if (c == 3) y.p_eta += delta;
                ExtendedPoint w = nose_vector_field(sys, y);
                if (c == 0) return w.r[0];
                if (c == 1) return w.eta;
                if (c == 2) return w.p[0];
                return w.p_eta;
            };
            div += (shift(h) - shift(-h)) / (2.0 * h);
        }
        worst_div = std::max(worst_div, std::abs(div + compressibility(sys, x)));
    }

    SummaryWriter summary(dir + "/summary.txt");
    summary.check("zeroth_order_residual_rel", worst_resid, 1e-10);
    summary.check("dHN_dt", worst_dh, 1e-12);
    summary.check("divergence_plus_kappa", worst_div, 1e-10);

    if (!cfg.axes.empty() && cfg.hbar > 0.0) {
        GridPtr grid = config_grid(cfg);
        if (grid->rank() == 2) {
            ExpansionResult wk = wigner_kirkwood_order2(sys.ham, cfg.beta, cfg.hbar, grid);
            BracketOrder order;
            order.n_max = cfg.n_max;
            ResidualNorms rn = qc_stationarity_residual(sys, wk.total(), order, cfg.hbar);
            summary.note("wk_residual_sup_interior=" + format_double(rn.sup_interior));
            summary.note("wk_residual_l2_interior=" + format_double(rn.l2_interior));
            write_field_csv(rn.residual, dir + "/qc_residual.csv");
        }
    }
    return summary.finish();
}

int scenario_wk(const ScenarioConfig& cfg, const std::string& dir) {
    GridPtr grid = config_grid(cfg);
    HamiltonianSpec ham = make_ham(cfg);
    ExpansionResult wk = wigner_kirkwood_order2(ham, cfg.beta, cfg.hbar, grid);
    write_expansion(wk, dir + "/");
    GridField p2_over_m = GridField::from_poly(grid, Poly::monomial(Coord::p, 2, 1.0 / cfg.mass));
    GridField total = wk.total();
    std::ofstream obs(dir + "/wk_observables.csv");
    obs << "name,value\n";
    obs << "p2_over_m," << format_double(field_average(p2_over_m, total)) << "\n";
    obs << "H," << format_double(field_average(ham.hamiltonian_field(grid), total)) << "\n";
    obs << "norm," << format_double(total.integral().real()) << "\n";
    return 0;
}

int scenario_duality(const ScenarioConfig& cfg, const std::string& dir) {
    GridPtr grid = config_grid(cfg);
    std::mt19937_64 rng(cfg.seed.value_or(777));
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    // random band-limited real fields
    auto random_field = [&]() {
        GridField f = GridField::zeros(grid);
        f.set_symbol(std::nullopt);
        const PhaseSpaceGrid& g = *grid;
        for (std::size_t i = 0; i < f.size(); ++i) {
            auto x = g.point(i);
            double v = 0.0;
            int mode = 0;
            for (const Axis& a : g.axes()) {
                double u = 2.0 * std::numbers::pi * (x[static_cast<int>(a.name)] - a.min) /
                           (a.max - a.min);
                v += std::cos(u * (1 + mode)) * 0.3 + std::sin(u * (2 + mode)) * 0.2;
                ++mode;
            }
            f.values()[i] = v;
        }
        // deterministic per-call phase twist so a and b differ
        double t = unif(rng);
        for (auto& v : f.values()) v = v * (1.0 + 0.25 * t) + 0.1 * t;
        return f;
    };

    HamiltonianSpec ham = make_ham(cfg);
    SummaryWriter summary(dir + "/summary.txt");
    BracketOrder order;
    order.n_max = cfg.n_max;

    if (grid->rank() == 2) {
        StructureTensor bc = StructureTensor::canonical(2);
        GridField h = ham.hamiltonian_field(grid);
        GridField a = random_field(), b = random_field();
        GridField ma = apply_generator(h, a, bc, order, cfg.hbar);
        GridField adb = apply_adjoint_generator(h, b, bc, order, cfg.hbar);
        Complex lhs{0, 0}, rhs{0, 0};
        for (std::size_t i = 0; i < a.size(); ++i) {
            lhs += ma.values()[i] * b.values()[i];
            rhs += a.values()[i] * adb.values()[i];
        }
        lhs *= grid->volume_element();
        rhs *= grid->volume_element();
        double scale = ma.sup_norm() + adb.sup_norm() + 1.0;
        summary.check("duality_pairing_rel", std::abs(lhs - rhs) / scale, 1e-8);
        GridField mb = apply_generator(h, b, bc, order, cfg.hbar);
        summary.check("canonical_adjoint_is_minus_generator", (adb + mb).sup_norm() / scale, 1e-10);
    } else {
        fail(ErrorCode::config, "duality-check wants a 2-d (r, p) grid");
    }
    return summary.finish();
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& path) {
    RawConfig raw = read_raw(path);
    ScenarioConfig cfg;
    cfg.scenario = raw.get_string("scenario", "");
    require(!cfg.scenario.empty(), ErrorCode::config, "config field scenario: missing");
    cfg.output_dir = raw.get_string("output_dir", "out");
    if (raw.has("seed")) cfg.seed = static_cast<std::uint64_t>(raw.get_int("seed", 0));

    cfg.mass = raw.get_double("system.mass", cfg.mass);
    if (raw.has("system.potential")) {
        for (const std::string& c : split_list(raw.get_string("system.potential", "")))
            try {
                cfg.potential.push_back(std::stod(c));
            } catch (...) {
                raw.bad("system.potential", "expected comma-separated coefficients c0,c1,...");
            }
    } else {
        cfg.potential = {0.0, 0.0, 0.5};
    }
    cfg.hbar = raw.get_double("system.hbar", cfg.hbar);
    cfg.beta = raw.get_double("system.beta", cfg.beta);
    cfg.m_eta = raw.get_double("system.m_eta", cfg.m_eta);
    cfg.g = raw.get_double("system.g", cfg.g);
    cfg.kT = raw.get_double("system.kT", cfg.kT);
    cfg.n_dof = static_cast<int>(raw.get_int("system.n_dof", cfg.n_dof));

    cfg.axes = parse_axes(raw, "grid.axes");

    cfg.dt = raw.get_double("evolution.dt", cfg.dt);
    cfg.n_steps = static_cast<int>(raw.get_int("evolution.n_steps", cfg.n_steps));
    cfg.n_max = static_cast<int>(raw.get_int("evolution.n_max", cfg.n_max));
    cfg.direction = raw.get_string("evolution.direction", cfg.direction);
    cfg.stepper = raw.get_string("evolution.stepper", cfg.stepper);
    cfg.record_every = static_cast<int>(raw.get_int("evolution.record_every", cfg.record_every));
    if (raw.has("evolution.observables"))
        cfg.observables = split_list(raw.get_string("evolution.observables", ""));
    cfg.initial = raw.get_string("evolution.initial", cfg.initial);
    cfg.init_r0 = raw.get_double("evolution.r0", cfg.init_r0);
    cfg.init_p0 = raw.get_double("evolution.p0", cfg.init_p0);

    cfg.chain_length = static_cast<int>(raw.get_int("thermostat.chain_length", cfg.chain_length));
    cfg.sample_steps = raw.get_int("thermostat.n_steps", cfg.sample_steps);
    cfg.burn_in = raw.get_int("thermostat.burn_in", cfg.burn_in);
    cfg.sample_dt = raw.get_double("thermostat.dt", cfg.sample_dt);
    cfg.stride = raw.get_int("thermostat.stride", cfg.stride);

    cfg.n_points = static_cast<int>(raw.get_int("stationarity.n_points", cfg.n_points));
    return cfg;
}

void validate_scenario_config(const ScenarioConfig& cfg) {
    static const std::vector<std::string> known = {"bracket-check", "propagate",
                                                   "thermostat-sample", "stationarity",
                                                   "wk-expansion", "duality-check"};
    bool ok = false;
    for (const auto& k : known) ok = ok || k == cfg.scenario;
    require(ok, ErrorCode::config, "config field scenario: unknown scenario '" + cfg.scenario + "'");

    for (const Axis& a : cfg.axes) {
        require(a.count >= 4 && (a.count & (a.count - 1)) == 0, ErrorCode::config,
                std::string("config field grid.axes: axis ") + coord_name(a.name) +
                    " count must be a power of two >= 4 (odd or non-power-of-two sizes are not "
                    "spectral-capable)");
        require(a.max > a.min, ErrorCode::config, "config field grid.axes: max must exceed min");
    }
    require(cfg.n_max % 2 == 1 && cfg.n_max <= 7 && cfg.n_max >= 1, ErrorCode::config,
            "config field evolution.n_max: must be odd and at most 7");
    require(cfg.dt > 0.0, ErrorCode::config, "config field evolution.dt: must be positive");
    require(cfg.sample_dt > 0.0, ErrorCode::config, "config field thermostat.dt: must be positive");
    require(cfg.mass > 0.0 && cfg.m_eta > 0.0 && cfg.kT > 0.0 && cfg.g > 0.0, ErrorCode::config,
            "config fields system.mass/m_eta/kT/g: must be positive");
    require(cfg.hbar >= 0.0, ErrorCode::config, "config field system.hbar: must be nonnegative");
    if (cfg.scenario == "thermostat-sample")
        require(cfg.seed.has_value(), ErrorCode::config,
                "config field seed: mandatory for stochastic scenarios");
    require(cfg.potential.size() <= 9, ErrorCode::config,
            "config field system.potential: polynomial degree must be <= 8");
}

int run_scenario(const std::string& config_path) {
    auto t0 = std::chrono::steady_clock::now();
    ScenarioConfig cfg = parse_scenario_config(config_path);
    validate_scenario_config(cfg);

    std::filesystem::create_directories(cfg.output_dir);
    const std::string dir = cfg.output_dir;

    int status = 0;
    if (cfg.scenario == "bracket-check")
        status = scenario_bracket_check(cfg, dir);
    else if (cfg.scenario == "propagate")
        status = scenario_propagate(cfg, dir);
    else if (cfg.scenario == "thermostat-sample")
        status = scenario_thermostat(cfg, dir);
    else if (cfg.scenario == "stationarity")
        status = scenario_stationarity(cfg, dir);
    else if (cfg.scenario == "wk-expansion")
        status = scenario_wk(cfg, dir);
    else if (cfg.scenario == "duality-check")
        status = scenario_duality(cfg, dir);

    auto t1 = std::chrono::steady_clock::now();
    double wall = std::chrono::duration<double>(t1 - t0).count();

    std::ofstream manifest(dir + "/manifest.txt");
    require(manifest.good(), ErrorCode::io, "cannot open manifest for writing");
    manifest << "moyalnh " << kVersion << "\n";
    manifest << "scenario " << cfg.scenario << "\n";
    auto now = std::chrono::system_clock::now().time_since_epoch();
    manifest << "# generated: epoch=" << std::chrono::duration<double>(now).count()
             << " wall_time_s=" << wall << "\n";
    std::ifstream echo(config_path);
    std::string line;
    while (std::getline(echo, line)) manifest << "config| " << line << "\n";
    return status;
}

}  // namespace mnh
