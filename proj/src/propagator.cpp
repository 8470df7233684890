#include "propagator.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>

#include "errors.hpp"
#include "fft.hpp"

namespace mnh {

void EvolutionConfig::validate() const {
    require(dt > 0.0, ErrorCode::invalid_argument, "dt must be positive");
    require(n_steps >= 1, ErrorCode::invalid_argument, "n_steps must be >= 1");
    require(record_every >= 1, ErrorCode::invalid_argument, "record_every must be >= 1");
    order.validate();
}

GridField apply_generator(const GridField& h_field, const GridField& target,
                          const StructureTensor& B, const BracketOrder& order, double hbar) {
    order.validate();
    check_same_grid(h_field, target, "apply_generator");
    GridField acc = GridField::zeros(target.grid());
    acc.set_symbol(std::nullopt);
    double factorial = 1.0;
    Complex coeff{1.0, 0.0};
    const Complex ih2{0.0, 0.5 * hbar};
    for (int n = 1; n <= order.n_max; ++n) {
        factorial *= n;
        coeff *= ih2;
        if (n % 2 == 0) continue;
        acc += bidifferential_term(h_field, target, B, n) * (2.0 * coeff / factorial);
    }
    return acc;
}

GridField apply_adjoint_generator(const GridField& h_field, const GridField& target,
                                  const StructureTensor& B, const BracketOrder& order,
                                  double hbar) {
    order.validate();
    check_same_grid(h_field, target, "apply_adjoint_generator");
    GridField acc = GridField::zeros(target.grid());
    acc.set_symbol(std::nullopt);
    double factorial = 1.0;
    Complex coeff{1.0, 0.0};
    const Complex ih2{0.0, 0.5 * hbar};
    for (int n = 1; n <= order.n_max; ++n) {
        factorial *= n;
        coeff *= ih2;
        if (n % 2 == 0) continue;
        // each integration by parts flips one sign; odd orders flip overall
        acc += bidifferential_term(h_field, target, B, n, /*with_divergence=*/true) *
               (-2.0 * coeff / factorial);
    }
    return acc;
}

namespace {

// Odd r-derivatives of the potential, exact for polynomial V, spectral for
// tabulated V, as sampled coefficient fields.
std::vector<std::pair<int, GridField>> potential_chain_fields(const NoseSystem& sys,
                                                              const GridPtr& grid, int n_max) {
    std::vector<std::pair<int, GridField>> out;
    if (sys.ham.has_poly_potential()) {
        Poly v = sys.ham.potential_poly();
        Poly d = v;
        int k = 0;
        for (int n = 3; n <= n_max; n += 2) {
            while (k < n) {
                d = d.derivative(Coord::r);
                ++k;
            }
            if (!d.is_zero()) out.emplace_back(n, GridField::from_poly(grid, d));
        }
    } else {
        GridField v = sys.ham.potential_field(grid);
        for (int n = 3; n <= n_max; n += 2) out.emplace_back(n, spectral_derivative(v, Coord::r, n));
    }
    return out;
}

double series_coefficient(int n, double hbar) {
    // (1/n!)(i hbar / 2)^{n-1}, real for odd n
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    double mag = std::pow(0.5 * hbar, n - 1) / fact;
    return ((n - 1) / 2 % 2 == 0) ? mag : -mag;
}

}  // namespace

GridField qnh_rhs(const NoseSystem& sys, const GridField& target, const BracketOrder& order,
                  double hbar) {
    order.validate();
    const GridPtr& grid = target.grid();
    require(grid->has_axis(Coord::r) && grid->has_axis(Coord::eta) && grid->has_axis(Coord::p) &&
                grid->has_axis(Coord::p_eta),
            ErrorCode::grid_mismatch, "qnh_rhs needs the full (r, eta, p, p_eta) grid");

    const double m = sys.ham.mass();
    const double m_eta = sys.nose.m_eta;
    // iL^N chi = (p/m) d_r chi + (p_eta/m_eta) d_eta chi
    //          - (V' + p p_eta/m_eta) d_p chi + (p^2/m - g kT) d_peta chi
    GridField vprime = sys.ham.has_poly_potential()
                           ? GridField::from_poly(grid, sys.ham.potential_poly().derivative(Coord::r))
                           : spectral_derivative(sys.ham.potential_field(grid), Coord::r, 1);
    GridField dr = field_derivative(target, Coord::r);
    GridField deta = field_derivative(target, Coord::eta);
    GridField dp = field_derivative(target, Coord::p);
    GridField dpeta = field_derivative(target, Coord::p_eta);

    GridField rhs = GridField::zeros(grid);
    rhs.set_symbol(std::nullopt);
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        auto x = grid->point(i);
        const double p = x[static_cast<int>(Coord::p)];
        const double p_eta = x[static_cast<int>(Coord::p_eta)];
        Complex acc = (p / m) * dr.values()[i];
        acc += (p_eta / m_eta) * deta.values()[i];
        acc += (-vprime.values()[i] - p * p_eta / m_eta) * dp.values()[i];
        acc += (p * p / m - sys.nose.g * sys.nose.kT) * dpeta.values()[i];
        rhs.values()[i] = acc;
    }

    for (const auto& [n, vn] : potential_chain_fields(sys, grid, order.n_max)) {
        GridField dpn = target;
        for (int k = 0; k < n; ++k) dpn = field_derivative(dpn, Coord::p);
        const double c = series_coefficient(n, hbar);
        for (std::size_t i = 0; i < rhs.size(); ++i)
            rhs.values()[i] -= c * vn.values()[i] * dpn.values()[i];
    }
    return rhs;
}

GridField qnh_adjoint_rhs(const NoseSystem& sys, const GridField& target, const BracketOrder& order,
                          double hbar) {
    order.validate();
    const GridPtr& grid = target.grid();
    require(grid->has_axis(Coord::r) && grid->has_axis(Coord::eta) && grid->has_axis(Coord::p) &&
                grid->has_axis(Coord::p_eta),
            ErrorCode::grid_mismatch, "qnh_adjoint_rhs needs the full (r, eta, p, p_eta) grid");

    const double m = sys.ham.mass();
    const double m_eta = sys.nose.m_eta;
    GridField vprime = sys.ham.has_poly_potential()
                           ? GridField::from_poly(grid, sys.ham.potential_poly().derivative(Coord::r))
                           : spectral_derivative(sys.ham.potential_field(grid), Coord::r, 1);

    // -sum_i d_i (xdot_i f): flux fields first, spectral divergence after,
    // so the grid sum of the result vanishes identically.
    auto flux = [&](Coord c, const std::function<Complex(const std::array<double, 4>&, Complex,
                                                         Complex)>& fn) {
        GridField g = GridField::zeros(grid);
        g.set_symbol(std::nullopt);
        for (std::size_t i = 0; i < g.size(); ++i)
            g.values()[i] = fn(grid->point(i), target.values()[i], vprime.values()[i]);
        return spectral_derivative(g, c, 1);
    };

    GridField rhs = flux(Coord::r, [&](const auto& x, Complex f, Complex) {
        return Complex{-x[static_cast<int>(Coord::p)] / m} * f;
    });
    rhs += flux(Coord::eta, [&](const auto& x, Complex f, Complex) {
        return Complex{-x[static_cast<int>(Coord::p_eta)] / m_eta} * f;
    });
    rhs += flux(Coord::p, [&](const auto& x, Complex f, Complex vp) {
        const double p = x[static_cast<int>(Coord::p)];
        const double p_eta = x[static_cast<int>(Coord::p_eta)];
        return (vp + Complex{p * p_eta / m_eta}) * f;
    });
    rhs += flux(Coord::p_eta, [&](const auto& x, Complex f, Complex) {
        const double p = x[static_cast<int>(Coord::p)];
        return Complex{-(p * p / m - sys.nose.g * sys.nose.kT)} * f;
    });

    for (const auto& [n, vn] : potential_chain_fields(sys, grid, order.n_max)) {
        GridField dpn = spectral_derivative(target, Coord::p, n);
        const double c = series_coefficient(n, hbar);
        for (std::size_t i = 0; i < rhs.size(); ++i)
            rhs.values()[i] += c * vn.values()[i] * dpn.values()[i];
    }
    return rhs;
}

namespace {

struct PotentialShift {
    // Multiplier tables for the canonical split/spectral paths.
    std::function<double(double)> v_at;

    static PotentialShift make(const HamiltonianSpec& ham, const GridPtr& grid) {
        PotentialShift s;
        if (ham.has_poly_potential()) {
            Poly v = ham.potential_poly();
            s.v_at = [v](double r) { return v.eval({r, 0, 0, 0}); };
        } else {
            // trig interpolation of the tabulated potential
            GridField vf = ham.potential_field(grid);
            int ar = grid->axis_index(Coord::r);
            const Axis& axis = grid->axes()[static_cast<std::size_t>(ar)];
            std::size_t stride = grid->stride(static_cast<std::size_t>(ar));
            std::vector<double> samples(axis.count);
            for (std::size_t i = 0; i < axis.count; ++i)
                samples[i] = vf.values()[i * stride].real();
            const std::size_t n = axis.count;
            std::vector<Complex> modes(n);
            for (std::size_t mth = 0; mth < n; ++mth) {
                Complex acc{0, 0};
                const double w = -2.0 * std::numbers::pi * static_cast<double>(mth) / static_cast<double>(n);
                for (std::size_t j = 0; j < n; ++j)
                    acc += samples[j] * Complex{std::cos(w * j), std::sin(w * j)};
                modes[mth] = acc / static_cast<double>(n);
            }
            const double xmin = axis.min, length = axis.max - axis.min;
            s.v_at = [modes, xmin, length, n](double x) {
                Complex acc{0, 0};
                for (std::size_t mth = 0; mth < n; ++mth) {
                    auto ms = static_cast<long long>(mth);
                    if (mth >= n / 2) ms -= static_cast<long long>(n);
                    double k = 2.0 * std::numbers::pi * static_cast<double>(ms) / length;
                    double phase = k * (x - xmin);
                    acc += modes[mth] * Complex{std::cos(phase), std::sin(phase)};
                }
                return acc.real();
            };
        }
        return s;
    }
};

GridField rk4_rhs(const GridField& u, const GeneratorSpec& gen, const EvolutionConfig& cfg,
                  const GridField& h_field) {
    const double hbar = gen.hbar;
    if (gen.tensor == TensorKind::canonical) {
        GridField bracket = moyal_bracket_spectral(h_field, u, hbar);
        // observable: du/dt = (i/hbar) {H, u};  wigner: minus sign
        Complex factor = Complex{0.0, 1.0 / hbar};
        if (cfg.direction == Direction::wigner) factor = -factor;
        return bracket * factor;
    }
    NoseSystem sys{gen.ham, gen.nose, gen.n_dof};
    return cfg.direction == Direction::observable ? qnh_rhs(sys, u, cfg.order, hbar)
                                                  : qnh_adjoint_rhs(sys, u, cfg.order, hbar);
}

void check_cfl(const GridField& f, const GeneratorSpec& gen, double dt) {
    const PhaseSpaceGrid& g = *f.grid();
    int ar = g.axis_index(Coord::r);
    int ap = g.axis_index(Coord::p);
    if (ar < 0 || ap < 0) return;
    const Axis& axr = g.axes()[static_cast<std::size_t>(ar)];
    const Axis& axp = g.axes()[static_cast<std::size_t>(ap)];
    double p_max = std::max(std::abs(axp.min), std::abs(axp.max));
    double bound_r = axr.spacing() * gen.ham.mass() / p_max;
    require(dt <= bound_r, ErrorCode::invalid_argument,
            "dt violates the advection bound dt <= dr*m/p_max = " + format_double(bound_r));
    if (gen.ham.has_poly_potential()) {
        Poly vp = gen.ham.potential_poly().derivative(Coord::r);
        double vmax = 0.0;
        for (std::size_t i = 0; i < axr.count; ++i)
            vmax = std::max(vmax, std::abs(vp.eval({axr.coordinate(i), 0, 0, 0})));
        if (vmax > 0.0) {
            double bound_p = axp.spacing() / vmax;
            require(dt <= bound_p, ErrorCode::invalid_argument,
                    "dt violates the kick bound dt <= dp/max|V'| = " + format_double(bound_p));
        }
    }
}

GridField observable_field(const std::string& name, const GridPtr& grid,
                           const GeneratorSpec& gen) {
    if (name == "r") return GridField::from_poly(grid, Poly::monomial(Coord::r, 1));
    if (name == "p") return GridField::from_poly(grid, Poly::monomial(Coord::p, 1));
    if (name == "p2") return GridField::from_poly(grid, Poly::monomial(Coord::p, 2));
    if (name == "H") return gen.ham.hamiltonian_field(grid);
    fail(ErrorCode::invalid_argument, "unknown observable '" + name + "'");
}

}  // namespace

EvolveResult evolve(const GridField& initial, const GeneratorSpec& gen,
                    const EvolutionConfig& cfg) {
    cfg.validate();
    require(gen.hbar > 0.0, ErrorCode::invalid_argument, "hbar must be positive");
    if (cfg.stepper == Stepper::split_step) {
        require(gen.tensor == TensorKind::canonical, ErrorCode::unsupported_mode,
                "split-step is defined for the canonical standard-form case only");
        require(cfg.direction == Direction::wigner, ErrorCode::unsupported_mode,
                "split-step propagates Wigner functions (density direction)");
    } else {
        check_cfl(initial, gen, cfg.dt);
    }

    GridField h_field = GridField();
    if (gen.tensor == TensorKind::canonical) {
        h_field = gen.ham.hamiltonian_field(initial.grid());
    }

    std::map<std::string, GridField> obs_fields;
    for (const std::string& name : cfg.observables)
        if (name != "norm" && name != "l2") obs_fields.emplace(name, observable_field(name, initial.grid(), gen));

    EvolveResult out;
    out.field = initial;
    const double sup0 = initial.sup_norm();

    auto record = [&](double t) {
        out.times.push_back(t);
        for (const std::string& name : cfg.observables) {
            double v = 0.0;
            if (name == "norm")
                v = out.field.integral().real();
            else if (name == "l2")
                v = out.field.l2_norm();
            else
                v = field_average(obs_fields.at(name), out.field);
            out.series[name].push_back(v);
        }
    };
    record(0.0);

    for (int step = 0; step < cfg.n_steps; ++step) {
        if (cfg.stepper == Stepper::split_step) {
            out.field = split_step_wigner_field(out.field, gen.ham, cfg.dt, gen.hbar);
        } else {
            const GridField& u = out.field;
            GridField k1 = rk4_rhs(u, gen, cfg, h_field);
            GridField k2 = rk4_rhs(u + k1 * Complex{0.5 * cfg.dt}, gen, cfg, h_field);
            GridField k3 = rk4_rhs(u + k2 * Complex{0.5 * cfg.dt}, gen, cfg, h_field);
            GridField k4 = rk4_rhs(u + k3 * Complex{cfg.dt}, gen, cfg, h_field);
            GridField next = u + (k1 + (k2 + k3) * Complex{2.0} + k4) * Complex{cfg.dt / 6.0};
            out.field = std::move(next);
        }
        require(out.field.sup_norm() <= 1e6 * (sup0 + 1e-300), ErrorCode::integrator_blowup,
                "field magnitude grew beyond 1e6x the initial value; dt violates stability");
        if ((step + 1) % cfg.record_every == 0 || step + 1 == cfg.n_steps)
            record(cfg.dt * (step + 1));
    }
    return out;
}

GridField split_step_wigner_field(const GridField& f, const HamiltonianSpec& ham, double dt,
                                  double hbar) {
    const PhaseSpaceGrid& g = *f.grid();
    require(g.rank() == 2 && g.has_axis(Coord::r) && g.has_axis(Coord::p),
            ErrorCode::unsupported_mode, "split-step requires an (r, p) grid");
    const double m = ham.mass();
    PotentialShift shift = PotentialShift::make(ham, f.grid());

    auto kinetic_half = [&](const GridField& u) {
        return apply_dual_multiplier(u, Coord::r, [&](double k, std::size_t flat) {
            double p = g.point(flat)[static_cast<int>(Coord::p)];
            double phase = -k * p / m * 0.5 * dt;
            return Complex{std::cos(phase), std::sin(phase)};
        });
    };

    GridField u = kinetic_half(f);
    u = apply_dual_multiplier(u, Coord::p, [&](double lam, std::size_t flat) {
        double r = g.point(flat)[static_cast<int>(Coord::r)];
        double phase = -(dt / hbar) * (shift.v_at(r - 0.5 * hbar * lam) - shift.v_at(r + 0.5 * hbar * lam));
        return Complex{std::cos(phase), std::sin(phase)};
    });
    u = kinetic_half(u);
    u.set_symbol(std::nullopt);
    return u;
}

WignerFunction split_step_wigner(const WignerFunction& f, const HamiltonianSpec& ham, double dt) {
    GridField next = split_step_wigner_field(f.field(), ham, dt, f.hbar());
    for (auto& v : next.values()) v = Complex{v.real(), 0.0};
    return WignerFunction(std::move(next), f.hbar());
}

void write_series_csv(const EvolveResult& result, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), ErrorCode::io, "cannot open '" + path + "' for writing");
    out << "t";
    for (const auto& [name, vals] : result.series) out << "," << name;
    out << "\n";
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        out << format_double(result.times[i]);
        for (const auto& [name, vals] : result.series) out << "," << format_double(vals[i]);
        out << "\n";
    }
}

}  // namespace mnh
