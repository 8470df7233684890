#include "stationary.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "errors.hpp"
#include "fft.hpp"

namespace mnh {

const GridField& ExpansionResult::order(int n) const {
    for (const auto& [k, f] : orders)
        if (k == n) return f;
    fail(ErrorCode::invalid_argument, "expansion does not carry order " + std::to_string(n));
}

GridField ExpansionResult::total() const {
    require(!orders.empty(), ErrorCode::invalid_argument, "empty expansion");
    GridField acc = orders.front().second;
    for (std::size_t i = 1; i < orders.size(); ++i) acc += orders[i].second;
    return acc;
}

namespace {

struct WindowNorms {
    double sup = 0.0, l2 = 0.0;
};

WindowNorms window_norms(const GridField& f, std::size_t margin) {
    const PhaseSpaceGrid& g = *f.grid();
    WindowNorms w;
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        bool interior = true;
        for (std::size_t a = 0; a < g.rank(); ++a) {
            std::size_t off = g.axis_offset(i, a);
            if (off < margin || off + margin >= g.axes()[a].count) {
                interior = false;
                break;
            }
        }
        if (!interior) continue;
        double v = std::abs(f.values()[i]);
        w.sup = std::max(w.sup, v);
        acc += v * v;
        ++count;
    }
    w.l2 = count ? std::sqrt(acc * g.volume_element()) : 0.0;
    return w;
}

double series_coefficient(int n, double hbar) {
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    double mag = std::pow(0.5 * hbar, n - 1) / fact;
    return ((n - 1) / 2 % 2 == 0) ? mag : -mag;
}

GridField potential_derivative_field(const HamiltonianSpec& ham, const GridPtr& grid, int order) {
    if (ham.has_poly_potential()) {
        Poly d = ham.potential_poly();
        for (int k = 0; k < order; ++k) d = d.derivative(Coord::r);
        return GridField::from_poly(grid, d);
    }
    return spectral_derivative(ham.potential_field(grid), Coord::r, order);
}

}  // namespace

ResidualNorms qc_stationarity_residual(const NoseSystem& sys, const GridField& candidate,
                                       const BracketOrder& order, double hbar) {
    order.validate();
    const GridPtr& grid = candidate.grid();
    const bool extended = grid->has_axis(Coord::eta) && grid->has_axis(Coord::p_eta);
    require(grid->has_axis(Coord::r) && grid->has_axis(Coord::p), ErrorCode::grid_mismatch,
            "stationarity residual needs r and p axes");

    // LHS: truncated odd V-chain
    GridField lhs = GridField::zeros(grid);
    lhs.set_symbol(std::nullopt);
    for (int n = 3; n <= order.n_max; n += 2) {
        GridField vn = potential_derivative_field(sys.ham, grid, n);
        if (vn.symbol() && vn.symbol()->is_zero()) continue;
        GridField dpn = spectral_derivative(candidate, Coord::p, n);
        const double c = series_coefficient(n, hbar);
        for (std::size_t i = 0; i < lhs.size(); ++i)
            lhs.values()[i] += c * vn.values()[i] * dpn.values()[i];
    }

    // RHS: (iL^N - kappa^N) f, reduced to advection for (r, p) candidates.
    const double m = sys.ham.mass();
    GridField vprime = potential_derivative_field(sys.ham, grid, 1);
    GridField dr = spectral_derivative(candidate, Coord::r, 1);
    GridField dp = spectral_derivative(candidate, Coord::p, 1);
    GridField rhs = GridField::zeros(grid);
    rhs.set_symbol(std::nullopt);
    if (extended) {
        const double m_eta = sys.nose.m_eta;
        GridField deta = spectral_derivative(candidate, Coord::eta, 1);
        GridField dpeta = spectral_derivative(candidate, Coord::p_eta, 1);
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            auto x = grid->point(i);
            const double p = x[static_cast<int>(Coord::p)];
            const double p_eta = x[static_cast<int>(Coord::p_eta)];
            Complex il = (p / m) * dr.values()[i];
            il += (p_eta / m_eta) * deta.values()[i];
            il += (-vprime.values()[i] - p * p_eta / m_eta) * dp.values()[i];
            il += (p * p / m - sys.nose.g * sys.nose.kT) * dpeta.values()[i];
            const double kappa = static_cast<double>(sys.n_dof) * p_eta / m_eta;
            rhs.values()[i] = il - kappa * candidate.values()[i];
        }
    } else {
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            auto x = grid->point(i);
            const double p = x[static_cast<int>(Coord::p)];
            rhs.values()[i] = (p / m) * dr.values()[i] - vprime.values()[i] * dp.values()[i];
        }
    }

    ResidualNorms out{lhs - rhs};
    out.sup = out.residual.sup_norm();
    out.l2 = out.residual.l2_norm();
    WindowNorms w = window_norms(out.residual, 3);
    out.sup_interior = w.sup;
    out.l2_interior = w.l2;
    return out;
}

ExpansionResult wigner_kirkwood_order2(const HamiltonianSpec& ham, double beta, double hbar,
                                       const GridPtr& grid) {
    require(beta > 0.0 && hbar >= 0.0, ErrorCode::invalid_argument,
            "need beta > 0 and hbar >= 0");
    require(grid->has_axis(Coord::r) && grid->has_axis(Coord::p) && grid->rank() == 2,
            ErrorCode::grid_mismatch, "expansion lives on the (r, p) grid");

    const double m = ham.mass();
    GridField h = ham.hamiltonian_field(grid);
    GridField f0 = GridField::zeros(grid);
    f0.set_symbol(std::nullopt);
    for (std::size_t i = 0; i < f0.size(); ++i)
        f0.values()[i] = std::exp(-beta * h.values()[i].real());
    f0 = renormalize_field(f0);

    GridField vp = potential_derivative_field(ham, grid, 1);
    GridField vpp = potential_derivative_field(ham, grid, 2);
    GridField phi2 = GridField::zeros(grid);
    phi2.set_symbol(std::nullopt);
    const double b2 = beta * beta, b3 = beta * beta * beta;
    for (std::size_t i = 0; i < phi2.size(); ++i) {
        auto x = grid->point(i);
        const double p = x[static_cast<int>(Coord::p)];
        const double v1 = vp.values()[i].real();
        const double v2 = vpp.values()[i].real();
        phi2.values()[i] = -b2 * v2 / (8.0 * m) + b3 * v1 * v1 / (24.0 * m) +
                           b3 * v2 * p * p / (24.0 * m * m);
    }
    // mean subtraction keeps integral(f0 + f2) = 1
    const double mean_phi2 = field_average(phi2, f0);
    GridField f2 = GridField::zeros(grid);
    f2.set_symbol(std::nullopt);
    const double h2 = hbar * hbar;
    for (std::size_t i = 0; i < f2.size(); ++i)
        f2.values()[i] = h2 * f0.values()[i] * (phi2.values()[i] - mean_phi2);

    ExpansionResult out;
    out.beta = beta;
    out.hbar = hbar;
    out.orders.emplace_back(0, std::move(f0));
    out.orders.emplace_back(2, std::move(f2));
    return out;
}

WignerFunction ho_canonical_wigner_exact(double beta, double mass, double omega, double hbar,
                                         const GridPtr& grid) {
    require(beta > 0.0 && mass > 0.0 && omega > 0.0 && hbar > 0.0, ErrorCode::invalid_argument,
            "beta, mass, omega, hbar must be positive");
    const double lambda = std::tanh(0.5 * beta * hbar * omega);
    const double a = 2.0 * lambda / (hbar * omega);
    GridField f = GridField::from_function(grid, [&](const std::array<double, 4>& x) {
        const double r = x[static_cast<int>(Coord::r)];
        const double p = x[static_cast<int>(Coord::p)];
        const double h = 0.5 * p * p / mass + 0.5 * mass * omega * omega * r * r;
        return lambda / (std::numbers::pi * hbar) * std::exp(-a * h);
    });
    return WignerFunction(renormalize_field(f), hbar);
}

GridField ho_canonical_wigner_h2_coefficient(double beta, double mass, double omega,
                                             const GridPtr& grid) {
    const double w2 = omega * omega;
    const double b2 = beta * beta, b3 = beta * beta * beta;
    const double z = beta * omega / (2.0 * std::numbers::pi);
    return GridField::from_function(grid, [&](const std::array<double, 4>& x) {
        const double r = x[static_cast<int>(Coord::r)];
        const double p = x[static_cast<int>(Coord::p)];
        const double h = 0.5 * p * p / mass + 0.5 * mass * w2 * r * r;
        return z * std::exp(-beta * h) * (b3 * w2 * h / 12.0 - b2 * w2 / 12.0);
    });
}

double ho_mean_energy(double beta, double omega, double hbar) {
    return 0.5 * hbar * omega / std::tanh(0.5 * beta * hbar * omega);
}

void write_expansion(const ExpansionResult& exp, const std::string& dir_prefix) {
    std::string manifest_path = dir_prefix + "expansion_manifest.txt";
    std::ofstream manifest(manifest_path);
    require(manifest.good(), ErrorCode::io, "cannot open '" + manifest_path + "'");
    manifest << "# orders: ";
    for (std::size_t i = 0; i < exp.orders.size(); ++i) {
        if (i) manifest << ",";
        manifest << exp.orders[i].first;
    }
    manifest << " beta=" << format_double(exp.beta) << " hbar=" << format_double(exp.hbar) << "\n";
    for (const auto& [n, f] : exp.orders)
        write_field_csv(f, dir_prefix + "f_order" + std::to_string(n) + ".csv");
}

}  // namespace mnh
