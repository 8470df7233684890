#include "nose.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "errors.hpp"

namespace mnh {

NoseParams NoseParams::defaults(int n_dof, double mass, double kT, double tau) {
    NoseParams np;
    np.g = static_cast<double>(n_dof);
    np.m_eta = static_cast<double>(n_dof) * mass * tau * tau;
    np.kT = kT;
    np.validate();
    return np;
}

void NoseParams::validate() const {
    require(m_eta > 0.0 && g > 0.0 && kT > 0.0, ErrorCode::invalid_argument,
            "Nose parameters m_eta, g and kT must all be positive");
}

Poly NoseSystem::extended_hamiltonian_poly() const {
    nose.validate();
    return ham.hamiltonian_poly() + Poly::monomial(Coord::p_eta, 2, 0.5 / nose.m_eta) +
           Poly::monomial(Coord::eta, 1, nose.g * nose.kT);
}

GridField NoseSystem::extended_hamiltonian_field(const GridPtr& grid) const {
    return GridField::from_poly(grid, extended_hamiltonian_poly());
}

static double potential_prime(const HamiltonianSpec& ham, double r) {
    if (ham.has_poly_potential()) return ham.potential_poly().derivative(Coord::r).eval({r, 0, 0, 0});
    fail(ErrorCode::unsupported_mode, "trajectory dynamics requires a polynomial potential");
}

double nose_hamiltonian(const NoseSystem& sys, const ExtendedPoint& x) {
    sys.nose.validate();
    double h = 0.0;
    for (std::size_t i = 0; i < x.r.size(); ++i) {
        h += 0.5 * x.p[i] * x.p[i] / sys.ham.mass();
        h += sys.ham.potential_at(x.r[i]);
    }
    h += 0.5 * x.p_eta * x.p_eta / sys.nose.m_eta;
    h += sys.nose.g * sys.nose.kT * x.eta;
    return h;
}

StructureTensor nose_tensor(int n_dof) { return StructureTensor::nose(n_dof); }

ExtendedPoint nose_vector_field(const NoseSystem& sys, const ExtendedPoint& x) {
    const double m = sys.ham.mass();
    ExtendedPoint v;
    v.time = 1.0;
    v.r.resize(x.r.size());
    v.p.resize(x.p.size());
    double psq = 0.0;
    for (std::size_t i = 0; i < x.r.size(); ++i) {
        v.r[i] = x.p[i] / m;
        v.p[i] = -potential_prime(sys.ham, x.r[i]) - x.p[i] * x.p_eta / sys.nose.m_eta;
        psq += x.p[i] * x.p[i] / m;
    }
    v.eta = x.p_eta / sys.nose.m_eta;
    v.p_eta = psq - sys.nose.g * sys.nose.kT;
    return v;
}

double compressibility(const NoseSystem& sys, const ExtendedPoint& x) {
    return static_cast<double>(sys.n_dof) * x.p_eta / sys.nose.m_eta;
}

ChainSpec ChainSpec::make(std::vector<double> masses) {
    require(!masses.empty(), ErrorCode::invalid_argument, "chain needs at least one link");
    for (double q : masses)
        require(q > 0.0, ErrorCode::invalid_argument, "chain masses must be positive");
    ChainSpec c;
    c.eta.assign(masses.size(), 0.0);
    c.p_eta.assign(masses.size(), 0.0);
    c.masses = std::move(masses);
    return c;
}

namespace {

void check_finite(const ExtendedPoint& x) {
    bool ok = std::isfinite(x.eta) && std::isfinite(x.p_eta);
    for (double v : x.r) ok = ok && std::isfinite(v);
    for (double v : x.p) ok = ok && std::isfinite(v);
    require(ok, ErrorCode::integrator_blowup, "integrator produced a non-finite state");
}

double kinetic_force(const NoseSystem& sys, const std::vector<double>& p) {
    double psq = 0.0;
    for (double v : p) psq += v * v / sys.ham.mass();
    return psq - sys.nose.g * sys.nose.kT;
}

// Palindromic half update of the thermostat chain over duration h: momentum
// kicks run from the tail inward, physical momenta are scaled once, eta
// advances, then the kicks run back out.
void chain_half(const NoseSystem& sys, ChainSpec& c, std::vector<double>& p, double h) {
    const std::size_t M = c.length();
    auto force = [&](std::size_t k) {
        if (k == 0) return kinetic_force(sys, p);
        return c.p_eta[k - 1] * c.p_eta[k - 1] / c.masses[k - 1] - sys.nose.kT;
    };

    c.p_eta[M - 1] += 0.5 * h * force(M - 1);
    for (std::size_t k = M - 1; k-- > 0;) {
        double s = std::exp(-0.25 * h * c.p_eta[k + 1] / c.masses[k + 1]);
        c.p_eta[k] = s * (s * c.p_eta[k] + 0.5 * h * force(k));
    }
    double scale = std::exp(-h * c.p_eta[0] / c.masses[0]);
    for (double& v : p) v *= scale;
    for (std::size_t k = 0; k < M; ++k) c.eta[k] += h * c.p_eta[k] / c.masses[k];
    for (std::size_t k = 0; k + 1 < M; ++k) {
        double s = std::exp(-0.25 * h * c.p_eta[k + 1] / c.masses[k + 1]);
        c.p_eta[k] = s * (s * c.p_eta[k] + 0.5 * h * force(k));
    }
    c.p_eta[M - 1] += 0.5 * h * force(M - 1);
}

ExtendedPoint chain_step(const NoseSystem& sys, ChainSpec& chain, const ExtendedPoint& x,
                         double dt) {
    require(dt > 0.0, ErrorCode::invalid_argument, "dt must be positive");
    ExtendedPoint y = x;
    chain_half(sys, chain, y.p, 0.5 * dt);
    for (std::size_t i = 0; i < y.p.size(); ++i)
        y.p[i] += -0.5 * dt * potential_prime(sys.ham, y.r[i]);
    for (std::size_t i = 0; i < y.r.size(); ++i) y.r[i] += dt * y.p[i] / sys.ham.mass();
    for (std::size_t i = 0; i < y.p.size(); ++i)
        y.p[i] += -0.5 * dt * potential_prime(sys.ham, y.r[i]);
    chain_half(sys, chain, y.p, 0.5 * dt);
    y.eta = chain.eta[0];
    y.p_eta = chain.p_eta[0];
    y.time = x.time + dt;
    check_finite(y);
    return y;
}

}  // namespace

ExtendedPoint nh_step(const NoseSystem& sys, const ExtendedPoint& x, double dt) {
    ChainSpec c = ChainSpec::make({sys.nose.m_eta});
    c.eta[0] = x.eta;
    c.p_eta[0] = x.p_eta;
    return chain_step(sys, c, x, dt);
}

ExtendedPoint nhc_step(const NoseSystem& sys, ChainSpec& chain, const ExtendedPoint& x, double dt) {
    require(chain.masses[0] == sys.nose.m_eta, ErrorCode::invalid_argument,
            "first chain mass must equal the system's m_eta");
    return chain_step(sys, chain, x, dt);
}

double chain_invariant(const NoseSystem& sys, const ChainSpec& chain, const ExtendedPoint& x) {
    double h = 0.0;
    for (std::size_t i = 0; i < x.r.size(); ++i) {
        h += 0.5 * x.p[i] * x.p[i] / sys.ham.mass();
        h += sys.ham.potential_at(x.r[i]);
    }
    for (std::size_t k = 0; k < chain.length(); ++k)
        h += 0.5 * chain.p_eta[k] * chain.p_eta[k] / chain.masses[k];
    h += sys.nose.g * sys.nose.kT * chain.eta[0];
    for (std::size_t k = 1; k < chain.length(); ++k) h += sys.nose.kT * chain.eta[k];
    return h;
}

SampleResult sample_canonical(const NoseSystem& sys, ChainSpec chain, std::int64_t n_steps,
                              double dt, std::uint64_t seed, std::int64_t burn_in,
                              std::int64_t stride) {
    require(n_steps > 0 && burn_in >= 0 && burn_in < n_steps, ErrorCode::invalid_argument,
            "need 0 <= burn_in < n_steps");
    require(stride >= 1, ErrorCode::invalid_argument, "stride must be >= 1");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ExtendedPoint x;
    x.r.assign(static_cast<std::size_t>(sys.n_dof), 0.0);
    x.p.resize(static_cast<std::size_t>(sys.n_dof));
    const double sigma_p = std::sqrt(sys.nose.kT * sys.ham.mass());
    for (double& v : x.p) v = sigma_p * gauss(rng);
    x.eta = chain.eta[0];
    x.p_eta = chain.p_eta[0];

    const std::int64_t n_prod = n_steps - burn_in;
    const int n_blocks = 20;

    struct Acc {
        double ke_like = 0.0;  // p^2/m
        double p2 = 0.0;
        double p4 = 0.0;
        double pot = 0.0;
        double virial = 0.0;  // r V'(r)
        std::int64_t count = 0;
    };
    std::vector<Acc> blocks(n_blocks);

    SampleResult out;
    const double m = sys.ham.mass();
    for (std::int64_t step = 0; step < n_steps; ++step) {
        x = nhc_step(sys, chain, x, dt);
        if (step < burn_in) continue;
        std::int64_t k = step - burn_in;
        auto& blk = blocks[static_cast<std::size_t>(std::min<std::int64_t>(
            k * n_blocks / n_prod, n_blocks - 1))];
        double p2 = 0.0, pot = 0.0, vir = 0.0;
        for (std::size_t i = 0; i < x.p.size(); ++i) {
            p2 += x.p[i] * x.p[i];
            pot += sys.ham.potential_at(x.r[i]);
            vir += x.r[i] * potential_prime(sys.ham, x.r[i]);
        }
        blk.ke_like += p2 / m;
        blk.p2 += p2;
        blk.p4 += p2 * p2;
        blk.pot += pot;
        blk.virial += vir;
        blk.count++;
        if (k % stride == 0) {
            TrajectoryRow row;
            row.t = x.time;
            row.r = x.r;
            row.eta = chain.eta;
            row.p = x.p;
            row.p_eta = chain.p_eta;
            row.h_n = nose_hamiltonian(sys, x);
            row.kappa = compressibility(sys, x);
            out.trajectory.push_back(std::move(row));
        }
    }

    auto block_stats = [&](const std::function<double(const Acc&)>& f, const std::string& name) {
        double mean = 0.0;
        std::vector<double> vals;
        for (const Acc& b : blocks)
            if (b.count > 0) vals.push_back(f(b));
        for (double v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        var /= static_cast<double>(vals.size()) * std::max<double>(1.0, static_cast<double>(vals.size()) - 1.0);
        out.estimators.push_back(EstimatorEntry{name, mean, std::sqrt(var)});
    };

    block_stats([](const Acc& b) { return b.ke_like / static_cast<double>(b.count); }, "p2_over_m");
    block_stats(
        [](const Acc& b) {
            double p2 = b.p2 / static_cast<double>(b.count);
            double p4 = b.p4 / static_cast<double>(b.count);
            return p4 / (p2 * p2);
        },
        "p4_over_p2sq");
    block_stats([](const Acc& b) { return b.pot / static_cast<double>(b.count); }, "potential");
    block_stats([](const Acc& b) { return b.virial / static_cast<double>(b.count); }, "virial_rVp");
    return out;
}

double stationary_density_extended(const NoseSystem& sys, const ExtendedPoint& x,
                                   StationaryForm form, double beta,
                                   const std::function<double(double)>& h) {
    if (form == StationaryForm::hoover_marginal) {
        double hphys = 0.0;
        for (std::size_t i = 0; i < x.r.size(); ++i)
            hphys += 0.5 * x.p[i] * x.p[i] / sys.ham.mass() + sys.ham.potential_at(x.r[i]);
        hphys += 0.5 * x.p_eta * x.p_eta / sys.nose.m_eta;
        return std::exp(-beta * hphys);
    }
    double hn = nose_hamiltonian(sys, x);
    double hv = h ? h(hn) : std::exp(-beta * hn);
    return hv * std::exp(-static_cast<double>(sys.n_dof) * x.eta);
}

double zeroth_order_stationarity_residual(const NoseSystem& sys, const ExtendedPoint& x,
                                          const std::function<double(double)>& h,
                                          const std::function<double(double)>& dh) {
    const ExtendedPoint v = nose_vector_field(sys, x);
    const double m = sys.ham.mass();
    // analytic gradient of H^N
    double xdot_grad_h = 0.0;
    for (std::size_t i = 0; i < x.r.size(); ++i) {
        xdot_grad_h += v.r[i] * potential_prime(sys.ham, x.r[i]);
        xdot_grad_h += v.p[i] * x.p[i] / m;
    }
    xdot_grad_h += v.eta * sys.nose.g * sys.nose.kT;
    xdot_grad_h += v.p_eta * x.p_eta / sys.nose.m_eta;

    const double n = static_cast<double>(sys.n_dof);
    const double hn = nose_hamiltonian(sys, x);
    const double f = h(hn) * std::exp(-n * x.eta);
    // iL f = h'(H^N) (xdot . grad H^N) e^{-N eta} - N eta-dot f
    const double ilf = dh(hn) * std::exp(-n * x.eta) * xdot_grad_h - n * v.eta * f;
    return ilf + compressibility(sys, x) * f;
}

void write_trajectory_csv(const SampleResult& result, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), ErrorCode::io, "cannot open '" + path + "' for writing");
    if (result.trajectory.empty()) return;
    const auto& first = result.trajectory.front();
    out << "t";
    for (std::size_t i = 0; i < first.r.size(); ++i) out << ",r" << i;
    for (std::size_t i = 0; i < first.eta.size(); ++i) out << ",eta" << i;
    for (std::size_t i = 0; i < first.p.size(); ++i) out << ",p" << i;
    for (std::size_t i = 0; i < first.p_eta.size(); ++i) out << ",p_eta" << i;
    out << ",H_N,kappa\n";
    for (const auto& row : result.trajectory) {
        out << format_double(row.t);
        for (double v : row.r) out << "," << format_double(v);
        for (double v : row.eta) out << "," << format_double(v);
        for (double v : row.p) out << "," << format_double(v);
        for (double v : row.p_eta) out << "," << format_double(v);
        out << "," << format_double(row.h_n) << "," << format_double(row.kappa) << "\n";
    }
}

void write_estimators_csv(const std::vector<EstimatorEntry>& est, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), ErrorCode::io, "cannot open '" + path + "' for writing");
    out << "name,value,stderr\n";
    for (const auto& e : est)
        out << e.name << "," << format_double(e.value) << "," << format_double(e.stderr_) << "\n";
}

}  // namespace mnh
