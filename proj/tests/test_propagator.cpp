#include <doctest.h>

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "fft.hpp"
#include "propagator.hpp"
#include "support/sympoly.hpp"

using namespace mnh;
using oracle::OracleTensor;
using oracle::Rat;
using oracle::SymPoly;

namespace {

Poly to_poly(const SymPoly& s) {
    Poly q;
    for (const auto& [e, c] : s.terms()) {
        Poly term = Poly::constant(c.to_double());
        for (int k = 0; k < 4; ++k)
            if (e[k] > 0) term = term * Poly::monomial(static_cast<Coord>(k), e[k]);
        q += term;
    }
    return q;
}

SymPoly sym_nose_h() {
    // m = 1, m_eta = 1, g kT = 1, V = r^2/2 + r^4/4
    return SymPoly::monomial(Coord::p, 2, Rat(1, 2)) + SymPoly::monomial(Coord::r, 2, Rat(1, 2)) +
           SymPoly::monomial(Coord::r, 4, Rat(1, 4)) + SymPoly::monomial(Coord::p_eta, 2, Rat(1, 2)) +
           SymPoly::monomial(Coord::eta, 1, Rat(1));
}

NoseSystem nose_system_quartic() {
    return NoseSystem{HamiltonianSpec::polynomial(1.0, {0.0, 0.0, 0.5, 0.0, 0.25}),
                      NoseParams{1.0, 1.0, 1.0}, 1};
}

GridPtr ext_grid(std::size_t n = 8, double l = 2.0) {
    return PhaseSpaceGrid::make_extended({-l, -l, -l, -l}, {l, l, l, l}, {n, n, n, n});
}

// smooth periodic bump, essentially zero at the domain boundary;
// width_frac is the Gaussian width as a fraction of the half-domain
GridField windowed_field(const GridPtr& g, double phase, double width_frac = 0.5) {
    return GridField::from_function(g, [&](const std::array<double, 4>& x) {
        double v = 1.0;
        for (const Axis& a : g->axes()) {
            double u = x[static_cast<int>(a.name)];
            double c = 0.5 * (a.min + a.max);
            double w = width_frac * 0.5 * (a.max - a.min);
            v *= std::exp(-(u - c) * (u - c) / (w * w));
        }
        double s = 0.0;
        for (const Axis& a : g->axes())
            s += x[static_cast<int>(a.name)] / (a.max - a.min);
        return v * (1.0 + 0.3 * std::sin(2.0 * std::numbers::pi * s + phase));
    });
}

GridField ho_ground_wigner(const GridPtr& g, double hbar) {
    return GridField::from_function(g, [&](const std::array<double, 4>& x) {
        return std::exp(-(x[0] * x[0] + x[2] * x[2]) / hbar) / (std::numbers::pi * hbar);
    });
}

GridField displaced_wigner(const GridPtr& g, double hbar, double r0, double p0) {
    return GridField::from_function(g, [&](const std::array<double, 4>& x) {
        double dr = x[0] - r0, dp = x[2] - p0;
        return std::exp(-(dr * dr + dp * dp) / hbar) / (std::numbers::pi * hbar);
    });
}

}  // namespace

TEST_CASE("generator on linear targets reduces to the classical flow") {
    auto g = PhaseSpaceGrid::make_rp(-6, 6, 64, -6, 6, 64);
    StructureTensor bc = StructureTensor::canonical(2);
    GridField h = GridField::from_poly(
        g, Poly::monomial(Coord::p, 2, 0.25) + Poly::monomial(Coord::r, 2, 0.5));  // m = 2
    GridField r = GridField::from_poly(g, Poly::monomial(Coord::r, 1));
    BracketOrder order;
    for (int n_max : {1, 3, 5}) {
        order.n_max = n_max;
        GridField m_r = apply_generator(h, r, bc, order, 0.7);
        // (i/hbar) M r = p/m
        GridField dr_dt = m_r * Complex{0.0, 1.0 / 0.7};
        double dev = 0.0;
        for (std::size_t i = 0; i < dr_dt.size(); ++i)
            dev = std::max(dev,
                           std::abs(dr_dt.values()[i] - Complex{g->point(i)[2] / 2.0}));
        CHECK(dev <= 1e-12);
    }
}

TEST_CASE("generator on eta terminates at first order for the nose tensor") {
    auto g = ext_grid();
    StructureTensor bn = StructureTensor::nose(1);
    GridField h = GridField::from_poly(g, to_poly(sym_nose_h()));
    GridField eta = GridField::from_poly(g, Poly::monomial(Coord::eta, 1));
    for (int n_max : {1, 3, 5}) {
        BracketOrder order;
        order.n_max = n_max;
        GridField gen = apply_generator(h, eta, bn, order, 1.0) * Complex{0.0, 1.0};
        double dev = 0.0;
        for (std::size_t i = 0; i < gen.size(); ++i)
            dev = std::max(dev, std::abs(gen.values()[i] - Complex{g->point(i)[3]}));
        CHECK(dev <= 1e-12);  // d eta/dt = p_eta / m_eta, m_eta = 1
    }
}

TEST_CASE("generator matches the symbolic oracle on quartic + p^3") {
    auto g = ext_grid();
    StructureTensor bn = StructureTensor::nose(1);
    SymPoly h = sym_nose_h();
    SymPoly t = SymPoly::monomial(Coord::p, 3);
    GridField hf = GridField::from_poly(g, to_poly(h));
    GridField tf = GridField::from_poly(g, to_poly(t));
    BracketOrder order;
    order.n_max = 3;
    GridField got = apply_generator(hf, tf, bn, order, 1.0);
    SymPoly expect = oracle::oracle_generator_imag(h, t, OracleTensor::nose(), 3, Rat(1));
    double dev = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i)
        dev = std::max(dev, std::abs(got.values()[i].imag() - expect.eval(g->point(i))));
    CHECK(dev / (got.sup_norm() + 1.0) <= 1e-8);
}

TEST_CASE("adjoint equals minus the generator for divergence-free tensors") {
    auto g = PhaseSpaceGrid::make_rp(-6, 6, 64, -6, 6, 64);
    StructureTensor bc = StructureTensor::canonical(2);
    GridField h = GridField::from_poly(
        g, Poly::monomial(Coord::p, 2, 0.5) + Poly::monomial(Coord::r, 4, 0.25));
    GridField f = windowed_field(g, 0.4);
    BracketOrder order;
    order.n_max = 3;
    GridField adj = apply_adjoint_generator(h, f, bc, order, 1.0);
    GridField gen = apply_generator(h, f, bc, order, 1.0);
    CHECK((adj + gen).sup_norm() <= 1e-12 * (gen.sup_norm() + 1.0));
}

TEST_CASE("adjoint matches the symbolic oracle with divergence insertions") {
    auto g = ext_grid();
    StructureTensor bn = StructureTensor::nose(1);
    SymPoly h = sym_nose_h();
    SymPoly t = SymPoly::monomial(Coord::p, 3) + SymPoly::monomial(Coord::p_eta, 2);
    GridField hf = GridField::from_poly(g, to_poly(h));
    GridField tf = GridField::from_poly(g, to_poly(t));
    BracketOrder order;
    order.n_max = 3;
    GridField got = apply_adjoint_generator(hf, tf, bn, order, 1.0);
    SymPoly expect = oracle::oracle_adjoint_imag(h, t, OracleTensor::nose(), 3, Rat(1));
    double dev = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i)
        dev = std::max(dev, std::abs(got.values()[i].imag() - expect.eval(g->point(i))));
    CHECK(dev / (got.sup_norm() + 1.0) <= 1e-10);
}

TEST_CASE("discrete integration-by-parts duality") {
    BracketOrder order;
    order.n_max = 3;

    // canonical tensor, random smooth periodic fields
    auto g2 = PhaseSpaceGrid::make_rp(-6, 6, 64, -6, 6, 64);
    StructureTensor bc = StructureTensor::canonical(2);
    GridField h2 = GridField::from_poly(
        g2, Poly::monomial(Coord::p, 2, 0.5) + Poly::monomial(Coord::r, 4, 0.25));
    GridField a2 = GridField::from_function(g2, [&](const std::array<double, 4>& x) {
        double u = std::numbers::pi * x[0] / 6.0, v = std::numbers::pi * x[2] / 6.0;
        return std::cos(u) + 0.4 * std::sin(2 * v) + 0.2 * std::cos(u + v);
    });
    GridField b2 = GridField::from_function(g2, [&](const std::array<double, 4>& x) {
        double u = std::numbers::pi * x[0] / 6.0, v = std::numbers::pi * x[2] / 6.0;
        return std::sin(v) - 0.3 * std::cos(2 * u) + 0.1 * std::sin(u - v);
    });
    GridField ma = apply_generator(h2, a2, bc, order, 1.0);
    GridField adb = apply_adjoint_generator(h2, b2, bc, order, 1.0);
    Complex lhs{0, 0}, rhs{0, 0};
    for (std::size_t i = 0; i < a2.size(); ++i) {
        lhs += ma.values()[i] * b2.values()[i];
        rhs += a2.values()[i] * adb.values()[i];
    }
    lhs *= g2->volume_element();
    rhs *= g2->volume_element();
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (ma.sup_norm() + adb.sup_norm() + 1.0));

    // nose tensor: fields vanish at the boundary so the momentum-weighted
    // pairing closes on the torus; 32 points per axis resolve the window
    auto g4 = ext_grid(32, 3.0);
    StructureTensor bn = StructureTensor::nose(1);
    GridField h4 = GridField::from_poly(g4, to_poly(sym_nose_h()));
    GridField a4 = windowed_field(g4, 0.0, 0.2);
    GridField b4 = windowed_field(g4, 1.3, 0.2);
    GridField ma4 = apply_generator(h4, a4, bn, order, 0.5);
    GridField adb4 = apply_adjoint_generator(h4, b4, bn, order, 0.5);
    Complex lhs4{0, 0}, rhs4{0, 0};
    for (std::size_t i = 0; i < a4.size(); ++i) {
        lhs4 += ma4.values()[i] * b4.values()[i];
        rhs4 += a4.values()[i] * adb4.values()[i];
    }
    lhs4 *= g4->volume_element();
    rhs4 *= g4->volume_element();
    CHECK(std::abs(lhs4 - rhs4) <= 1e-8 * (ma4.sup_norm() + adb4.sup_norm() + 1.0));
}

TEST_CASE("qnh right-hand side on simple targets") {
    auto g = ext_grid();
    NoseSystem sys = nose_system_quartic();
    BracketOrder order;
    order.n_max = 3;

    // linear target r: all quantum terms vanish, rhs = p/m
    GridField r = GridField::from_poly(g, Poly::monomial(Coord::r, 1));
    GridField rhs_r = qnh_rhs(sys, r, order, 1.0);
    double dev = 0.0;
    for (std::size_t i = 0; i < rhs_r.size(); ++i)
        dev = std::max(dev, std::abs(rhs_r.values()[i] - Complex{g->point(i)[2]}));
    CHECK(dev <= 1e-12);

    // eta-only target: rhs = (p_eta/m_eta) d_eta f, no hbar corrections
    GridField feta = GridField::from_poly(g, Poly::monomial(Coord::eta, 2));
    GridField rhs_eta = qnh_rhs(sys, feta, order, 1.0);
    dev = 0.0;
    for (std::size_t i = 0; i < rhs_eta.size(); ++i) {
        auto x = g->point(i);
        dev = std::max(dev, std::abs(rhs_eta.values()[i] - Complex{x[3] * 2.0 * x[1]}));
    }
    CHECK(dev <= 1e-12);
}

TEST_CASE("qnh rhs equals the scaled nose generator") {
    auto g = ext_grid();
    NoseSystem sys = nose_system_quartic();
    StructureTensor bn = StructureTensor::nose(1);
    GridField h = sys.extended_hamiltonian_field(g);
    BracketOrder order;
    order.n_max = 3;
    const double hbar = 0.7;

    // polynomial target
    SymPoly t = SymPoly::monomial(Coord::p, 3);
    GridField tf = GridField::from_poly(g, to_poly(t));
    GridField direct = qnh_rhs(sys, tf, order, hbar);
    GridField via_gen = apply_generator(h, tf, bn, order, hbar) * Complex{0.0, 1.0 / hbar};
    CHECK((direct - via_gen).sup_norm() / (direct.sup_norm() + 1.0) <= 1e-10);
    // and against the symbolic oracle at order hbar^2:
    // (i/hbar) M t = (i/hbar)(i G) = -G/hbar with G the imaginary series
    SymPoly expect = oracle::oracle_generator_imag(sym_nose_h(), t, OracleTensor::nose(), 3,
                                                   Rat(7, 10));
    double dev = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i)
        dev = std::max(dev,
                       std::abs(direct.values()[i].real() + expect.eval(g->point(i)) / 0.7));
    CHECK(dev / (direct.sup_norm() + 1.0) <= 1e-8);

    // smooth non-polynomial target
    GridField sm = windowed_field(g, 0.9);
    GridField d2 = qnh_rhs(sys, sm, order, hbar);
    GridField v2 = apply_generator(h, sm, bn, order, hbar) * Complex{0.0, 1.0 / hbar};
    CHECK((d2 - v2).sup_norm() / (d2.sup_norm() + 1.0) <= 1e-10);
}

TEST_CASE("observable and density sides pair consistently") {
    auto g = ext_grid(8, 2.5);
    NoseSystem sys = nose_system_quartic();
    BracketOrder order;
    order.n_max = 3;
    GridField chi = windowed_field(g, 0.2);
    GridField f = windowed_field(g, 2.1);
    GridField dchi = qnh_rhs(sys, chi, order, 1.0);
    GridField df = qnh_adjoint_rhs(sys, f, order, 1.0);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < chi.size(); ++i) {
        lhs += dchi.values()[i].real() * f.values()[i].real();
        rhs += chi.values()[i].real() * df.values()[i].real();
    }
    lhs *= g->volume_element();
    rhs *= g->volume_element();
    CHECK(std::abs(lhs - rhs) <= 1e-8 * (dchi.sup_norm() + df.sup_norm() + 1.0));

    // the conservative density coding integrates to zero identically
    CHECK(std::abs(df.integral().real()) <= 1e-13 * df.sup_norm());
}

TEST_CASE("harmonic ground state is stationary under rk4 evolution") {
    auto g = PhaseSpaceGrid::make_rp(-8, 8, 64, -8, 8, 64);
    GeneratorSpec gen;
    gen.ham = HamiltonianSpec::polynomial(1.0, {0.0, 0.0, 0.5});
    gen.hbar = 1.0;
    EvolutionConfig cfg;
    cfg.dt = 0.005;
    cfg.n_steps = 100;
    cfg.direction = Direction::wigner;
    cfg.observables = {"norm"};
    GridField f0 = ho_ground_wigner(g, 1.0);
    EvolveResult res = evolve(f0, gen, cfg);
    CHECK((res.field - f0).sup_norm() <= 1e-8);
    CHECK(std::abs(res.series["norm"].back() - res.series["norm"].front()) <= 1e-10);
}

TEST_CASE("displaced packet rotates rigidly: half period flips the centre") {
    auto g = PhaseSpaceGrid::make_rp(-8, 8, 64, -8, 8, 64);
    GeneratorSpec gen;
    gen.ham = HamiltonianSpec::polynomial(1.0, {0.0, 0.0, 0.5});
    gen.hbar = 1.0;
    EvolutionConfig cfg;
    const double T = 2.0 * std::numbers::pi;
    cfg.n_steps = 500;
    cfg.dt = 0.5 * T / cfg.n_steps;
    cfg.direction = Direction::wigner;
    cfg.observables = {"r", "p"};
    EvolveResult res = evolve(displaced_wigner(g, 1.0, 1.0, 0.0), gen, cfg);
    CHECK(res.series["r"].back() == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(std::abs(res.series["p"].back()) <= 1e-6);
}

TEST_CASE("rk4 self-convergence order sits near four") {
    auto g = PhaseSpaceGrid::make_rp(-8, 8, 64, -8, 8, 64);
    GeneratorSpec gen;
    gen.ham = HamiltonianSpec::polynomial(1.0, {0.0, 0.0, 0.5});
    gen.hbar = 1.0;
    const double t_end = 0.5;
    auto err = [&](int n_steps) {
        EvolutionConfig cfg;
        cfg.n_steps = n_steps;
        cfg.dt = t_end / n_steps;
        cfg.direction = Direction::wigner;
        EvolveResult res = evolve(displaced_wigner(g, 1.0, 1.0, 0.0), gen, cfg);
        // analytic rigid rotation reference
        GridField ref = GridField::from_function(g, [&](const std::array<double, 4>& x) {
            double c = std::cos(t_end), s = std::sin(t_end);
            double r = c * x[0] - s * x[2];
            double p = s * x[0] + c * x[2];
            double dr = r - 1.0;
            return std::exp(-(dr * dr + p * p)) / std::numbers::pi;
        });
        return (res.field - ref).sup_norm();
    };
    double e1 = err(50);
    double e2 = err(100);
    double order = std::log2(e1 / e2);
    CHECK(order >= 3.7);
    CHECK(order <= 4.3);
}

TEST_CASE("free particle shear is exact under split stepping") {
    auto g = PhaseSpaceGrid::make_rp(-10, 10, 128, -4, 4, 64);
    HamiltonianSpec free = HamiltonianSpec::polynomial(1.0, {});
    GridField f0 = GridField::from_function(g, [](const std::array<double, 4>& x) {
        return std::exp(-(x[0] * x[0] + x[2] * x[2])) / std::numbers::pi;
    });
    const double t = 1.0;
    GridField f = split_step_wigner_field(f0, free, t, 1.0);
    GridField ref = GridField::from_function(g, [&](const std::array<double, 4>& x) {
        double r = x[0] - x[2] * t;
        return std::exp(-(r * r + x[2] * x[2])) / std::numbers::pi;
    });
    CHECK((f - ref).sup_norm() <= 1e-8);
}

TEST_CASE("split step conserves norm and l2 to round-off") {
    auto g = PhaseSpaceGrid::make_rp(-8, 8, 64, -8, 8, 64);
    HamiltonianSpec quartic = HamiltonianSpec::polynomial(1.0, {0.0, 0.0, 0.0, 0.0, 0.25});
    GridField f = displaced_wigner(g, 1.0, 0.5, -0.5);
    double n0 = f.integral().real(), l0 = f.l2_norm();
    for (int k = 0; k < 20; ++k) f = split_step_wigner_field(f, quartic, 0.01, 1.0);
    CHECK(std::abs(f.integral().real() - n0) <= 1e-12 * std::abs(n0));
    CHECK(std::abs(f.l2_norm() - l0) <= 1e-12 * l0);
}

TEST_CASE("split step agrees with rk4 on the harmonic oscillator") {
    auto g = PhaseSpaceGrid::make_rp(-8, 8, 64, -8, 8, 64);
    GeneratorSpec gen;
    gen.ham = HamiltonianSpec::polynomial(1.0, {0.0, 0.0, 0.5});
    gen.hbar = 1.0;
    const double t_end = 1.0;

    EvolutionConfig rk;
    rk.n_steps = 400;
    rk.dt = t_end / rk.n_steps;
    rk.direction = Direction::wigner;
    EvolveResult res_rk = evolve(displaced_wigner(g, 1.0, 1.0, 0.0), gen, rk);

    EvolutionConfig sp;
    sp.n_steps = 4000;
    sp.dt = t_end / sp.n_steps;
    sp.direction = Direction::wigner;
    sp.stepper = Stepper::split_step;
    EvolveResult res_sp = evolve(displaced_wigner(g, 1.0, 1.0, 0.0), gen, sp);

    CHECK((res_rk.field - res_sp.field).sup_norm() <= 1e-6);
}

TEST_CASE("Ehrenfest relation along a quartic split-step run") {
    auto g = PhaseSpaceGrid::make_rp(-8, 8, 128, -8, 8, 128);
    GeneratorSpec gen;
    gen.ham = HamiltonianSpec::polynomial(1.0, {0.0, 0.0, 0.0, 0.0, 0.25});
    gen.hbar = 1.0;
    EvolutionConfig cfg;
    cfg.dt = 5e-4;
    cfg.n_steps = 200;
    cfg.direction = Direction::wigner;
    cfg.stepper = Stepper::split_step;
    cfg.observables = {"r", "p"};
    EvolveResult res = evolve(displaced_wigner(g, 1.0, 1.0, 0.0), gen, cfg);
    // centred difference of <r> against <p>/m at interior record points
    const auto& r = res.series["r"];
    const auto& p = res.series["p"];
    double dev = 0.0;
    for (std::size_t k = 1; k + 1 < r.size(); ++k) {
        double drdt = (r[k + 1] - r[k - 1]) / (2.0 * cfg.dt);
        dev = std::max(dev, std::abs(drdt - p[k]));
    }
    CHECK(dev <= 1e-6);
}

TEST_CASE("tabulated periodic potentials evolve consistently across steppers") {
    auto g = PhaseSpaceGrid::make_rp(-8, 8, 64, -8, 8, 64);
    Axis raxis = g->axes()[0];
    std::vector<double> table(raxis.count);
    for (std::size_t i = 0; i < raxis.count; ++i) {
        double r = raxis.coordinate(i);
        table[i] = 1.0 - std::cos(2.0 * std::numbers::pi * r / 16.0);
    }
    HamiltonianSpec tab = HamiltonianSpec::tabulated(1.0, raxis, table);

    GeneratorSpec gen;
    gen.ham = tab;
    gen.hbar = 1.0;
    const double t_end = 0.5;

    EvolutionConfig rk;
    rk.n_steps = 100;
    rk.dt = t_end / rk.n_steps;
    rk.direction = Direction::wigner;
    EvolveResult res_rk = evolve(displaced_wigner(g, 1.0, 1.0, 0.0), gen, rk);

    EvolutionConfig sp = rk;
    sp.n_steps = 2000;
    sp.dt = t_end / sp.n_steps;
    sp.stepper = Stepper::split_step;
    EvolveResult res_sp = evolve(displaced_wigner(g, 1.0, 1.0, 0.0), gen, sp);

    CHECK((res_rk.field - res_sp.field).sup_norm() <= 1e-6);
    CHECK(std::abs(res_sp.field.integral().real() - 1.0) <= 1e-9);

    // table length must match the axis exactly
    std::vector<double> bad(table.begin(), table.end() - 1);
    CHECK_THROWS_AS(HamiltonianSpec::tabulated(1.0, raxis, bad), Error);
    // and the field grid must carry the same r axis
    auto other = PhaseSpaceGrid::make_rp(-4, 4, 64, -4, 4, 64);
    CHECK_THROWS_AS(tab.potential_field(other), Error);
}

TEST_CASE("dual directions produce matching averages") {
    auto g = PhaseSpaceGrid::make_rp(-8, 8, 64, -8, 8, 64);
    GeneratorSpec gen;
    gen.ham = HamiltonianSpec::polynomial(1.0, {0.0, 0.0, 0.5});
    gen.hbar = 1.0;
    GridField f0 = displaced_wigner(g, 1.0, 1.0, 0.0);
    GridField chi0 = GridField::from_poly(g, Poly::monomial(Coord::r, 1));

    EvolutionConfig cfg;
    cfg.n_steps = 200;
    cfg.dt = 0.004;
    cfg.direction = Direction::observable;
    EvolveResult obs = evolve(chi0, gen, cfg);
    cfg.direction = Direction::wigner;
    EvolveResult wig = evolve(f0, gen, cfg);

    double lhs = field_average(obs.field, f0);
    double rhs = field_average(chi0, wig.field);
    CHECK(std::abs(lhs - rhs) <= 1e-7);
}

TEST_CASE("extended-space density evolution conserves the integral") {
    auto g = ext_grid(8, 3.0);
    GeneratorSpec gen;
    gen.tensor = TensorKind::nose;
    gen.ham = HamiltonianSpec::polynomial(1.0, {0.0, 0.0, 0.5, 0.0, 0.25});
    gen.nose = NoseParams{1.0, 1.0, 1.0};
    gen.hbar = 0.5;
    EvolutionConfig cfg;
    cfg.dt = 0.01;
    cfg.n_steps = 50;
    cfg.direction = Direction::wigner;
    cfg.observables = {"norm"};
    GridField f0 = renormalize_field(windowed_field(g, 0.0));
    EvolveResult res = evolve(f0, gen, cfg);
    CHECK(std::abs(res.series["norm"].back() - 1.0) <= 1e-8);
}

TEST_CASE("stepper validation and blowup detection") {
    auto g = PhaseSpaceGrid::make_rp(-8, 8, 64, -8, 8, 64);
    GeneratorSpec gen;
    gen.ham = HamiltonianSpec::polynomial(1.0, {0.0, 0.0, 0.5});
    gen.hbar = 1.0;
    EvolutionConfig cfg;
    cfg.dt = -1.0;
    CHECK_THROWS_AS(evolve(ho_ground_wigner(g, 1.0), gen, cfg), Error);

    cfg.dt = 1.0;  // violates the advection bound dr*m/p_max
    CHECK_THROWS_AS(evolve(ho_ground_wigner(g, 1.0), gen, cfg), Error);

    // nose tensor cannot split-step
    EvolutionConfig sp;
    sp.stepper = Stepper::split_step;
    sp.direction = Direction::wigner;
    sp.dt = 0.01;
    GeneratorSpec nose_gen = gen;
    nose_gen.tensor = TensorKind::nose;
    CHECK_THROWS_AS(evolve(ho_ground_wigner(g, 1.0), nose_gen, sp), Error);

    // a field with high-mode noise at the rk4 stability edge must trip the
    // blowup detector rather than return garbage
    GridField noisy = ho_ground_wigner(g, 1.0);
    for (std::size_t i = 0; i < noisy.size(); ++i)
        noisy.values()[i] += ((i * 2654435761u) % 1000) * 1e-9;
    GeneratorSpec free_gen;
    free_gen.ham = HamiltonianSpec::polynomial(1.0, {});
    free_gen.hbar = 1.0;
    EvolutionConfig edge;
    edge.dt = 0.0312;  // just inside dr*m/p_max = 0.03125
    edge.n_steps = 400;
    edge.direction = Direction::wigner;
    CHECK_THROWS_AS(evolve(noisy, free_gen, edge), Error);
}
