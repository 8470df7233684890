#include "moyalnh.h"

#include <cstring>
#include <string>

#include "bracket.hpp"
#include "errors.hpp"
#include "fft.hpp"
#include "nose.hpp"
#include "propagator.hpp"
#include "scenario.hpp"
#include "stationary.hpp"
#include "version.hpp"
#include "wigner.hpp"

using namespace mnh;

namespace {

thread_local std::string g_last_error = "";

mnh_status map_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return MNH_ERR_INVALID_ARGUMENT;
        case ErrorCode::grid_mismatch: return MNH_ERR_GRID_MISMATCH;
        case ErrorCode::normalization: return MNH_ERR_NORMALIZATION;
        case ErrorCode::degenerate_field: return MNH_ERR_DEGENERATE_FIELD;
        case ErrorCode::tensor_grid_mismatch: return MNH_ERR_TENSOR_GRID_MISMATCH;
        case ErrorCode::unsupported_mode: return MNH_ERR_UNSUPPORTED_MODE;
        case ErrorCode::integrator_blowup: return MNH_ERR_INTEGRATOR_BLOWUP;
        case ErrorCode::config: return MNH_ERR_CONFIG;
        case ErrorCode::io: return MNH_ERR_IO;
    }
    return MNH_ERR_INTERNAL;
}

template <typename Fn>
mnh_status guarded(Fn&& fn) {
    try {
        fn();
        return MNH_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MNH_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return MNH_ERR_INTERNAL;
    }
}

StructureTensor tensor_of(mnh_tensor_kind kind, const PhaseSpaceGrid& grid) {
    if (kind == MNH_TENSOR_NOSE) return StructureTensor::nose(1);
    return StructureTensor::canonical(grid.rank() == 4 ? 4 : 2);
}

ExtendedPoint point_of(const double x[4]) {
    ExtendedPoint pt;
    pt.r = {x[0]};
    pt.eta = x[1];
    pt.p = {x[2]};
    pt.p_eta = x[3];
    return pt;
}

void point_to(const ExtendedPoint& pt, double x[4]) {
    x[0] = pt.r[0];
    x[1] = pt.eta;
    x[2] = pt.p[0];
    x[3] = pt.p_eta;
}

}  // namespace

struct mnh_grid {
    GridPtr grid;
};

struct mnh_field {
    GridField field;
};

struct mnh_system {
    NoseSystem sys;
    double mass;
};

struct mnh_chain {
    ChainSpec chain;
};

extern "C" {

const char* mnh_version(void) { return kVersion; }

const char* mnh_last_error(void) { return g_last_error.c_str(); }

mnh_status mnh_grid_create(const char* const* axis_names, const double* mins, const double* maxs,
                           const size_t* counts, size_t n_axes, mnh_grid** out) {
    return guarded([&] {
        require(axis_names && mins && maxs && counts && out && n_axes > 0,
                ErrorCode::invalid_argument, "null argument");
        std::vector<Axis> axes;
        for (size_t i = 0; i < n_axes; ++i)
            axes.push_back(Axis{coord_from_name(axis_names[i]), mins[i], maxs[i], counts[i]});
        *out = new mnh_grid{PhaseSpaceGrid::make(std::move(axes))};
    });
}

void mnh_grid_free(mnh_grid* grid) { delete grid; }

size_t mnh_grid_rank(const mnh_grid* grid) { return grid ? grid->grid->rank() : 0; }

size_t mnh_grid_size(const mnh_grid* grid) { return grid ? grid->grid->size() : 0; }

mnh_status mnh_field_create(const mnh_grid* grid, const double* values_re, const double* values_im,
                            mnh_field** out) {
    return guarded([&] {
        require(grid && values_re && out, ErrorCode::invalid_argument, "null argument");
        std::vector<Complex> v(grid->grid->size());
        for (size_t i = 0; i < v.size(); ++i)
            v[i] = Complex{values_re[i], values_im ? values_im[i] : 0.0};
        *out = new mnh_field{GridField(grid->grid, std::move(v))};
    });
}

mnh_status mnh_field_from_polynomial(const mnh_grid* grid, const double* coeffs,
                                     const int* exponents, size_t n_terms, mnh_field** out) {
    return guarded([&] {
        require(grid && coeffs && exponents && out, ErrorCode::invalid_argument, "null argument");
        Poly poly;
        for (size_t t = 0; t < n_terms; ++t) {
            Poly term = Poly::constant(coeffs[t]);
            for (int c = 0; c < 4; ++c) {
                int e = exponents[4 * t + c];
                require(e >= 0 && e <= 16, ErrorCode::invalid_argument, "exponent out of range");
                if (e > 0) term = term * Poly::monomial(static_cast<Coord>(c), e);
            }
            poly += term;
        }
        *out = new mnh_field{GridField::from_poly(grid->grid, poly)};
    });
}

void mnh_field_free(mnh_field* field) { delete field; }

size_t mnh_field_size(const mnh_field* field) { return field ? field->field.size() : 0; }

mnh_status mnh_field_copy_values(const mnh_field* field, double* re, double* im) {
    return guarded([&] {
        require(field && re, ErrorCode::invalid_argument, "null argument");
        for (size_t i = 0; i < field->field.size(); ++i) {
            re[i] = field->field.values()[i].real();
            if (im) im[i] = field->field.values()[i].imag();
        }
    });
}

mnh_status mnh_field_integral(const mnh_field* field, double* re, double* im) {
    return guarded([&] {
        require(field && re, ErrorCode::invalid_argument, "null argument");
        Complex v = field->field.integral();
        *re = v.real();
        if (im) *im = v.imag();
    });
}

mnh_status mnh_field_renormalize(mnh_field* field) {
    return guarded([&] {
        require(field, ErrorCode::invalid_argument, "null argument");
        field->field = renormalize_field(field->field);
    });
}

mnh_status mnh_field_average(const mnh_field* obs, const mnh_field* f, double* out) {
    return guarded([&] {
        require(obs && f && out, ErrorCode::invalid_argument, "null argument");
        *out = field_average(obs->field, f->field);
    });
}

mnh_status mnh_field_marginal(const mnh_field* field, const char* axis, double* out) {
    return guarded([&] {
        require(field && axis && out, ErrorCode::invalid_argument, "null argument");
        auto vals = marginal_values(field->field, coord_from_name(axis));
        std::memcpy(out, vals.data(), vals.size() * sizeof(double));
    });
}

mnh_status mnh_field_write_csv(const mnh_field* field, const char* path) {
    return guarded([&] {
        require(field && path, ErrorCode::invalid_argument, "null argument");
        write_field_csv(field->field, path);
    });
}

mnh_status mnh_field_read_csv(const char* path, mnh_field** out) {
    return guarded([&] {
        require(path && out, ErrorCode::invalid_argument, "null argument");
        *out = new mnh_field{read_field_csv(path)};
    });
}

mnh_status mnh_wigner_from_state(const double* psi_re, const double* psi_im, size_t n, double rmin,
                                 double rmax, double hbar, mnh_field** out) {
    return guarded([&] {
        require(psi_re && out, ErrorCode::invalid_argument, "null argument");
        std::vector<Complex> psi(n);
        for (size_t i = 0; i < n; ++i) psi[i] = Complex{psi_re[i], psi_im ? psi_im[i] : 0.0};
        WignerFunction w = wigner_transform_pure_state(psi, rmin, rmax, hbar);
        *out = new mnh_field{w.field()};
    });
}

mnh_status mnh_spectral_derivative(const mnh_field* field, const char* axis, int order,
                                   mnh_field** out) {
    return guarded([&] {
        require(field && axis && out, ErrorCode::invalid_argument, "null argument");
        *out = new mnh_field{spectral_derivative(field->field, coord_from_name(axis), order)};
    });
}

mnh_status mnh_moyal_bracket(const mnh_field* a, const mnh_field* b, mnh_tensor_kind kind,
                             int n_max, int spectral_mode, double hbar, mnh_field** out) {
    return guarded([&] {
        require(a && b && out, ErrorCode::invalid_argument, "null argument");
        BracketOrder order;
        order.n_max = n_max;
        order.mode = spectral_mode ? BracketOrder::Mode::spectral : BracketOrder::Mode::series;
        StructureTensor B = tensor_of(kind, *a->field.grid());
        *out = new mnh_field{moyal_bracket(a->field, b->field, B, order, hbar)};
    });
}

mnh_status mnh_bidifferential_term(const mnh_field* a, const mnh_field* b, mnh_tensor_kind kind,
                                   int n, mnh_field** out) {
    return guarded([&] {
        require(a && b && out, ErrorCode::invalid_argument, "null argument");
        StructureTensor B = tensor_of(kind, *a->field.grid());
        *out = new mnh_field{bidifferential_term(a->field, b->field, B, n)};
    });
}

mnh_status mnh_apply_generator(const mnh_field* h, const mnh_field* target, mnh_tensor_kind kind,
                               int n_max, double hbar, mnh_field** out) {
    return guarded([&] {
        require(h && target && out, ErrorCode::invalid_argument, "null argument");
        BracketOrder order;
        order.n_max = n_max;
        StructureTensor B = tensor_of(kind, *h->field.grid());
        *out = new mnh_field{apply_generator(h->field, target->field, B, order, hbar)};
    });
}

mnh_status mnh_apply_adjoint_generator(const mnh_field* h, const mnh_field* target,
                                       mnh_tensor_kind kind, int n_max, double hbar,
                                       mnh_field** out) {
    return guarded([&] {
        require(h && target && out, ErrorCode::invalid_argument, "null argument");
        BracketOrder order;
        order.n_max = n_max;
        StructureTensor B = tensor_of(kind, *h->field.grid());
        *out = new mnh_field{apply_adjoint_generator(h->field, target->field, B, order, hbar)};
    });
}

mnh_status mnh_system_create(double mass, const double* v_coeffs, size_t n_coeffs, double m_eta,
                             double g, double kT, int n_dof, mnh_system** out) {
    return guarded([&] {
        require(v_coeffs && out, ErrorCode::invalid_argument, "null argument");
        std::vector<double> coeffs(v_coeffs, v_coeffs + n_coeffs);
        NoseParams np{m_eta, g, kT};
        np.validate();
        *out = new mnh_system{NoseSystem{HamiltonianSpec::polynomial(mass, coeffs), np, n_dof},
                              mass};
    });
}

void mnh_system_free(mnh_system* sys) { delete sys; }

mnh_status mnh_nose_hamiltonian(const mnh_system* sys, const double x[4], double* out) {
    return guarded([&] {
        require(sys && x && out, ErrorCode::invalid_argument, "null argument");
        *out = nose_hamiltonian(sys->sys, point_of(x));
    });
}

mnh_status mnh_nose_vector_field(const mnh_system* sys, const double x[4], double out[4]) {
    return guarded([&] {
        require(sys && x && out, ErrorCode::invalid_argument, "null argument");
        ExtendedPoint v = nose_vector_field(sys->sys, point_of(x));
        out[0] = v.r[0];
        out[1] = v.eta;
        out[2] = v.p[0];
        out[3] = v.p_eta;
    });
}

mnh_status mnh_compressibility(const mnh_system* sys, const double x[4], double* out) {
    return guarded([&] {
        require(sys && x && out, ErrorCode::invalid_argument, "null argument");
        *out = compressibility(sys->sys, point_of(x));
    });
}

mnh_status mnh_nh_step(const mnh_system* sys, double x[4], double dt) {
    return guarded([&] {
        require(sys && x, ErrorCode::invalid_argument, "null argument");
        ExtendedPoint next = nh_step(sys->sys, point_of(x), dt);
        point_to(next, x);
    });
}

mnh_status mnh_chain_create(const double* masses, size_t length, mnh_chain** out) {
    return guarded([&] {
        require(masses && out, ErrorCode::invalid_argument, "null argument");
        *out = new mnh_chain{ChainSpec::make(std::vector<double>(masses, masses + length))};
    });
}

void mnh_chain_free(mnh_chain* chain) { delete chain; }

mnh_status mnh_nhc_step(const mnh_system* sys, mnh_chain* chain, double x[4], double dt) {
    return guarded([&] {
        require(sys && chain && x, ErrorCode::invalid_argument, "null argument");
        ExtendedPoint next = nhc_step(sys->sys, chain->chain, point_of(x), dt);
        point_to(next, x);
    });
}

mnh_status mnh_sample_canonical(const mnh_system* sys, int chain_length, int64_t n_steps,
                                double dt, uint64_t seed, int64_t burn_in, int64_t stride,
                                const char* out_dir, double values[4], double errors[4]) {
    return guarded([&] {
        require(sys, ErrorCode::invalid_argument, "null argument");
        std::vector<double> masses(static_cast<size_t>(chain_length), sys->sys.nose.m_eta);
        SampleResult res = sample_canonical(sys->sys, ChainSpec::make(masses), n_steps, dt, seed,
                                            burn_in, stride);
        if (out_dir) {
            std::string dir(out_dir);
            write_trajectory_csv(res, dir + "/trajectory.csv");
            write_estimators_csv(res.estimators, dir + "/estimators.csv");
        }
        for (size_t i = 0; i < 4 && i < res.estimators.size(); ++i) {
            if (values) values[i] = res.estimators[i].value;
            if (errors) errors[i] = res.estimators[i].stderr_;
        }
    });
}

mnh_status mnh_qnh_rhs(const mnh_system* sys, const mnh_field* target, int n_max, double hbar,
                       mnh_field** out) {
    return guarded([&] {
        require(sys && target && out, ErrorCode::invalid_argument, "null argument");
        BracketOrder order;
        order.n_max = n_max;
        *out = new mnh_field{qnh_rhs(sys->sys, target->field, order, hbar)};
    });
}

mnh_status mnh_evolve(const mnh_field* initial, const mnh_system* sys, mnh_tensor_kind kind,
                      mnh_direction direction, mnh_stepper stepper, double dt, int n_steps,
                      int n_max, double hbar, const char* observables,
                      const char* series_csv_path, mnh_field** out) {
    return guarded([&] {
        require(initial && sys && out, ErrorCode::invalid_argument, "null argument");
        GeneratorSpec gen;
        gen.tensor = kind == MNH_TENSOR_NOSE ? TensorKind::nose : TensorKind::canonical;
        gen.ham = sys->sys.ham;
        gen.nose = sys->sys.nose;
        gen.n_dof = sys->sys.n_dof;
        gen.hbar = hbar;
        EvolutionConfig cfg;
        cfg.dt = dt;
        cfg.n_steps = n_steps;
        cfg.order.n_max = n_max;
        cfg.direction = direction == MNH_DIR_WIGNER ? Direction::wigner : Direction::observable;
        cfg.stepper = stepper == MNH_STEP_SPLIT ? Stepper::split_step : Stepper::rk4;
        if (observables) {
            std::string s(observables);
            size_t pos = 0;
            while (pos != std::string::npos) {
                size_t comma = s.find(',', pos);
                std::string item = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
                if (!item.empty()) cfg.observables.push_back(item);
                pos = comma == std::string::npos ? comma : comma + 1;
            }
        }
        EvolveResult res = evolve(initial->field, gen, cfg);
        if (series_csv_path) write_series_csv(res, series_csv_path);
        *out = new mnh_field{std::move(res.field)};
    });
}

mnh_status mnh_split_step(const mnh_field* f, const mnh_system* sys, double dt, double hbar,
                          mnh_field** out) {
    return guarded([&] {
        require(f && sys && out, ErrorCode::invalid_argument, "null argument");
        *out = new mnh_field{split_step_wigner_field(f->field, sys->sys.ham, dt, hbar)};
    });
}

mnh_status mnh_wigner_kirkwood(const mnh_system* sys, double beta, double hbar,
                               const mnh_grid* grid, mnh_field** f0, mnh_field** f2) {
    return guarded([&] {
        require(sys && grid && f0 && f2, ErrorCode::invalid_argument, "null argument");
        ExpansionResult res = wigner_kirkwood_order2(sys->sys.ham, beta, hbar, grid->grid);
        *f0 = new mnh_field{res.order(0)};
        *f2 = new mnh_field{res.order(2)};
    });
}

mnh_status mnh_ho_canonical_wigner(double beta, double mass, double omega, double hbar,
                                   const mnh_grid* grid, mnh_field** out) {
    return guarded([&] {
        require(grid && out, ErrorCode::invalid_argument, "null argument");
        WignerFunction w = ho_canonical_wigner_exact(beta, mass, omega, hbar, grid->grid);
        *out = new mnh_field{w.field()};
    });
}

mnh_status mnh_qc_stationarity_residual(const mnh_system* sys, const mnh_field* candidate,
                                        int n_max, double hbar, double* sup, double* l2,
                                        double* sup_interior, double* l2_interior) {
    return guarded([&] {
        require(sys && candidate, ErrorCode::invalid_argument, "null argument");
        BracketOrder order;
        order.n_max = n_max;
        ResidualNorms rn = qc_stationarity_residual(sys->sys, candidate->field, order, hbar);
        if (sup) *sup = rn.sup;
        if (l2) *l2 = rn.l2;
        if (sup_interior) *sup_interior = rn.sup_interior;
        if (l2_interior) *l2_interior = rn.l2_interior;
    });
}

mnh_status mnh_scenario_run(const char* config_path, int* exit_code) {
    return guarded([&] {
        require(config_path && exit_code, ErrorCode::invalid_argument, "null argument");
        *exit_code = run_scenario(config_path);
    });
}

mnh_status mnh_scenario_validate(const char* config_path) {
    return guarded([&] {
        require(config_path, ErrorCode::invalid_argument, "null argument");
        validate_scenario_config(parse_scenario_config(config_path));
    });
}

}  // extern "C"
