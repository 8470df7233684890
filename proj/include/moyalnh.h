/* moyalnh - quantum phase-space dynamics with generalized Moyal brackets
 * and Nose-Hoover thermostatting.
 *
 * C API: opaque handles, integer status codes, thread-local error text.
 * Every function that can fail returns mnh_status (0 on success); the last
 * failure message for the calling thread is available from mnh_last_error().
 */
#ifndef MOYALNH_H
#define MOYALNH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mnh_status {
    MNH_OK = 0,
    MNH_ERR_INVALID_ARGUMENT = 1,
    MNH_ERR_GRID_MISMATCH = 2,
    MNH_ERR_NORMALIZATION = 3,
    MNH_ERR_DEGENERATE_FIELD = 4,
    MNH_ERR_TENSOR_GRID_MISMATCH = 5,
    MNH_ERR_UNSUPPORTED_MODE = 6,
    MNH_ERR_INTEGRATOR_BLOWUP = 7,
    MNH_ERR_CONFIG = 8,
    MNH_ERR_IO = 9,
    MNH_ERR_INTERNAL = 10
} mnh_status;

typedef enum mnh_tensor_kind { MNH_TENSOR_CANONICAL = 0, MNH_TENSOR_NOSE = 1 } mnh_tensor_kind;

typedef enum mnh_direction { MNH_DIR_OBSERVABLE = 0, MNH_DIR_WIGNER = 1 } mnh_direction;

typedef enum mnh_stepper { MNH_STEP_RK4 = 0, MNH_STEP_SPLIT = 1 } mnh_stepper;

typedef struct mnh_grid mnh_grid;
typedef struct mnh_field mnh_field;
typedef struct mnh_system mnh_system;
typedef struct mnh_chain mnh_chain;

const char* mnh_version(void);
/* Message for the most recent failure on this thread; never NULL. */
const char* mnh_last_error(void);

/* ------------------------------------------------------------------ */
/* grids and fields                                                     */

/* axis_names entries: "r", "eta", "p", "p_eta"; counts must be powers of
 * two >= 4. */
mnh_status mnh_grid_create(const char* const* axis_names, const double* mins, const double* maxs,
                           const size_t* counts, size_t n_axes, mnh_grid** out);
void mnh_grid_free(mnh_grid* grid);
size_t mnh_grid_rank(const mnh_grid* grid);
size_t mnh_grid_size(const mnh_grid* grid);

/* values_re/values_im are row-major (last axis fastest); values_im may be
 * NULL for real fields. */
mnh_status mnh_field_create(const mnh_grid* grid, const double* values_re, const double* values_im,
                            mnh_field** out);
/* Polynomial-backed field: each term is coeff * r^e0 eta^e1 p^e2 p_eta^e3;
 * exponents has 4*n_terms entries. Such fields differentiate exactly. */
mnh_status mnh_field_from_polynomial(const mnh_grid* grid, const double* coeffs,
                                     const int* exponents, size_t n_terms, mnh_field** out);
void mnh_field_free(mnh_field* field);
size_t mnh_field_size(const mnh_field* field);
mnh_status mnh_field_copy_values(const mnh_field* field, double* re, double* im);
mnh_status mnh_field_integral(const mnh_field* field, double* re, double* im);
mnh_status mnh_field_renormalize(mnh_field* field);
mnh_status mnh_field_average(const mnh_field* obs, const mnh_field* f, double* out);
/* out must hold count(axis) doubles. */
mnh_status mnh_field_marginal(const mnh_field* field, const char* axis, double* out);
mnh_status mnh_field_write_csv(const mnh_field* field, const char* path);
mnh_status mnh_field_read_csv(const char* path, mnh_field** out);

/* Discrete Wigner transform of a pure state on [rmin, rmax); the paired
 * momentum axis is chosen by the transform. */
mnh_status mnh_wigner_from_state(const double* psi_re, const double* psi_im, size_t n, double rmin,
                                 double rmax, double hbar, mnh_field** out);

mnh_status mnh_spectral_derivative(const mnh_field* field, const char* axis, int order,
                                   mnh_field** out);

/* ------------------------------------------------------------------ */
/* brackets and propagators                                             */

mnh_status mnh_moyal_bracket(const mnh_field* a, const mnh_field* b, mnh_tensor_kind kind,
                             int n_max, int spectral_mode, double hbar, mnh_field** out);
mnh_status mnh_bidifferential_term(const mnh_field* a, const mnh_field* b, mnh_tensor_kind kind,
                                   int n, mnh_field** out);
mnh_status mnh_apply_generator(const mnh_field* h, const mnh_field* target, mnh_tensor_kind kind,
                               int n_max, double hbar, mnh_field** out);
mnh_status mnh_apply_adjoint_generator(const mnh_field* h, const mnh_field* target,
                                       mnh_tensor_kind kind, int n_max, double hbar,
                                       mnh_field** out);

/* ------------------------------------------------------------------ */
/* systems, thermostats, trajectories                                   */

/* Polynomial potential: coefficients c0..cK of V(r), K <= 8. */
mnh_status mnh_system_create(double mass, const double* v_coeffs, size_t n_coeffs, double m_eta,
                             double g, double kT, int n_dof, mnh_system** out);
void mnh_system_free(mnh_system* sys);

/* x = (r, eta, p, p_eta) for one degree of freedom. */
mnh_status mnh_nose_hamiltonian(const mnh_system* sys, const double x[4], double* out);
mnh_status mnh_nose_vector_field(const mnh_system* sys, const double x[4], double out[4]);
mnh_status mnh_compressibility(const mnh_system* sys, const double x[4], double* out);
mnh_status mnh_nh_step(const mnh_system* sys, double x[4], double dt);

mnh_status mnh_chain_create(const double* masses, size_t length, mnh_chain** out);
void mnh_chain_free(mnh_chain* chain);
mnh_status mnh_nhc_step(const mnh_system* sys, mnh_chain* chain, double x[4], double dt);

/* Runs thermostatted sampling and writes trajectory.csv / estimators.csv
 * under out_dir; estimator values land in values/errors (size 4, order:
 * p2_over_m, p4_over_p2sq, potential, virial_rVp). */
mnh_status mnh_sample_canonical(const mnh_system* sys, int chain_length, int64_t n_steps,
                                double dt, uint64_t seed, int64_t burn_in, int64_t stride,
                                const char* out_dir, double values[4], double errors[4]);

mnh_status mnh_qnh_rhs(const mnh_system* sys, const mnh_field* target, int n_max, double hbar,
                       mnh_field** out);

/* Time evolution; observables is a comma-separated list of
 * norm,l2,r,p,p2,H; series_csv_path may be NULL. */
mnh_status mnh_evolve(const mnh_field* initial, const mnh_system* sys, mnh_tensor_kind kind,
                      mnh_direction direction, mnh_stepper stepper, double dt, int n_steps,
                      int n_max, double hbar, const char* observables,
                      const char* series_csv_path, mnh_field** out);
mnh_status mnh_split_step(const mnh_field* f, const mnh_system* sys, double dt, double hbar,
                          mnh_field** out);

/* ------------------------------------------------------------------ */
/* stationary analysis                                                  */

mnh_status mnh_wigner_kirkwood(const mnh_system* sys, double beta, double hbar,
                               const mnh_grid* grid, mnh_field** f0, mnh_field** f2);
mnh_status mnh_ho_canonical_wigner(double beta, double mass, double omega, double hbar,
                                   const mnh_grid* grid, mnh_field** out);
mnh_status mnh_qc_stationarity_residual(const mnh_system* sys, const mnh_field* candidate,
                                        int n_max, double hbar, double* sup, double* l2,
                                        double* sup_interior, double* l2_interior);

/* ------------------------------------------------------------------ */
/* scenario runner                                                      */

/* Returns the scenario exit status through *exit_code: 0 success/PASS,
 * 2 numerical FAIL. Config errors return MNH_ERR_CONFIG. */
mnh_status mnh_scenario_run(const char* config_path, int* exit_code);
mnh_status mnh_scenario_validate(const char* config_path);

#ifdef __cplusplus
}
#endif

#endif /* MOYALNH_H */
