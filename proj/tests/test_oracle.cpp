// Sanity checks for the exact symbolic oracle itself: hand-computable
// contractions, antisymmetry at first order, and the thermostat-flow
// identities in symbolic form.
#include <doctest.h>

#include "support/sympoly.hpp"

using namespace mnh;
using namespace mnh::oracle;

namespace {

SymPoly ho_hamiltonian() {
    return SymPoly::monomial(Coord::p, 2, Rat(1, 2)) + SymPoly::monomial(Coord::r, 2, Rat(1, 2));
}

// H^N with m = 1, m_eta = 1, g kT = 1, quartic V = r^4/4
SymPoly nose_hamiltonian_quartic() {
    return SymPoly::monomial(Coord::p, 2, Rat(1, 2)) + SymPoly::monomial(Coord::r, 4, Rat(1, 4)) +
           SymPoly::monomial(Coord::p_eta, 2, Rat(1, 2)) + SymPoly::monomial(Coord::eta, 1, Rat(1));
}

}  // namespace

TEST_CASE("first-order contraction reproduces hand results") {
    auto B = OracleTensor::canonical2();
    SymPoly h = ho_hamiltonian();
    SymPoly r = SymPoly::monomial(Coord::r, 1);
    // sum (d_i H) B_ij (d_j r) = (d_p H) B_pr = -p
    SymPoly t1 = oracle_bidifferential(h, r, B, 1);
    SymPoly expect = SymPoly::monomial(Coord::p, 1, Rat(-1));
    CHECK((t1 - expect).is_zero());
}

TEST_CASE("antisymmetry of T_1 for the nose tensor") {
    auto B = OracleTensor::nose();
    SymPoly a = nose_hamiltonian_quartic();
    SymPoly b = SymPoly::monomial(Coord::p, 3) + SymPoly::monomial(Coord::eta, 1);
    SymPoly s = oracle_bidifferential(a, b, B, 1) + oracle_bidifferential(b, a, B, 1);
    CHECK(s.is_zero());
}

TEST_CASE("third-order chain for quartic V against the closed form") {
    // T_3(H^N, p^3) with all-r left derivatives: V'''(r) d_p^3 p^3 = 6 r * 6 = 36 r
    auto B = OracleTensor::nose();
    SymPoly h = nose_hamiltonian_quartic();
    SymPoly p3 = SymPoly::monomial(Coord::p, 3);
    SymPoly t3 = oracle_bidifferential(h, p3, B, 3);
    SymPoly expect = SymPoly::monomial(Coord::r, 1, Rat(36));
    CHECK((t3 - expect).is_zero());
}

TEST_CASE("generator at first order is the Liouville action") {
    // (i/hbar) M r with hbar arbitrary: generator_imag/hbar should be
    // -T_1-like => dr/dt = p (m = 1). generator_imag = 2 (hbar/2) T_1 = hbar T_1.
    auto B = OracleTensor::canonical2();
    SymPoly h = ho_hamiltonian();
    SymPoly r = SymPoly::monomial(Coord::r, 1);
    SymPoly gen = oracle_generator_imag(h, r, B, 1, Rat(1, 2));
    // = hbar * T_1(H, r) = (1/2)(-p);  (i/hbar) * i * gen = -gen/hbar = p/2... scaled
    SymPoly expect = SymPoly::monomial(Coord::p, 1, Rat(-1, 2));
    CHECK((gen - expect).is_zero());
}

TEST_CASE("divergence-corrected chain reproduces kappa at first order") {
    // adjoint_imag at n_max=1 equals -hbar [T_1(H, f) + kappa f]; with
    // f = 1 only the divergence insertion survives: -hbar * kappa = -hbar * p_eta
    auto B = OracleTensor::nose();
    SymPoly h = nose_hamiltonian_quartic();
    SymPoly one = SymPoly::constant(Rat(1));
    SymPoly adj = oracle_adjoint_imag(h, one, B, 1, Rat(1));
    SymPoly expect = SymPoly::monomial(Coord::p_eta, 1, Rat(-1));
    CHECK((adj - expect).is_zero());
}

TEST_CASE("even-order one-sided terms are asymmetric for the nose tensor") {
    // T_2(H^N, p^3) != T_2(p^3, H^N): the x-dependent tensor breaks the
    // transpose identity that holds for constant tensors.
    auto B = OracleTensor::nose();
    SymPoly h = nose_hamiltonian_quartic();
    SymPoly p3 = SymPoly::monomial(Coord::p, 3);
    SymPoly diff = oracle_bidifferential(h, p3, B, 2) - oracle_bidifferential(p3, h, B, 2);
    CHECK(!diff.is_zero());

    auto Bc = OracleTensor::canonical4();
    SymPoly diff_const = oracle_bidifferential(h, p3, Bc, 2) - oracle_bidifferential(p3, h, Bc, 2);
    CHECK(diff_const.is_zero());
}
