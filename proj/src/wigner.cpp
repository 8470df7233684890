#include "wigner.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "fft.hpp"

namespace mnh {

WignerFunction::WignerFunction(GridField field, double hbar)
    : field_(std::move(field)), hbar_(hbar) {
    require(hbar_ > 0.0, ErrorCode::invalid_argument, "hbar must be positive");
    require(field_.max_imag() <= 1e-12 * std::max(1.0, field_.sup_norm()), ErrorCode::normalization,
            "Wigner function must be real");
    double norm = field_.integral().real();
    require(std::abs(norm - 1.0) <= 1e-9, ErrorCode::normalization,
            "Wigner function integral deviates from 1 by more than 1e-9; renormalize first");
}

WignerFunction WignerFunction::renormalized() const {
    return WignerFunction(renormalize_field(field_), hbar_);
}

GridField renormalize_field(const GridField& f) {
    double norm = f.integral().real();
    double scale = f.sup_norm() * f.grid()->volume_element() * static_cast<double>(f.size());
    require(std::abs(norm) > 1e-12 * scale && norm != 0.0, ErrorCode::degenerate_field,
            "cannot renormalize a field with vanishing integral");
    return f * Complex{1.0 / norm, 0.0};
}

WignerFunction wigner_transform_pure_state(const std::vector<Complex>& psi, double rmin,
                                           double rmax, double hbar) {
    const std::size_t n = psi.size();
    require(n >= 4 && (n & (n - 1)) == 0, ErrorCode::grid_mismatch,
            "state length must be a power of two >= 4");
    require(rmax > rmin, ErrorCode::grid_mismatch, "rmax must exceed rmin");
    require(hbar > 0.0, ErrorCode::invalid_argument, "hbar must be positive");

    const double dr = (rmax - rmin) / static_cast<double>(n);
    double norm = 0.0;
    for (const Complex& a : psi) norm += std::norm(a);
    norm *= dr;
    require(std::abs(norm - 1.0) <= 1e-9, ErrorCode::normalization,
            "input state is not normalized (sum |psi|^2 dr != 1)");

    // Transform-paired momentum axis.
    const double pmax = std::numbers::pi * hbar / (2.0 * dr);
    GridPtr grid = PhaseSpaceGrid::make_rp(rmin, rmax, n, -pmax, pmax, n);

    // f(r_i, p_k) = (dr/(pi*hbar)) * sum_m psi*(r_{i+m}) psi(r_{i-m}) e^{i p_k 2 m dr / hbar},
    // one inverse DFT along the p axis per r row; the (-1)^m factor
    // re-centres the momentum index so k runs over [-n/2, n/2). The state is
    // zero-padded to length 2n before correlating, which removes the
    // interference ghost between the state and its periodic image; the
    // padded correlation is folded back onto the n momentum modes.
    std::vector<Complex> pad(2 * n, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) pad[i] = psi[i];
    std::vector<Complex> values(grid->size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t m = 0; m < n; ++m) {
            Complex c{0.0, 0.0};
            for (std::size_t mm : {m, m + n}) {
                std::size_t ip = (i + mm) % (2 * n);
                std::size_t im = (i + 2 * n - mm) % (2 * n);
                c += std::conj(pad[ip]) * pad[im];
            }
            values[i * n + m] = (m % 2 == 0) ? c : -c;
        }
    }
    fft_axis(values, *grid, 1, -1);
    const double scale = dr / (std::numbers::pi * hbar) * static_cast<double>(n);
    for (auto& v : values) v *= scale;

    GridField field(grid, std::move(values));
    double imag = field.max_imag();
    require(imag <= 1e-10 * std::max(1.0, field.sup_norm()), ErrorCode::normalization,
            "Wigner transform produced a non-real field");
    for (auto& v : field.values()) v = Complex{v.real(), 0.0};
    return WignerFunction(std::move(field), hbar);
}

double compute_average(const GridField& obs, const WignerFunction& f) {
    return field_average(obs, f.field());
}

std::vector<double> marginal(const WignerFunction& f, Coord axis) {
    return marginal_values(f.field(), axis);
}

}  // namespace mnh
