#ifndef MNH_HAMILTONIAN_HPP
#define MNH_HAMILTONIAN_HPP

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"

namespace mnh {

// Standard-form physical Hamiltonian H(r, p) = p^2/2m + V(r). The potential
// is either a polynomial in r (degree <= 8) or a table over the r axis of a
// grid.
class HamiltonianSpec {
  public:
    // free particle of unit mass
    HamiltonianSpec() : v_poly_(Poly{}) {}

    static HamiltonianSpec polynomial(double mass, std::vector<double> coeffs) {
        require(mass > 0.0, ErrorCode::invalid_argument, "mass must be positive");
        require(coeffs.size() <= 9, ErrorCode::invalid_argument,
                "polynomial potential degree must be <= 8");
        HamiltonianSpec h;
        h.mass_ = mass;
        Poly v;
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            v += Poly::monomial(Coord::r, static_cast<int>(k), coeffs[k]);
        h.v_poly_ = v;
        h.coeffs_ = std::move(coeffs);
        return h;
    }

    static HamiltonianSpec tabulated(double mass, Axis r_axis, std::vector<double> table) {
        require(mass > 0.0, ErrorCode::invalid_argument, "mass must be positive");
        require(table.size() == r_axis.count, ErrorCode::grid_mismatch,
                "tabulated potential length must match the r axis exactly");
        HamiltonianSpec h;
        h.mass_ = mass;
        h.r_axis_ = r_axis;
        h.v_table_ = std::move(table);
        return h;
    }

    double mass() const { return mass_; }
    bool has_poly_potential() const { return v_poly_.has_value(); }
    const Poly& potential_poly() const {
        require(v_poly_.has_value(), ErrorCode::unsupported_mode,
                "operation requires a polynomial potential");
        return *v_poly_;
    }
    const std::vector<double>& potential_coeffs() const { return coeffs_; }
    int potential_degree() const { return v_poly_ ? v_poly_->degree(Coord::r) : -1; }

    Poly kinetic_poly() const { return Poly::monomial(Coord::p, 2, 0.5 / mass_); }

    Poly hamiltonian_poly() const { return kinetic_poly() + potential_poly(); }

    double potential_at(double r) const {
        if (v_poly_) return v_poly_->eval({r, 0.0, 0.0, 0.0});
        // Nearest-sample lookup for tabulated potentials; grids that carry a
        // tabulated V are required to share the table's r axis.
        const Axis& a = *r_axis_;
        double u = (r - a.min) / a.spacing();
        auto i = static_cast<long long>(std::llround(u));
        i %= static_cast<long long>(a.count);
        if (i < 0) i += static_cast<long long>(a.count);
        return v_table_->at(static_cast<std::size_t>(i));
    }

    GridField potential_field(const GridPtr& grid) const {
        if (v_poly_) return GridField::from_poly(grid, *v_poly_);
        int ax = grid->axis_index(Coord::r);
        require(ax >= 0, ErrorCode::grid_mismatch, "grid has no r axis");
        const Axis& a = grid->axes()[ax];
        require(r_axis_ && a.count == r_axis_->count && a.min == r_axis_->min &&
                    a.max == r_axis_->max,
                ErrorCode::grid_mismatch, "tabulated potential axis does not match the grid r axis");
        return GridField::from_function(
            grid, [&](const std::array<double, 4>& x) { return potential_at(x[0]); });
    }

    GridField hamiltonian_field(const GridPtr& grid) const {
        if (v_poly_) return GridField::from_poly(grid, hamiltonian_poly());
        GridField kin = GridField::from_poly(grid, kinetic_poly());
        GridField f = kin + potential_field(grid);
        f.set_symbol(std::nullopt);
        return f;
    }

  private:
    double mass_ = 1.0;
    std::optional<Poly> v_poly_;
    std::vector<double> coeffs_;
    std::optional<Axis> r_axis_;
    std::optional<std::vector<double>> v_table_;
};

}  // namespace mnh

#endif
