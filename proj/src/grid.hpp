#ifndef MNH_GRID_HPP
#define MNH_GRID_HPP

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "poly.hpp"

namespace mnh {

using Complex = std::complex<double>;

struct Axis {
    Coord name;
    double min;
    double max;
    std::size_t count;

    double spacing() const { return (max - min) / static_cast<double>(count); }
    // Periodic convention: the last point max - spacing is the final sample.
    double coordinate(std::size_t i) const { return min + spacing() * static_cast<double>(i); }
};

// Uniform tensor-product grid over phase-space coordinates. Axes appear at
// most once; every axis is periodic with a power-of-two point count so
// Fourier differentiation applies uniformly.
class PhaseSpaceGrid {
  public:
    explicit PhaseSpaceGrid(std::vector<Axis> axes);

    static std::shared_ptr<const PhaseSpaceGrid> make(std::vector<Axis> axes);
    // Canonical (r, p) plane.
    static std::shared_ptr<const PhaseSpaceGrid> make_rp(double rmin, double rmax, std::size_t nr,
                                                         double pmin, double pmax, std::size_t np);
    // Extended (r, eta, p, p_eta) space.
    static std::shared_ptr<const PhaseSpaceGrid> make_extended(const std::array<double, 4>& mins,
                                                               const std::array<double, 4>& maxs,
                                                               const std::array<std::size_t, 4>& counts);

    const std::vector<Axis>& axes() const { return axes_; }
    std::size_t rank() const { return axes_.size(); }
    std::size_t size() const { return size_; }
    std::size_t stride(std::size_t axis) const { return strides_[axis]; }

    // Index of the axis carrying coordinate `c`, or -1 if absent.
    int axis_index(Coord c) const;
    bool has_axis(Coord c) const { return axis_index(c) >= 0; }

    double volume_element() const;

    // Coordinates of a flat grid point, in (r, eta, p, p_eta) slots; absent
    // coordinates read 0.
    std::array<double, kCoordCount> point(std::size_t flat) const;
    std::size_t axis_offset(std::size_t flat, std::size_t axis) const {
        return (flat / strides_[axis]) % axes_[axis].count;
    }

    bool same_as(const PhaseSpaceGrid& o) const;

  private:
    std::vector<Axis> axes_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
};

using GridPtr = std::shared_ptr<const PhaseSpaceGrid>;

// A complex- or real-valued field sampled on a grid, row-major in axis order.
// Fields built from polynomials keep the polynomial alongside the samples so
// derivatives of such fields are exact instead of spectral.
class GridField {
  public:
    GridField() = default;
    GridField(GridPtr grid, std::vector<Complex> values);

    static GridField zeros(GridPtr grid);
    static GridField from_poly(GridPtr grid, const Poly& poly);
    static GridField from_function(GridPtr grid,
                                   const std::function<double(const std::array<double, 4>&)>& f);
    static GridField from_complex_function(
        GridPtr grid, const std::function<Complex(const std::array<double, 4>&)>& f);

    const GridPtr& grid() const { return grid_; }
    const std::vector<Complex>& values() const { return values_; }
    std::vector<Complex>& values() { return values_; }
    std::size_t size() const { return values_.size(); }

    const std::optional<Poly>& symbol() const { return symbol_; }
    void set_symbol(std::optional<Poly> s) { symbol_ = std::move(s); }

    GridField& operator+=(const GridField& o);
    GridField& operator-=(const GridField& o);
    GridField operator+(const GridField& o) const;
    GridField operator-(const GridField& o) const;
    GridField operator*(Complex s) const;
    GridField pointwise(const GridField& o) const;

    Complex integral() const;
    double sup_norm() const;
    double l2_norm() const;  // sqrt of the Riemann sum of |f|^2
    double max_imag() const;

    // Real view; fails if any imaginary part exceeds `tol`.
    GridField real_part(double tol) const;

  private:
    GridPtr grid_;
    std::vector<Complex> values_;
    std::optional<Poly> symbol_;
};

void check_same_grid(const GridField& a, const GridField& b, const char* what);

// Integrates out all axes except `keep`; returns samples along that axis
// scaled by the volume element of the integrated axes.
std::vector<double> marginal_values(const GridField& f, Coord keep);

// Riemann-sum phase-space average of obs against f (both on the same grid).
double field_average(const GridField& obs, const GridField& f);

// CSV persistence: a `# axes: name:min:max:count,...` header, one row per
// grid point (coordinates, then value columns). Complex fields carry two
// value columns.
void write_field_csv(const GridField& f, const std::string& path,
                     const std::optional<double>& time_comment = std::nullopt);
GridField read_field_csv(const std::string& path);

std::string format_double(double v);

}  // namespace mnh

#endif
