#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace mnh {

namespace {

bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

PhaseSpaceGrid::PhaseSpaceGrid(std::vector<Axis> axes) : axes_(std::move(axes)) {
    require(!axes_.empty(), ErrorCode::invalid_argument, "grid needs at least one axis");
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        const Axis& a = axes_[i];
        require(a.max > a.min, ErrorCode::invalid_argument,
                std::string("axis ") + coord_name(a.name) + ": max must exceed min");
        require(a.count >= 4 && power_of_two(a.count), ErrorCode::invalid_argument,
                std::string("axis ") + coord_name(a.name) +
                    ": count must be a power of two >= 4 (spectral axes)");
        for (std::size_t j = i + 1; j < axes_.size(); ++j)
            require(axes_[j].name != a.name, ErrorCode::invalid_argument,
                    std::string("axis ") + coord_name(a.name) + " appears more than once");
    }
    strides_.assign(axes_.size(), 1);
    size_ = 1;
    for (std::size_t i = axes_.size(); i-- > 0;) {
        strides_[i] = size_;
        size_ *= axes_[i].count;
    }
}

GridPtr PhaseSpaceGrid::make(std::vector<Axis> axes) {
    return std::make_shared<const PhaseSpaceGrid>(std::move(axes));
}

GridPtr PhaseSpaceGrid::make_rp(double rmin, double rmax, std::size_t nr, double pmin, double pmax,
                                std::size_t np) {
    return make({Axis{Coord::r, rmin, rmax, nr}, Axis{Coord::p, pmin, pmax, np}});
}

GridPtr PhaseSpaceGrid::make_extended(const std::array<double, 4>& mins,
                                      const std::array<double, 4>& maxs,
                                      const std::array<std::size_t, 4>& counts) {
    return make({Axis{Coord::r, mins[0], maxs[0], counts[0]},
                 Axis{Coord::eta, mins[1], maxs[1], counts[1]},
                 Axis{Coord::p, mins[2], maxs[2], counts[2]},
                 Axis{Coord::p_eta, mins[3], maxs[3], counts[3]}});
}

int PhaseSpaceGrid::axis_index(Coord c) const {
    for (std::size_t i = 0; i < axes_.size(); ++i)
        if (axes_[i].name == c) return static_cast<int>(i);
    return -1;
}

double PhaseSpaceGrid::volume_element() const {
    double dv = 1.0;
    for (const Axis& a : axes_) dv *= a.spacing();
    return dv;
}

std::array<double, kCoordCount> PhaseSpaceGrid::point(std::size_t flat) const {
    std::array<double, kCoordCount> x{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < axes_.size(); ++i)
        x[static_cast<int>(axes_[i].name)] = axes_[i].coordinate(axis_offset(flat, i));
    return x;
}

bool PhaseSpaceGrid::same_as(const PhaseSpaceGrid& o) const {
    if (axes_.size() != o.axes_.size()) return false;
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        const Axis &a = axes_[i], &b = o.axes_[i];
        if (a.name != b.name || a.count != b.count || a.min != b.min || a.max != b.max)
            return false;
    }
    return true;
}

GridField::GridField(GridPtr grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    require(values_.size() == grid_->size(), ErrorCode::invalid_argument,
            "field values length does not match grid point count");
}

GridField GridField::zeros(GridPtr grid) {
    std::vector<Complex> v(grid->size(), Complex{0.0, 0.0});
    GridField f(std::move(grid), std::move(v));
    f.symbol_ = Poly{};
    return f;
}

GridField GridField::from_poly(GridPtr grid, const Poly& poly) {
    std::vector<Complex> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = Complex{poly.eval(grid->point(i)), 0.0};
    GridField f(std::move(grid), std::move(v));
    f.symbol_ = poly;
    return f;
}

GridField GridField::from_function(GridPtr grid,
                                   const std::function<double(const std::array<double, 4>&)>& f) {
    std::vector<Complex> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = Complex{f(grid->point(i)), 0.0};
    return GridField(std::move(grid), std::move(v));
}

GridField GridField::from_complex_function(
    GridPtr grid, const std::function<Complex(const std::array<double, 4>&)>& f) {
    std::vector<Complex> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->point(i));
    return GridField(std::move(grid), std::move(v));
}

void check_same_grid(const GridField& a, const GridField& b, const char* what) {
    require(a.grid() && b.grid() && a.grid()->same_as(*b.grid()), ErrorCode::grid_mismatch,
            std::string(what) + ": fields live on different grids");
}

GridField& GridField::operator+=(const GridField& o) {
    check_same_grid(*this, o, "field sum");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    if (symbol_ && o.symbol_)
        *symbol_ += *o.symbol_;
    else
        symbol_.reset();
    return *this;
}

GridField& GridField::operator-=(const GridField& o) {
    check_same_grid(*this, o, "field difference");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    if (symbol_ && o.symbol_)
        *symbol_ -= *o.symbol_;
    else
        symbol_.reset();
    return *this;
}

GridField GridField::operator+(const GridField& o) const {
    GridField f = *this;
    f += o;
    return f;
}

GridField GridField::operator-(const GridField& o) const {
    GridField f = *this;
    f -= o;
    return f;
}

GridField GridField::operator*(Complex s) const {
    GridField f = *this;
    for (auto& v : f.values_) v *= s;
    if (f.symbol_) {
        if (s.imag() == 0.0)
            *f.symbol_ = *f.symbol_ * s.real();
        else
            f.symbol_.reset();
    }
    return f;
}

GridField GridField::pointwise(const GridField& o) const {
    check_same_grid(*this, o, "pointwise product");
    GridField f = *this;
    for (std::size_t i = 0; i < values_.size(); ++i) f.values_[i] = values_[i] * o.values_[i];
    if (symbol_ && o.symbol_)
        f.symbol_ = *symbol_ * *o.symbol_;
    else
        f.symbol_.reset();
    return f;
}

Complex GridField::integral() const {
    Complex acc{0.0, 0.0};
    for (const Complex& v : values_) acc += v;
    return acc * grid_->volume_element();
}

double GridField::sup_norm() const {
    double m = 0.0;
    for (const Complex& v : values_) m = std::max(m, std::abs(v));
    return m;
}

double GridField::l2_norm() const {
    double acc = 0.0;
    for (const Complex& v : values_) acc += std::norm(v);
    return std::sqrt(acc * grid_->volume_element());
}

double GridField::max_imag() const {
    double m = 0.0;
    for (const Complex& v : values_) m = std::max(m, std::abs(v.imag()));
    return m;
}

GridField GridField::real_part(double tol) const {
    require(max_imag() <= tol, ErrorCode::normalization,
            "field promised real has imaginary part above tolerance");
    GridField f = *this;
    for (auto& v : f.values_) v = Complex{v.real(), 0.0};
    return f;
}

std::vector<double> marginal_values(const GridField& f, Coord keep) {
    const PhaseSpaceGrid& g = *f.grid();
    int ax = g.axis_index(keep);
    require(ax >= 0, ErrorCode::grid_mismatch,
            std::string("marginal: grid has no axis ") + coord_name(keep));
    const Axis& axis = g.axes()[ax];
    double dv = g.volume_element() / axis.spacing();
    std::vector<double> out(axis.count, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i)
        out[g.axis_offset(i, static_cast<std::size_t>(ax))] += f.values()[i].real();
    for (double& v : out) v *= dv;
    return out;
}

double field_average(const GridField& obs, const GridField& f) {
    check_same_grid(obs, f, "average");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        acc += (obs.values()[i] * f.values()[i]).real();
    return acc * f.grid()->volume_element();
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_field_csv(const GridField& f, const std::string& path,
                     const std::optional<double>& time_comment) {
    std::ofstream out(path);
    require(out.good(), ErrorCode::io, "cannot open '" + path + "' for writing");
    const PhaseSpaceGrid& g = *f.grid();
    out << "# axes: ";
    for (std::size_t i = 0; i < g.axes().size(); ++i) {
        const Axis& a = g.axes()[i];
        if (i) out << ",";
        out << coord_name(a.name) << ":" << format_double(a.min) << ":" << format_double(a.max)
            << ":" << a.count;
    }
    out << "\n";
    if (time_comment) out << "# t=" << format_double(*time_comment) << "\n";
    const bool complex_valued = f.max_imag() > 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto x = g.point(i);
        for (const Axis& a : g.axes()) out << format_double(x[static_cast<int>(a.name)]) << ",";
        out << format_double(f.values()[i].real());
        if (complex_valued) out << "," << format_double(f.values()[i].imag());
        out << "\n";
    }
    require(out.good(), ErrorCode::io, "write to '" + path + "' failed");
}

GridField read_field_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::io, "cannot open '" + path + "' for reading");
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorCode::io, "empty field file " + path);
    const std::string prefix = "# axes: ";
    require(line.rfind(prefix, 0) == 0, ErrorCode::io, "missing '# axes:' header in " + path);

    std::vector<Axis> axes;
    std::stringstream spec(line.substr(prefix.size()));
    std::string item;
    while (std::getline(spec, item, ',')) {
        std::stringstream as(item);
        std::string name, smin, smax, scount;
        std::getline(as, name, ':');
        std::getline(as, smin, ':');
        std::getline(as, smax, ':');
        std::getline(as, scount, ':');
        axes.push_back(Axis{coord_from_name(name), std::stod(smin), std::stod(smax),
                            static_cast<std::size_t>(std::stoul(scount))});
    }
    GridPtr grid = PhaseSpaceGrid::make(axes);

    std::vector<Complex> values;
    values.reserve(grid->size());
    const std::size_t ncoord = axes.size();
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream row(line);
        std::vector<double> cols;
        std::string cell;
        while (std::getline(row, cell, ',')) cols.push_back(std::stod(cell));
        require(cols.size() == ncoord + 1 || cols.size() == ncoord + 2, ErrorCode::io,
                "bad column count in " + path);
        double re = cols[ncoord];
        double im = cols.size() == ncoord + 2 ? cols[ncoord + 1] : 0.0;
        values.emplace_back(re, im);
    }
    require(values.size() == grid->size(), ErrorCode::io,
            "field row count does not match grid size in " + path);
    return GridField(grid, std::move(values));
}

}  // namespace mnh
