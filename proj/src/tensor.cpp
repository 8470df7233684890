#include "tensor.hpp"

#include "errors.hpp"

namespace mnh {

StructureTensor::StructureTensor(int dim, TensorKind kind) : dim_(dim), kind_(kind) {
    require(dim == 2 || dim == 4, ErrorCode::invalid_argument, "tensor dim must be 2 or 4");
    if (dim == 2)
        coords_ = {Coord::r, Coord::p};
    else
        coords_ = {Coord::r, Coord::eta, Coord::p, Coord::p_eta};
    upper_.assign(static_cast<std::size_t>(dim * (dim - 1) / 2), Poly{});
}

Poly& StructureTensor::upper(int i, int j) {
    // packed index of (i, j), i < j
    int idx = i * dim_ - i * (i + 1) / 2 + (j - i - 1);
    return upper_[static_cast<std::size_t>(idx)];
}

const Poly& StructureTensor::upper(int i, int j) const {
    int idx = i * dim_ - i * (i + 1) / 2 + (j - i - 1);
    return upper_[static_cast<std::size_t>(idx)];
}

StructureTensor StructureTensor::canonical(int dim) {
    StructureTensor t(dim, TensorKind::canonical);
    if (dim == 2) {
        t.upper(0, 1) = Poly::constant(1.0);  // B_{r p}
    } else {
        t.upper(0, 2) = Poly::constant(1.0);  // B_{r p}
        t.upper(1, 3) = Poly::constant(1.0);  // B_{eta p_eta}
    }
    return t;
}

StructureTensor StructureTensor::nose(int n_dof) {
    require(n_dof == 1, ErrorCode::unsupported_mode,
            "gridded extended dynamics supports one physical degree of freedom");
    StructureTensor t(4, TensorKind::nose);
    t.upper(0, 2) = Poly::constant(1.0);            // B_{r p} = 1
    t.upper(1, 3) = Poly::constant(1.0);            // B_{eta p_eta} = 1
    t.upper(2, 3) = Poly::monomial(Coord::p, 1, -1.0);  // B_{p p_eta} = -p
    return t;
}

StructureTensor StructureTensor::custom_affine(int dim, const std::vector<std::vector<Poly>>& upper) {
    StructureTensor t(dim, TensorKind::custom_affine);
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            const Poly& e = upper.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
            require(e.total_degree() <= 1, ErrorCode::invalid_argument,
                    "custom tensor entries must be affine in the coordinates");
            t.upper(i, j) = e;
        }
    }
    return t;
}

bool StructureTensor::is_constant() const {
    for (const Poly& e : upper_)
        if (e.total_degree() > 0) return false;
    return true;
}

Poly StructureTensor::entry(int i, int j) const {
    require(i >= 0 && j >= 0 && i < dim_ && j < dim_, ErrorCode::invalid_argument,
            "tensor index out of range");
    if (i == j) return Poly{};
    if (i < j) return upper(i, j);
    return -upper(j, i);
}

double StructureTensor::entry_at(int i, int j, const std::array<double, 4>& x) const {
    return entry(i, j).eval(x);
}

std::vector<Poly> StructureTensor::row_divergence() const {
    std::vector<Poly> d(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) d[static_cast<std::size_t>(i)] += entry(i, j).derivative(coords_[static_cast<std::size_t>(j)]);
    return d;
}

void StructureTensor::check_grid(const PhaseSpaceGrid& grid) const {
    for (Coord c : coords_)
        require(grid.has_axis(c), ErrorCode::tensor_grid_mismatch,
                std::string("tensor contracts coordinate ") + coord_name(c) +
                    " which the grid does not carry");
}

}  // namespace mnh
