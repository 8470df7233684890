#ifndef MNH_TENSOR_HPP
#define MNH_TENSOR_HPP

#include <vector>

#include "grid.hpp"
#include "poly.hpp"

namespace mnh {

enum class TensorKind { canonical, nose, custom_affine };

// Antisymmetric structure matrix B(x) with entries affine in the extended
// coordinates. Only the upper triangle is stored; the lower triangle is its
// negative by construction, so B + B^T = 0 holds exactly.
class StructureTensor {
  public:
    // Block-canonical tensor: B_{r p} = 1 (dim 2) plus B_{eta p_eta} = 1
    // (dim 4).
    static StructureTensor canonical(int dim = 2);
    // Extended thermostat tensor: canonical blocks plus the momentum
    // coupling B_{p p_eta} = -p (so B_{p_eta p} = +p). One physical degree
    // of freedom only.
    static StructureTensor nose(int n_dof = 1);
    // User-supplied affine upper triangle; entries[i][j] for i < j.
    static StructureTensor custom_affine(int dim, const std::vector<std::vector<Poly>>& upper);

    int dim() const { return dim_; }
    TensorKind kind() const { return kind_; }
    bool is_constant() const;

    // Coordinates the tensor indices refer to: (r, p) for dim 2,
    // (r, eta, p, p_eta) for dim 4.
    const std::vector<Coord>& coords() const { return coords_; }

    // Entry B_{ij} as an affine polynomial (sign-resolved from the stored
    // triangle).
    Poly entry(int i, int j) const;
    double entry_at(int i, int j, const std::array<double, 4>& x) const;

    // Row divergences d_i = sum_j d B_{ij} / d x_j; these feed the
    // compressibility-corrected chains of the density-side series.
    std::vector<Poly> row_divergence() const;

    // The grid must carry every coordinate the tensor contracts.
    void check_grid(const PhaseSpaceGrid& grid) const;

  private:
    StructureTensor(int dim, TensorKind kind);
    Poly& upper(int i, int j);
    const Poly& upper(int i, int j) const;

    int dim_;
    TensorKind kind_;
    std::vector<Coord> coords_;
    std::vector<Poly> upper_;  // packed upper triangle, row-major
};

}  // namespace mnh

#endif
