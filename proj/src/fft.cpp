#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "errors.hpp"

namespace mnh {

namespace {

// Plans are cached per (n, stride, block) and executed with the new-array
// interface; FFTW_UNALIGNED keeps them valid for arbitrary buffers.
class PlanCache {
  public:
    fftw_plan get(int n, int stride, int howmany, int sign) {
        std::scoped_lock lock(mu_);
        auto key = std::make_tuple(n, stride, howmany, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<fftw_complex> scratch(static_cast<std::size_t>(n) * stride);
        fftw_plan plan = fftw_plan_many_dft(1, &n, howmany, scratch.data(), nullptr, stride, 1,
                                            scratch.data(), nullptr, stride, 1, sign,
                                            FFTW_ESTIMATE | FFTW_UNALIGNED);
        require(plan != nullptr, ErrorCode::invalid_argument, "fftw plan creation failed");
        plans_[key] = plan;
        return plan;
    }

  private:
    std::mutex mu_;
    std::map<std::tuple<int, int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

double signed_frequency(std::size_t j, std::size_t n, double length) {
    auto m = static_cast<long long>(j);
    if (j >= n / 2) m -= static_cast<long long>(n);
    return 2.0 * std::numbers::pi * static_cast<double>(m) / length;
}

}  // namespace

void fft_axis(std::vector<Complex>& data, const PhaseSpaceGrid& grid, std::size_t axis, int sign) {
    const std::size_t n = grid.axes()[axis].count;
    const std::size_t stride = grid.stride(axis);
    const std::size_t block = n * stride;
    const std::size_t outer = grid.size() / block;
    fftw_plan plan = plan_cache().get(static_cast<int>(n), static_cast<int>(stride),
                                      static_cast<int>(stride),
                                      sign > 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    auto* raw = reinterpret_cast<fftw_complex*>(data.data());
    for (std::size_t o = 0; o < outer; ++o) fftw_execute_dft(plan, raw + o * block, raw + o * block);
    if (sign < 0) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& v : data) v *= scale;
    }
}

GridField apply_dual_multiplier(const GridField& f, Coord axis,
                                const std::function<Complex(double, std::size_t)>& factor) {
    const PhaseSpaceGrid& g = *f.grid();
    int ax = g.axis_index(axis);
    require(ax >= 0, ErrorCode::grid_mismatch,
            std::string("spectral operation: grid has no axis ") + coord_name(axis));
    const Axis& a = g.axes()[ax];
    const double length = a.max - a.min;

    std::vector<Complex> data = f.values();
    fft_axis(data, g, static_cast<std::size_t>(ax), +1);
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::size_t j = g.axis_offset(i, static_cast<std::size_t>(ax));
        data[i] *= factor(signed_frequency(j, a.count, length), i);
    }
    fft_axis(data, g, static_cast<std::size_t>(ax), -1);
    return GridField(f.grid(), std::move(data));
}

GridField spectral_derivative(const GridField& f, Coord axis, int order) {
    require(order >= 1, ErrorCode::invalid_argument, "derivative order must be >= 1");
    const PhaseSpaceGrid& g = *f.grid();
    int ax = g.axis_index(axis);
    require(ax >= 0, ErrorCode::grid_mismatch,
            std::string("spectral_derivative: grid has no axis ") + coord_name(axis));
    const std::size_t n = g.axes()[ax].count;
    const bool drop_nyquist = (order % 2) != 0;
    GridField out = apply_dual_multiplier(f, axis, [&](double k, std::size_t i) {
        std::size_t j = g.axis_offset(i, static_cast<std::size_t>(ax));
        if (drop_nyquist && j == n / 2) return Complex{0.0, 0.0};
        Complex ik{0.0, k};
        Complex m{1.0, 0.0};
        for (int q = 0; q < order; ++q) m *= ik;
        return m;
    });
    out.set_symbol(std::nullopt);
    return out;
}

GridField field_derivative(const GridField& f, Coord axis) {
    if (f.symbol()) {
        if (f.grid()->has_axis(axis)) return GridField::from_poly(f.grid(), f.symbol()->derivative(axis));
        // A polynomial field may reference coordinates the grid does not
        // carry only through constants; differentiating along an absent
        // axis of a sampled field is otherwise meaningless.
        fail(ErrorCode::grid_mismatch,
             std::string("derivative: grid has no axis ") + coord_name(axis));
    }
    return spectral_derivative(f, axis, 1);
}

}  // namespace mnh
