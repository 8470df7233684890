#include "bracket.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "errors.hpp"
#include "fft.hpp"

namespace mnh {

namespace {

// Left-derivative table for the first bracket argument, keyed by the sorted
// multiset of tensor-index coordinates (mixed partials commute). Polynomial
// fields report exact structural zeros, which prunes almost every ordered
// tuple for standard-form Hamiltonians.
class LeftDerivatives {
  public:
    LeftDerivatives(const GridField& a, const std::vector<Coord>& coords)
        : coords_(coords) {
        memo_[{}] = a;
    }

    const GridField& get(const std::vector<int>& multiset) {
        auto it = memo_.find(multiset);
        if (it != memo_.end()) return it->second;
        std::vector<int> parent(multiset.begin(), multiset.end() - 1);
        const GridField& base = get(parent);
        GridField d = field_derivative(base, coords_[static_cast<std::size_t>(multiset.back())]);
        return memo_.emplace(multiset, std::move(d)).first->second;
    }

    bool known_zero(const std::vector<int>& multiset) {
        const GridField& f = get(multiset);
        return f.symbol() && f.symbol()->is_zero();
    }

  private:
    const std::vector<Coord>& coords_;
    std::map<std::vector<int>, GridField> memo_;
};

struct TensorEntryFields {
    // entry (i, j): either a compile-time zero, a constant, or a sampled
    // affine field.
    struct Entry {
        bool zero = true;
        bool constant = false;
        double value = 0.0;
        std::optional<GridField> field;
    };

    TensorEntryFields(const StructureTensor& B, const GridPtr& grid) : dim(B.dim()) {
        entries.resize(static_cast<std::size_t>(dim * dim));
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                Poly e = B.entry(i, j);
                Entry& slot = entries[static_cast<std::size_t>(i * dim + j)];
                if (e.is_zero()) continue;
                slot.zero = false;
                if (e.total_degree() == 0) {
                    slot.constant = true;
                    slot.value = e.eval({0, 0, 0, 0});
                } else {
                    slot.field = GridField::from_poly(grid, e);
                }
            }
        }
        divergence.resize(static_cast<std::size_t>(dim));
        auto div = B.row_divergence();
        for (int i = 0; i < dim; ++i) {
            const Poly& d = div[static_cast<std::size_t>(i)];
            Entry& slot = divergence[static_cast<std::size_t>(i)];
            if (d.is_zero()) continue;
            slot.zero = false;
            if (d.total_degree() == 0) {
                slot.constant = true;
                slot.value = d.eval({0, 0, 0, 0});
            } else {
                slot.field = GridField::from_poly(grid, d);
            }
        }
    }

    const Entry& at(int i, int j) const { return entries[static_cast<std::size_t>(i * dim + j)]; }

    int dim;
    std::vector<Entry> entries;
    std::vector<Entry> divergence;
};

void accumulate_scaled(GridField& acc, const TensorEntryFields::Entry& weight, const GridField& g) {
    if (weight.constant) {
        for (std::size_t k = 0; k < acc.size(); ++k) acc.values()[k] += weight.value * g.values()[k];
        if (acc.symbol() && g.symbol())
            acc.set_symbol(*acc.symbol() + *g.symbol() * weight.value);
        else
            acc.set_symbol(std::nullopt);
    } else {
        for (std::size_t k = 0; k < acc.size(); ++k)
            acc.values()[k] += weight.field->values()[k] * g.values()[k];
        if (acc.symbol() && g.symbol() && weight.field->symbol())
            acc.set_symbol(*acc.symbol() + *weight.field->symbol() * *g.symbol());
        else
            acc.set_symbol(std::nullopt);
    }
}

// K_i(g) = sum_j B_ij d_j g, optionally + (sum_j d_j B_ij) g.
GridField chain_apply(int i, const GridField& g, const TensorEntryFields& B,
                      const std::vector<Coord>& coords, bool with_divergence) {
    GridField acc = GridField::zeros(g.grid());
    for (int j = 0; j < B.dim; ++j) {
        const auto& w = B.at(i, j);
        if (w.zero) continue;
        GridField dg = field_derivative(g, coords[static_cast<std::size_t>(j)]);
        accumulate_scaled(acc, w, dg);
    }
    if (with_divergence && !B.divergence[static_cast<std::size_t>(i)].zero)
        accumulate_scaled(acc, B.divergence[static_cast<std::size_t>(i)], g);
    return acc;
}

struct ChainContext {
    LeftDerivatives* left;
    const TensorEntryFields* tensor;
    const std::vector<Coord>* coords;
    bool with_divergence;
    GridField* acc;
};

// Depth-first enumeration of ordered index tuples; `chain` carries
// K_{i_k}(...K_{i_n}(b)) for the suffix chosen so far, `multiset` the sorted
// coordinate multiset of the tuple. Branches whose left derivative of `a`
// is structurally zero are pruned before their chains are built.
void chain_dfs(ChainContext& ctx, int remaining, const GridField& chain, std::vector<int>& multiset) {
    if (remaining == 0) {
        const GridField& da = ctx.left->get(multiset);
        for (std::size_t k = 0; k < ctx.acc->size(); ++k)
            ctx.acc->values()[k] += da.values()[k] * chain.values()[k];
        return;
    }
    const int dim = ctx.tensor->dim;
    for (int i = 0; i < dim; ++i) {
        auto pos = std::upper_bound(multiset.begin(), multiset.end(), i);
        multiset.insert(pos, i);
        if (!ctx.left->known_zero(multiset)) {
            GridField next = chain_apply(i, chain, *ctx.tensor, *ctx.coords, ctx.with_divergence);
            chain_dfs(ctx, remaining - 1, next, multiset);
        }
        multiset.erase(std::find(multiset.begin(), multiset.end(), i));
    }
}

}  // namespace

void BracketOrder::validate() const {
    require(n_max == 1 || n_max == 3 || n_max == 5 || n_max == 7, ErrorCode::invalid_argument,
            "bracket truncation n_max must be one of 1, 3, 5, 7");
}

GridField bidifferential_term(const GridField& a, const GridField& b, const StructureTensor& B,
                              int n, bool with_divergence) {
    check_same_grid(a, b, "bidifferential term");
    require(n >= 1 && n <= 7, ErrorCode::invalid_argument, "bidifferential order n must be in [1, 7]");
    B.check_grid(*a.grid());

    LeftDerivatives left(a, B.coords());
    TensorEntryFields tensor(B, a.grid());
    GridField acc = GridField::zeros(a.grid());
    acc.set_symbol(std::nullopt);

    ChainContext ctx{&left, &tensor, &B.coords(), with_divergence, &acc};
    std::vector<int> multiset;
    multiset.reserve(static_cast<std::size_t>(n));
    chain_dfs(ctx, n, b, multiset);
    return acc;
}

GridField moyal_bracket(const GridField& a, const GridField& b, const StructureTensor& B,
                        const BracketOrder& order, double hbar) {
    order.validate();
    check_same_grid(a, b, "moyal bracket");
    if (order.mode == BracketOrder::Mode::spectral) {
        require(B.kind() == TensorKind::canonical && B.dim() == 2, ErrorCode::unsupported_mode,
                "spectral bracket mode is only defined for the canonical tensor on an (r, p) grid");
        return moyal_bracket_spectral(a, b, hbar);
    }

    GridField acc = GridField::zeros(a.grid());
    acc.set_symbol(std::nullopt);
    double factorial = 1.0;
    Complex coeff{1.0, 0.0};
    const Complex ih2{0.0, 0.5 * hbar};
    for (int n = 1; n <= order.n_max; ++n) {
        factorial *= n;
        coeff *= ih2;
        if (n % 2 == 0) {
#ifndef NDEBUG
            // Even orders cancel in the difference form for constant
            // tensors; x-dependent tensors fall outside that identity and
            // the bracket is defined by its odd difference series.
            if (B.is_constant()) {
                GridField even = bidifferential_term(a, b, B, n) - bidifferential_term(b, a, B, n);
                double scale = a.sup_norm() + b.sup_norm() + 1.0;
                assert(even.sup_norm() <= 1e-10 * scale && "even-order bracket terms failed to cancel");
            }
#endif
            continue;
        }
        GridField diff = bidifferential_term(a, b, B, n) - bidifferential_term(b, a, B, n);
        acc += diff * (coeff / factorial);
    }
    return acc;
}

namespace {

struct SeparableParts {
    std::function<Complex(double)> part_r;
    std::function<Complex(double)> part_p;
    // set when the parts are exact polynomials
    std::optional<Poly> poly_r;
    std::optional<Poly> poly_p;
};

// Trigonometric point evaluation of a sampled periodic 1-d profile.
std::function<Complex(double)> trig_evaluator(std::vector<Complex> samples, double xmin,
                                              double length) {
    const std::size_t n = samples.size();
    std::vector<Complex> modes = samples;
    // forward DFT coefficients
    {
        std::vector<Complex> tmp(n, Complex{0, 0});
        for (std::size_t m = 0; m < n; ++m) {
            Complex acc{0, 0};
            const double w = -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
            for (std::size_t j = 0; j < n; ++j)
                acc += samples[j] * Complex{std::cos(w * j), std::sin(w * j)};
            tmp[m] = acc / static_cast<double>(n);
        }
        modes = std::move(tmp);
    }
    return [modes, xmin, length, n](double x) {
        Complex acc{0, 0};
        for (std::size_t m = 0; m < n; ++m) {
            auto ms = static_cast<long long>(m);
            if (m >= n / 2) ms -= static_cast<long long>(n);
            double k = 2.0 * std::numbers::pi * static_cast<double>(ms) / length;
            double phase = k * (x - xmin);
            acc += modes[m] * Complex{std::cos(phase), std::sin(phase)};
        }
        return acc;
    };
}

std::optional<SeparableParts> separate(const GridField& f) {
    const PhaseSpaceGrid& g = *f.grid();
    int ar = g.axis_index(Coord::r);
    int ap = g.axis_index(Coord::p);
    if (ar < 0 || ap < 0 || g.rank() != 2) return std::nullopt;

    if (f.symbol()) {
        Poly pr, pp;
        for (const auto& [e, c] : f.symbol()->terms()) {
            const bool has_r = e[static_cast<int>(Coord::r)] > 0;
            const bool has_p = e[static_cast<int>(Coord::p)] > 0;
            if (e[static_cast<int>(Coord::eta)] > 0 || e[static_cast<int>(Coord::p_eta)] > 0)
                return std::nullopt;
            if (has_r && has_p) return std::nullopt;
            Poly term;
            if (has_p)
                pp += Poly::monomial(Coord::p, e[static_cast<int>(Coord::p)], c);
            else
                pr += Poly::monomial(Coord::r, e[static_cast<int>(Coord::r)], c);
        }
        return SeparableParts{
            [pr](double r) { return Complex{pr.eval({r, 0, 0, 0}), 0.0}; },
            [pp](double p) { return Complex{pp.eval({0, 0, p, 0}), 0.0}; },
            pr,
            pp,
        };
    }

    // Numeric split against the first row/column; accept only if the field
    // is additively separable to near round-off.
    const Axis& axr = g.axes()[static_cast<std::size_t>(ar)];
    const Axis& axp = g.axes()[static_cast<std::size_t>(ap)];
    const std::size_t sr = g.stride(static_cast<std::size_t>(ar));
    const std::size_t sp = g.stride(static_cast<std::size_t>(ap));
    std::vector<Complex> row_r(axr.count), row_p(axp.count);
    Complex corner = f.values()[0];
    for (std::size_t i = 0; i < axr.count; ++i) row_r[i] = f.values()[i * sr] - corner;
    for (std::size_t j = 0; j < axp.count; ++j) row_p[j] = f.values()[j * sp];
    double resid = 0.0;
    for (std::size_t i = 0; i < axr.count; ++i)
        for (std::size_t j = 0; j < axp.count; ++j)
            resid = std::max(resid,
                             std::abs(f.values()[i * sr + j * sp] - row_r[i] - row_p[j]));
    if (resid > 1e-10 * (f.sup_norm() + 1.0)) return std::nullopt;
    return SeparableParts{trig_evaluator(row_r, axr.min, axr.max - axr.min),
                          trig_evaluator(row_p, axp.min, axp.max - axp.min), std::nullopt,
                          std::nullopt};
}

// Exact finite evaluation for polynomial data: the shifted arguments are
// expanded as Taylor series that terminate at the potential/kinetic degree,
//   {A_r, b} = sum over odd k of  (2/k!)(i hbar/2)^k A_r^(k)(r) d_p^k b,
//   {A_p, b} = sum over odd k of -(2/k!)(i hbar/2)^k A_p^(k)(p) d_r^k b,
// with the derivatives of b taken on the exact polynomial path. A coding
// of the bracket independent of the chain series.
GridField bopp_from_parts(const SeparableParts& sep, const GridField& b, double hbar) {
    GridField acc = GridField::zeros(b.grid());
    acc.set_symbol(std::nullopt);
    const Complex ih2{0.0, 0.5 * hbar};

    auto side = [&](const Poly& part, Coord deriv_of_part, Coord deriv_of_b, double sign) {
        const int deg = part.total_degree();
        Poly coeff = part;
        GridField db = b;
        Complex coef_k{1.0, 0.0};
        double factorial = 1.0;
        for (int k = 1; k <= deg; ++k) {
            coeff = coeff.derivative(deriv_of_part);
            if (coeff.is_zero()) break;
            db = field_derivative(db, deriv_of_b);
            factorial *= k;
            coef_k *= ih2;
            if (k % 2 == 0) continue;
            GridField cf = GridField::from_poly(b.grid(), coeff);
            Complex w = coef_k * (2.0 * sign / factorial);
            for (std::size_t i = 0; i < acc.size(); ++i)
                acc.values()[i] += w * cf.values()[i] * db.values()[i];
        }
    };

    side(*sep.poly_r, Coord::r, Coord::p, +1.0);
    side(*sep.poly_p, Coord::p, Coord::r, -1.0);
    return acc;
}

GridField spectral_from_parts(const SeparableParts& sep, const GridField& b, double hbar) {
    const PhaseSpaceGrid& g = *b.grid();
    // momentum-only part: shift arguments along the r-dual axis
    GridField kin = apply_dual_multiplier(b, Coord::r, [&](double k, std::size_t flat) {
        double p = g.point(flat)[static_cast<int>(Coord::p)];
        return sep.part_p(p + 0.5 * hbar * k) - sep.part_p(p - 0.5 * hbar * k);
    });
    // position-only part: shift arguments along the p-dual axis
    GridField pot = apply_dual_multiplier(b, Coord::p, [&](double lam, std::size_t flat) {
        double r = g.point(flat)[static_cast<int>(Coord::r)];
        return sep.part_r(r - 0.5 * hbar * lam) - sep.part_r(r + 0.5 * hbar * lam);
    });
    GridField out = kin + pot;
    out.set_symbol(std::nullopt);
    return out;
}

}  // namespace

GridField moyal_bracket_spectral(const GridField& a, const GridField& b, double hbar) {
    check_same_grid(a, b, "spectral bracket");
    require(a.grid()->has_axis(Coord::r) && a.grid()->has_axis(Coord::p) && a.grid()->rank() == 2,
            ErrorCode::unsupported_mode, "spectral bracket requires an (r, p) grid");
    if (auto sep = separate(a)) {
        // Polynomial data is not band-limited; its Bopp expansion is finite
        // and exact, so take that route whenever it applies.
        if (sep->poly_r && sep->poly_p && b.symbol()) return bopp_from_parts(*sep, b, hbar);
        return spectral_from_parts(*sep, b, hbar);
    }
    if (auto sep = separate(b)) {
        if (sep->poly_r && sep->poly_p && a.symbol())
            return bopp_from_parts(*sep, a, hbar) * Complex{-1.0, 0.0};
        return spectral_from_parts(*sep, a, hbar) * Complex{-1.0, 0.0};
    }
    fail(ErrorCode::unsupported_mode,
         "spectral bracket requires one argument separable as A_r(r) + A_p(p)");
}

GridField generalized_poisson(const GridField& a, const GridField& b, const StructureTensor& B) {
    return bidifferential_term(a, b, B, 1);
}

}  // namespace mnh
