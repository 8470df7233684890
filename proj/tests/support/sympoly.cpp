#include "sympoly.hpp"

namespace mnh::oracle {

SymPoly SymPoly::constant(const Rat& c) {
    SymPoly q;
    if (!c.is_zero()) q.terms_[{0, 0, 0, 0}] = c;
    return q;
}

SymPoly SymPoly::monomial(Coord c, int power, const Rat& coeff) {
    SymPoly q;
    if (coeff.is_zero()) return q;
    Expo e{0, 0, 0, 0};
    e[static_cast<int>(c)] = power;
    q.terms_[e] = coeff;
    return q;
}

void SymPoly::prune() {
    for (auto it = terms_.begin(); it != terms_.end();)
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
}

SymPoly SymPoly::operator+(const SymPoly& o) const {
    SymPoly q = *this;
    for (const auto& [e, c] : o.terms_) {
        auto it = q.terms_.find(e);
        if (it == q.terms_.end())
            q.terms_[e] = c;
        else
            it->second = it->second + c;
    }
    q.prune();
    return q;
}

SymPoly SymPoly::operator-(const SymPoly& o) const { return *this + o.scaled(Rat(-1)); }

SymPoly SymPoly::operator*(const SymPoly& o) const {
    SymPoly q;
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            Expo e;
            for (int k = 0; k < 4; ++k) e[k] = ea[k] + eb[k];
            auto it = q.terms_.find(e);
            Rat add = ca * cb;
            if (it == q.terms_.end())
                q.terms_[e] = add;
            else
                it->second = it->second + add;
        }
    }
    q.prune();
    return q;
}

SymPoly SymPoly::scaled(const Rat& s) const {
    SymPoly q;
    if (s.is_zero()) return q;
    for (const auto& [e, c] : terms_) q.terms_[e] = c * s;
    return q;
}

SymPoly SymPoly::derivative(Coord c) const {
    const int k = static_cast<int>(c);
    SymPoly q;
    for (const auto& [e, coeff] : terms_) {
        if (e[k] == 0) continue;
        Expo d = e;
        d[k] -= 1;
        q.terms_[d] = coeff * Rat(e[k]);
    }
    return q;
}

double SymPoly::eval(const std::array<double, 4>& x) const {
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c.to_double();
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < e[k]; ++j) t *= x[k];
        acc += t;
    }
    return acc;
}

OracleTensor OracleTensor::canonical2() {
    OracleTensor t;
    t.dim = 2;
    t.coords = {Coord::r, Coord::p};
    t.entries.assign(4, SymPoly{});
    t.entries[0 * 2 + 1] = SymPoly::constant(Rat(1));
    t.entries[1 * 2 + 0] = SymPoly::constant(Rat(-1));
    return t;
}

OracleTensor OracleTensor::canonical4() {
    OracleTensor t;
    t.dim = 4;
    t.coords = {Coord::r, Coord::eta, Coord::p, Coord::p_eta};
    t.entries.assign(16, SymPoly{});
    t.entries[0 * 4 + 2] = SymPoly::constant(Rat(1));
    t.entries[2 * 4 + 0] = SymPoly::constant(Rat(-1));
    t.entries[1 * 4 + 3] = SymPoly::constant(Rat(1));
    t.entries[3 * 4 + 1] = SymPoly::constant(Rat(-1));
    return t;
}

OracleTensor OracleTensor::nose() {
    OracleTensor t = canonical4();
    t.entries[2 * 4 + 3] = SymPoly::monomial(Coord::p, 1, Rat(-1));
    t.entries[3 * 4 + 2] = SymPoly::monomial(Coord::p, 1, Rat(1));
    return t;
}

SymPoly OracleTensor::row_divergence(int i) const {
    SymPoly d;
    for (int j = 0; j < dim; ++j)
        d = d + entry(i, j).derivative(coords[static_cast<std::size_t>(j)]);
    return d;
}

namespace {

SymPoly chain_apply(int i, const SymPoly& g, const OracleTensor& B, bool with_divergence) {
    SymPoly acc;
    for (int j = 0; j < B.dim; ++j) {
        const SymPoly& e = B.entry(i, j);
        if (e.is_zero()) continue;
        acc = acc + e * g.derivative(B.coords[static_cast<std::size_t>(j)]);
    }
    if (with_divergence) {
        SymPoly d = B.row_divergence(i);
        if (!d.is_zero()) acc = acc + d * g;
    }
    return acc;
}

void dfs(const SymPoly& a_deriv, const SymPoly& chain, const OracleTensor& B, int remaining,
         bool with_divergence, SymPoly& acc) {
    if (a_deriv.is_zero()) return;
    if (remaining == 0) {
        acc = acc + a_deriv * chain;
        return;
    }
    for (int i = 0; i < B.dim; ++i) {
        SymPoly da = a_deriv.derivative(B.coords[static_cast<std::size_t>(i)]);
        if (da.is_zero()) continue;
        dfs(da, chain_apply(i, chain, B, with_divergence), B, remaining - 1, with_divergence, acc);
    }
}

Rat half_power(const Rat& hbar, int n) {
    Rat v(1);
    for (int k = 0; k < n; ++k) v = v * hbar * Rat(1, 2);
    return v;
}

Rat factorial(int n) {
    Rat v(1);
    for (int k = 2; k <= n; ++k) v = v * Rat(k);
    return v;
}

}  // namespace

SymPoly oracle_bidifferential(const SymPoly& a, const SymPoly& b, const OracleTensor& B, int n,
                              bool with_divergence) {
    SymPoly acc;
    dfs(a, b, B, n, with_divergence, acc);
    return acc;
}

SymPoly oracle_bracket_imag(const SymPoly& a, const SymPoly& b, const OracleTensor& B, int n_max,
                            const Rat& hbar) {
    SymPoly acc;
    for (int n = 1; n <= n_max; n += 2) {
        SymPoly diff = oracle_bidifferential(a, b, B, n) - oracle_bidifferential(b, a, B, n);
        Rat c = half_power(hbar, n) / factorial(n);
        if ((n - 1) / 2 % 2 == 1) c = -c;
        acc = acc + diff.scaled(c);
    }
    return acc;
}

SymPoly oracle_generator_imag(const SymPoly& h, const SymPoly& t, const OracleTensor& B, int n_max,
                              const Rat& hbar) {
    SymPoly acc;
    for (int n = 1; n <= n_max; n += 2) {
        Rat c = half_power(hbar, n) / factorial(n) * Rat(2);
        if ((n - 1) / 2 % 2 == 1) c = -c;
        acc = acc + oracle_bidifferential(h, t, B, n).scaled(c);
    }
    return acc;
}

SymPoly oracle_adjoint_imag(const SymPoly& h, const SymPoly& t, const OracleTensor& B, int n_max,
                            const Rat& hbar) {
    SymPoly acc;
    for (int n = 1; n <= n_max; n += 2) {
        Rat c = half_power(hbar, n) / factorial(n) * Rat(-2);
        if ((n - 1) / 2 % 2 == 1) c = -c;
        acc = acc + oracle_bidifferential(h, t, B, n, true).scaled(c);
    }
    return acc;
}

}  // namespace mnh::oracle
