#include "poly.hpp"

#include <cmath>

#include "errors.hpp"

namespace mnh {

const char* coord_name(Coord c) {
    switch (c) {
        case Coord::r: return "r";
        case Coord::eta: return "eta";
        case Coord::p: return "p";
        case Coord::p_eta: return "p_eta";
    }
    return "?";
}

Coord coord_from_name(const std::string& name) {
    if (name == "r") return Coord::r;
    if (name == "eta") return Coord::eta;
    if (name == "p") return Coord::p;
    if (name == "p_eta") return Coord::p_eta;
    fail(ErrorCode::invalid_argument, "unknown axis name '" + name + "' (expected r, eta, p or p_eta)");
}

Poly Poly::constant(double c) {
    Poly q;
    if (c != 0.0) q.terms_[{0, 0, 0, 0}] = c;
    return q;
}

Poly Poly::monomial(Coord c, int power, double coeff) {
    Poly q;
    if (coeff == 0.0) return q;
    Expo e{0, 0, 0, 0};
    e[static_cast<int>(c)] = static_cast<std::uint8_t>(power);
    q.terms_[e] = coeff;
    return q;
}

bool Poly::is_zero(double tol) const {
    for (const auto& [e, c] : terms_)
        if (std::abs(c) > tol) return false;
    return true;
}

void Poly::prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0.0)
            it = terms_.erase(it);
        else
            ++it;
    }
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [e, c] : o.terms_) terms_[e] += c;
    prune();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    for (const auto& [e, c] : o.terms_) terms_[e] -= c;
    prune();
    return *this;
}

Poly Poly::operator+(const Poly& o) const {
    Poly q = *this;
    q += o;
    return q;
}

Poly Poly::operator-(const Poly& o) const {
    Poly q = *this;
    q -= o;
    return q;
}

Poly Poly::operator*(const Poly& o) const {
    Poly q;
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            Expo e;
            for (int k = 0; k < kCoordCount; ++k) e[k] = static_cast<std::uint8_t>(ea[k] + eb[k]);
            q.terms_[e] += ca * cb;
        }
    }
    q.prune();
    return q;
}

Poly Poly::operator*(double s) const {
    Poly q;
    if (s == 0.0) return q;
    for (const auto& [e, c] : terms_) q.terms_[e] = c * s;
    return q;
}

Poly Poly::derivative(Coord c) const {
    const int k = static_cast<int>(c);
    Poly q;
    for (const auto& [e, coeff] : terms_) {
        if (e[k] == 0) continue;
        Expo d = e;
        d[k] -= 1;
        q.terms_[d] += coeff * static_cast<double>(e[k]);
    }
    q.prune();
    return q;
}

int Poly::degree(Coord c) const {
    const int k = static_cast<int>(c);
    int deg = -1;
    for (const auto& [e, coeff] : terms_) deg = std::max(deg, static_cast<int>(e[k]));
    return deg;
}

int Poly::total_degree() const {
    int deg = -1;
    for (const auto& [e, coeff] : terms_) {
        int d = 0;
        for (int k = 0; k < kCoordCount; ++k) d += e[k];
        deg = std::max(deg, d);
    }
    return deg;
}

double Poly::eval(const std::array<double, kCoordCount>& x) const {
    double acc = 0.0;
    for (const auto& [e, coeff] : terms_) {
        double t = coeff;
        for (int k = 0; k < kCoordCount; ++k)
            for (int j = 0; j < e[k]; ++j) t *= x[k];
        acc += t;
    }
    return acc;
}

}  // namespace mnh
