#ifndef MNH_POLY_HPP
#define MNH_POLY_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>

namespace mnh {

// Extended phase-space coordinates, in the index order used by every
// structure tensor and bidifferential contraction in this library.
enum class Coord : int { r = 0, eta = 1, p = 2, p_eta = 3 };

inline constexpr int kCoordCount = 4;

const char* coord_name(Coord c);
Coord coord_from_name(const std::string& name);

// Multivariate polynomial in (r, eta, p, p_eta) with double coefficients.
// Backs exactly-differentiable grid fields (Hamiltonians, monomial
// observables); the map is keyed by the exponent tuple.
class Poly {
  public:
    using Expo = std::array<std::uint8_t, kCoordCount>;

    Poly() = default;
    static Poly constant(double c);
    static Poly monomial(Coord c, int power, double coeff = 1.0);

    bool empty() const { return terms_.empty(); }
    bool is_zero(double tol = 0.0) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(double s) const;
    Poly operator-() const { return *this * -1.0; }

    Poly derivative(Coord c) const;
    int degree(Coord c) const;
    int total_degree() const;

    double eval(const std::array<double, kCoordCount>& x) const;

    const std::map<Expo, double>& terms() const { return terms_; }

  private:
    void prune();
    std::map<Expo, double> terms_;
};

inline Poly operator*(double s, const Poly& q) { return q * s; }

}  // namespace mnh

#endif
