#include <doctest.h>

#include "poly.hpp"

using namespace mnh;

TEST_CASE("polynomial construction and evaluation") {
    // H = p^2/2 + r^2/2
    Poly h = Poly::monomial(Coord::p, 2, 0.5) + Poly::monomial(Coord::r, 2, 0.5);
    CHECK(h.eval({1.0, 0.0, 2.0, 0.0}) == doctest::Approx(2.5));
    CHECK(h.degree(Coord::p) == 2);
    CHECK(h.degree(Coord::eta) == 0);
    CHECK(h.total_degree() == 2);
}

TEST_CASE("derivative and product") {
    Poly v = Poly::monomial(Coord::r, 4, 0.25);
    Poly v1 = v.derivative(Coord::r);
    CHECK(v1.eval({2.0, 0, 0, 0}) == doctest::Approx(8.0));  // r^3
    Poly v3 = v1.derivative(Coord::r).derivative(Coord::r);
    CHECK(v3.eval({2.0, 0, 0, 0}) == doctest::Approx(12.0));  // 6r
    CHECK(v.derivative(Coord::p).is_zero());

    Poly pr = Poly::monomial(Coord::p, 1) * Poly::monomial(Coord::r, 1);
    CHECK(pr.eval({3.0, 0, 2.0, 0}) == doctest::Approx(6.0));
    CHECK(pr.derivative(Coord::p).eval({3.0, 0, 0, 0}) == doctest::Approx(3.0));
}

TEST_CASE("cancellation prunes to zero") {
    Poly a = Poly::monomial(Coord::r, 2, 1.0);
    Poly b = a * -1.0;
    CHECK((a + b).is_zero());
    CHECK((a - a).is_zero());
}
