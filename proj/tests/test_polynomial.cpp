#include <complex>

#include "doctest.h"
#include "seasyn/polynomial.hpp"

using namespace seasyn;

TEST_CASE("degree and trailing-zero trim") {
    CHECK(Polynomial({1.0, 2.0, 0.0, 0.0}).degree() == 1);
    CHECK(Polynomial({5.0}).degree() == 0);
    CHECK(Polynomial({0.0, 0.0}).is_zero());
    CHECK(Polynomial().is_zero());
    CHECK(Polynomial({1.0, 2.0, 3.0}).leading_coeff() == 3.0);
}

TEST_CASE("evaluation by Horner") {
    const Polynomial p({1.0, -2.0, 3.0});  // 3s^2 - 2s + 1
    CHECK(p.eval(2.0) == doctest::Approx(9.0));
    const auto v = p.eval(std::complex<double>(0.0, 1.0));
    CHECK(v.real() == doctest::Approx(-2.0));
    CHECK(v.imag() == doctest::Approx(-2.0));
}

TEST_CASE("arithmetic") {
    const Polynomial a({1.0, 1.0});
    const Polynomial b({2.0, 0.0, 1.0});
    CHECK((a + b).coeffs() == std::vector<double>{3.0, 1.0, 1.0});
    CHECK((a * b).coeffs() == std::vector<double>{2.0, 2.0, 1.0, 1.0});
    CHECK((a - a).is_zero());
    CHECK((a * Polynomial()).is_zero());
}

TEST_CASE("roots via companion matrix") {
    // (s+1)(s+2)(s-3)
    const Polynomial p = Polynomial::from_roots({{-1.0, 0.0}, {-2.0, 0.0}, {3.0, 0.0}});
    const auto r = p.roots();
    REQUIRE(r.size() == 3);
    CHECK(r[0].real() == doctest::Approx(-2.0));
    CHECK(r[1].real() == doctest::Approx(-1.0));
    CHECK(r[2].real() == doctest::Approx(3.0));
}

TEST_CASE("conjugate pair round trip through from_roots") {
    const std::complex<double> r(-0.5, 2.0);
    const Polynomial p = Polynomial::from_roots({r, std::conj(r)});
    CHECK(p.coeffs()[0] == doctest::Approx(std::norm(r)));
    CHECK(p.coeffs()[1] == doctest::Approx(1.0));
    CHECK(p.coeffs()[2] == doctest::Approx(1.0));
}
