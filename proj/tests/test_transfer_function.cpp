#include "doctest.h"
#include "seasyn/transfer_function.hpp"

using namespace seasyn;

TEST_CASE("properness is computed, improper values are legal") {
    const RationalTransferFunction proper{Polynomial({1.0}), Polynomial({1.0, 1.0})};
    CHECK(proper.is_proper());
    CHECK(proper.relative_degree() == 1);

    // Mass-damper-spring polynomial: improper but representable.
    const RationalTransferFunction pd{Polynomial({1.0, 0.5, 0.1}), Polynomial({1.0})};
    CHECK_FALSE(pd.is_proper());
    CHECK(pd.relative_degree() == -2);
}

TEST_CASE("zero denominator is rejected") {
    CHECK_THROWS_AS(RationalTransferFunction(Polynomial({1.0}), Polynomial({0.0})),
                    std::invalid_argument);
}

TEST_CASE("arithmetic and evaluation") {
    const auto s = RationalTransferFunction::s();
    const auto g = RationalTransferFunction::constant(1.0) / (s + RationalTransferFunction::constant(1.0));
    const auto v = g.eval({0.0, 1.0});
    CHECK(std::abs(v) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(g.dc_gain() == doctest::Approx(1.0));

    const auto cascade = g * g;
    CHECK(cascade.den().degree() == 2);
    CHECK(cascade.eval({0.0, 1.0}) == g.eval({0.0, 1.0}) * g.eval({0.0, 1.0}));
}

TEST_CASE("minimize cancels paired roots only on request") {
    // (s+1)(s+2) / ((s+1)(s+3)) keeps its common factor until minimized.
    const RationalTransferFunction g{
        Polynomial::from_roots({{-1.0, 0.0}, {-2.0, 0.0}}),
        Polynomial::from_roots({{-1.0, 0.0}, {-3.0, 0.0}})};
    CHECK(g.num().degree() == 2);
    const auto m = g.minimize();
    CHECK(m.num().degree() == 1);
    CHECK(m.den().degree() == 1);
    CHECK(std::abs(m.eval({0.0, 0.7}) - g.eval({0.0, 0.7})) <= 1e-9);

    // A near-but-not-matching root pair survives.
    const RationalTransferFunction h{Polynomial::from_roots({{-1.0 + 1e-3, 0.0}}),
                                     Polynomial::from_roots({{-1.0, 0.0}})};
    CHECK(h.minimize(1e-7).num().degree() == 1);
    CHECK(h.minimize(1e-2).num().degree() == 0);
}

TEST_CASE("normalized makes the denominator monic") {
    const RationalTransferFunction g{Polynomial({2.0}), Polynomial({4.0, 2.0})};
    const auto n = g.normalized();
    CHECK(n.den().leading_coeff() == doctest::Approx(1.0));
    CHECK(n.num().coeffs()[0] == doctest::Approx(1.0));
}
