#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "frankdefect/frank_constants.hpp"

using namespace frankdefect;

TEST_CASE("minus-k2 convention pins k4 to -k2") {
    FrankConstants k = FrankConstants::minus_k2(2.0, 3.0, 5.0);
    CHECK(k.k1 == 2.0);
    CHECK(k.k2 == 3.0);
    CHECK(k.k3 == 5.0);
    CHECK(k.k4 == -3.0);
    CHECK(k.convention == K4Convention::MinusK2);
    k.validate();
}

TEST_CASE("alpha-minus-k2 convention uses the smallest constant") {
    FrankConstants k = FrankConstants::alpha_minus_k2(4.0, 2.5, 1.5);
    CHECK(k.k4 == 1.5 - 2.5);
    CHECK(k.convention == K4Convention::AlphaMinusK2);
    FrankConstants k2 = FrankConstants::alpha_minus_k2(0.5, 2.5, 1.5);
    CHECK(k2.k4 == 0.5 - 2.5);
}

TEST_CASE("explicit convention keeps the caller value") {
    FrankConstants k = FrankConstants::explicit_k4(1.0, 2.0, 3.0, 0.25);
    CHECK(k.k4 == 0.25);
    CHECK(k.convention == K4Convention::Explicit);
}

TEST_CASE("validation rejects non-positive or non-finite constants") {
    CHECK_THROWS_AS(FrankConstants::minus_k2(0.0, 1.0, 1.0).validate(), std::domain_error);
    CHECK_THROWS_AS(FrankConstants::minus_k2(1.0, -2.0, 1.0).validate(), std::domain_error);
    CHECK_THROWS_AS(FrankConstants::minus_k2(1.0, 1.0, 0.0).validate(), std::domain_error);
    CHECK_THROWS_AS(FrankConstants::explicit_k4(1.0, 1.0, 1.0, std::nan("")).validate(),
                    std::domain_error);
}

TEST_CASE("coercivity bounds") {
    FrankConstants k = FrankConstants::alpha_minus_k2(2.0, 3.0, 0.5);
    CoercivityBounds b = coercivity_bounds(k);
    CHECK(b.alpha == 0.5);
    CHECK(b.beta == 3.0 * 2.0 + 2.0 * 3.0 + 2.0 * 0.5);
    CHECK(b.alpha <= b.beta);
}
