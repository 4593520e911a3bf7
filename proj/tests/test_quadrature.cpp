#include <doctest.h>

#include <cmath>
#include <numbers>

#include "opdyn/quadrature.hpp"

using namespace opdyn;

TEST_CASE("finite intervals")
{
    CHECK(quad::integrate([](double x) { return std::sin(x); }, 0, std::numbers::pi) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(quad::integrate([](double x) { return x * x; }, -1, 2) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(quad::integrate([](double x) { return std::exp(x); }, 1e-9, 2e-9) == doctest::Approx(1e-9).epsilon(1e-12));
    CHECK(quad::integrate([](double x) { return x; }, 2, 1) == doctest::Approx(-1.5).epsilon(1e-14));
}

TEST_CASE("half line")
{
    CHECK(quad::integrate_to_infinity([](double x) { return std::exp(-x); }, 0, 1) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(quad::integrate_to_infinity([](double x) { return std::exp(-x * x); }, 0, 1)
          == doctest::Approx(std::sqrt(std::numbers::pi) / 2).epsilon(1e-13));
    // integrable endpoint singularity
    CHECK(quad::integrate_to_infinity([](double x) { return std::exp(-x) / std::sqrt(x); }, 0, 1)
          == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
}

TEST_CASE("graded pieces handle an endpoint singularity from either side")
{
    auto f = [](double x) { return std::pow(std::abs(x), -0.7); };
    const double exact = 1.0 / 0.3;
    CHECK(quad::integrate_graded(f, 0.0, 1.0) == doctest::Approx(exact).epsilon(1e-10));
    CHECK(quad::integrate_graded(f, 0.0, -1.0) == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("pieces")
{
    const double br[] = {-1.0, 0.0, 0.5, 2.0};
    CHECK(quad::integrate_pieces([](double x) { return std::abs(x); }, br, 4) == doctest::Approx(2.5).epsilon(1e-14));
}
