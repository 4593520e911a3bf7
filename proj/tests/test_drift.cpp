#include <doctest.h>

#include <cmath>

#include "opdyn/drift.hpp"
#include "opdyn/embedded_chain.hpp"
#include "opdyn/stationary.hpp"

using namespace opdyn;
using namespace opdyn::drift;

namespace {

double a_of(double s, double theta)
{
    return 1 - std::pow(theta, -s);
}

double psi(double s, double beta, double theta)
{
    return drift_gamma(s, beta, theta) * (1 + drift_Xi(s, beta, theta).value);
}

}  // namespace

TEST_CASE("gamma is the positive root")
{
    for (double beta : {-1.0, 0.0, 0.5, 2.0})
        for (double s : {0.3, 1.0, 2.5, 10.0})
        {
            const double g = drift_gamma(s, beta, 2);
            CHECK(g > 0);
            CHECK(std::abs(1 / g + beta - a_of(s, 2) * g) < 1e-12 * std::max(1.0, g));
        }
    for (double s : {0.5, 1.0, 4.0})
        CHECK(drift_gamma(s, 0, 2) == doctest::Approx(1 / std::sqrt(a_of(s, 2))).epsilon(1e-14));
    for (double beta : {0.0, 0.7})
        CHECK(drift_gamma(80, beta, 2) == doctest::Approx((beta + std::sqrt(beta * beta + 4)) / 2).epsilon(1e-14));
    CHECK_THROWS(drift_gamma(0, 0.5, 2));
}

TEST_CASE("gamma is non-increasing in s")
{
    // a(s) grows with s and the positive root of a g^2 - beta g - 1 shrinks
    for (double beta : {0.0, 0.5, 2.0})
        for (double s = 0.2; s < 8; s += 0.1)
            CHECK(drift_gamma(s + 0.1, beta, 2) <= drift_gamma(s, beta, 2));
}

TEST_CASE("Psi solves the ratio recurrence")
{
    // f(s) + beta f(s+1) = a(s+1) f(s+2) divided by f(s+1)
    for (double beta : {-1.0, -0.3, 0.0, 0.4, 1.0})
        for (double theta : {1.5, 2.0, 3.0})
            for (double s : {0.5, 1.0, 1.5, 2.0, 3.7})
            {
                const double p0 = psi(s, beta, theta);
                const double p1 = psi(s + 1, beta, theta);
                CHECK(std::abs(1 + beta * p0 - a_of(s + 1, theta) * p0 * p1) < 1e-9 * (1 + std::abs(beta * p0)));
            }
}

TEST_CASE("Xi is a shrinking correction")
{
    // Psi(s) tends to gamma(inf) <= gamma(s) from below, so Xi <= 0 and Xi -> 0
    for (double beta : {0.0, 0.5, 1.5})
    {
        double prev = -1;
        for (double s : {0.5, 1.0, 2.0, 5.0, 20.0})
        {
            const auto xi = drift_Xi(s, beta, 2);
            CHECK(xi.converged);
            CHECK(xi.value <= 0);
            CHECK(xi.value >= prev);
            prev = xi.value;
        }
        CHECK(prev > -1e-5);
    }
    const auto cf = drift_Xi(1.0, -0.5, 2);
    CHECK(cf.method == XiMethod::ContinuedFraction);
    CHECK(std::abs(drift_Xi_truncated(1.0, -0.5, 2, 60) - cf.value) < 1e-10);
}

TEST_CASE("series and product routes agree")
{
    for (double beta : {-0.5, 0.0, 0.5})
    {
        const double r1 = drift_f_product(1, beta, 2) / drift_f_series(1, beta, 2);
        for (double s : {1.5, 2.0, 3.0})
            CHECK(drift_f_product(s, beta, 2) / drift_f_series(s, beta, 2) == doctest::Approx(r1).epsilon(1e-9));
    }
}

TEST_CASE("Mellin recurrence with drift")
{
    ModelParams p;
    p.lambda = 2;
    p.sigma = 3;
    p.theta = 2;
    p.mu = 0.5 * p.sigma * std::sqrt(p.lambda) / std::sqrt(2.0);  // beta = 0.5
    CHECK(drift_beta(p) == doctest::Approx(0.5).epsilon(1e-14));
    for (double s : {1.0, 1.5, 2.0})
        CHECK(drift_mellin_recurrence_residual(s, p) < 1e-8);
    p.mu = -p.mu;
    for (double s : {1.0, 1.5, 2.0})
        CHECK(drift_mellin_recurrence_residual(s, p) < 1e-8);
}

TEST_CASE("zero drift is proportional to the closed form")
{
    ModelParams p;
    p.lambda = 2;
    p.sigma = 3;
    const double r0 = drift_mellin_unnormalized(0.5, p).value / mellin_density(0.5, p, 0).value;
    for (double s : {1.0, 1.5, 2.0, 3.0})
        CHECK(drift_mellin_unnormalized(s, p).value / mellin_density(s, p, 0).value == doctest::Approx(r0).epsilon(1e-8));
}

TEST_CASE("drifted moment ratio against exact samples")
{
    // M(2)/M(1) = E[X; X > 0] / P(X > 0)
    for (double mu : {0.6, -0.6})
    {
        ModelParams p;
        p.lambda = 2;
        p.sigma = 3;
        p.mu = mu;
        const auto x = sample_stationary_c1_batch(p, 400000, 5, 1);
        double sum = 0;
        double count = 0;
        for (double v : x)
            if (v > 0)
            {
                sum += v;
                count += 1;
            }
        const double ratio = drift_mellin_unnormalized(2, p).value / drift_mellin_unnormalized(1, p).value;
        CHECK(ratio == doctest::Approx(sum / count).epsilon(0.02));
    }
}
