#include <doctest.h>

#include <cmath>
#include <numbers>

#include "opdyn/rng.hpp"
#include "opdyn/stationary.hpp"
#include "opdyn/stats.hpp"

using namespace opdyn;
using namespace opdyn::stats;

namespace {

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

std::vector<double> normals(std::size_t n, std::uint64_t seed)
{
    rng::Stream s(seed, 0);
    std::vector<double> x(n);
    for (auto& v : x)
        v = s.normal();
    return x;
}

}  // namespace

TEST_CASE("one-sample KS")
{
    CHECK(ks_distance(normals(10000, 1), normal_cdf) < 0.02);
    CHECK(ks_distance(std::vector<double>(100, 0.0), normal_cdf) >= 0.5);
    CHECK_THROWS(ks_distance({}, normal_cdf));

    // the quantile grid is as close as a sample can be
    const std::size_t n = 1000;
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i)
        q[i] = (i + 0.5) / n;
    auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(ks_distance(q, uniform) == doctest::Approx(0.5 / n).epsilon(1e-9));
}

TEST_CASE("KS is invariant under affine maps")
{
    const auto x = normals(5000, 2);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = 3 * x[i] - 7;
    CHECK(ks_distance(y, [](double v) { return normal_cdf((v + 7) / 3); }) == doctest::Approx(ks_distance(x, normal_cdf)).epsilon(1e-12));
}

TEST_CASE("two-sample KS")
{
    const auto x = normals(1000, 3);
    CHECK(ks_two_sample(x, x) == 0.0);
    CHECK(ks_two_sample({1, 2, 3}, {4, 5}) == 1.0);
    CHECK(ks_two_sample({1, 2, 3, 4}, {3, 4, 5, 6}) == doctest::Approx(0.5));
}

TEST_CASE("critical values")
{
    CHECK(ks_critical_value(100000) == doctest::Approx(1.62762 / std::sqrt(1e5)).epsilon(1e-5));
    CHECK(ks_critical_value_two_sample(100000, 100000) == doctest::Approx(1.62762 * std::sqrt(2e-5)).epsilon(1e-5));
}

TEST_CASE("tabulated CDF")
{
    auto pdf = [](double x) { return std::exp(-x * x / 2) / std::sqrt(2 * std::numbers::pi); };
    const TabulatedCdf f(pdf, geometric_nodes(-9, 9, 0, 1));
    double prev = 0;
    for (double x = -9.5; x < 9.5; x += 0.01)
    {
        CHECK(std::abs(f(x) - normal_cdf(x)) < 1e-9);
        CHECK(f(x) >= prev);
        prev = f(x);
    }
}

TEST_CASE("reference CDF of the series densities")
{
    ModelParams p;
    p.lambda = 2;
    p.sigma = 3;
    const auto e = make_density_exponential(p);
    const auto fe = reference_cdf(e);
    for (double x : {-5.0, -0.3, 0.0, 0.01, 2.0, 9.0})
        CHECK(std::abs(fe(x) - e.cdf(x)) < 1e-9);
    for (double alpha : {0.5, 1.5})
    {
        const auto d = make_density_besselk(p, alpha);
        const auto f = reference_cdf(d);
        CHECK(f(0) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(f(d.tail_cutoff(1e-16)) >= 1 - 1e-6);
        CHECK(f(-d.tail_cutoff(1e-16)) <= 1e-6);
        double prev = 0;
        for (double x = -6; x < 6; x += 0.003)
        {
            CHECK(f(x) >= prev);
            prev = f(x);
        }
    }
}

TEST_CASE("empirical characteristic function")
{
    const auto v = empirical_cf({1.0, -2.0, 0.5}, {0.0, 1.0});
    CHECK(v[0] == std::complex<double>(1, 0));
    CHECK(v[1].real() == doctest::Approx((std::cos(1.0) + std::cos(-2.0) + std::cos(0.5)) / 3));
    CHECK(v[1].imag() == doctest::Approx((std::sin(1.0) + std::sin(-2.0) + std::sin(0.5)) / 3));
}

TEST_CASE("Wasserstein-1")
{
    // point mass at the median of a Laplace law: the mean absolute deviation
    const double b = 1.7;
    auto laplace = [b](double v) { return v < 0 ? 0.5 * std::exp(v / b) : 1 - 0.5 * std::exp(-v / b); };
    CHECK(wasserstein1({0.0}, laplace, -80, 80) == doctest::Approx(b).epsilon(1e-8));

    // identical discrete laws
    const std::vector<double> s = {-1, 0.5, 2, 3};
    auto step = [&](double x) {
        double c = 0;
        for (double v : s)
            c += v <= x;
        return c / s.size();
    };
    CHECK(wasserstein1(s, step, -5, 5) < 1e-12);

    const auto x = normals(10000, 4);
    const double w = wasserstein1(x, normal_cdf, -10, 10);
    CHECK(w < 3 / std::sqrt(1e4));
    CHECK(w > 0.05 / std::sqrt(1e4));

    // affine invariance: distances scale with the map
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = 2 * x[i] + 1;
    CHECK(wasserstein1(y, [](double v) { return normal_cdf((v - 1) / 2); }, -19, 21) == doctest::Approx(2 * w).epsilon(1e-6));
}

TEST_CASE("summary and correlation")
{
    const auto s = summarize({1, 2, 3, 4});
    CHECK(s.mean == 2.5);
    CHECK(s.variance == doctest::Approx(5.0 / 3));
    CHECK(s.skewness == doctest::Approx(0.0));
    CHECK(s.excess_kurtosis == doctest::Approx(1.64 - 3));

    const auto x = normals(100000, 5);
    const auto y = normals(100000, 6);
    const auto r = correlation(x, y);
    CHECK(std::abs(r.value) < 4 * r.std_error);
    CHECK(r.std_error == doctest::Approx(1 / std::sqrt(1e5)).epsilon(0.3));
    CHECK(correlation(x, x).value == doctest::Approx(1.0));
}

TEST_CASE("comparison report")
{
    const auto x = normals(20000, 7);
    std::vector<double> xi = {-1, 0, 1};
    const auto rep = compare(x, normal_cdf, -10, 10, [](double t) { return std::complex<double>(std::exp(-t * t / 2), 0); }, xi, "normal");
    CHECK(rep.sample_count == 20000);
    CHECK(rep.ks_distance < ks_critical_value(20000));
    CHECK(rep.wasserstein1 > 0);
    CHECK(rep.cf_sup_error < 0.03);
    CHECK(rep.reference == "normal");
}
