#include <doctest.h>

#include <cmath>

#include "opdyn/path_sim.hpp"
#include "opdyn/stats.hpp"

using namespace opdyn;

namespace {

ModelParams figure_params(double alpha = 0)
{
    ModelParams p;
    p.lambda = 2;
    p.sigma = 3;
    p.theta = 2;
    p.alpha = alpha;
    return p;
}

SimConfig config(double horizon, double step, std::uint64_t seed)
{
    SimConfig c;
    c.horizon = horizon;
    c.step = step;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("negligible rate gives Brownian paths")
{
    auto p = figure_params();
    p.lambda = 1e-300;
    p.sigma = 1;
    auto cfg = config(1, 1e-2, 3);
    cfg.record_mode = RecordMode::Terminal;
    const auto paths = simulate_replicates(p, RateFunction(RateFamily::C1, p), cfg, 4000, 1);
    std::vector<double> x;
    for (const auto& s : paths)
    {
        CHECK(s.jump_count == 0);
        x.push_back(s.terminal());
    }
    const auto st = stats::summarize(x);
    CHECK(std::abs(st.mean) < 5 * st.mean_std_error);
    CHECK(std::abs(st.variance - 1) < 5 * std::sqrt(2.0 / x.size()));
}

TEST_CASE("constant rate gives Poisson jump counts")
{
    const auto p = figure_params();
    auto cfg = config(100, 1e-3, 9);
    cfg.record_mode = RecordMode::Jumps;
    const auto paths = simulate_replicates(p, RateFunction(RateFamily::C1, p), cfg, 100, 1);
    double total = 0;
    for (const auto& s : paths)
        total += static_cast<double>(s.jump_count) / cfg.horizon;
    const double mean_rate = total / 100;
    // per-step probability 1 - exp(-lambda h): the rate is lambda up to O(h)
    CHECK(std::abs(mean_rate - 2) < 0.3);
    CHECK(std::abs(mean_rate - 2) < 5 * std::sqrt(2.0 / (100 * cfg.horizon)));
}

TEST_CASE("path invariants")
{
    const auto p = figure_params(0.5);
    const RateFunction rf(RateFamily::C2, p);
    const auto cfg = config(20, 1e-3, 17);
    const auto s = simulate_path(p, rf, cfg);
    const auto s2 = simulate_path(p, rf, cfg);
    CHECK(s.values == s2.values);
    CHECK(s.times == s2.times);
    CHECK(s.jump_count > 0);
    CHECK(s.jump_count == s.jump_epochs.size());
    for (std::size_t i = 1; i < s.times.size(); ++i)
        CHECK(s.times[i] > s.times[i - 1]);
    CHECK(s.times.back() == doctest::Approx(20.0).epsilon(1e-12));
    std::size_t k = 0;
    for (std::size_t i = 0; i < s.times.size(); ++i)
        if (s.is_jump[i])
        {
            CHECK(s.times[i] == s.jump_epochs[k]);
            const double before = s.jump_pre_values[k];
            CHECK(std::abs(s.values[i] * p.theta - before) <= 1e-12 * std::max(1.0, std::abs(before)));
            ++k;
        }
    CHECK(k == s.jump_count);
}

TEST_CASE("the horizon need not be a multiple of the step")
{
    const auto p = figure_params();
    const auto s = simulate_path(p, RateFunction(RateFamily::C1, p), config(1.00037, 1e-2, 1));
    CHECK(s.times.back() == doctest::Approx(1.00037).epsilon(1e-14));
}

TEST_CASE("replicates do not depend on the thread count")
{
    const auto p = figure_params();
    const RateFunction rf(RateFamily::C1, p);
    const auto a = simulate_replicates(p, rf, config(2, 1e-3, 5), 12, 1);
    const auto b = simulate_replicates(p, rf, config(2, 1e-3, 5), 12, 3);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a[i].values == b[i].values);
    CHECK(a[0].values != a[1].values);
}

TEST_CASE("configuration errors")
{
    auto p = figure_params(1.0);
    CHECK_THROWS_AS(simulate_path(p, RateFunction(RateFamily::C2, p), config(1, 1e-3, 1)), ConfigError);
    p.alpha = 0.5;
    CHECK_THROWS_AS(simulate_path(p, RateFunction(RateFamily::C2, p), config(1, 0, 1)), ConfigError);
    CHECK_THROWS_AS(simulate_path(p, RateFunction(RateFamily::C2, p), config(1, 2, 1)), ConfigError);
    CHECK(default_c2_cap(p, 1e-4) == doctest::Approx(2 * std::pow(1e-4, -0.25)).epsilon(1e-14));
    CHECK(simulation_rate(RateFunction(RateFamily::C2, p), 1e-4)(0.0) == doctest::Approx(default_c2_cap(p, 1e-4)));
    CHECK(simulation_rate(RateFunction(RateFamily::C2, p), 1e-4, 50.0)(0.0) == 50.0);
}

TEST_CASE("refinement convergence of the terminal law")
{
    const auto p = figure_params();
    const RateFunction rf(RateFamily::C1, p);
    auto run = [&](double h) {
        auto cfg = config(0.5, h, 21);
        cfg.record_mode = RecordMode::Terminal;
        std::vector<double> x;
        for (const auto& s : simulate_replicates(p, rf, cfg, 100000, 0))
            x.push_back(s.terminal());
        return x;
    };
    CHECK(stats::ks_two_sample(run(1e-3), run(5e-4)) < 0.01);
}

TEST_CASE("first interaction survival")
{
    const auto p = figure_params();
    const auto c1 = estimate_gamma1_survival(p, RateFunction(RateFamily::C1, p), 0, 1, 1000, 1);
    CHECK(c1.probability == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));

    const auto q = figure_params(0.5);
    const RateFunction c2(RateFamily::C2, q);
    const auto tiny = estimate_gamma1_survival(q, c2, 0, 1e-4, 2000, 2, 1e-6);
    CHECK(tiny.probability >= 0.99);
    const auto one = estimate_gamma1_survival(q, c2, 0, 1, 4000, 3);
    CHECK(one.probability > 5 * one.std_error);
    CHECK(one.probability < 1);

    const auto curve = survival_curve(q, c2, 0, {0.01, 0.1, 0.5, 1, 2}, 2000, 4);
    for (std::size_t i = 1; i < curve.size(); ++i)
        CHECK(curve[i].probability <= curve[i - 1].probability);
    // started away from the origin the rate is smaller, so survival is larger
    const auto away = estimate_gamma1_survival(q, c2, 3, 1, 4000, 3);
    CHECK(away.probability > one.probability);
}

TEST_CASE("time sampling")
{
    SamplePath s;
    s.times = {0, 0.5, 1, 1.5, 2};
    s.values = {4, 4, 4, 4, 4};
    s.is_jump = {0, 0, 0, 0, 0};
    s.horizon = 2;
    const auto v = time_sampled_values(s, 0.5, 0.5);
    CHECK(v.size() == 3);
    for (double x : v)
        CHECK(x == 4);
    CHECK(time_sampled_values(s, 0.5, 2).empty());
}

TEST_CASE("regime scan")
{
    SUBCASE("constant rate is unaffected by the ceiling")
    {
        const auto p = figure_params();
        RegimeOptions o;
        o.seed = 4;
        const auto rows = regime_scan(p, 0.0, {10, 1e3, 1e6}, 2.0, 2000, o);
        for (const auto& r : rows)
        {
            CHECK(std::abs(r.mean_jumps - 4) < 5 * r.std_error);
            CHECK(r.mean_jumps == rows.front().mean_jumps);
        }
    }
    SUBCASE("accumulation regime grows with the ceiling")
    {
        const auto p = figure_params();
        RegimeOptions o;
        o.seed = 5;
        const auto rows = regime_scan(p, 2.5, {10, 1e3, 1e6}, 1.0, 500, o);
        CHECK(rows[1].mean_jumps > rows[0].mean_jumps + 3 * rows[1].std_error);
        CHECK(rows[2].mean_jumps > rows[1].mean_jumps + 3 * rows[2].std_error);
        CHECK(rows[2].burst_fraction >= rows[0].burst_fraction);
    }
    SUBCASE("caps must increase")
    {
        CHECK_THROWS_AS(regime_scan(figure_params(), 0.5, {10, 5}, 1.0, 10), ConfigError);
    }
}
