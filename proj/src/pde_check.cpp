#include "opdyn/pde_check.hpp"

#include <algorithm>
#include <stdexcept>
#include <cmath>

#include "opdyn/quadrature.hpp"

namespace opdyn {

namespace {

double floor_for(const RealFn& p, const std::vector<double>& grid)
{
    double m = 0.0;
    for (double x : grid)
        m = std::max(m, std::abs(p(x)));
    return 1e-12 * m;
}

void finish(ResidualReport& r)
{
    r.max_rel_residual = 0.0;
    for (double v : r.residuals)
        r.max_rel_residual = std::max(r.max_rel_residual, v);
}

// theta * g(theta x) * lambda(theta x) - g(x) * lambda(x), with the x = 0,
// infinite-rate case reduced to (theta - 1) g(0) * inf.
double inflow_minus_outflow(double g_x, double g_tx, double x, double theta, const RateFunction& rf)
{
    if (x == 0.0 && std::isinf(rf(0.0)))
    {
        const double net = (theta - 1.0) * g_x;
        return net == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), net);
    }
    return theta * g_tx * rf(theta * x) - g_x * rf(x);
}

}  // namespace

double default_exclusion(const ModelParams& params)
{
    return 0.05 * params.sigma / std::sqrt(2.0 * params.lambda);
}

std::vector<double> symmetric_grid(double lo, double hi, std::size_t n_per_side)
{
    std::vector<double> g;
    g.reserve(2 * n_per_side);
    for (std::size_t i = 0; i < n_per_side; ++i)
    {
        const double x = n_per_side == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_per_side - 1);
        g.push_back(-x);
        g.push_back(x);
    }
    std::sort(g.begin(), g.end());
    return g;
}

double fd_first(const RealFn& f, double x, double h)
{
    auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
    return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

double fd_second(const RealFn& f, double x, double h)
{
    const double f0 = f(x);
    auto d = [&](double s) { return (f(x + s) - 2.0 * f0 + f(x - s)) / (s * s); };
    return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

ResidualReport ode_residual(const RealFn& p,
                            const RateFunction& rf,
                            const ModelParams& params,
                            const std::vector<double>& grid,
                            double fd_step,
                            double exclusion)
{
    if (!(fd_step > 0))
        throw ConfigError("fd_step", "must be > 0");
    ResidualReport r;
    r.fd_step = fd_step;
    r.excluded_zone = std::isnan(exclusion) ? (rf.bounded() ? 0.0 : default_exclusion(params)) : exclusion;
    const double floor = floor_for(p, grid);
    const double s2 = params.sigma * params.sigma;

    for (double x : grid)
    {
        if (std::abs(x) < r.excluded_zone || (x == 0.0 && !rf.bounded()))
            continue;
        const double h = x == 0.0 ? fd_step : std::min(fd_step, std::abs(x) / 20.0);
        const double lhs = s2 * fd_second(p, x, h) - 2.0 * params.mu * fd_first(p, x, h);
        const double out = 2.0 * rf(x) * p(x);
        const double in = 2.0 * params.theta * rf(params.theta * x) * p(params.theta * x);
        const double rhs = out - in;
        const double scale = std::max({std::abs(lhs), std::abs(out), std::abs(in), floor});
        r.grid.push_back(x);
        r.lhs.push_back(lhs);
        r.rhs.push_back(rhs);
        r.residuals.push_back(std::abs(lhs - rhs) / scale);
    }
    finish(r);
    return r;
}

double generator_apply(const TestFunction& f, double x, const ModelParams& params, const RateFunction& rf, double fd_step)
{
    const double d1 = f.df ? f.df(x) : fd_first(f.f, x, fd_step);
    const double d2 = f.d2f ? f.d2f(x) : fd_second(f.f, x, fd_step);
    const double jump = f.f(x / params.theta) - f.f(x);
    const double lam = rf(x);
    // at x = 0 the jump does not move the state, whatever the rate
    const double jump_term = (jump == 0.0) ? 0.0 : jump * lam;
    return params.mu * d1 + 0.5 * params.sigma * params.sigma * d2 + jump_term;
}

double adjoint_apply(const TestFunction& f, double x, const ModelParams& params, const RateFunction& rf, double fd_step)
{
    const double d1 = f.df ? f.df(x) : fd_first(f.f, x, fd_step);
    const double d2 = f.d2f ? f.d2f(x) : fd_second(f.f, x, fd_step);
    const double jump = inflow_minus_outflow(f.f(x), f.f(params.theta * x), x, params.theta, rf);
    return -params.mu * d1 + 0.5 * params.sigma * params.sigma * d2 + jump;
}

TestFunction bump(double center, double width)
{
    if (!(width > 0))
        throw std::invalid_argument("bump: width must be > 0");
    auto parts = [center, width](double x, double& b, double& g1, double& g2) {
        const double u = (x - center) / width;
        if (std::abs(u) >= 1.0)
        {
            b = g1 = g2 = 0.0;
            return false;
        }
        const double v = 1.0 - u * u;
        b = std::exp(-1.0 / v);
        g1 = -2.0 * u / (v * v);
        g2 = -2.0 / (v * v) - 8.0 * u * u / (v * v * v);
        return true;
    };
    TestFunction t;
    t.f = [parts](double x) {
        double b, g1, g2;
        parts(x, b, g1, g2);
        return b;
    };
    t.df = [parts, width](double x) {
        double b, g1, g2;
        return parts(x, b, g1, g2) ? b * g1 / width : 0.0;
    };
    t.d2f = [parts, width](double x) {
        double b, g1, g2;
        return parts(x, b, g1, g2) ? b * (g1 * g1 + g2) / (width * width) : 0.0;
    };
    return t;
}

AdjointPair adjointness(const TestFunction& f,
                        const TestFunction& g,
                        const ModelParams& params,
                        const RateFunction& rf,
                        double lo,
                        double hi)
{
    AdjointPair r;
    // A power-law rate is singular at 0: grade the pieces towards it.
    auto lhs = [&](double x) { return x == 0.0 ? 0.0 : generator_apply(f, x, params, rf) * g.f(x); };
    auto rhs = [&](double x) { return x == 0.0 ? 0.0 : f.f(x) * adjoint_apply(g, x, params, rf); };
    auto total = [&](const quad::Integrand& h) {
        if (lo < 0.0 && hi > 0.0)
            return quad::integrate_graded(h, 0.0, lo) + quad::integrate_graded(h, 0.0, hi);
        return quad::integrate(h, lo, hi);
    };
    r.generator_side = total(lhs);
    r.adjoint_side = total(rhs);
    return r;
}

ResidualReport ode_residual_three_agent(const RealFn& p,
                                        const MultiAgentConfig& cfg,
                                        const ModelParams& params,
                                        const std::vector<double>& grid,
                                        double fd_step)
{
    if (!(fd_step > 0))
        throw ConfigError("fd_step", "must be > 0");
    if (params.mu != 0.0)
        throw ConfigError("mu", "the three-agent check covers mu = 0 only");
    if (params.theta != 2.0)
        throw ConfigError("theta", "the three-agent model needs theta = 2");
    ResidualReport r;
    r.fd_step = fd_step;
    const double floor = floor_for(p, grid);
    const double l1 = cfg.q * params.lambda;
    const double l3 = (1.0 - cfg.q) * params.lambda;
    const double s2 = params.sigma * params.sigma;

    for (double x : grid)
    {
        const double lhs = s2 * fd_second(p, x, fd_step);
        const double out = 2.0 * params.lambda * p(x);
        const double in1 = 4.0 * l1 * p(2.0 * x - cfg.s1);
        const double in3 = 4.0 * l3 * p(2.0 * x - cfg.s3);
        const double rhs = out - in1 - in3;
        const double scale = std::max({std::abs(lhs), std::abs(out), std::abs(in1), std::abs(in3), floor});
        r.grid.push_back(x);
        r.lhs.push_back(lhs);
        r.rhs.push_back(rhs);
        r.residuals.push_back(std::abs(lhs - rhs) / scale);
    }
    finish(r);
    return r;
}

}  // namespace opdyn
