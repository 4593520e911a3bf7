#pragma once

// Pointwise checks of the stationary non-local ODE
//
//   sigma^2 p'' - 2 mu p' = 2 lambda(x) p(x) - 2 theta lambda(theta x) p(theta x)
//
// and the generator / adjoint pair of the two-agent process
//
//   A f  =  mu f' + sigma^2/2 f'' + (f(x/theta) - f(x)) lambda(x)
//   A* f = -mu f' + sigma^2/2 f'' + theta f(theta x) lambda(theta x) - f(x) lambda(x).
//
// Derivatives are central differences with one Richardson step. A residual
// is |lhs - rhs| divided by the largest single term of the equation (or a
// floor of 1e-12 max|p| on the grid); dividing by max(|lhs|, |rhs|) instead
// blows up where p'' and the right side cross zero together.

#include <functional>
#include <limits>
#include <vector>

#include "opdyn/model.hpp"

namespace opdyn {

using RealFn = std::function<double(double)>;

struct ResidualReport
{
    std::vector<double> grid;  // points actually checked
    std::vector<double> lhs;
    std::vector<double> rhs;
    std::vector<double> residuals;
    double max_rel_residual = 0.0;
    double excluded_zone = 0.0;  // |x| below this was skipped
    double fd_step = 0.0;
};

/// 0.05 sigma / sqrt(2 lambda).
double default_exclusion(const ModelParams& params);

/// n points on [lo, hi] and their mirror images on [-hi, -lo].
std::vector<double> symmetric_grid(double lo, double hi, std::size_t n_per_side);

/// Richardson-extrapolated central differences; h is used and h/2.
double fd_first(const RealFn& f, double x, double h);
double fd_second(const RealFn& f, double x, double h);

/// Residual of the two-agent stationary ODE. The step at x is
/// min(fd_step, |x|/20) so it never straddles 0. `exclusion` defaults to
/// default_exclusion(params) when the rate is unbounded at 0, and to 0 otherwise.
ResidualReport ode_residual(const RealFn& p,
                            const RateFunction& rf,
                            const ModelParams& params,
                            const std::vector<double>& grid,
                            double fd_step = 1e-2,
                            double exclusion = std::numeric_limits<double>::quiet_NaN());

/// Test function with optional exact derivatives; missing ones use fd_first/fd_second.
struct TestFunction
{
    RealFn f;
    RealFn df;
    RealFn d2f;
};

/// exp(-1/(1-u^2)), u = (x - center)/width, zero outside |u| < 1; exact derivatives.
TestFunction bump(double center, double width);

/// int (A f) g dx and int f (A* g) dx over [lo, hi], which must hold the
/// supports of f, g, f(./theta) and g(theta .). With a power-law rate and
/// alpha >= 1 the adjoint side is not integrable at 0 unless g vanishes there.
struct AdjointPair
{
    double generator_side = 0.0;
    double adjoint_side = 0.0;
};
AdjointPair adjointness(const TestFunction& f,
                        const TestFunction& g,
                        const ModelParams& params,
                        const RateFunction& rf,
                        double lo,
                        double hi);

double generator_apply(const TestFunction& f, double x, const ModelParams& params, const RateFunction& rf, double fd_step = 1e-3);
double adjoint_apply(const TestFunction& f, double x, const ModelParams& params, const RateFunction& rf, double fd_step = 1e-3);

/// Residual of the constant-rate three-agent ODE (mu = 0, theta = 2):
/// sigma^2 p'' = 2 lambda p(x) - 4 q lambda p(2x - s1) - 4 (1 - q) lambda p(2x - s3).
ResidualReport ode_residual_three_agent(const RealFn& p,
                                        const MultiAgentConfig& cfg,
                                        const ModelParams& params,
                                        const std::vector<double>& grid,
                                        double fd_step = 1e-2);

}  // namespace opdyn
