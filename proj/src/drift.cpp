#include "opdyn/drift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opdyn::drift {

namespace {

constexpr int kMaxDepth = 200;
constexpr double kCfTol = 1e-10;

double a_of(double s, double theta)
{
    return -std::expm1(-s * std::log(theta));
}

double series_psi(double s, double beta, double theta)
{
    return drift_f_series(s + 1.0, beta, theta) / drift_f_series(s, beta, theta);
}

}  // namespace

double drift_beta(const ModelParams& params)
{
    params.validate();
    return std::sqrt(2.0) * params.mu / (params.sigma * std::sqrt(params.lambda));
}

double drift_gamma(double s, double beta, double theta)
{
    if (!(s > 0))
        throw ConfigError("s", "must be > 0");
    if (!(theta > 1))
        throw ConfigError("theta", "must be > 1");
    const double a = a_of(s, theta);
    const double root = std::sqrt(beta * beta + 4.0 * a);
    // pick the form without cancellation
    return beta >= 0 ? (beta + root) / (2.0 * a) : 2.0 / (root - beta);
}

double drift_gamma_limit(double beta)
{
    const double root = std::sqrt(beta * beta + 4.0);
    return beta >= 0 ? (beta + root) / 2.0 : 2.0 / (root - beta);
}

double drift_Xi_truncated(double s, double beta, double theta, int depth)
{
    if (depth < 1)
        throw ConfigError("depth", "must be >= 1");
    double xi = 0.0;
    double g_next = drift_gamma(s + depth, beta, theta);
    for (int k = depth - 1; k >= 0; --k)
    {
        const double g = drift_gamma(s + k, beta, theta);
        const double a1 = a_of(s + k + 1.0, theta);
        const double A = 1.0 / (a1 * g * g_next);
        const double B = 1.0 / (a1 * g_next * g_next);
        xi = A / (B + xi) - 1.0;
        g_next = g;
    }
    return xi;
}

XiResult drift_Xi(double s, double beta, double theta, int depth)
{
    return drift_Xi(s, beta, theta, depth, beta > 0 ? XiMethod::Series : XiMethod::ContinuedFraction);
}

XiResult drift_Xi(double s, double beta, double theta, int depth, XiMethod force)
{
    if (depth < 1)
        throw ConfigError("depth", "must be >= 1");
    XiResult r;
    r.method = force;
    if (force == XiMethod::Series)
    {
        r.value = series_psi(s, beta, theta) / drift_gamma(s, beta, theta) - 1.0;
        r.converged = std::isfinite(r.value);
        return r;
    }
    int d = std::min(depth, kMaxDepth - 5);
    double prev = drift_Xi_truncated(s, beta, theta, d);
    while (d + 5 <= kMaxDepth)
    {
        const double next = drift_Xi_truncated(s, beta, theta, d + 5);
        d += 5;
        if (std::abs(next - prev) < kCfTol)
        {
            r.value = next;
            r.depth = d;
            r.converged = true;
            return r;
        }
        prev = next;
    }
    r.value = prev;
    r.depth = d;
    r.converged = false;
    return r;
}

double drift_f_series(double s, double beta, double theta)
{
    const double g = drift_gamma_limit(beta);
    const double G = g * g;
    const double log_theta = std::log(theta);
    double c = 1.0;
    double sum = 1.0;
    for (int n = 1; n < 400; ++n)
    {
        const double tn = std::exp(-n * log_theta);
        c *= -G * std::exp((1.0 - 2.0 * n) * log_theta) / (-std::expm1(-n * log_theta) * (1.0 + G * tn));
        const double term = c * std::exp(-n * s * log_theta);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) || c == 0.0)
            break;
    }
    return std::pow(g, s) * sum;
}

double drift_f_product(double s, double beta, double theta, bool* converged)
{
    const double g = drift_gamma_limit(beta);
    double log_f = s * std::log(g);
    bool ok = true;
    bool done = false;
    for (int k = 0; k < 5000; ++k)
    {
        const XiResult xi = drift_Xi(s + k, beta, theta);
        ok = ok && xi.converged;
        const double psi = drift_gamma(s + k, beta, theta) * (1.0 + xi.value);
        log_f += std::log(g / psi);
        if (std::abs(psi / g - 1.0) < 1e-14)
        {
            done = true;
            break;
        }
    }
    if (converged)
        *converged = ok && done;
    return std::exp(log_f);
}

DriftMellin drift_mellin_unnormalized(double s, const ModelParams& params, bool use_product)
{
    if (!(s > 0))
        throw ConfigError("s", "must be > 0");
    const double beta = drift_beta(params);
    DriftMellin m;
    const double f = use_product ? drift_f_product(s, beta, params.theta, &m.converged)
                                 : drift_f_series(s, beta, params.theta);
    const double scale = params.sigma * params.sigma / (2.0 * params.lambda);
    m.value = f * std::exp(std::lgamma(s) + 0.5 * s * std::log(scale));
    return m;
}

double drift_mellin_recurrence_residual(double s, const ModelParams& params, bool use_product)
{
    const double m0 = drift_mellin_unnormalized(s, params, use_product).value;
    const double m1 = drift_mellin_unnormalized(s + 1.0, params, use_product).value;
    const double m2 = drift_mellin_unnormalized(s + 2.0, params, use_product).value;
    const double t1 = params.sigma * params.sigma * s * (s + 1.0) * m0;
    const double t2 = 2.0 * params.mu * (s + 1.0) * m1;
    const double t3 = 2.0 * params.lambda * a_of(s + 1.0, params.theta) * m2;
    const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
    return std::abs(t1 + t2 - t3) / scale;
}

}  // namespace opdyn::drift
