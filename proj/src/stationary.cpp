#include "opdyn/stationary.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "opdyn/quadrature.hpp"
#include "opdyn/special.hpp"

namespace opdyn {

namespace {

constexpr int kMaxTerms = 500;
constexpr double kSeriesTol = 1e-14;

// prod_{k>=0} (1 - theta^-(start + k*step)), run until the factors are 1 in
// double precision (and for at least min_factors factors).
double q_product(double theta, double start, double step, int min_factors = 0)
{
    const double log_theta = std::log(theta);
    double prod = 1.0;
    for (int k = 0;; ++k)
    {
        const double t = std::exp(-(start + k * step) * log_theta);
        if (k >= min_factors && t < 1e-17)
            break;
        prod *= 1.0 - t;
        if (k > 100000)
            throw std::runtime_error("q_product: no convergence");
    }
    return prod;
}

void require_zero_drift(const ModelParams& params)
{
    if (params.mu != 0.0)
        throw ConfigError("mu", "the closed-form stationary density needs mu = 0");
}

void require_alpha(double alpha)
{
    if (!(alpha >= 0.0) || !(alpha < 2.0))
        throw ConfigError("alpha", "closed form exists only for 0 <= alpha < 2");
}

// Fills coefficients, weights (prefactor * a_n / theta^n) and truncation.
// `envelope0` is the value of a term's shape function at x = 0.
void fill_series(DensitySeries& d, double alpha, double prefactor, double envelope0, int extra_terms)
{
    const double theta = d.params.theta;
    double a = 1.0;
    double theta_n = 1.0;
    double partial = 0.0;
    int stop = -1;
    for (int n = 0; n < kMaxTerms; ++n)
    {
        if (n > 0)
            a = coeff_a(n, theta, alpha);
        const double w = a / theta_n;
        if (stop < 0 && n > 0 && std::abs(w) < kSeriesTol * std::abs(partial))
            stop = n;
        if (stop >= 0 && n > stop + extra_terms)
        {
            d.term_bound = std::abs(prefactor * w * envelope0);
            break;
        }
        d.coefficients.push_back(a);
        d.weights.push_back(prefactor * w);
        partial += w;
        theta_n *= theta;
    }
    if (stop < 0)
        throw std::runtime_error("density series did not converge");
    d.truncation = static_cast<int>(d.coefficients.size()) - 1;
}

// phi sum w_n e^{-r_n y} / r_n for y >= 0 (upper tail mass of the exponential form).
double exponential_tail(const DensitySeries& d, double y)
{
    double sum = 0.0;
    for (std::size_t n = 0; n < d.weights.size(); ++n)
        sum += d.weights[n] * std::exp(-d.scales[n] * y) / d.scales[n];
    return sum;
}

// sum w_n e^{-r_n y} / r_n^2 for y >= 0.
double exponential_tail2(const DensitySeries& d, double y)
{
    double sum = 0.0;
    for (std::size_t n = 0; n < d.weights.size(); ++n)
        sum += d.weights[n] * std::exp(-d.scales[n] * y) / (d.scales[n] * d.scales[n]);
    return sum;
}

// Typical length scale of the density: where the leading z_n reaches 1.
double length_scale(const DensitySeries& d)
{
    return std::pow(1.0 / d.scales.front(), 2.0 / d.beta);
}

}  // namespace

double coeff_a(int n, double theta, double alpha)
{
    if (n < 0)
        throw std::invalid_argument("coeff_a: n must be >= 0");
    if (!(theta > 1))
        throw ConfigError("theta", "must be > 1");
    require_alpha(alpha);
    const double beta = 2.0 - alpha;
    const double log_theta = std::log(theta);
    const double tb = std::exp(beta * log_theta);
    double a = 1.0;
    for (int k = 1; k <= n; ++k)
        a *= tb / -std::expm1(k * beta * log_theta);
    return a;
}

double normalizer_phi(const ModelParams& params, double alpha)
{
    params.validate();
    require_alpha(alpha);
    const double beta = 2.0 - alpha;
    const double nu = 1.0 / beta;
    const double c = 2.0 * params.lambda / (params.sigma * params.sigma * beta * beta);
    const double lead = std::pow(c, nu) / (2.0 * std::tgamma(nu) * std::tgamma(2.0 * nu));
    return lead / q_product(params.theta, 2.0, beta);
}

double normalizer_phi_exponential(const ModelParams& params)
{
    params.validate();
    const double lead = std::sqrt(2.0 * params.lambda) / (2.0 * params.sigma);
    return lead / q_product(params.theta, 2.0, 2.0);
}

double DensitySeries::evaluate(double x) const
{
    const double ax = std::abs(x);
    double sum = 0.0;
    if (kind == DensityKind::Exponential)
    {
        for (std::size_t n = 0; n < weights.size(); ++n)
        {
            const double e = std::exp(-scales[n] * ax);
            if (e == 0.0)
                break;
            sum += weights[n] * e;
        }
        return sum;
    }

    if (ax == 0.0)
    {
        const double g = 0.5 * std::tgamma(nu);
        for (double w : weights)
            sum += w * g;
        return sum;
    }
    const double t = std::pow(ax, 0.5 * beta);
    for (std::size_t n = 0; n < weights.size(); ++n)
    {
        const double z = scales[n] * t;
        if (z > 740.0)
            break;
        sum += weights[n] * special::bessel_k_scaled_power(nu, z);
    }
    return sum;
}

double DensitySeries::cdf(double x) const
{
    if (kind != DensityKind::Exponential)
        throw std::logic_error("DensitySeries::cdf: exact CDF only for the exponential form");
    if (x >= 0)
        return 1.0 - exponential_tail(*this, x);
    return exponential_tail(*this, -x);
}

double DensitySeries::tail_cutoff(double eps) const
{
    const double target = -std::log(eps);
    if (kind == DensityKind::Exponential)
        return target / scales.front();
    // (z/2)^nu K_nu(z) ~ sqrt(pi/2) 2^-nu z^(nu - 1/2) e^-z for large z; solve
    // for the z where this falls to eps times its value at 0.
    const double log0 = std::log(0.5 * std::tgamma(nu));
    double z = target;
    for (int i = 0; i < 50; ++i)
    {
        const double lead = 0.5 * std::log(std::numbers::pi / 2.0) - nu * std::log(2.0)
                            + (nu - 0.5) * std::log(z);
        z = std::max(1.0, target + lead - log0);
    }
    return std::pow(z / scales.front(), 2.0 / beta);
}

DensitySeries make_density_exponential(const ModelParams& params, int extra_terms)
{
    params.validate();
    require_zero_drift(params);
    DensitySeries d;
    d.kind = DensityKind::Exponential;
    d.params = params;
    d.params.alpha = 0.0;
    d.beta = 2.0;
    d.nu = 0.5;
    d.phi = normalizer_phi_exponential(params);
    fill_series(d, 0.0, d.phi, 1.0, extra_terms);
    const double r0 = std::sqrt(2.0 * params.lambda) / params.sigma;
    double th = 1.0;
    for (std::size_t n = 0; n < d.weights.size(); ++n, th *= params.theta)
        d.scales.push_back(r0 * th);
    return d;
}

DensitySeries make_density_besselk(const ModelParams& params, double alpha, int extra_terms)
{
    params.validate();
    require_zero_drift(params);
    require_alpha(alpha);
    DensitySeries d;
    d.kind = DensityKind::BesselK;
    d.params = params;
    d.params.alpha = alpha;
    d.beta = 2.0 - alpha;
    d.nu = 1.0 / d.beta;
    d.phi = normalizer_phi(params, alpha);
    fill_series(d, alpha, 2.0 * d.phi * d.beta, 0.5 * std::tgamma(d.nu), extra_terms);
    const double c = 2.0 * params.lambda / (params.sigma * params.sigma * d.beta * d.beta);
    const double tb = std::pow(params.theta, d.beta);
    double th = 1.0;
    for (std::size_t n = 0; n < d.weights.size(); ++n, th *= tb)
        d.scales.push_back(2.0 * std::sqrt(c * th));
    return d;
}

double density_exponential(double x, const ModelParams& params)
{
    return make_density_exponential(params).evaluate(x);
}

double density_besselk(double x, const ModelParams& params, double alpha)
{
    return make_density_besselk(params, alpha).evaluate(x);
}

double normalization_check(const DensitySeries& d)
{
    const double scale = 0.05 * length_scale(d);
    return 2.0 * quad::integrate_to_infinity([&d](double x) { return d.evaluate(x); }, 0.0, scale, 1e-17);
}

double mellin_quadrature(const DensitySeries& d, double s)
{
    const double scale = 0.05 * length_scale(d);
    return quad::integrate_to_infinity(
        [&d, s](double x) { return x == 0.0 ? (s == 1.0 ? d.evaluate(0.0) : 0.0)
                                            : std::pow(x, s - 1.0) * d.evaluate(x); },
        0.0, scale, 1e-17);
}

std::complex<double> char_function(double xi, const ModelParams& params)
{
    params.validate();
    using C = std::complex<double>;
    C prod = 1.0;
    double tj = 1.0;  // theta^-j
    for (int j = 0; j < 10000; ++j)
    {
        const C denom(params.lambda + 0.5 * params.sigma * params.sigma * xi * xi * tj * tj,
                      -params.mu * xi * tj);
        const C factor = params.lambda / denom;
        prod *= factor;
        if (std::abs(factor - 1.0) < 1e-17)
            break;
        tj /= params.theta;
    }
    return prod;
}

MellinValue mellin_density(double s, const ModelParams& params, double alpha)
{
    params.validate();
    require_zero_drift(params);
    require_alpha(alpha);
    if (!(s > 0))
        throw ConfigError("s", "Mellin abscissa must be > 0");
    const double beta = 2.0 - alpha;
    const double c = 2.0 * params.lambda / (params.sigma * params.sigma * beta * beta);
    const double log_m = std::log(normalizer_phi(params, alpha)) + std::lgamma(s / beta)
                         + std::lgamma((s + 1.0) / beta) - (s / beta) * std::log(c);
    return {s, std::exp(log_m) * q_product(params.theta, s + 1.0, beta)};
}

EulerIdentityResult euler_identity_check(double theta, double s, int n_terms)
{
    if (!(theta > 1))
        throw ConfigError("theta", "must be > 1");
    if (n_terms < 0)
        throw ConfigError("N", "must be >= 0");
    EulerIdentityResult r;
    r.lhs = q_product(theta, s, 1.0, n_terms);

    const double ts = std::pow(theta, -s);
    double coeff = 1.0;  // prod_{k=1..n} theta/(1-theta^k)
    double tsn = 1.0;    // theta^{-sn}
    double sum = 0.0;
    const double log_theta = std::log(theta);
    for (int n = 0; n <= n_terms; ++n)
    {
        if (n > 0)
        {
            coeff *= theta / -std::expm1(n * log_theta);
            tsn *= ts;
        }
        sum += tsn * coeff;
    }
    r.rhs = sum;
    r.gap = std::abs(r.lhs - r.rhs);
    return r;
}

ThreeAgentDensity::ThreeAgentDensity(const MultiAgentConfig& cfg, const ModelParams& params)
    : s1_(cfg.s1), s3_(cfg.s3)
{
    cfg.validate();
    if (params.theta != 2.0)
        throw ConfigError("theta", "the three-agent model needs theta = 2");
    if (cfg.q != 0.5 && cfg.s3 != cfg.s1)
        throw ConfigError("q", "the three-agent closed form needs q = 0.5");
    base_ = make_density_exponential(params);
}

double ThreeAgentDensity::operator()(double x) const
{
    const double len = s3_ - s1_;
    if (len == 0.0)
        return base_.evaluate(x - s1_);
    // (F(a) - F(b)) / len with a = x - s1 > b = x - s3, written with tail
    // masses so neither tail cancels.
    const double a = x - s1_;
    const double b = x - s3_;
    double diff;
    if (b >= 0)
        diff = exponential_tail(base_, b) - exponential_tail(base_, a);
    else if (a <= 0)
        diff = exponential_tail(base_, -a) - exponential_tail(base_, -b);
    else
        diff = 1.0 - exponential_tail(base_, a) - exponential_tail(base_, -b);
    return diff / len;
}

double ThreeAgentDensity::cdf(double x) const
{
    const double len = s3_ - s1_;
    if (len == 0.0)
        return base_.cdf(x - s1_);
    // G(y) = int_{-inf}^y F = max(y, 0) + sum w_n e^{-r_n|y|} / r_n^2
    auto g = [this](double y) { return std::max(y, 0.0) + exponential_tail2(base_, std::abs(y)); };
    return (g(x - s1_) - g(x - s3_)) / len;
}

}  // namespace opdyn
