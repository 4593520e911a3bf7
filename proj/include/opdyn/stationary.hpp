#pragma once

// Closed-form stationary laws of the two-agent model with zero drift.
//
// With beta = 2 - alpha the stationary density is
//
//   p(x) = 2 phi beta sum_n (a_n/theta^n) (z_n/2)^nu K_nu(z_n),
//   z_n = 2 sqrt(c theta^(n beta) |x|^beta),  nu = 1/beta,  c = 2 lambda/(sigma^2 beta^2),
//   a_n = prod_{k=1..n} theta^beta / (1 - theta^(k beta)).
//
// For alpha = 0, K_{1/2} is elementary and the series becomes
// phi_e sum_n (a_n/theta^n) exp(-sqrt(2 lambda) theta^n |x| / sigma). The
// normalizers of the two forms differ by 2 sqrt(pi) (Legendre duplication).

#include <complex>
#include <vector>

#include "opdyn/model.hpp"

namespace opdyn {

/// prod_{k=1..n} theta^(2-alpha) / (1 - theta^(k(2-alpha))); a_0 = 1.
double coeff_a(int n, double theta, double alpha);

/// Normalizer of the Bessel-K form.
double normalizer_phi(const ModelParams& params, double alpha);

/// Normalizer of the exponential (alpha = 0) form; equals 2 sqrt(pi) times
/// normalizer_phi(params, 0).
double normalizer_phi_exponential(const ModelParams& params);

enum class DensityKind
{
    Exponential,
    BesselK,
};

/// Truncated series density. Build with make_density_exponential or
/// make_density_besselk; evaluation is thread-safe.
struct DensitySeries
{
    DensityKind kind = DensityKind::Exponential;
    std::vector<double> coefficients;  // a_0..a_N
    double phi = 0.0;
    ModelParams params;
    int truncation = 0;       // N, index of the last kept term
    double term_bound = 0.0;  // first dropped term at x = 0 (its largest value)

    // Per-term constants: prefactor * a_n / theta^n and the rate/scale in z_n.
    std::vector<double> weights;
    std::vector<double> scales;
    double nu = 0.5;
    double beta = 2.0;

    double operator()(double x) const { return evaluate(x); }
    double evaluate(double x) const;

    /// Exact CDF, exponential kind only.
    double cdf(double x) const;

    /// Point beyond which the leading term (and so the density) is below
    /// `eps` times its value at 0.
    double tail_cutoff(double eps = 1e-16) const;
};

/// alpha = 0, mu = 0. `extra_terms` keeps that many terms past the default
/// truncation point.
DensitySeries make_density_exponential(const ModelParams& params, int extra_terms = 0);

/// 0 <= alpha < 2, mu = 0.
DensitySeries make_density_besselk(const ModelParams& params, double alpha, int extra_terms = 0);

double density_exponential(double x, const ModelParams& params);
double density_besselk(double x, const ModelParams& params, double alpha);

/// Integral of the density over the line by quadrature.
double normalization_check(const DensitySeries& d);

/// int_0^inf x^(s-1) p(x) dx by quadrature.
double mellin_quadrature(const DensitySeries& d, double s);

/// prod_j lambda / (lambda - i mu xi / theta^j + sigma^2 xi^2 / (2 theta^(2j))),
/// the characteristic function of the constant-rate stationary law.
std::complex<double> char_function(double xi, const ModelParams& params);

struct MellinValue
{
    double s = 0.0;
    double value = 0.0;
};

/// Closed-form Mellin transform of p restricted to x > 0; M(1) = 1/2.
MellinValue mellin_density(double s, const ModelParams& params, double alpha);

struct EulerIdentityResult
{
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};

/// prod_{k>=0} (1 - theta^-(s+k)) against sum_{n<=N} theta^(-sn) prod_{k=1..n} theta/(1-theta^k).
/// The product runs until its factors are 1 in double precision, and never
/// fewer than N factors.
EulerIdentityResult euler_identity_check(double theta, double s, int n_terms);

/// Constant-rate three-agent stationary density for q = 1/2, theta = 2:
/// the two-agent density convolved with Uniform[s1, s3]. With s1 = s3 it is
/// the two-agent density shifted to s1.
class ThreeAgentDensity
{
  public:
    ThreeAgentDensity(const MultiAgentConfig& cfg, const ModelParams& params);

    double operator()(double x) const;
    double cdf(double x) const;
    const DensitySeries& base() const { return base_; }

  private:
    DensitySeries base_;
    double s1_;
    double s3_;
};

}  // namespace opdyn
