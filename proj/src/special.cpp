#include "opdyn/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace opdyn::special {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Taylor coefficients of 1/Gamma(1+x) about 0.
constexpr std::array<double, 27> kRecipGamma = {
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
};

struct TemmeGammas
{
    double gam1;   // (1/G(1-mu) - 1/G(1+mu)) / (2 mu)
    double gam2;   // (1/G(1-mu) + 1/G(1+mu)) / 2
    double gampl;  // 1/G(1+mu)
    double gammi;  // 1/G(1-mu)
};

// Even/odd split of the 1/Gamma(1+x) series avoids the 0/0 in gam1 at mu = 0.
TemmeGammas temme_gammas(double mu)
{
    const double m2 = mu * mu;
    double even = 0.0;
    double odd = 0.0;
    double pe = 1.0;
    for (std::size_t k = 0; k < kRecipGamma.size(); k += 2)
    {
        even += kRecipGamma[k] * pe;
        if (k + 1 < kRecipGamma.size())
            odd += kRecipGamma[k + 1] * pe;
        pe *= m2;
    }
    // 1/G(1+mu) = even + mu*odd, 1/G(1-mu) = even - mu*odd
    return {-odd, even, even + mu * odd, even - mu * odd};
}

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2.
void bessel_k_pair(double mu, double x, double& k_mu, double& k_mu1)
{
    constexpr int max_iter = 10000;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;

    if (x <= 2.0)
    {
        const double x2 = 0.5 * x;
        const double pimu = std::numbers::pi * mu;
        const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
        double d = -std::log(x2);
        double e = mu * d;
        const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
        const TemmeGammas g = temme_gammas(mu);
        double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / g.gampl;
        double q = 0.5 / (e * g.gammi);
        double c = 1.0;
        d = x2 * x2;
        double sum1 = p;
        int i = 1;
        for (; i <= max_iter; ++i)
        {
            const double fi = i;
            ff = (fi * ff + p + q) / (fi * fi - mu * mu);
            c *= d / fi;
            p /= fi - mu;
            q /= fi + mu;
            const double del = c * ff;
            sum += del;
            const double del1 = c * (p - fi * ff);
            sum1 += del1;
            if (std::abs(del) < std::abs(sum) * kEps)
                break;
        }
        if (i > max_iter)
            throw std::runtime_error("bessel_k: series failed to converge");
        k_mu = sum;
        k_mu1 = sum1 * xi2;
        return;
    }

    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu * mu;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 2;
    for (; i <= max_iter; ++i)
    {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps)
            break;
    }
    if (i > max_iter)
        throw std::runtime_error("bessel_k: continued fraction failed to converge");
    h = a1 * h;
    k_mu = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
    k_mu1 = k_mu * (mu + x + 0.5 - h) * xi;
}

}  // namespace

double bessel_k(double nu, double z)
{
    if (!(z > 0))
        throw std::domain_error("bessel_k: argument must be > 0");
    if (!(nu >= 0))
        throw std::domain_error("bessel_k: order must be >= 0");

    const int nl = static_cast<int>(nu + 0.5);
    const double mu = nu - nl;
    double k_mu = 0.0;
    double k_mu1 = 0.0;
    bessel_k_pair(mu, z, k_mu, k_mu1);

    const double xi2 = 2.0 / z;
    for (int i = 1; i <= nl; ++i)
    {
        const double next = (mu + i) * xi2 * k_mu1 + k_mu;
        k_mu = k_mu1;
        k_mu1 = next;
    }
    return k_mu;
}

double bessel_k_scaled_power(double nu, double z)
{
    if (z == 0.0)
    {
        if (!(nu > 0))
            throw std::domain_error("bessel_k_scaled_power: K_0 diverges at 0");
        return 0.5 * std::tgamma(nu);
    }
    if (z > 740.0)
        return 0.0;
    return std::pow(0.5 * z, nu) * bessel_k(nu, z);
}

double gamma(double x)
{
    return std::tgamma(x);
}

}  // namespace opdyn::special
