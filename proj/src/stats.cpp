#include "opdyn/stats.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <stdexcept>

#include "opdyn/quadrature.hpp"
#include "opdyn/stationary.hpp"

namespace opdyn::stats {

double ks_distance(std::vector<double> sample, const Cdf& cdf)
{
    std::sort(sample.begin(), sample.end());
    return ks_distance_sorted(sample, cdf);
}

double ks_distance_sorted(const std::vector<double>& sorted, const Cdf& cdf)
{
    if (sorted.empty())
        throw std::invalid_argument("ks_distance: empty sample");
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i)
    {
        const double f = cdf(sorted[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size())
    {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_critical_value(std::size_t n, double alpha)
{
    return std::sqrt(-std::log(alpha / 2.0) / 2.0) / std::sqrt(static_cast<double>(n));
}

double ks_critical_value_two_sample(std::size_t n, std::size_t m, double alpha)
{
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return std::sqrt(-std::log(alpha / 2.0) / 2.0) * std::sqrt((nn + mm) / (nn * mm));
}

TabulatedCdf::TabulatedCdf(const std::function<double(double)>& density, std::vector<double> nodes, double tol)
{
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    if (nodes.size() < 2)
        throw std::invalid_argument("TabulatedCdf: need at least two nodes");

    x_.push_back(nodes.front());
    f_.push_back(0.0);
    d_.push_back(density(nodes.front()));

    // Bisect [a, b] until the Hermite midpoint agrees with the integral.
    std::function<void(double, double, double, double, double, double, int)> refine;
    refine = [&](double a, double b, double fa, double iab, double pa, double pb, int depth) {
        const double m = 0.5 * (a + b);
        const double pm = density(m);
        const double iam = quad::integrate(density, a, m, 1e-12);
        const double imb = quad::integrate(density, m, b, 1e-12);
        const double hermite = fa + 0.5 * iab + (b - a) * (pa - pb) / 8.0;
        if (depth >= 50 || std::abs(hermite - (fa + iam)) < tol || m <= a || m >= b)
        {
            x_.push_back(m);
            f_.push_back(fa + iam);
            d_.push_back(pm);
            x_.push_back(b);
            f_.push_back(fa + iam + imb);
            d_.push_back(pb);
            return;
        }
        refine(a, m, fa, iam, pa, pm, depth + 1);
        refine(m, b, f_.back(), imb, pm, pb, depth + 1);
    };

    for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
    {
        const double a = nodes[k];
        const double b = nodes[k + 1];
        refine(a, b, f_.back(), quad::integrate(density, a, b, 1e-12), d_.back(), density(b), 0);
    }

    // Quadrature noise can still leave ulp-level dips.
    for (std::size_t i = 1; i < f_.size(); ++i)
        f_[i] = std::max(f_[i], f_[i - 1]);

    // Fritsch-Carlson limiter on the slopes.
    for (std::size_t i = 0; i + 1 < x_.size(); ++i)
    {
        const double delta = (f_[i + 1] - f_[i]) / (x_[i + 1] - x_[i]);
        if (delta <= 0.0)
        {
            d_[i] = 0.0;
            d_[i + 1] = 0.0;
            continue;
        }
        const double a = d_[i] / delta;
        const double b = d_[i + 1] / delta;
        const double r = a * a + b * b;
        // a little inside the a^2 + b^2 = 9 circle so rounding cannot cross it
        if (r > 8.9)
        {
            const double t = std::sqrt(8.9 / r);
            d_[i] = t * a * delta;
            d_[i + 1] = t * b * delta;
        }
    }
}

double TabulatedCdf::operator()(double x) const
{
    if (x <= x_.front())
        return 0.0;
    if (x >= x_.back())
        return std::min(1.0, f_.back());
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    // Increment form; the limited interpolant stays within its end values,
    // and clamping there keeps rounding from breaking monotonicity.
    const double rise = (3 * t2 - 2 * t3) * (f_[i + 1] - f_[i]) + (t3 - 2 * t2 + t) * h * d_[i]
                        + (t3 - t2) * h * d_[i + 1];
    const double v = f_[i] + rise;
    return std::clamp(std::clamp(v, f_[i], f_[i + 1]), 0.0, 1.0);
}

std::vector<double> geometric_nodes(double lo, double hi, double center, double scale)
{
    std::vector<double> nodes{lo, hi};
    if (center > lo && center < hi)
        nodes.push_back(center);
    for (int k = -30; k < 1100; ++k)
    {
        const double off = scale * std::ldexp(1.0, k);
        bool any = false;
        if (center + off < hi && center + off > lo)
        {
            nodes.push_back(center + off);
            any = true;
        }
        if (center - off > lo && center - off < hi)
        {
            nodes.push_back(center - off);
            any = true;
        }
        if (!any && off > hi - lo)
            break;
    }
    std::sort(nodes.begin(), nodes.end());
    return nodes;
}

TabulatedCdf reference_cdf(const DensitySeries& d)
{
    const double xc = d.tail_cutoff(1e-16);
    const double scale = std::pow(1.0 / d.scales.front(), 2.0 / d.beta);
    return TabulatedCdf([&d](double x) { return d.evaluate(x); }, geometric_nodes(-xc, xc, 0.0, scale));
}

std::vector<std::complex<double>> empirical_cf(const std::vector<double>& sample, const std::vector<double>& xi_grid)
{
    if (sample.empty())
        throw std::invalid_argument("empirical_cf: empty sample");
    std::vector<std::complex<double>> out;
    out.reserve(xi_grid.size());
    const double n = static_cast<double>(sample.size());
    for (double xi : xi_grid)
    {
        double re = 0.0;
        double im = 0.0;
        for (double x : sample)
        {
            re += std::cos(xi * x);
            im += std::sin(xi * x);
        }
        out.emplace_back(re / n, im / n);
    }
    return out;
}

double wasserstein1(std::vector<double> sample, const Cdf& cdf, double lo, double hi)
{
    if (sample.empty())
        throw std::invalid_argument("wasserstein1: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    using GL = boost::math::quadrature::gauss<double, 10>;

    double total = 0.0;
    const double left = std::min(lo, sample.front());
    if (sample.front() > left)
        total += quad::integrate(cdf, left, sample.front(), 1e-10);
    for (std::size_t i = 0; i + 1 < sample.size(); ++i)
    {
        const double a = sample[i];
        const double b = sample[i + 1];
        if (b <= a)
            continue;
        const double level = (static_cast<double>(i) + 1.0) / n;
        total += GL::integrate([&](double x) { return std::abs(level - cdf(x)); }, a, b);
    }
    const double right = std::max(hi, sample.back());
    if (right > sample.back())
        total += quad::integrate([&](double x) { return 1.0 - cdf(x); }, sample.back(), right, 1e-10);
    return total;
}

Summary summarize(const std::vector<double>& sample)
{
    Summary s;
    s.n = sample.size();
    if (sample.empty())
        return s;
    const double n = static_cast<double>(s.n);
    double sum = 0.0;
    for (double x : sample)
        sum += x;
    s.mean = sum / n;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double x : sample)
    {
        const double d = x - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    s.variance = s.n > 1 ? m2 * n / (n - 1.0) : 0.0;
    s.skewness = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
    s.excess_kurtosis = m2 > 0 ? m4 / (m2 * m2) - 3.0 : 0.0;
    s.mean_std_error = std::sqrt(s.variance / n);
    return s;
}

namespace {

double pearson(const double* x, const double* y, std::size_t n)
{
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

Estimate correlation(const std::vector<double>& x, const std::vector<double>& y, std::size_t batches)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("correlation: need two samples of equal size >= 2");
    Estimate e;
    e.value = pearson(x.data(), y.data(), x.size());
    const std::size_t len = x.size() / std::max<std::size_t>(batches, 1);
    if (batches < 2 || len < 2)
        return e;
    std::vector<double> r;
    for (std::size_t b = 0; b < batches; ++b)
        r.push_back(pearson(x.data() + b * len, y.data() + b * len, len));
    const Summary s = summarize(r);
    e.std_error = std::sqrt(s.variance / static_cast<double>(batches));
    return e;
}

ComparisonReport compare(const std::vector<double>& sample,
                         const Cdf& cdf,
                         double lo,
                         double hi,
                         const std::function<std::complex<double>(double)>& cf,
                         const std::vector<double>& xi_grid,
                         std::string reference)
{
    ComparisonReport r;
    r.sample_count = sample.size();
    r.reference = std::move(reference);
    r.ks_distance = ks_distance(sample, cdf);
    r.wasserstein1 = wasserstein1(sample, cdf, lo, hi);
    if (cf && !xi_grid.empty())
    {
        const auto emp = empirical_cf(sample, xi_grid);
        for (std::size_t k = 0; k < xi_grid.size(); ++k)
            r.cf_sup_error = std::max(r.cf_sup_error, std::abs(emp[k] - cf(xi_grid[k])));
    }
    return r;
}

}  // namespace opdyn::stats
