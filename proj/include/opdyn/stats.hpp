#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace opdyn {
struct DensitySeries;
}

namespace opdyn::stats {

using Cdf = std::function<double(double)>;

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F| (both one-sided
/// deviations at each jump of F_n). Throws on an empty sample.
double ks_distance(std::vector<double> sample, const Cdf& cdf);
double ks_distance_sorted(const std::vector<double>& sorted, const Cdf& cdf);

/// Two-sample statistic sup |F_n - G_m|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic Kolmogorov critical value at level `alpha`:
/// sqrt(-ln(alpha/2)/2) / sqrt(n); about 1.628/sqrt(n) at 1%.
double ks_critical_value(std::size_t n, double alpha = 0.01);
double ks_critical_value_two_sample(std::size_t n, std::size_t m, double alpha = 0.01);

/// CDF tabulated from a density: cumulative Gauss-Kronrod integrals on an
/// adaptively bisected grid, cubic Hermite interpolation with the density as
/// slope (Fritsch-Carlson limited, so it stays monotone). Below the grid the
/// CDF is 0, above it the last tabulated value.
class TabulatedCdf
{
  public:
    /// `nodes` is a sorted initial grid; intervals are bisected until the
    /// interpolant matches the integral at midpoints within `tol`.
    TabulatedCdf(const std::function<double(double)>& density, std::vector<double> nodes, double tol = 1e-10);

    double operator()(double x) const;
    double lower() const { return x_.front(); }
    double upper() const { return x_.back(); }
    double total_mass() const { return f_.back(); }
    std::size_t size() const { return x_.size(); }

  private:
    std::vector<double> x_;
    std::vector<double> f_;
    std::vector<double> d_;
};

/// Nodes center +- scale*2^k inside [lo, hi], plus lo and hi.
std::vector<double> geometric_nodes(double lo, double hi, double center, double scale);

/// CDF of a (symmetric) series density over [-x_c, x_c], x_c = tail_cutoff.
TabulatedCdf reference_cdf(const DensitySeries& d);

/// (1/n) sum exp(i xi x_j) for each xi.
std::vector<std::complex<double>> empirical_cf(const std::vector<double>& sample, const std::vector<double>& xi_grid);

/// int |F_n - F| dx. `lo`/`hi` bound the support used for the tails (F is
/// taken as 0 below lo and 1 above hi).
double wasserstein1(std::vector<double> sample, const Cdf& cdf, double lo, double hi);

struct Summary
{
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double mean_std_error = 0.0;
};

Summary summarize(const std::vector<double>& sample);

struct Estimate
{
    double value = 0.0;
    double std_error = 0.0;
};

/// Pearson correlation of the whole sample; the standard error comes from
/// the spread of the correlation over `batches` equal consecutive batches.
Estimate correlation(const std::vector<double>& x, const std::vector<double>& y, std::size_t batches = 100);

struct ComparisonReport
{
    double ks_distance = 0.0;
    double wasserstein1 = 0.0;
    double cf_sup_error = 0.0;
    std::size_t sample_count = 0;
    std::string reference;
};

/// KS and W1 against `cdf`; the CF sup error over `xi_grid` if `cf` is set.
ComparisonReport compare(const std::vector<double>& sample,
                         const Cdf& cdf,
                         double lo,
                         double hi,
                         const std::function<std::complex<double>(double)>& cf,
                         const std::vector<double>& xi_grid,
                         std::string reference);

}  // namespace opdyn::stats
