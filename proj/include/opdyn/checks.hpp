#pragma once

// Invariant checks shared by the CLI self-check and the test suites. Each
// returns the measured value next to its threshold.

#include <cstdint>
#include <string>
#include <vector>

#include "opdyn/model.hpp"

namespace opdyn::checks {

struct CheckResult
{
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

/// |int p - 1| < 1e-6.
CheckResult normalization(const ModelParams& params, double alpha);

/// Max relative residual of the stationary ODE on |x| in [0.05, 10] below
/// 1e-6 (C1 for alpha = 0, C2 otherwise). With `perturb` the density is
/// multiplied by 1 + 0.01 x^2 first.
CheckResult ode_residual(const ModelParams& params, double alpha, bool perturb = false);

/// The same residual for p (1 + 0.01 x^2); passes when it exceeds 1e-3.
CheckResult ode_sensitivity(const ModelParams& params, double alpha);

/// Bessel-K form at alpha = 0 against the exponential form on 200 points in
/// [-10, 10], max abs difference below 1e-10.
CheckResult reduction(const ModelParams& params);

/// Euler identity gap below 1e-12 with N = 60.
CheckResult euler(double theta, double s);

/// |M(1) - 1/2| < 1e-10.
CheckResult mellin_unit(const ModelParams& params, double alpha);

/// Relative residual of sigma^2 (s+a)(s+1+a) M(s+a) = 2 lambda (1 - theta^-(s+1+a)) M(s+2) below 1e-8.
CheckResult mellin_functional(const ModelParams& params, double alpha, double s);

/// Closed-form M(s) against quadrature, relative 1e-6.
CheckResult mellin_quadrature(const ModelParams& params, double alpha, double s);

/// int (A f) g = int f (A* g) within 1e-8 for five bump pairs.
CheckResult adjointness(const ModelParams& params, double alpha);

/// Drift machinery at beta: Xi recurrence residual below 1e-8 on s in {1, 1.5, 2}.
CheckResult drift_xi_recurrence(double beta, double theta);

/// Drift Mellin recurrence residual below 1e-8 on s in {1, 1.5, 2}.
CheckResult drift_mellin_recurrence(const ModelParams& params);

/// Zero-drift transform from the drift machinery over the closed form:
/// spread of the ratio on s in {0.5, 1, 1.5, 2, 3} below 1e-8 (relative).
CheckResult drift_zero_reduction(const ModelParams& params);

/// Exact stationary samples against the exponential-form CDF, KS below the
/// 1% critical value.
CheckResult embedded_vs_exponential(const ModelParams& params, std::size_t n, std::uint64_t seed, unsigned threads);

/// Two-sided standard grid: 200 points per side on [0.05, 10].
std::vector<double> standard_grid();

}  // namespace opdyn::checks
