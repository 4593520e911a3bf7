#pragma once

// Mellin transform of the positive part of the stationary law when the drift
// is non-zero (constant rate, alpha = 0).
//
// Writing M(s) = f(s) Gamma(s) (sigma^2/(2 lambda))^(s/2), the non-local ODE
// turns into the three-term recurrence
//
//   f(s) + beta f(s+1) = a(s+1) f(s+2),   a(s) = 1 - theta^-s,
//   beta = sqrt(2) mu / (sigma sqrt(lambda)).
//
// With Psi(s) = f(s+1)/f(s) = gamma(s)(1 + Xi(s)), where gamma(s) is the
// positive root of a(s) g^2 - beta g - 1 = 0, the correction Xi obeys
//
//   1 + Xi(s) = A(s) / (B(s) + Xi(s+1)),
//   A(s) = 1/(a(s+1) gamma(s) gamma(s+1)),  B(s) = 1/(a(s+1) gamma(s+1)^2).
//
// The recurrence also has the exact solution
//
//   f(s) = g^s sum_n c_n theta^(-ns),  g = gamma(inf),  c_0 = 1,
//   c_n = -G theta^(1-2n) c_{n-1} / ((1 - theta^-n)(1 + G theta^-n)),  G = g^2,
//
// which reduces to the zero-drift transform at beta = 0. The backward
// continued fraction picks the minimal solution of the recurrence; that is
// the right one for beta <= 0 only, so for beta > 0 Xi is read off the series.
// M is known only up to a constant factor when mu != 0.

#include "opdyn/model.hpp"

namespace opdyn::drift {

/// sqrt(2) mu / (sigma sqrt(lambda)).
double drift_beta(const ModelParams& params);

/// Positive root of (1 - theta^-s) g^2 - beta g - 1 = 0. Non-increasing in s.
double drift_gamma(double s, double beta, double theta);

/// gamma(s) as s -> inf: (beta + sqrt(beta^2 + 4)) / 2.
double drift_gamma_limit(double beta);

enum class XiMethod
{
    ContinuedFraction,
    Series,
};

struct XiResult
{
    double value = 0.0;
    int depth = 0;  // continued-fraction depth used (0 for the series)
    bool converged = false;
    XiMethod method = XiMethod::ContinuedFraction;
};

/// Xi(s). The continued fraction starts at `depth` and grows by 5 until two
/// depths agree to 1e-10; converged = false if depth 200 is reached first.
/// For beta > 0 the series route is used unless `force` asks otherwise.
XiResult drift_Xi(double s, double beta, double theta, int depth = 10);
XiResult drift_Xi(double s, double beta, double theta, int depth, XiMethod force);

/// Continued fraction truncated at exactly `depth` levels (tail Xi = 0).
double drift_Xi_truncated(double s, double beta, double theta, int depth);

/// f(s) from the series solution.
double drift_f_series(double s, double beta, double theta);

/// f(s) = g^s prod_k g / Psi(s+k), truncated once Psi(s+k) is within 1e-14
/// of g. Psi comes from drift_Xi.
double drift_f_product(double s, double beta, double theta, bool* converged = nullptr);

struct DriftMellin
{
    double value = 0.0;
    bool converged = true;
};

/// f(s) Gamma(s) (sigma^2/(2 lambda))^(s/2), proportional to the Mellin
/// transform of the positive part of the stationary density.
DriftMellin drift_mellin_unnormalized(double s, const ModelParams& params, bool use_product = true);

/// sigma^2 s(s+1) M(s) + 2 mu (s+1) M(s+1) - 2 lambda a(s+1) M(s+2), relative
/// to the largest of the three terms.
double drift_mellin_recurrence_residual(double s, const ModelParams& params, bool use_product = true);

}  // namespace opdyn::drift
