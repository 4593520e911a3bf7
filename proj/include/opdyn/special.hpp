#pragma once

namespace opdyn::special {

/// Modified Bessel function of the second kind K_nu(z) for nu >= 0, z > 0.
/// Temme's series for z <= 2 and Steed's continued fraction for z > 2 give
/// K_mu and K_{mu+1} with |mu| <= 1/2; upward recurrence reaches nu.
/// Throws std::domain_error for z <= 0 or nu < 0.
double bessel_k(double nu, double z);

/// (z/2)^nu K_nu(z), finite on z >= 0 with the limit Gamma(nu)/2 at z = 0
/// (nu > 0). Decreasing in z; this is the shape of every term in the
/// power-law stationary density.
double bessel_k_scaled_power(double nu, double z);

/// Gamma function (glibc tgamma).
double gamma(double x);

}  // namespace opdyn::special
