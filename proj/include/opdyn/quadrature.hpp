#pragma once

#include <functional>

namespace opdyn::quad {

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (15/31) on [a, b], relative tolerance `tol`.
double integrate(const Integrand& f, double a, double b, double tol = 1e-13, unsigned max_depth = 15);

/// Integral over [a, inf). [a, a + scale] is cut into pieces halving towards
/// a (so an integrable endpoint singularity or kink at a costs little), and
/// the rest into pieces of doubling length; stops after a piece contributes
/// less than abs_tol (and at least `min_pieces` outer pieces are done).
double integrate_to_infinity(const Integrand& f,
                             double a,
                             double scale,
                             double abs_tol = 1e-15,
                             double tol = 1e-13,
                             int min_pieces = 8);

/// Integral between `singular` and `other` (either order), with pieces
/// halving towards `singular` for an integrable endpoint singularity there.
double integrate_graded(const Integrand& f, double singular, double other, double tol = 1e-13);

/// Sum of `integrate` over consecutive breakpoints.
double integrate_pieces(const Integrand& f, const double* breaks, int n_breaks, double tol = 1e-13);

}  // namespace opdyn::quad
