#include "opdyn/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

namespace opdyn::quad {

double integrate(const Integrand& f, double a, double b, double tol, unsigned max_depth)
{
    if (a == b)
        return 0.0;
    // Boost 1.74 compares the unscaled [-1, 1] error estimate with a scaled
    // tolerance, which never passes on short intervals; map to [-1, 1] here.
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto g = [&f, mid, half](double t) { return f(mid + half * t); };
    return half * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, -1.0, 1.0, max_depth, tol);
}

double integrate_to_infinity(const Integrand& f,
                             double a,
                             double scale,
                             double abs_tol,
                             double tol,
                             int min_pieces)
{
    if (!(scale > 0))
        throw std::invalid_argument("integrate_to_infinity: scale must be > 0");
    double total = 0.0;
    double inner = scale;
    for (int j = 0; j < 40; ++j)
    {
        total += integrate(f, a + 0.5 * inner, a + inner, tol);
        inner *= 0.5;
    }
    total += integrate(f, a, a + inner, tol);

    double lo = a + scale;
    double width = scale;
    // 1100 doublings reach past the double range; anything still contributing
    // by then has no finite integral.
    for (int k = 0; k < 1100; ++k)
    {
        const double hi = lo + width;
        if (!std::isfinite(hi))
            break;
        const double piece = integrate(f, lo, hi, tol);
        total += piece;
        if (k + 1 >= min_pieces && std::abs(piece) < abs_tol)
            return total;
        lo = hi;
        width *= 2.0;
    }
    throw std::runtime_error("integrate_to_infinity: tail did not decay");
}

double integrate_graded(const Integrand& f, double singular, double other, double tol)
{
    double total = 0.0;
    double inner = other - singular;
    for (int j = 0; j < 200; ++j)
    {
        total += integrate(f, singular + 0.5 * inner, singular + inner, tol);
        inner *= 0.5;
    }
    total += integrate(f, singular, singular + inner, tol);
    // the pieces run from `singular` to `other`; report the integral over the interval
    return other >= singular ? total : -total;
}

double integrate_pieces(const Integrand& f, const double* breaks, int n_breaks, double tol)
{
    double total = 0.0;
    for (int i = 0; i + 1 < n_breaks; ++i)
        total += integrate(f, breaks[i], breaks[i + 1], tol);
    return total;
}

}  // namespace opdyn::quad
