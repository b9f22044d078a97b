#pragma once

#include <algorithm>
#include <cmath>

#include "pbs/quadrature.hpp"

namespace pbs {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Standard normal density.
inline double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

/// Standard normal CDF via the complementary error function.
///
/// erfc keeps full relative accuracy in the left tail, so N(x) does not
/// underflow to 0 until x ~ -37.5. Absolute error is a few ulp of erfc,
/// below 1e-15 over |x| <= 8.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

namespace detail {

/// exp(z) - 1 - z - z^2/2, full relative accuracy near 0.
inline double expm1_m1_m2(double z) {
    if (std::abs(z) < 0.5) {
        double term = z * z * z / 6.0;
        double sum = term;
        for (int k = 4; k < 24; ++k) {
            term *= z / k;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return std::expm1(z) - z - 0.5 * z * z;
}

/// N(a+h) - N(a) as the integral of the density over [a, a+h].
///
/// Plain subtraction of two CDF values loses all significance when |h|
/// is small; integrating the (positive) density with positive weights
/// keeps relative accuracy for every h.
inline double norm_cdf_diff(double a, double h) {
    if (h == 0.0) return 0.0;
    const double lo = std::min(0.0, h);
    const double hi = std::max(0.0, h);
    const int panels = 1 + static_cast<int>((hi - lo) / 0.5);
    double acc = 0.0;
    const double step = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        acc += integrate_gl([a](double u) { return norm_pdf(a + u); },
                            lo + p * step, lo + (p + 1) * step, 24);
    }
    return h > 0.0 ? acc : -acc;
}

/// P(a, h) = [N(a+h) - N(a)]/h - phi(a), the mean excess of the density
/// over [a, a+h] relative to its left endpoint. O(h) as h -> 0; evaluated
/// without cancellation for every h:
///   P = phi(a) * int_0^1 expm1(-a h t - (h t)^2 / 2) dt        (|h| <= 1)
inline double phi_mean_excess(double a, double h) {
    if (h == 0.0) return 0.0;
    const double pa = norm_pdf(a);
    if (pa == 0.0) {
        // density underflows at the left endpoint; fall back to the integral
        return norm_cdf_diff(a, h) / h;
    }
    if (std::abs(h) <= 1.0) {
        const double scale = std::abs(h) * (std::abs(a) + 0.5 * std::abs(h));
        const int panels = 1 + static_cast<int>(scale / 5.0);
        double acc = 0.0;
        const double step = 1.0 / panels;
        for (int p = 0; p < panels; ++p) {
            acc += integrate_gl(
                [a, h](double t) {
                    const double u = h * t;
                    return std::expm1(-a * u - 0.5 * u * u);
                },
                p * step, (p + 1) * step, 24);
        }
        return pa * acc;
    }
    return (norm_cdf_diff(a, h) - h * pa) / h;
}

/// R(a, h) = [phi(a+h) - phi(a) + a h phi(a)] / h^2.  O(1) as h -> 0 with
/// limit phi(a) (a^2 - 1)/2. Uses phi(a+h) = phi(a) e^{m}, m = -a h - h^2/2:
///   R = phi(a) [ ((a + h/2)^2 - 1)/2 + (e^m - 1 - m - m^2/2)/h^2 ]
inline double phi_second_ratio(double a, double h) {
    const double pa = norm_pdf(a);
    if (pa == 0.0) return 0.0;
    if (h == 0.0) return pa * (a * a - 1.0) * 0.5;
    const double m = -a * h - 0.5 * h * h;
    const double c = a + 0.5 * h;
    return pa * (0.5 * (c * c - 1.0) + expm1_m1_m2(m) / (h * h));
}

} // namespace detail
} // namespace pbs
