#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

namespace pbs {

/// Nodes and weights of a quadrature rule.
struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Gauss-Legendre rule on [-1, 1]. Newton iteration on the Legendre
/// recurrence; accurate to machine precision for n up to a few thousand.
inline QuadRule gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[n - 1 - i] = r.w[i];
    }
    return r;
}

/// Gauss-Hermite rule for integrals of the form  int f(t) e^{-t^2} dt,
/// returned with the e^{t^2} factor folded into the weights:
///   int g(t) dt  ~=  sum w[i] * g(x[i])
/// whenever g already carries Gaussian decay. Using the orthonormal
/// Hermite functions h_k keeps the recurrence overflow-free; the total
/// weight is 1 / (n * h_{n-1}(x_i)^2).
inline QuadRule gauss_hermite_total(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_hermite_total: n must be positive");
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    const std::size_t m = (n + 1) / 2;
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        // standard initial guesses for the largest roots, then step inward
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * r.x[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * r.x[1];
        } else {
            z = 2.0 * z - r.x[i - 2];
        }
        double hnm1 = 0.0;
        for (int it = 0; it < 200; ++it) {
            // h_k(z) with weight e^{-z^2/2} built in
            double h0 = pim4 * std::exp(-0.5 * z * z);
            double h1 = std::sqrt(2.0) * z * h0;
            for (std::size_t k = 1; k + 1 <= n; ++k) {
                const double h2 = std::sqrt(2.0 / (k + 1.0)) * z * h1 -
                                  std::sqrt(static_cast<double>(k) / (k + 1.0)) * h0;
                h0 = h1;
                h1 = h2;
            }
            hnm1 = h0;  // h_{n-1}
            const double dh = std::sqrt(2.0 * n) * h0 - z * h1;  // h_n'(z), but h_n(z)->0
            const double dz = h1 / dh;
            z -= dz;
            if (std::abs(dz) < 1e-14 * (1.0 + std::abs(z))) break;
        }
        r.x[i] = z;
        r.x[n - 1 - i] = -z;
        const double wt = 1.0 / (n * hnm1 * hnm1);
        r.w[i] = wt;
        r.w[n - 1 - i] = wt;
    }
    if (n % 2 == 1) r.x[m - 1] = 0.0;
    return r;
}

/// Cached rules; node generation is cheap but these get hit in loops.
inline const QuadRule& gauss_legendre_cached(std::size_t n) {
    static std::map<std::size_t, QuadRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
    return it->second;
}

inline const QuadRule& gauss_hermite_cached(std::size_t n) {
    static std::map<std::size_t, QuadRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_hermite_total(n)).first;
    return it->second;
}

/// int_a^b f, fixed-order Gauss-Legendre.
template <typename F>
double integrate_gl(F&& f, double a, double b, std::size_t n) {
    const QuadRule& r = gauss_legendre_cached(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) acc += r.w[i] * f(mid + half * r.x[i]);
    return half * acc;
}

/// Composite rule over sorted breakpoints.
template <typename F>
double integrate_panels(F&& f, const std::vector<double>& breaks, std::size_t n_per_panel) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] > breaks[i]) acc += integrate_gl(f, breaks[i], breaks[i + 1], n_per_panel);
    }
    return acc;
}

} // namespace pbs
