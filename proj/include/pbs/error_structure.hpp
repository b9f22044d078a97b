#pragma once

#include <cmath>
#include <stdexcept>

namespace pbs {

/// The trader's volatility error structure, reduced to three scalars:
/// a scale epsilon, a bias coefficient A[sigma](sigma0) and a variance
/// coefficient Gamma[sigma](sigma0). The perturbed estimate is
///   sigma0 + epsilon * bias_coeff + sqrt(epsilon * var_coeff) * N(0,1).
struct ErrorStructure {
    double epsilon;     ///< dimensionless scale, > 0
    double bias_coeff;  ///< A[sigma](sigma0), any sign
    double var_coeff;   ///< Gamma[sigma](sigma0), >= 0

    ErrorStructure(double epsilon_, double bias_coeff_, double var_coeff_)
        : epsilon(epsilon_), bias_coeff(bias_coeff_), var_coeff(var_coeff_) {
        if (!(epsilon > 0.0) || !std::isfinite(epsilon))
            throw std::invalid_argument("ErrorStructure: epsilon must be positive and finite");
        if (!std::isfinite(bias_coeff))
            throw std::invalid_argument("ErrorStructure: bias_coeff must be finite");
        if (!(var_coeff >= 0.0) || !std::isfinite(var_coeff))
            throw std::invalid_argument("ErrorStructure: var_coeff must be >= 0 and finite");
    }
};

/// Bid/ask placement: half-spread = quantile_mult standard deviations of
/// the propagated price error around mid. quantile_mult = 1 reproduces the
/// "one standard deviation" convention; 0 collapses bid = mid = ask.
struct QuoteConfig {
    double quantile_mult = 1.0;

    QuoteConfig() = default;
    explicit QuoteConfig(double k) : quantile_mult(k) {
        if (!(k >= 0.0) || !std::isfinite(k))
            throw std::invalid_argument("QuoteConfig: quantile_mult must be >= 0 and finite");
    }
};

struct BiasVariance {
    double bias;
    double variance;
};

/// First-order propagation of the error structure through a scalar map F:
///   bias     = eps * (F' A + F'' Gamma / 2)
///   variance = eps * F'^2 Gamma
/// Returned values include the epsilon factor; this is the single place
/// epsilon enters the numerics. F itself drops out at first order.
inline BiasVariance propagate_chain_rule(double /*f_value*/, double f_prime, double f_second,
                                         const ErrorStructure& es) {
    return {es.epsilon * (f_prime * es.bias_coeff + 0.5 * f_second * es.var_coeff),
            es.epsilon * f_prime * f_prime * es.var_coeff};
}

/// Ornstein-Uhlenbeck reference structure on (R, gaussian measure):
/// Gamma[u] = (u')^2 and generator A[u] = u''/2 - x u'/2. Test fixture for
/// the functional-calculus identities.
inline double ou_gamma(double u_prime) { return u_prime * u_prime; }

inline double ou_generator(double u_prime, double u_second, double x) {
    return 0.5 * u_second - 0.5 * x * u_prime;
}

} // namespace pbs
