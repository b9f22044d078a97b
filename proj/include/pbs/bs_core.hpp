#pragma once

#include <cmath>
#include <stdexcept>

#include "pbs/normal.hpp"
#include "pbs/option_spec.hpp"

namespace pbs {

struct D1D2 {
    double d1;
    double d2;
};

namespace detail {
inline double time_to_expiry(const OptionSpec& spec, double elapsed) {
    if (!(elapsed >= 0.0) || elapsed >= spec.maturity)
        throw std::domain_error("time to expiry must be positive (elapsed in [0, maturity))");
    return spec.maturity - elapsed;
}
} // namespace detail

/// d1 = (ln(spot/strike) + sigma0^2 tau / 2) / (sigma0 sqrt(tau)),
/// d2 = d1 - sigma0 sqrt(tau),  tau = maturity - elapsed.
inline D1D2 d1_d2(const OptionSpec& spec, double elapsed = 0.0) {
    const double tau = detail::time_to_expiry(spec, elapsed);
    const double vol_sqrt_tau = spec.sigma0 * std::sqrt(tau);
    const double d1 = std::log(spec.spot / spec.strike) / vol_sqrt_tau + 0.5 * vol_sqrt_tau;
    return {d1, d1 - vol_sqrt_tau};
}

/// Call premium with zero rate: F = x N(d1) - K N(d2).
inline double call_price(const OptionSpec& spec, double elapsed = 0.0) {
    const auto [d1, d2] = d1_d2(spec, elapsed);
    return spec.spot * norm_cdf(d1) - spec.strike * norm_cdf(d2);
}

/// Hedge ratio: N(d1).
inline double call_delta(const OptionSpec& spec, double elapsed = 0.0) {
    return norm_cdf(d1_d2(spec, elapsed).d1);
}

/// Partial derivatives of the call premium in sigma, spot and strike.
struct SigmaSensitivities {
    double vega;       ///< dF/dsigma            =  x sqrt(tau) phi(d1)
    double vomma;      ///< d2F/dsigma2          =  vega d1 d2 / sigma
    double vanna;      ///< d2F/(dsigma dx)      = -d2 phi(d1) / sigma
    double dvomma_dx;  ///< d3F/(dsigma2 dx)     =  (d1 + d2 - d1 d2^2) phi(d1) / sigma^2
    double density;    ///< d2F/dK2              =  x phi(d1) / (K^2 sigma sqrt(tau))
};

inline SigmaSensitivities sigma_sensitivities(const OptionSpec& spec, double elapsed = 0.0) {
    const double tau = detail::time_to_expiry(spec, elapsed);
    const auto [d1, d2] = d1_d2(spec, elapsed);
    const double pdf = norm_pdf(d1);
    const double sqrt_tau = std::sqrt(tau);
    const double s = spec.sigma0;
    SigmaSensitivities out;
    out.vega = spec.spot * sqrt_tau * pdf;
    out.vomma = out.vega * d1 * d2 / s;
    out.vanna = -d2 * pdf / s;
    out.dvomma_dx = (d1 + d2 - d1 * d2 * d2) * pdf / (s * s);
    out.density = spec.spot * pdf / (spec.strike * spec.strike * s * sqrt_tau);
    return out;
}

} // namespace pbs
