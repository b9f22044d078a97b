#pragma once

#include <cmath>

#include "pbs/bs_core.hpp"
#include "pbs/error_structure.hpp"
#include "pbs/normal.hpp"
#include "pbs/option_spec.hpp"

namespace pbs {

/// lambda = mu / sigma0 and its cumulated form L = lambda sqrt(T), the
/// dimensionless drift scale entering every drift correction.
struct CumulatedRiskPremium {
    double risk_premium;  ///< lambda
    double cumulated;     ///< L = lambda sqrt(maturity)
};

inline CumulatedRiskPremium cumulated_risk_premium(const OptionSpec& spec) {
    const double lambda = spec.mu / spec.sigma0;
    return {lambda, lambda * std::sqrt(spec.maturity)};
}

namespace detail {

/// |L| below this switches the hedging integrals to their Taylor branch.
inline constexpr double kSmallLThreshold = 1e-4;

/// Normalized first hedging integral:
///   i1(d2, L) = [N(d2+L) - N(d2)]/L - phi(d2)
/// so that  E[int_0^T d2F/(dsigma dx) dS] = K sqrt(T) * i1.
/// Direct branch; cancellation-free via phi_mean_excess.
inline double i1_direct(double d2, double L) { return phi_mean_excess(d2, L); }

/// Taylor branch of i1 around L = 0:
///   i1 = phi(d2) * sum_{k>=1} (-1)^k He_k(d2) L^k / (k+1)!
/// with He_k the probabilists' Hermite polynomials. Truncated after L^8;
/// relative truncation error below 1e-24 for |L| <= 1e-3.
inline double i1_series(double d2, double L) {
    double he_km1 = 1.0;   // He_0
    double he_k = d2;      // He_1
    double lpow = L;
    double factorial = 2.0;  // (k+1)! at k = 1
    double sign = -1.0;
    double sum = sign * he_k * lpow / factorial;
    for (int k = 2; k <= 8; ++k) {
        const double he_next = d2 * he_k - (k - 1) * he_km1;
        he_km1 = he_k;
        he_k = he_next;
        lpow *= L;
        factorial *= (k + 1);
        sign = -sign;
        sum += sign * he_k * lpow / factorial;
    }
    return norm_pdf(d2) * sum;
}

/// Normalized second hedging integral, v = sigma0 sqrt(T):
///   i2(d2, L, v) = phi(d2) (1 - d2^2 - d2 v) + P (1 - 2v/L) + 2R
/// with P = i1(d2, L) and R = [phi(d2+L) - phi(d2) + d2 L phi(d2)]/L^2,
/// so that  E[int_0^T d3F/(dsigma2 dx) dS] = (K sqrt(T)/sigma0) * i2.
inline double i2_direct(double d2, double L, double v) {
    const double P = phi_mean_excess(d2, L);
    const double R = phi_second_ratio(d2, L);
    return norm_pdf(d2) * (1.0 - d2 * d2 - d2 * v) + P * (1.0 - 2.0 * v / L) + 2.0 * R;
}

/// Taylor branch of i2 around L = 0, through L^6. Relative truncation
/// error below 1e-15 for |L| <= 1e-3 on the supported parameter range.
inline double i2_series(double d2, double L, double v) {
    const double d2_2 = d2 * d2;
    const double d2_3 = d2_2 * d2;
    const double d2_4 = d2_3 * d2;
    const double d2_5 = d2_4 * d2;
    const double d2_6 = d2_5 * d2;
    const double d2_7 = d2_6 * d2;
    const double d2_8 = d2_7 * d2;
    const double j1 = -d2_3 / 3.0 - d2_2 * v / 3.0 + d2 / 2.0 + v / 3.0;
    const double j2 = d2_4 / 12.0 + d2_3 * v / 12.0 - d2_2 / 3.0 - d2 * v / 4.0 + 1.0 / 12.0;
    const double j3 = -d2_5 / 60.0 - d2_4 * v / 60.0 + d2_3 / 8.0 + d2_2 * v / 10.0 -
                      d2 / 8.0 - v / 20.0;
    const double j4 = d2_6 / 360.0 + d2_5 * v / 360.0 - d2_4 / 30.0 - d2_3 * v / 36.0 +
                      3.0 * d2_2 / 40.0 + d2 * v / 24.0 - 1.0 / 60.0;
    const double j5 = -d2_7 / 2520.0 - d2_6 * v / 2520.0 + d2_5 / 144.0 + d2_4 * v / 168.0 -
                      d2_3 / 36.0 - d2_2 * v / 56.0 + d2 / 48.0 + v / 168.0;
    const double j6 = d2_8 / 20160.0 + d2_7 * v / 20160.0 - d2_6 / 840.0 - d2_5 * v / 960.0 +
                      5.0 * d2_4 / 672.0 + d2_3 * v / 192.0 - d2_2 / 84.0 - d2 * v / 192.0 +
                      1.0 / 448.0;
    const double p = L * (j1 + L * (j2 + L * (j3 + L * (j4 + L * (j5 + L * j6)))));
    return norm_pdf(d2) * p;
}

} // namespace detail

/// Bias of the call premium when mu = 0 (epsilon-exclusive):
///   x phi(d1) { A[sigma sqrt(T)] + d1 d2 / (2 sigma0 sqrt(T)) Gamma[sigma sqrt(T)] }
/// which is vega * A[sigma] + vomma * Gamma[sigma] / 2 once the sqrt(T)
/// conversions A[sigma sqrt(T)] = sqrt(T) A, Gamma[sigma sqrt(T)] = T Gamma
/// are folded in.
inline double bias_zero_drift(const OptionSpec& spec, const ErrorStructure& es) {
    const auto sens = sigma_sensitivities(spec, 0.0);
    return sens.vega * es.bias_coeff + 0.5 * sens.vomma * es.var_coeff;
}

/// E[int_0^T d2F/(dsigma dx)(sigma0, S_s, s) dS_s]
///   = K sqrt(T) { [N(d2+L) - N(d2)]/L - phi(d2) }
/// Vanishes at mu = 0 (the stochastic integral is then a martingale).
inline double integral_i1(const OptionSpec& spec) {
    const double L = cumulated_risk_premium(spec).cumulated;
    if (L == 0.0) return 0.0;
    const double d2 = d1_d2(spec, 0.0).d2;
    const double k_sqrt_t = spec.strike * std::sqrt(spec.maturity);
    if (std::abs(L) < detail::kSmallLThreshold) return k_sqrt_t * detail::i1_series(d2, L);
    return k_sqrt_t * detail::i1_direct(d2, L);
}

/// E[int_0^T d3F/(dsigma2 dx)(sigma0, S_s, s) dS_s], validated against the
/// quadrature oracle (see validation_oracle). Vanishes at mu = 0.
inline double integral_i2(const OptionSpec& spec) {
    const double L = cumulated_risk_premium(spec).cumulated;
    if (L == 0.0) return 0.0;
    const auto d = d1_d2(spec, 0.0);
    const double v = spec.sigma0 * std::sqrt(spec.maturity);
    const double pref = spec.strike * std::sqrt(spec.maturity) / spec.sigma0;
    if (std::abs(L) < detail::kSmallLThreshold) return pref * detail::i2_series(d.d2, L, v);
    return pref * detail::i2_direct(d.d2, L, v);
}

/// Drift part of the premium bias (epsilon-exclusive):
///   A_correction = I1 * A[sigma] + I2 * Gamma[sigma] / 2
/// Exactly 0 at mu = 0.
inline double drift_bias_correction(const OptionSpec& spec, const ErrorStructure& es) {
    if (spec.mu == 0.0) return 0.0;
    return integral_i1(spec) * es.bias_coeff + 0.5 * integral_i2(spec) * es.var_coeff;
}

/// Gamma variance of the call (epsilon-exclusive):
///   { x phi(d1) + K [ (N(d2+L) - N(d2))/L - phi(d2) ] }^2 * Gamma[sigma sqrt(T)]
/// with the bracket replaced by its (zero) limit when |L| is below the
/// small-L threshold. Equals (vega + I1)^2 * Gamma[sigma].
inline double gamma_call(const OptionSpec& spec, const ErrorStructure& es) {
    const auto d = d1_d2(spec, 0.0);
    const double L = cumulated_risk_premium(spec).cumulated;
    double bracket = 0.0;
    if (L != 0.0) {
        bracket = std::abs(L) < detail::kSmallLThreshold ? detail::i1_series(d.d2, L)
                                                         : detail::i1_direct(d.d2, L);
    }
    const double base = spec.spot * norm_pdf(d.d1) + spec.strike * bracket;
    return base * base * spec.maturity * es.var_coeff;
}

/// Decomposed PBS quote. bias_zero_drift / bias_drift_corr / variance_term
/// are epsilon-exclusive; bias_total = epsilon * (sum of the bias pieces),
/// so mid = bs_premium + bias_total and
/// spread = 2 * quantile_mult * sqrt(epsilon * variance_term).
struct PbsQuote {
    double bs_premium;
    double bias_zero_drift;
    double bias_drift_corr;
    double bias_total;
    double variance_term;
    double mid;
    double bid;
    double ask;
    double spread;
};

inline PbsQuote quote(const OptionSpec& spec, const ErrorStructure& es, const QuoteConfig& qc) {
    PbsQuote q;
    q.bs_premium = call_price(spec, 0.0);
    q.bias_zero_drift = pbs::bias_zero_drift(spec, es);
    q.bias_drift_corr = drift_bias_correction(spec, es);
    q.bias_total = es.epsilon * (q.bias_zero_drift + q.bias_drift_corr);
    q.variance_term = gamma_call(spec, es);
    q.mid = q.bs_premium + q.bias_total;
    const double half = qc.quantile_mult * std::sqrt(es.epsilon * q.variance_term);
    q.bid = q.mid - half;
    q.ask = q.mid + half;
    q.spread = q.ask - q.bid;
    return q;
}

/// The first-order expansion can leave the no-arbitrage region for extreme
/// parameters; callers surface these as warnings, not failures.
struct QuoteAlerts {
    bool bid_below_intrinsic;
    bool mid_nonpositive;
};

inline QuoteAlerts check_quote(const OptionSpec& spec, const PbsQuote& q) {
    const double intrinsic = std::max(spec.spot - spec.strike, 0.0);
    return {q.bid < intrinsic, q.mid <= 0.0};
}

} // namespace pbs
