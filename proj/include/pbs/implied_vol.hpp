#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "pbs/bs_core.hpp"
#include "pbs/pbs_pricing.hpp"

namespace pbs {

namespace detail {
inline constexpr double kIvBracketLo = 1e-6;
inline constexpr double kIvBracketHi = 5.0;
inline constexpr int kIvMaxIter = 200;
} // namespace detail

/// Invert the call premium for sigma. spec.sigma0 only seeds the Newton
/// iteration. Returns nullopt when target lies outside the attainable
/// interval (max(spot-strike, 0), spot) restricted to the bracket
/// [1e-6, 5]; a bisection safeguard keeps Newton inside the bracket, so
/// tiny vegas far from the money cannot cause divergence.
inline std::optional<double> bs_implied_vol(double target_price, const OptionSpec& spec) {
    const double intrinsic = std::max(spec.spot - spec.strike, 0.0);
    if (!(target_price > intrinsic) || !(target_price < spec.spot)) return std::nullopt;

    const double tol = 1e-12 * spec.spot;
    double lo = detail::kIvBracketLo;
    double hi = detail::kIvBracketHi;
    if (call_price(spec.with_sigma(lo)) - target_price > 0.0) return std::nullopt;
    if (call_price(spec.with_sigma(hi)) - target_price < 0.0) return std::nullopt;

    double sigma = std::clamp(spec.sigma0, lo, hi);
    for (int it = 0; it < detail::kIvMaxIter; ++it) {
        const OptionSpec cur = spec.with_sigma(sigma);
        const double diff = call_price(cur) - target_price;
        if (std::abs(diff) <= tol) return sigma;
        if (diff < 0.0)
            lo = sigma;
        else
            hi = sigma;
        const double vega = sigma_sensitivities(cur).vega;
        double next = sigma - diff / vega;
        if (!(vega > 0.0) || !std::isfinite(next) || next <= lo || next >= hi)
            next = 0.5 * (lo + hi);
        sigma = next;
    }
    return std::nullopt;  // iteration cap; does not occur on the supported range
}

/// One strike of an implied-volatility curve. Absent entries mark quotes
/// the expansion pushed outside no-arbitrage bounds (kept absent rather
/// than clamped).
struct VolCurvePoint {
    double strike;
    double moneyness;  ///< strike / spot
    std::optional<double> iv_bid;
    std::optional<double> iv_mid;
    std::optional<double> iv_ask;
};

/// PBS quotes across strikes, inverted to bid/mid/ask implied vols.
/// Deterministic: same inputs give bit-identical output.
inline std::vector<VolCurvePoint> vol_curve(const OptionSpec& spec_template,
                                            const ErrorStructure& es, const QuoteConfig& qc,
                                            const std::vector<double>& strikes) {
    std::vector<VolCurvePoint> out;
    out.reserve(strikes.size());
    for (double k : strikes) {
        const OptionSpec spec = spec_template.with_strike(k);
        const PbsQuote q = quote(spec, es, qc);
        VolCurvePoint p;
        p.strike = k;
        p.moneyness = k / spec.spot;
        p.iv_bid = bs_implied_vol(q.bid, spec);
        p.iv_mid = bs_implied_vol(q.mid, spec);
        p.iv_ask = bs_implied_vol(q.ask, spec);
        out.push_back(p);
    }
    return out;
}

} // namespace pbs
