#pragma once

#include <cmath>
#include <stdexcept>

namespace pbs {

/// European call contract plus market state. The money market is the
/// numeraire, so there is no rate field; mu is the real-world drift of
/// the underlying and may take any sign.
struct OptionSpec {
    double spot;
    double strike;
    double maturity;  ///< years
    double sigma0;    ///< market volatility, per sqrt(year)
    double mu;        ///< drift, per year

    OptionSpec(double spot_, double strike_, double maturity_, double sigma0_, double mu_)
        : spot(spot_), strike(strike_), maturity(maturity_), sigma0(sigma0_), mu(mu_) {
        if (!(spot > 0.0) || !std::isfinite(spot))
            throw std::invalid_argument("OptionSpec: spot must be positive and finite");
        if (!(strike > 0.0) || !std::isfinite(strike))
            throw std::invalid_argument("OptionSpec: strike must be positive and finite");
        if (!(maturity > 0.0) || !std::isfinite(maturity))
            throw std::invalid_argument("OptionSpec: maturity must be positive and finite");
        if (!(sigma0 > 0.0) || !std::isfinite(sigma0))
            throw std::invalid_argument("OptionSpec: sigma0 must be positive and finite");
        if (!std::isfinite(mu))
            throw std::invalid_argument("OptionSpec: mu must be finite");
    }

    OptionSpec with_spot(double s) const { return {s, strike, maturity, sigma0, mu}; }
    OptionSpec with_strike(double k) const { return {spot, k, maturity, sigma0, mu}; }
    OptionSpec with_maturity(double t) const { return {spot, strike, t, sigma0, mu}; }
    OptionSpec with_sigma(double s) const { return {spot, strike, maturity, s, mu}; }
    OptionSpec with_mu(double m) const { return {spot, strike, maturity, sigma0, m}; }
};

} // namespace pbs
