#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pbs/implied_vol.hpp"
#include "pbs/oracle.hpp"
#include "pbs/pbs_pricing.hpp"
#include "pbs/rng.hpp"

namespace pbs::validate {

struct CheckResult {
    std::string name;
    double worst;       ///< worst observed error (relative unless noted)
    double threshold;
    bool passed;
};

struct Options {
    bool full = false;
    /// Test-harness hook: perturbs the closed forms inside the comparisons
    /// so a broken implementation is guaranteed to be caught.
    double corrupt_closed_forms = 0.0;
    std::uint64_t seed = 20250801;
};

/// Standard comparison grid shared by the oracle checks and the
/// acceptance suite: moneyness x maturity x sigma0 x mu (120 cases).
inline std::vector<OptionSpec> standard_grid() {
    std::vector<OptionSpec> grid;
    const double spot = 100.0;
    for (double m : {0.8, 0.9, 1.0, 1.1, 1.25})
        for (double t : {1.0 / 12, 0.25, 1.0})
            for (double s0 : {0.1, 0.2, 0.4})
                for (double mu : {-0.01, 0.05, 0.1, 0.2})
                    grid.emplace_back(spot, spot * m, t, s0, mu);
    return grid;
}

namespace detail {
inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}
} // namespace detail

/// Closed forms for the two hedging integrals against the quadrature oracle.
inline CheckResult check_closed_form_i1(const Options& opt) {
    double worst = 0.0;
    for (const auto& spec : standard_grid()) {
        const double closed = integral_i1(spec) * (1.0 + opt.corrupt_closed_forms);
        const auto quad = oracle::quad_expected_integral(spec, oracle::DerivOrder::second_mixed);
        worst = std::max(worst, detail::rel_err(closed, quad.value));
    }
    return {"closed_form_i1_vs_quadrature", worst, 1e-6, worst <= 1e-6};
}

inline CheckResult check_closed_form_i2(const Options& opt) {
    double worst = 0.0;
    for (const auto& spec : standard_grid()) {
        const double closed = integral_i2(spec) * (1.0 + opt.corrupt_closed_forms);
        const auto quad = oracle::quad_expected_integral(spec, oracle::DerivOrder::third_mixed);
        worst = std::max(worst, detail::rel_err(closed, quad.value));
    }
    return {"closed_form_i2_vs_quadrature", worst, 1e-6, worst <= 1e-6};
}

/// g(sigma0) = 0 and the first two sigma-derivatives of the expected P&L
/// against vega + I1 and vomma + I2, by central finite differences.
inline std::vector<CheckResult> check_pnl_identities(const Options& opt,
                                                     const std::vector<OptionSpec>& points) {
    double worst_zero = 0.0, worst_d1 = 0.0, worst_d2 = 0.0;
    for (const auto& spec : points) {
        const double g0 = oracle::expected_pnl(spec.sigma0, spec).value;
        worst_zero = std::max(worst_zero, std::abs(g0) / spec.spot);

        const double h1 = 2e-3 * spec.sigma0;
        const double gp = oracle::expected_pnl(spec.sigma0 + h1, spec).value;
        const double gm = oracle::expected_pnl(spec.sigma0 - h1, spec).value;
        const double fd1 = (gp - gm) / (2.0 * h1);
        const auto sens = sigma_sensitivities(spec, 0.0);
        const double want1 = (sens.vega + integral_i1(spec)) * (1.0 + opt.corrupt_closed_forms);
        worst_d1 = std::max(worst_d1, detail::rel_err(fd1, want1));

        const double h2 = 2e-2 * spec.sigma0;
        const double gp2 = oracle::expected_pnl(spec.sigma0 + h2, spec).value;
        const double gm2 = oracle::expected_pnl(spec.sigma0 - h2, spec).value;
        const double fd2 = (gp2 - 2.0 * g0 + gm2) / (h2 * h2);
        const double want2 = (sens.vomma + integral_i2(spec)) * (1.0 + opt.corrupt_closed_forms);
        worst_d2 = std::max(worst_d2, detail::rel_err(fd2, want2));
    }
    return {{"pnl_zero_at_market_vol (abs/spot)", worst_zero, 1e-8, worst_zero <= 1e-8},
            {"pnl_first_derivative_vs_vega_plus_i1", worst_d1, 1e-4, worst_d1 <= 1e-4},
            {"pnl_second_derivative_vs_vomma_plus_i2", worst_d2, 1e-3, worst_d2 <= 1e-3}};
}

/// Small-L behavior of the drift correction: linear decay plus agreement
/// between the series and direct branches at |L| = 1e-3.
inline std::vector<CheckResult> check_small_l(const Options&) {
    const double spot = 100.0;
    double worst_ratio = 0.0, worst_match = 0.0;
    for (double m : {0.9, 1.0, 1.1}) {
        for (double s0 : {0.1, 0.2, 0.4}) {
            const double T = 0.25;
            const ErrorStructure es(0.02, -5.0 * s0, s0 * s0);
            double prev = 0.0;
            int idx = 0;
            for (double absl : {1e-3, 1e-4, 1e-5, 1e-6}) {
                const double mu = absl * s0 / std::sqrt(T);
                const OptionSpec spec(spot, spot * m, T, s0, mu);
                const double val = drift_bias_correction(spec, es);
                if (idx > 0) {
                    const double ratio = prev / val;  // expect ~10
                    worst_ratio = std::max(worst_ratio, std::abs(ratio / 10.0 - 1.0));
                }
                prev = val;
                ++idx;
            }
            for (double sgn : {1.0, -1.0}) {
                const double L = sgn * 1e-3;
                const OptionSpec spec(spot, spot * m, T, s0, L * s0 / std::sqrt(T));
                const double d2 = d1_d2(spec).d2;
                const double v = s0 * std::sqrt(T);
                worst_match = std::max(
                    worst_match, detail::rel_err(pbs::detail::i1_series(d2, L),
                                                 pbs::detail::i1_direct(d2, L)));
                worst_match = std::max(
                    worst_match, detail::rel_err(pbs::detail::i2_series(d2, L, v),
                                                 pbs::detail::i2_direct(d2, L, v)));
            }
        }
    }
    return {{"drift_correction_linear_in_L (ratio dev)", worst_ratio, 0.2, worst_ratio <= 0.2},
            {"small_l_branch_match_at_1e-3", worst_match, 1e-9, worst_match <= 1e-9}};
}

/// Quote assembly identities on random valid configurations.
inline CheckResult check_quote_algebra(const Options& opt, std::size_t n_configs) {
    SplitMix64 rng(opt.seed);
    auto uni = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.next_double(); };
    double worst = 0.0;
    for (std::size_t i = 0; i < n_configs; ++i) {
        const double s0 = uni(0.05, 0.6);
        const OptionSpec spec(100.0, uni(60.0, 170.0), uni(0.02, 4.0), s0, uni(-0.3, 0.3));
        const ErrorStructure es(uni(1e-4, 0.05), uni(-10.0, 2.0) * s0, uni(0.0, 4.0) * s0 * s0);
        const QuoteConfig qc(uni(0.0, 3.0));
        const PbsQuote q = quote(spec, es, qc);
        const double half = qc.quantile_mult * std::sqrt(es.epsilon * gamma_call(spec, es));
        const double scale = std::max({std::abs(q.mid), half, 1e-30});
        worst = std::max(worst, std::abs((q.ask - q.mid) - half) / scale);
        worst = std::max(worst, std::abs((q.mid - q.bid) - half) / scale);
        worst = std::max(worst, std::abs(q.spread - 2.0 * half) / scale);
        const double decomp = q.mid - q.bs_premium -
                              es.epsilon * (q.bias_zero_drift + q.bias_drift_corr);
        worst = std::max(worst, std::abs(decomp) / std::max(std::abs(q.mid), 1e-30));
    }
    return {"quote_algebra_random_configs", worst, 1e-12, worst <= 1e-12};
}

/// Price -> implied vol -> price round trips on random specs.
inline CheckResult check_iv_round_trip(const Options& opt, std::size_t n_configs) {
    SplitMix64 rng(opt.seed + 1);
    auto uni = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.next_double(); };
    double worst = 0.0;
    for (std::size_t i = 0; i < n_configs; ++i) {
        const double sigma = uni(0.02, 1.5);
        const double t = uni(0.02, 4.0);
        // keep |d1| moderate so the target price stays well inside the
        // no-arbitrage interior
        const double u = uni(-5.0, 5.0);
        const double strike = 100.0 * std::exp(sigma * std::sqrt(t) * u);
        const OptionSpec spec(100.0, strike, t, uni(0.05, 0.5), uni(-0.2, 0.2));
        const double target = call_price(spec.with_sigma(sigma));
        const auto got = bs_implied_vol(target, spec);
        if (!got) {
            worst = 1.0;
            continue;
        }
        worst = std::max(worst, std::abs(*got - sigma));
    }
    return {"implied_vol_round_trip (abs)", worst, 1e-10, worst <= 1e-10};
}

inline CheckResult check_mc_hedge_scaling(const Options& opt) {
    const OptionSpec spec(100.0, 100.0, 1.0 / 12.0, 0.2, 0.1);
    oracle::McConfig mc;
    mc.paths = 60000;
    mc.seed = opt.seed + 2;
    double worst = 0.0;
    double prev_var = 0.0;
    bool first = true;
    for (std::size_t steps : {std::size_t(50), std::size_t(200), std::size_t(800)}) {
        mc.steps = steps;
        const auto st = oracle::mc_hedge_pnl(spec.sigma0, spec, mc);
        worst = std::max(worst, std::abs(st.mean) / (3.0 * st.std_error));
        if (!first) worst = std::max(worst, std::abs(prev_var / st.variance / 4.0 - 1.0));
        prev_var = st.variance;
        first = false;
    }
    // combined: mean within 3 SE (term <= 1) and variance ratio within 20% of 4
    return {"mc_hedge_mean_and_variance_scaling", worst, 1.0, worst <= 1.0};
}

inline CheckResult check_empirical_chain_rule(const Options& opt) {
    const OptionSpec spec(100.0, 100.0, 0.25, 0.2, 0.1);
    const ErrorStructure es(1e-4, -1.0, 0.04);
    const auto emp = oracle::empirical_bias_variance(spec, es, 40000, opt.seed + 3);
    const double bias = es.epsilon * (bias_zero_drift(spec, es) + drift_bias_correction(spec, es));
    const double var = es.epsilon * gamma_call(spec, es);
    const double allow = 10.0 * es.epsilon * es.epsilon;
    const double worst =
        std::max(std::abs(emp.bias_hat - bias) / (3.0 * emp.bias_se + allow),
                 std::abs(emp.variance_hat - var) / (3.0 * emp.variance_se + allow));
    return {"empirical_bias_variance_vs_analytic", worst, 1.0, worst <= 1.0};
}

inline std::vector<CheckResult> run(const Options& opt) {
    std::vector<CheckResult> results;
    results.push_back(check_closed_form_i1(opt));
    results.push_back(check_closed_form_i2(opt));
    const std::vector<OptionSpec> pnl_points{
        {100.0, 100.0, 1.0 / 12.0, 0.2, 0.1}, {100.0, 110.0, 0.25, 0.2, 0.05},
        {100.0, 90.0, 0.25, 0.4, 0.2},        {100.0, 105.0, 1.0, 0.1, -0.05}};
    for (auto& c : check_pnl_identities(opt, pnl_points)) results.push_back(c);
    for (auto& c : check_small_l(opt)) results.push_back(c);
    results.push_back(check_quote_algebra(opt, 200));
    results.push_back(check_iv_round_trip(opt, 200));
    if (opt.full) {
        results.push_back(check_mc_hedge_scaling(opt));
        results.push_back(check_empirical_chain_rule(opt));
    }
    return results;
}

} // namespace pbs::validate
