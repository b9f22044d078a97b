#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pbs/bs_core.hpp"
#include "pbs/error_structure.hpp"
#include "pbs/normal.hpp"
#include "pbs/option_spec.hpp"
#include "pbs/pbs_pricing.hpp"
#include "pbs/quadrature.hpp"
#include "pbs/rng.hpp"

namespace pbs::oracle {

/// Controls for the deterministic quadrature oracle. Results always carry
/// a convergence estimate: the value at the configured node counts against
/// the value at doubled counts.
struct QuadConfig {
    std::size_t time_nodes = 64;   ///< Gauss-Legendre nodes in s over [0, T]
    std::size_t space_nodes = 32;  ///< Gauss-Hermite nodes in the Gaussian variable
    double rel_tol = 1e-8;

    QuadConfig() = default;
    QuadConfig(std::size_t t, std::size_t s, double tol = 1e-8)
        : time_nodes(t), space_nodes(s), rel_tol(tol) {
        if (time_nodes < 16) throw std::invalid_argument("QuadConfig: time_nodes must be >= 16");
        if (space_nodes < 32) throw std::invalid_argument("QuadConfig: space_nodes must be >= 32");
    }
};

struct McConfig {
    std::size_t paths = 100000;
    std::size_t steps = 200;
    std::uint64_t seed = 1;
};

/// Appendix integrand bookkeeping at intermediate time s:
///   theta  = (ln(S0/K) + mu s - sigma0^2 s / 2) / (sigma0 sqrt(T-s))
///   lambda = sigma0 sqrt(T-s) / 2
/// satisfying sqrt((T-s)/T) (theta - lambda) = d2 + mu s / (sigma0 sqrt(T)).
struct IntegrandParams {
    double theta;
    double lambda_;
};

inline IntegrandParams integrand_params(const OptionSpec& spec, double s) {
    const double tau = detail::time_to_expiry(spec, s);
    const double sq = spec.sigma0 * std::sqrt(tau);
    return {(std::log(spec.spot / spec.strike) + spec.mu * s - 0.5 * spec.sigma0 * spec.sigma0 * s) / sq,
            0.5 * sq};
}

enum class DerivOrder { second_mixed, third_mixed };

struct QuadResult {
    double value;      ///< finer-grid value
    double delta;      ///< |value(2n) - value(n)|
    bool converged;    ///< delta within rel_tol of value (plus a tiny absolute floor)
};

namespace detail {

/// E[f(S_s, s) S_s] for lognormal S_s = S0 exp((mu - sigma0^2/2)s + sigma0 sqrt(s) y).
///
/// Gauss-Hermite after an affine change of variable: the Gaussian factors
/// of the integrand (the weight phi(y), the e^{sigma0 sqrt(s) y} tilt from
/// S_s and the e^{-d1^2/2} factor every Eq.-type integrand carries) combine
/// into one quadratic exponent; recentering the Hermite nodes on it makes
/// the rule exact for the polynomial part. f stays a black box evaluated
/// at the transformed nodes.
template <typename F>
double lognormal_expectation(F&& f, const OptionSpec& spec, double s, std::size_t n_nodes) {
    const double tau = spec.maturity - s;
    const double a = (spec.mu - 0.5 * spec.sigma0 * spec.sigma0) * s;
    const double b = spec.sigma0 * std::sqrt(s);
    const double sq_tau = spec.sigma0 * std::sqrt(tau);
    const double alpha = (std::log(spec.spot / spec.strike) + a + 0.5 * spec.sigma0 * spec.sigma0 * tau) / sq_tau;
    const double beta = b / sq_tau;
    const double denom = 1.0 + beta * beta;
    const double center = (b - alpha * beta) / denom;
    const double scale = 1.0 / std::sqrt(denom);

    const QuadRule& gh = gauss_hermite_cached(n_nodes);
    const double step = std::sqrt(2.0) * scale;
    double acc = 0.0;
    for (std::size_t i = 0; i < gh.x.size(); ++i) {
        const double y = center + step * gh.x[i];
        const double S = spec.spot * std::exp(a + b * y);
        acc += gh.w[i] * f(S) * S * norm_pdf(y);
    }
    return step * acc;
}

template <typename F>
double drift_integral_pass(F&& integrand, const OptionSpec& spec, std::size_t nt, std::size_t ny) {
    const QuadRule& gl = gauss_legendre_cached(nt);
    const double half = 0.5 * spec.maturity;
    double acc = 0.0;
    for (std::size_t j = 0; j < gl.x.size(); ++j) {
        const double s = half * (1.0 + gl.x[j]);
        acc += gl.w[j] * lognormal_expectation([&](double S) { return integrand(S, s); },
                                               spec, s, ny);
    }
    return spec.mu * half * acc;
}

inline QuadResult with_convergence(double coarse, double fine, const OptionSpec& spec,
                                   double rel_tol) {
    const double delta = std::abs(fine - coarse);
    const double floor = 1e-14 * spec.spot;
    return {fine, delta, delta <= rel_tol * std::abs(fine) + floor};
}

} // namespace detail

/// mu * int_0^T E[derivative(sigma0, S_s, s) * S_s] ds by outer
/// Gauss-Legendre in s and inner (recentered) Gauss-Hermite in the
/// Gaussian variable. The derivative is taken from bs_core and never from
/// the closed forms in pbs_pricing; this is the independent ground truth
/// for integral_i1 / integral_i2.
inline QuadResult quad_expected_integral(const OptionSpec& spec, DerivOrder order,
                                         const QuadConfig& qc = {}) {
    auto integrand = [&spec, order](double S, double s) {
        const auto sens = sigma_sensitivities(spec.with_spot(S), s);
        return order == DerivOrder::second_mixed ? sens.vanna : sens.dvomma_dx;
    };
    const double coarse = detail::drift_integral_pass(integrand, spec, qc.time_nodes, qc.space_nodes);
    const double fine = detail::drift_integral_pass(integrand, spec, 2 * qc.time_nodes, 2 * qc.space_nodes);
    return detail::with_convergence(coarse, fine, spec, qc.rel_tol);
}

namespace detail {

/// E[(S_T - K)^+] under the historical dynamics, by panelled
/// Gauss-Legendre in the terminal Gaussian variable, split at the payoff
/// kink.
inline double terminal_payoff_expectation(const OptionSpec& spec, std::size_t nodes_per_panel) {
    const double T = spec.maturity;
    const double a = (spec.mu - 0.5 * spec.sigma0 * spec.sigma0) * T;
    const double b = spec.sigma0 * std::sqrt(T);
    const double y_kink = (std::log(spec.strike / spec.spot) - a) / b;
    const double y_hi = std::max(std::max(b, 0.0) + 13.0, y_kink + 13.0);
    if (y_kink >= y_hi) return 0.0;
    std::vector<double> breaks;
    for (double y = y_kink; y < y_hi; y += 1.0) breaks.push_back(y);
    breaks.push_back(y_hi);
    return integrate_panels(
        [&](double y) {
            const double S = spec.spot * std::exp(a + b * y);
            return (S - spec.strike) * norm_pdf(y);
        },
        breaks, nodes_per_panel);
}

/// Panel layout for the delta integrand N(d1(sigma; S, s)) S phi(y):
/// the tilted Gaussian weight is centered at b = sigma0 sqrt(s) with unit
/// scale; the delta transition sits at y_star with width w. Refining
/// around both keeps fixed-order panels accurate uniformly in s.
inline std::vector<double> delta_panel_breaks(double b, double y_star, double w) {
    const double lo = b - 12.0;
    const double hi = b + 12.0;
    std::vector<double> breaks{lo, b - 6.0, b - 2.0, b + 2.0, b + 6.0, hi};
    if (y_star > lo - 2.0 && y_star < hi + 2.0) {
        const double ww = std::clamp(w, 1e-6, 3.0);
        for (double c : {y_star - 6.0 * ww, y_star - 2.0 * ww, y_star + 2.0 * ww,
                         y_star + 6.0 * ww}) {
            if (c > lo && c < hi) breaks.push_back(c);
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double x, double y) { return y - x < 1e-12; }),
                 breaks.end());
    return breaks;
}

/// mu * int_0^T E[N(d1(trader_sigma; S_s, s)) S_s] ds.
inline double hedge_integral_pass(double trader_sigma, const OptionSpec& spec, std::size_t nt,
                                  std::size_t nodes_per_panel) {
    const QuadRule& gl = gauss_legendre_cached(nt);
    const double half = 0.5 * spec.maturity;
    const OptionSpec traded = spec.with_sigma(trader_sigma);
    double acc = 0.0;
    for (std::size_t j = 0; j < gl.x.size(); ++j) {
        const double s = half * (1.0 + gl.x[j]);
        const double tau = spec.maturity - s;
        const double a = (spec.mu - 0.5 * spec.sigma0 * spec.sigma0) * s;
        const double b = spec.sigma0 * std::sqrt(s);
        const double y_star =
            (std::log(spec.strike / spec.spot) - a - 0.5 * trader_sigma * trader_sigma * tau) / b;
        const double w = trader_sigma * std::sqrt(tau) / b;
        const auto breaks = delta_panel_breaks(b, y_star, w);
        const double inner = integrate_panels(
            [&](double y) {
                const double S = spec.spot * std::exp(a + b * y);
                return call_delta(traded.with_spot(S), s) * S * norm_pdf(y);
            },
            breaks, nodes_per_panel);
        acc += gl.w[j] * inner;
    }
    return spec.mu * half * acc;
}

} // namespace detail

/// Expected P&L of hedging at trader volatility while the market follows
/// (sigma0, mu):
///   g(sigma) = F(sigma, S0, 0) - E[(S_T - K)^+] + mu int_0^T E[N(d1(sigma)) S_s] ds
/// g(sigma0) = 0: delta hedging at the true volatility replicates the
/// payoff pathwise regardless of drift.
inline QuadResult expected_pnl(double trader_sigma, const OptionSpec& spec,
                               const QuadConfig& qc = {}) {
    if (!(trader_sigma > 0.0)) throw std::invalid_argument("expected_pnl: trader_sigma must be > 0");
    const double premium = call_price(spec.with_sigma(trader_sigma), 0.0);
    auto pass = [&](std::size_t nt, std::size_t npp) {
        return premium - detail::terminal_payoff_expectation(spec, npp) +
               detail::hedge_integral_pass(trader_sigma, spec, nt, npp);
    };
    const std::size_t npp = std::clamp<std::size_t>(qc.space_nodes / 2, 16, 32);
    const double coarse = pass(qc.time_nodes, npp);
    const double fine = pass(2 * qc.time_nodes, 2 * npp);
    return detail::with_convergence(coarse, fine, spec, qc.rel_tol);
}

struct EmpiricalBiasVariance {
    double bias_hat;
    double variance_hat;
    double bias_se;
    double variance_se;
    std::size_t draws;
};

/// Sample trader volatilities sigma0 + eps A + sqrt(eps Gamma) N(0,1),
/// evaluate g on each draw against a precomputed quadrature grid, and
/// report the sample mean and variance of g(sigma) - g(sigma0). These
/// estimate eps * A[E[P&L]] and eps * Gamma[E[P&L]] to first order.
/// Subtracting the (analytically zero) g(sigma0) computed on the same grid
/// cancels the grid's systematic error, so bias_hat is exactly 0 whenever
/// the perturbation is degenerate.
inline EmpiricalBiasVariance empirical_bias_variance(const OptionSpec& spec,
                                                     const ErrorStructure& es, std::size_t draws,
                                                     std::uint64_t seed) {
    if (draws < 2) throw std::invalid_argument("empirical_bias_variance: draws must be >= 2");

    // cached hedge grid: per node, everything except the trader-vol delta
    struct Node {
        double weight;    // GL(s) x panel weight x S x phi(y), times mu
        double log_s_over_k;
        double tau;
        double sqrt_tau;
    };
    std::vector<Node> grid;
    const std::size_t nt = 48;
    const std::size_t npp = 16;
    const QuadRule& gl = gauss_legendre_cached(nt);
    const QuadRule& panel_rule = gauss_legendre_cached(npp);
    const double half = 0.5 * spec.maturity;
    for (std::size_t j = 0; j < gl.x.size(); ++j) {
        const double s = half * (1.0 + gl.x[j]);
        const double tau = spec.maturity - s;
        const double a = (spec.mu - 0.5 * spec.sigma0 * spec.sigma0) * s;
        const double b = spec.sigma0 * std::sqrt(s);
        const double y_star =
            (std::log(spec.strike / spec.spot) - a - 0.5 * spec.sigma0 * spec.sigma0 * tau) / b;
        const double w = 2.0 * spec.sigma0 * std::sqrt(tau) / b;  // widened for the draw range
        const auto breaks = detail::delta_panel_breaks(b, y_star, w);
        const double outer_w = spec.mu * half * gl.w[j];
        for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
            const double pm = 0.5 * (breaks[p] + breaks[p + 1]);
            const double ph = 0.5 * (breaks[p + 1] - breaks[p]);
            if (!(ph > 0.0)) continue;
            for (std::size_t i = 0; i < panel_rule.x.size(); ++i) {
                const double y = pm + ph * panel_rule.x[i];
                const double S = spec.spot * std::exp(a + b * y);
                grid.push_back({outer_w * ph * panel_rule.w[i] * S * norm_pdf(y),
                                std::log(S / spec.strike), tau, std::sqrt(tau)});
            }
        }
    }
    const double e_payoff = detail::terminal_payoff_expectation(spec, 24);

    auto g_of = [&](double sigma) {
        double hedge = 0.0;
        for (const Node& n : grid) {
            const double d1 = n.log_s_over_k / (sigma * n.sqrt_tau) + 0.5 * sigma * n.sqrt_tau;
            hedge += n.weight * norm_cdf(d1);
        }
        return call_price(spec.with_sigma(sigma), 0.0) - e_payoff + hedge;
    };
    const double g0 = g_of(spec.sigma0);

    const double shift = es.epsilon * es.bias_coeff;
    const double sd = std::sqrt(es.epsilon * es.var_coeff);
    std::vector<double> values(draws);
    for (std::size_t i = 0; i < draws; ++i) {
        NormalSource z(derive_stream(seed, i));
        const double sigma = std::max(spec.sigma0 + shift + sd * z.next(), 1e-8);
        values[i] = g_of(sigma) - g0;
    }

    double mean = 0.0;
    for (double vv : values) mean += vv;
    mean /= static_cast<double>(draws);
    double m2 = 0.0, m4 = 0.0;
    for (double vv : values) {
        const double d = vv - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const double n = static_cast<double>(draws);
    const double var = m2 / (n - 1.0);
    const double var_of_var = std::max(m4 / n - var * var * (n - 3.0) / (n - 1.0), 0.0);
    return {mean, var, std::sqrt(var / n), std::sqrt(var_of_var / n), draws};
}

/// Exact-in-law GBM path ensemble: S_{t+dt} = S_t exp((mu - sigma0^2/2) dt
/// + sigma0 sqrt(dt) Z). Path i draws from stream (seed, i), so the
/// ensemble is independent of traversal order.
struct PathEnsemble {
    std::size_t paths;
    std::size_t steps;
    double dt;
    std::vector<double> data;  ///< row-major, paths x (steps + 1)

    double at(std::size_t path, std::size_t step) const { return data[path * (steps + 1) + step]; }
};

inline PathEnsemble gbm_paths(const OptionSpec& spec, const McConfig& mc) {
    if (mc.steps < 1) throw std::invalid_argument("gbm_paths: steps must be >= 1");
    PathEnsemble e;
    e.paths = mc.paths;
    e.steps = mc.steps;
    e.dt = spec.maturity / static_cast<double>(mc.steps);
    e.data.resize(mc.paths * (mc.steps + 1));
    const double drift = (spec.mu - 0.5 * spec.sigma0 * spec.sigma0) * e.dt;
    const double diff = spec.sigma0 * std::sqrt(e.dt);
    for (std::size_t p = 0; p < mc.paths; ++p) {
        NormalSource z(derive_stream(mc.seed, p));
        double s = spec.spot;
        e.data[p * (mc.steps + 1)] = s;
        for (std::size_t j = 1; j <= mc.steps; ++j) {
            s *= std::exp(drift + diff * z.next());
            e.data[p * (mc.steps + 1) + j] = s;
        }
    }
    return e;
}

struct HedgePnlStats {
    double mean;
    double variance;
    double std_error;  ///< of the mean
    std::size_t paths;
    std::size_t steps;
};

/// Discrete delta-hedged P&L:
///   premium + sum_j N(d1(trader_sigma; S_j, t_j)) (S_{j+1} - S_j) - (S_T - K)^+
/// Paths are streamed (never stored); Welford accumulation for mean and
/// variance.
inline HedgePnlStats mc_hedge_pnl(double trader_sigma, const OptionSpec& spec,
                                  const McConfig& mc) {
    if (!(trader_sigma > 0.0)) throw std::invalid_argument("mc_hedge_pnl: trader_sigma must be > 0");
    if (mc.steps < 1) throw std::invalid_argument("mc_hedge_pnl: steps must be >= 1");
    const double dt = spec.maturity / static_cast<double>(mc.steps);
    const double drift = (spec.mu - 0.5 * spec.sigma0 * spec.sigma0) * dt;
    const double diff = spec.sigma0 * std::sqrt(dt);
    const double premium = call_price(spec.with_sigma(trader_sigma), 0.0);

    double mean = 0.0, m2 = 0.0;
    for (std::size_t p = 0; p < mc.paths; ++p) {
        NormalSource z(derive_stream(mc.seed, p));
        double s = spec.spot;
        double pnl = premium;
        for (std::size_t j = 0; j < mc.steps; ++j) {
            const double tau = spec.maturity - static_cast<double>(j) * dt;
            const double d1 = std::log(s / spec.strike) / (trader_sigma * std::sqrt(tau)) +
                              0.5 * trader_sigma * std::sqrt(tau);
            const double s_next = s * std::exp(drift + diff * z.next());
            pnl += norm_cdf(d1) * (s_next - s);
            s = s_next;
        }
        pnl -= std::max(s - spec.strike, 0.0);
        const double delta = pnl - mean;
        mean += delta / static_cast<double>(p + 1);
        m2 += delta * (pnl - mean);
    }
    const double n = static_cast<double>(mc.paths);
    const double var = mc.paths > 1 ? m2 / (n - 1.0) : 0.0;
    return {mean, var, std::sqrt(var / n), mc.paths, mc.steps};
}

} // namespace pbs::oracle
