#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pbs/pbs.hpp"

namespace {

struct CommonArgs {
    double spot = 100.0;
    double strike = 100.0;
    double maturity = 1.0 / 12.0;
    double sigma = 0.2;
    double mu = 0.0;
    double epsilon = 0.02;
    double bias_coeff = -1.0;   // -5 * sigma0 at the reference sigma0 = 0.2
    double var_coeff = 0.04;    // sigma0^2
    double quantile_mult = 1.0;
    std::string format = "text";
    std::uint64_t seed = 1;
};

void add_common_options(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--spot", a.spot, "spot price")->check(CLI::PositiveNumber);
    cmd->add_option("--strike", a.strike, "strike price")->check(CLI::PositiveNumber);
    cmd->add_option("--maturity", a.maturity, "maturity in years")->check(CLI::PositiveNumber);
    cmd->add_option("--sigma", a.sigma, "market volatility sigma0")->check(CLI::PositiveNumber);
    cmd->add_option("--mu", a.mu, "drift of the underlying");
    cmd->add_option("--epsilon", a.epsilon, "error-structure scale (> 0)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--bias-coeff", a.bias_coeff, "bias coefficient A[sigma](sigma0)");
    cmd->add_option("--var-coeff", a.var_coeff, "variance coefficient Gamma[sigma](sigma0)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--quantile-mult", a.quantile_mult,
                    "half-spread in standard deviations (k)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", a.seed, "random seed recorded in outputs");
    cmd->add_option("--format", a.format, "output format")
        ->check(CLI::IsMember({"csv", "text"}));
}

void warn_if_large_perturbation(const CommonArgs& a) {
    if (a.epsilon * std::abs(a.bias_coeff) / a.sigma > 0.5) {
        std::cerr << "warning: epsilon * |bias_coeff| / sigma0 > 0.5; "
                     "first-order corrections are unreliable at this size\n";
    }
}

int run_quote(const CommonArgs& a) {
    const pbs::OptionSpec spec(a.spot, a.strike, a.maturity, a.sigma, a.mu);
    const pbs::ErrorStructure es(a.epsilon, a.bias_coeff, a.var_coeff);
    const pbs::QuoteConfig qc(a.quantile_mult);
    warn_if_large_perturbation(a);

    const pbs::PbsQuote q = pbs::quote(spec, es, qc);
    const auto alerts = pbs::check_quote(spec, q);

    if (a.format == "csv") {
        std::cout << pbs::sweep::csv_header(spec, es, qc, a.seed);
        const auto rows = pbs::sweep::curve_rows(spec, es, qc, {a.strike});
        std::cout << pbs::sweep::csv_body(rows);
    } else {
        auto line = [](const char* name, double v) {
            std::printf("%-18s %.10f\n", name, v);
        };
        line("bs_premium", q.bs_premium);
        line("bias_zero_drift", q.bias_zero_drift);
        line("bias_drift_corr", q.bias_drift_corr);
        line("bias_total", q.bias_total);
        line("gamma_call", q.variance_term);
        line("mid", q.mid);
        line("bid", q.bid);
        line("ask", q.ask);
        line("spread", q.spread);
        const auto iv_mid = pbs::bs_implied_vol(q.mid, spec);
        const auto iv_bid = pbs::bs_implied_vol(q.bid, spec);
        const auto iv_ask = pbs::bs_implied_vol(q.ask, spec);
        std::printf("%-18s %s\n", "iv_mid", iv_mid ? std::to_string(*iv_mid).c_str() : "-");
        std::printf("%-18s %s\n", "iv_bid", iv_bid ? std::to_string(*iv_bid).c_str() : "-");
        std::printf("%-18s %s\n", "iv_ask", iv_ask ? std::to_string(*iv_ask).c_str() : "-");
    }
    if (alerts.bid_below_intrinsic)
        std::cerr << "warning: bid below intrinsic value (expansion left no-arbitrage bounds)\n";
    if (alerts.mid_nonpositive) std::cerr << "warning: mid premium is not positive\n";
    return 0;
}

int run_sweep(const CommonArgs& a, const std::string& sweep_expr, const std::string& strikes_expr,
              const std::string& out_path, const std::string& plot_script) {
    pbs::sweep::SweepConfig cfg;
    cfg.base = pbs::OptionSpec(a.spot, a.strike, a.maturity, a.sigma, a.mu);
    cfg.es = pbs::ErrorStructure(a.epsilon, a.bias_coeff, a.var_coeff);
    cfg.qc = pbs::QuoteConfig(a.quantile_mult);
    cfg.seed = a.seed;
    warn_if_large_perturbation(a);

    // --sweep var=v1,v2,...
    const auto eq = sweep_expr.find('=');
    if (eq == std::string::npos)
        throw CLI::ValidationError("--sweep", "expected var=v1,v2,...");
    const std::string var = sweep_expr.substr(0, eq);
    if (var == "bias_coeff") cfg.variable = pbs::sweep::SweepVar::bias_coeff;
    else if (var == "var_coeff") cfg.variable = pbs::sweep::SweepVar::var_coeff;
    else if (var == "epsilon") cfg.variable = pbs::sweep::SweepVar::epsilon;
    else if (var == "maturity") cfg.variable = pbs::sweep::SweepVar::maturity;
    else if (var == "mu") cfg.variable = pbs::sweep::SweepVar::mu;
    else throw CLI::ValidationError("--sweep", "unknown sweep variable: " + var);
    cfg.values.clear();
    std::string rest = sweep_expr.substr(eq + 1);
    for (std::size_t pos = 0; pos <= rest.size();) {
        const auto comma = rest.find(',', pos);
        const std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                            : comma - pos);
        if (!tok.empty()) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                throw CLI::ValidationError("--sweep", "malformed number: " + tok);
            }
            if (used != tok.size())
                throw CLI::ValidationError("--sweep", "malformed number: " + tok);
            cfg.values.push_back(v);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (cfg.values.empty()) throw CLI::ValidationError("--sweep", "no sweep values given");

    // --strikes min:max:count
    if (!strikes_expr.empty()) {
        double mn = 0.0, mx = 0.0;
        long cnt = 0;
        if (std::sscanf(strikes_expr.c_str(), "%lf:%lf:%ld", &mn, &mx, &cnt) != 3 || cnt < 1)
            throw CLI::ValidationError("--strikes", "expected min:max:count");
        cfg.strikes = {mn, mx, static_cast<std::size_t>(cnt)};
    }

    const auto out = pbs::sweep::run_sweep(cfg, out_path);
    for (const auto& f : out.files) std::cout << "wrote " << f << "\n";
    if (!plot_script.empty()) {
        pbs::sweep::write_plot_script(plot_script, out.files);
        std::cout << "wrote " << plot_script << "\n";
    }
    return 0;
}

int run_validate(const std::string& level, std::uint64_t seed, bool inject_error) {
    pbs::validate::Options opt;
    opt.full = (level == "full");
    opt.seed = seed;
    if (inject_error) opt.corrupt_closed_forms = 1e-3;

    const auto results = pbs::validate::run(opt);
    int failures = 0;
    std::printf("%-45s %-12s %-12s %s\n", "check", "worst", "threshold", "status");
    for (const auto& r : results) {
        std::printf("%-45s %-12.3e %-12.3e %s\n", r.name.c_str(), r.worst, r.threshold,
                    r.passed ? "pass" : "FAIL");
        if (!r.passed) ++failures;
    }
    if (failures) std::fprintf(stderr, "%d check(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Perturbative Black-Scholes pricing: quotes, curve sweeps, validation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file");

    CommonArgs qa;
    auto* quote_cmd = app.add_subcommand("quote", "price a single option and print the decomposition");
    add_common_options(quote_cmd, qa);

    CommonArgs sa;
    std::string sweep_expr = "mu=0";
    std::string strikes_expr;
    std::string out_path = "sweep.csv";
    std::string plot_script;
    auto* sweep_cmd = app.add_subcommand("sweep", "write implied-vol curve CSVs across a parameter sweep");
    add_common_options(sweep_cmd, sa);
    sweep_cmd->add_option("--sweep", sweep_expr, "sweep spec: var=v1,v2,... "
                          "(var in bias_coeff|var_coeff|epsilon|maturity|mu)");
    sweep_cmd->add_option("--strikes", strikes_expr, "strike grid min:max:count (default 85:115:31)");
    sweep_cmd->add_option("--out", out_path, "output CSV path (one file per sweep value)");
    sweep_cmd->add_option("--plot-script", plot_script, "also emit a gnuplot script");

    std::string level = "fast";
    std::uint64_t vseed = 20250801;
    bool inject_error = false;
    auto* validate_cmd = app.add_subcommand("validate", "run the numerical validation suite");
    validate_cmd->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
    validate_cmd->add_option("--seed", vseed, "seed for randomized checks");
    validate_cmd->add_flag("--inject-error", inject_error,
                           "harness self-test: corrupt the closed forms and expect failure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (quote_cmd->parsed()) return run_quote(qa);
        if (sweep_cmd->parsed())
            return run_sweep(sa, sweep_expr, strikes_expr, out_path, plot_script);
        if (validate_cmd->parsed()) return run_validate(level, vseed, inject_error);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
