#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbs/implied_vol.hpp"
#include "pbs/option_spec.hpp"
#include "pbs/pbs_pricing.hpp"
#include "pbs/version.hpp"

namespace pbs::sweep {

enum class SweepVar { bias_coeff, var_coeff, epsilon, maturity, mu };

inline const char* to_string(SweepVar v) {
    switch (v) {
        case SweepVar::bias_coeff: return "bias_coeff";
        case SweepVar::var_coeff: return "var_coeff";
        case SweepVar::epsilon: return "epsilon";
        case SweepVar::maturity: return "maturity";
        case SweepVar::mu: return "mu";
    }
    return "?";
}

struct StrikeGrid {
    double min = 85.0;
    double max = 115.0;
    std::size_t count = 31;

    std::vector<double> values() const {
        if (!(min > 0.0) || !(max >= min) || count < 1)
            throw std::invalid_argument("StrikeGrid: need 0 < min <= max and count >= 1");
        std::vector<double> v(count);
        if (count == 1) {
            v[0] = min;
            return v;
        }
        const double step = (max - min) / static_cast<double>(count - 1);
        for (std::size_t i = 0; i < count; ++i) v[i] = min + step * static_cast<double>(i);
        return v;
    }
};

/// Reference configuration: one-month ATM-centered grid, epsilon = 0.02,
/// A = -5 sigma0, Gamma = sigma0^2 on spot 100, sigma0 = 0.2.
struct SweepConfig {
    OptionSpec base{100.0, 100.0, 1.0 / 12.0, 0.2, 0.0};
    ErrorStructure es{0.02, -1.0, 0.04};
    QuoteConfig qc{1.0};
    SweepVar variable = SweepVar::mu;
    std::vector<double> values{0.0};
    StrikeGrid strikes{};
    std::uint64_t seed = 1;
};

inline void apply_sweep_value(SweepVar var, double value, OptionSpec& spec, ErrorStructure& es) {
    switch (var) {
        case SweepVar::bias_coeff: es = ErrorStructure(es.epsilon, value, es.var_coeff); break;
        case SweepVar::var_coeff: es = ErrorStructure(es.epsilon, es.bias_coeff, value); break;
        case SweepVar::epsilon: es = ErrorStructure(value, es.bias_coeff, es.var_coeff); break;
        case SweepVar::maturity: spec = spec.with_maturity(value); break;
        case SweepVar::mu: spec = spec.with_mu(value); break;
    }
}

struct CurveRow {
    double strike;
    double moneyness;
    double bs_price;
    double mid;
    double bid;
    double ask;
    double spread;
    std::optional<double> iv_mid;
    std::optional<double> iv_bid;
    std::optional<double> iv_ask;
};

inline std::vector<CurveRow> curve_rows(const OptionSpec& base, const ErrorStructure& es,
                                        const QuoteConfig& qc, const std::vector<double>& strikes) {
    std::vector<CurveRow> rows;
    rows.reserve(strikes.size());
    const auto pts = vol_curve(base, es, qc, strikes);
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        const OptionSpec spec = base.with_strike(strikes[i]);
        const PbsQuote q = quote(spec, es, qc);
        rows.push_back({strikes[i], pts[i].moneyness, q.bs_premium, q.mid, q.bid, q.ask, q.spread,
                        pts[i].iv_mid, pts[i].iv_bid, pts[i].iv_ask});
    }
    return rows;
}

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string csv_header(const OptionSpec& spec, const ErrorStructure& es,
                              const QuoteConfig& qc, std::uint64_t seed) {
    std::ostringstream os;
    os << "# pbs version=" << kVersion << " spot=" << format_double(spec.spot)
       << " maturity=" << format_double(spec.maturity) << " sigma0=" << format_double(spec.sigma0)
       << " mu=" << format_double(spec.mu) << " epsilon=" << format_double(es.epsilon)
       << " bias_coeff=" << format_double(es.bias_coeff)
       << " var_coeff=" << format_double(es.var_coeff)
       << " quantile_mult=" << format_double(qc.quantile_mult) << " seed=" << seed << "\n";
    os << "strike,moneyness,bs_price,mid,bid,ask,spread,iv_mid,iv_bid,iv_ask\n";
    return os.str();
}

inline std::string csv_body(const std::vector<CurveRow>& rows) {
    std::ostringstream os;
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const auto& r : rows) {
        os << format_double(r.strike) << ',' << format_double(r.moneyness) << ','
           << format_double(r.bs_price) << ',' << format_double(r.mid) << ','
           << format_double(r.bid) << ',' << format_double(r.ask) << ','
           << format_double(r.spread) << ',' << opt(r.iv_mid) << ',' << opt(r.iv_bid) << ','
           << opt(r.iv_ask) << "\n";
    }
    return os.str();
}

/// File name for one sweep value: `<stem>_<var>_<value><ext>`.
inline std::string sweep_file_name(const std::string& out_path, SweepVar var, double value) {
    std::string stem = out_path;
    std::string ext;
    const auto dot = out_path.rfind('.');
    const auto slash = out_path.rfind('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
        stem = out_path.substr(0, dot);
        ext = out_path.substr(dot);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", value);
    return stem + "_" + to_string(var) + "_" + buf + ext;
}

struct SweepOutput {
    std::vector<std::string> files;
};

/// One CSV per sweep value. Writes are serialized; content is a pure
/// function of (config, seed, version).
inline SweepOutput run_sweep(const SweepConfig& cfg, const std::string& out_path) {
    SweepOutput out;
    const auto strikes = cfg.strikes.values();
    for (double value : cfg.values) {
        OptionSpec spec = cfg.base;
        ErrorStructure es = cfg.es;
        apply_sweep_value(cfg.variable, value, spec, es);
        const auto rows = curve_rows(spec, es, cfg.qc, strikes);
        const std::string path = cfg.values.size() == 1 && cfg.variable == SweepVar::mu &&
                                         cfg.values[0] == cfg.base.mu
                                     ? out_path
                                     : sweep_file_name(out_path, cfg.variable, value);
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        f << csv_header(spec, es, cfg.qc, cfg.seed) << csv_body(rows);
        if (!f) throw std::runtime_error("write failed: " + path);
        out.files.push_back(path);
    }
    return out;
}

/// gnuplot script plotting iv_mid across strikes for every emitted CSV.
inline void write_plot_script(const std::string& script_path, const std::vector<std::string>& csvs) {
    std::ofstream f(script_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + script_path);
    f << "set datafile separator ','\n"
      << "set key autotitle columnhead off\n"
      << "set xlabel 'strike'\n"
      << "set ylabel 'implied volatility'\n"
      << "plot ";
    for (std::size_t i = 0; i < csvs.size(); ++i) {
        if (i) f << ", ";
        f << "'" << csvs[i] << "' every ::1 using 1:8 with lines title '" << csvs[i] << "'";
    }
    f << "\n";
}

} // namespace pbs::sweep
