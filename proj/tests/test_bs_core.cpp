#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pbs/bs_core.hpp"
#include "pbs/normal.hpp"

using namespace pbs;

namespace {
const double kMoneyness[] = {0.5, 0.7, 0.9, 1.0, 1.1, 1.5, 2.0};
const double kSigmas[] = {0.05, 0.1, 0.2, 0.4, 0.6};
const double kTaus[] = {0.02, 0.1, 0.5, 1.0, 4.0};

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
} // namespace

TEST_CASE("norm_cdf reference values", "[normal]") {
    // high-precision table
    CHECK(norm_cdf(0.0) == 0.5);
    CHECK_THAT(norm_cdf(-8.0), Catch::Matchers::WithinAbs(6.2209605742717841235e-16, 1e-15));
    CHECK_THAT(norm_cdf(-5.0), Catch::Matchers::WithinAbs(2.8665157187919391167e-7, 1e-15));
    CHECK_THAT(norm_cdf(-2.5), Catch::Matchers::WithinAbs(0.006209665325776135167, 1e-15));
    CHECK_THAT(norm_cdf(-1.96), Catch::Matchers::WithinAbs(0.024997895148220434137, 1e-15));
    CHECK_THAT(norm_cdf(-0.5), Catch::Matchers::WithinAbs(0.30853753872598689636, 1e-15));
    CHECK_THAT(norm_cdf(0.3), Catch::Matchers::WithinAbs(0.61791142218895263731, 1e-15));
    CHECK_THAT(norm_cdf(1.0), Catch::Matchers::WithinAbs(0.84134474606854294859, 1e-15));
    CHECK_THAT(norm_cdf(2.5), Catch::Matchers::WithinAbs(0.99379033467422386483, 1e-15));
    CHECK_THAT(norm_cdf(8.0), Catch::Matchers::WithinAbs(1.0, 1e-15));
}

TEST_CASE("norm_cdf symmetry and tails", "[normal]") {
    for (double x : {0.1, 0.7, 1.3, 2.9, 4.4, 6.0}) {
        CHECK_THAT(norm_cdf(x) + norm_cdf(-x), Catch::Matchers::WithinAbs(1.0, 1e-15));
    }
    // no premature underflow in the left tail
    CHECK(norm_cdf(-36.0) > 0.0);
    CHECK(norm_cdf(-30.0) > 0.0);
    CHECK(rel_diff(norm_cdf(-5.0), 2.8665157187919391167e-7) < 1e-13);
}

TEST_CASE("stable cdf difference matches direct subtraction where safe", "[normal]") {
    for (double a : {-2.0, -0.5, 0.0, 1.3}) {
        for (double h : {0.5, 1.7, -0.8}) {
            const double direct = norm_cdf(a + h) - norm_cdf(a);
            CHECK_THAT(detail::norm_cdf_diff(a, h), Catch::Matchers::WithinRel(direct, 1e-12));
        }
    }
    // tiny-interval case where subtraction would lose every digit
    const double p = detail::phi_mean_excess(-0.1, 1e-8);
    CHECK_THAT(p, Catch::Matchers::WithinRel(norm_pdf(-0.1) * 0.05e-8, 1e-6));
}

TEST_CASE("d1 d2 values and contract", "[bs_core]") {
    const OptionSpec atm1(100, 100, 1.0, 0.2, 0.0);
    auto d = d1_d2(atm1);
    CHECK_THAT(d.d1, Catch::Matchers::WithinAbs(0.1, 1e-15));
    CHECK_THAT(d.d2, Catch::Matchers::WithinAbs(-0.1, 1e-15));

    const OptionSpec atm4(100, 100, 4.0, 0.2, 0.0);
    d = d1_d2(atm4);
    CHECK_THAT(d.d1, Catch::Matchers::WithinAbs(0.2, 1e-15));
    CHECK_THAT(d.d2, Catch::Matchers::WithinAbs(-0.2, 1e-15));

    const OptionSpec itm(110, 100, 1.0, 0.2, 0.0);
    d = d1_d2(itm);
    CHECK_THAT(d.d1, Catch::Matchers::WithinAbs(0.5765508990216243, 1e-12));
    CHECK_THAT(d.d2, Catch::Matchers::WithinAbs(0.3765508990216243, 1e-12));

    CHECK_THROWS_AS(d1_d2(atm1, 1.0), std::domain_error);
    CHECK_THROWS_AS(d1_d2(atm1, 1.5), std::domain_error);
    CHECK_THROWS_AS(d1_d2(atm1, -0.1), std::domain_error);

    // d2 = d1 - sigma sqrt(tau) identically
    for (double m : kMoneyness)
        for (double s : kSigmas)
            for (double t : kTaus) {
                const OptionSpec spec(100.0, 100.0 * m, t, s, 0.05);
                const auto dd = d1_d2(spec);
                CHECK_THAT(dd.d1 - dd.d2, Catch::Matchers::WithinRel(s * std::sqrt(t), 1e-13));
            }
}

TEST_CASE("OptionSpec validation", "[bs_core]") {
    CHECK_THROWS_AS(OptionSpec(-1, 100, 1, 0.2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(OptionSpec(100, 0, 1, 0.2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(OptionSpec(100, 100, 0, 0.2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(OptionSpec(100, 100, 1, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(OptionSpec(100, 100, 1, 0.2, NAN), std::invalid_argument);
    CHECK_NOTHROW(OptionSpec(100, 100, 1, 0.2, -0.5));
}

TEST_CASE("call price values and limits", "[bs_core]") {
    CHECK_THAT(call_price(OptionSpec(100, 100, 1.0, 0.2, 0.0)),
               Catch::Matchers::WithinAbs(7.9655674554057963, 1e-10));
    CHECK_THAT(call_price(OptionSpec(100, 110, 0.25, 0.3, 0.0)),
               Catch::Matchers::WithinAbs(2.4967065034113430, 1e-10));
    // strike -> 0: call worth spot
    CHECK_THAT(call_price(OptionSpec(100, 1e-9, 1.0, 0.2, 0.0)),
               Catch::Matchers::WithinRel(100.0, 1e-9));
    // vanishing variance, out of the money
    CHECK(call_price(OptionSpec(90, 100, 1e-6, 1e-4, 0.0)) < 1e-12);
}

TEST_CASE("call price bounds and monotonicity", "[bs_core]") {
    for (double m : kMoneyness)
        for (double s : kSigmas)
            for (double t : kTaus) {
                const OptionSpec spec(100.0, 100.0 * m, t, s, 0.0);
                const double f = call_price(spec);
                CHECK(f >= std::max(spec.spot - spec.strike, 0.0) - 1e-12);
                CHECK(f <= spec.spot + 1e-12);
                CHECK(call_price(spec.with_sigma(s * 1.05)) > f - 1e-15);
                CHECK(call_price(spec.with_spot(101.0)) > f);
                CHECK(call_price(spec.with_strike(spec.strike * 1.01)) < f + 1e-15);
            }
}

TEST_CASE("call delta", "[bs_core]") {
    CHECK_THAT(call_delta(OptionSpec(100, 100, 1.0, 0.2, 0.0)),
               Catch::Matchers::WithinAbs(0.5398278372770290, 1e-12));
    CHECK_THAT(call_delta(OptionSpec(1000, 100, 1.0, 0.2, 0.0)),
               Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(call_delta(OptionSpec(10, 100, 1.0, 0.2, 0.0)),
               Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("sigma sensitivities against finite differences", "[bs_core]") {
    double worst = 0.0;
    for (double m : kMoneyness)
        for (double s : kSigmas)
            for (double t : kTaus) {
                const OptionSpec spec(100.0, 100.0 * m, t, s, 0.0);
                const auto sens = sigma_sensitivities(spec);

                const double hs = 1e-4 * s;
                const double fd_vega = (call_price(spec.with_sigma(s + hs)) -
                                        call_price(spec.with_sigma(s - hs))) /
                                       (2.0 * hs);
                worst = std::max(worst, rel_diff(sens.vega, fd_vega));
                CHECK(rel_diff(sens.vega, fd_vega) < 1e-5);

                const double fd_vomma = (sigma_sensitivities(spec.with_sigma(s + hs)).vega -
                                         sigma_sensitivities(spec.with_sigma(s - hs)).vega) /
                                        (2.0 * hs);
                CHECK(std::abs(sens.vomma - fd_vomma) <=
                      1e-5 * std::max(std::abs(fd_vomma), 1e-4 * sens.vega) + 1e-12);

                const double fd_vanna = (call_delta(spec.with_sigma(s + hs)) -
                                         call_delta(spec.with_sigma(s - hs))) /
                                        (2.0 * hs);
                CHECK(std::abs(sens.vanna - fd_vanna) <=
                      1e-5 * std::max(std::abs(fd_vanna), 1e-6) + 1e-12);

                const double hx = 1e-4 * spec.spot;
                const double fd_dvomma = (sigma_sensitivities(spec.with_spot(spec.spot + hx)).vomma -
                                          sigma_sensitivities(spec.with_spot(spec.spot - hx)).vomma) /
                                         (2.0 * hx);
                CHECK(std::abs(sens.dvomma_dx - fd_dvomma) <=
                      1e-5 * std::max(std::abs(fd_dvomma), 1e-6) + 1e-12);

                const double hk = 1e-4 * spec.strike;
                const double fd_density = (call_price(spec.with_strike(spec.strike + hk)) -
                                           2.0 * call_price(spec) +
                                           call_price(spec.with_strike(spec.strike - hk))) /
                                          (hk * hk);
                CHECK(rel_diff(sens.density, fd_density) < 1e-5);
            }
    INFO("worst vega FD rel err " << worst);
}

TEST_CASE("vega positive, vomma sign, strike convexity", "[bs_core]") {
    const OptionSpec atm(100, 100, 1.0, 0.2, 0.0);
    const auto sens = sigma_sensitivities(atm);
    CHECK(sens.vega > 0.0);
    CHECK(sens.vomma < 0.0);  // sign(d1 d2) = sign(0.1 * -0.1)
    for (double m : kMoneyness)
        for (double s : kSigmas)
            for (double t : kTaus) {
                const OptionSpec spec(100.0, 100.0 * m, t, s, 0.0);
                // vega and density are strictly positive wherever phi(d1)
                // is representable; at grid corners it underflows to 0
                if (norm_pdf(d1_d2(spec).d1) > 0.0) {
                    CHECK(sigma_sensitivities(spec).vega > 0.0);
                    CHECK(sigma_sensitivities(spec).density > 0.0);
                    const double hk = 1e-5 * spec.strike;
                    CHECK(call_price(spec.with_strike(spec.strike + hk)) <= call_price(spec));
                }
            }
}
