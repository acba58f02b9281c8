#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fxinv/market_data.hpp"
#include "fxinv/pricing.hpp"

using namespace fxinv::pricing;

namespace {

const HestonParams kHeston{0.0025, 0.0287, 1.1718, 0.1720, 0.0952};

std::vector<double> canonical_strikes() {
    // five strikes atm * exp(j * vol * sqrt(T)), j = -2..2, around the
    // d1 = 0 point of (F 1.2478, vol 0.0755, T 0.25)
    return {1.15788438270729, 1.20243002729440, 1.24868941332351,
            1.29672847113993, 1.34661566753370};
}

}  // namespace

TEST_SUITE("pricing") {

TEST_CASE("black formula reference values") {
    CHECK(std::abs(black_call(1.0, 1.0, 1.0, 0.2, 1.0) - 0.0796556745541) <= 1e-12);
    CHECK(std::abs(black_call(1.2478, 1.24869, 0.25, 0.0755, 1.0) -
                   0.0183558946504362) <= 1e-12);
    CHECK(std::abs(black_call(1.2478, 1.2478, 0.25, 0.0755, 1.0) -
                   0.0187908409383) <= 1e-12);
}

TEST_CASE("put-call parity and discounting") {
    for (double k : {0.7, 1.0, 1.6}) {
        const double c = black_call(1.1, k, 0.75, 0.3, 0.97);
        const double p = black_put(1.1, k, 0.75, 0.3, 0.97);
        CHECK(std::abs((c - p) - 0.97 * (1.1 - k)) <= 1e-14);
    }
    // price scales linearly in the discount factor
    CHECK(std::abs(black_call(1.0, 1.0, 1.0, 0.2, 0.5) -
                   0.5 * black_call(1.0, 1.0, 1.0, 0.2, 1.0)) <= 1e-16);
}

TEST_CASE("vega matches a central difference") {
    const double h = 1e-6;
    const double fd = (black_call(1.2, 1.3, 0.5, 0.25 + h, 0.99) -
                       black_call(1.2, 1.3, 0.5, 0.25 - h, 0.99)) /
                      (2.0 * h);
    CHECK(std::abs(black_vega(1.2, 1.3, 0.5, 0.25, 0.99) - fd) <= 1e-7);
}

TEST_CASE("call price is monotone in vol and decreasing in strike") {
    double prev = black_call(1.0, 1.0, 1.0, 0.05, 1.0);
    for (double v : {0.1, 0.2, 0.4, 0.8}) {
        const double c = black_call(1.0, 1.0, 1.0, v, 1.0);
        CHECK(c > prev);
        prev = c;
    }
    prev = black_call(1.0, 0.5, 1.0, 0.2, 1.0);
    for (double k : {0.8, 1.0, 1.3, 2.0}) {
        const double c = black_call(1.0, k, 1.0, 0.2, 1.0);
        CHECK(c < prev);
        prev = c;
    }
}

TEST_CASE("implied vol round trips across the surface") {
    // strikes sit a fixed number of standard deviations from the forward so
    // vega stays healthy for every (vol, t) pair and the inversion is
    // well-conditioned
    for (double vol : {0.05, 0.2, 0.8}) {
        for (double sd : {-1.5, 0.0, 1.5}) {
            for (double t : {0.1, 1.0}) {
                const double f = 1.2478;
                const double k = f * std::exp(sd * vol * std::sqrt(t));
                const double price = black_call(f, k, t, vol, 0.98);
                const double iv = implied_vol(price, f, k, t, 0.98);
                CHECK(std::abs(iv - vol) <= 1e-10);
            }
        }
    }
}

TEST_CASE("implied vol rejects prices outside the no-arbitrage band") {
    const double f = 1.0, t = 1.0, df = 1.0;
    // at or below intrinsic
    CHECK_THROWS_AS(implied_vol(0.0, f, 1.2, t, df), std::domain_error);
    CHECK_THROWS_AS(implied_vol(0.19, f, 0.8, t, df), std::domain_error);
    // at or above the forward bound
    CHECK_THROWS_AS(implied_vol(1.0, f, 0.8, t, df), std::domain_error);
    // inside the band but outside the vol bracket [1e-6, 5]: at the money a
    // price of 1e-10 needs vol below 1e-6, and 0.9999 needs vol above 5
    CHECK_THROWS_AS(implied_vol(1e-10, f, 1.0, t, df), std::domain_error);
    CHECK_THROWS_AS(implied_vol(0.9999, f, 1.0, t, df), std::domain_error);
}

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(validate(kHeston));
    HestonParams p = kHeston;
    p.kappa = 0.0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = kHeston;
    p.rho = 1.0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = kHeston;
    p.v0 = -1e-6;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);

    CHECK(feller_condition(kHeston));  // 2*1.1718*0.0287 > 0.172^2
    p = kHeston;
    p.sigma = 0.5;
    CHECK(!feller_condition(p));

    SabrParams s{0.0748, 0.5, 0.1435, 0.7330, 0.0};
    CHECK_NOTHROW(validate(s));
    s.beta = 1.2;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = {0.0, 0.5, 0.0, 0.5, 0.0};  // alpha + shift must be positive
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = {-1e-9, 0.5, 0.0, 0.5, 1e-6};
    CHECK_NOTHROW(validate(s));
}

TEST_CASE("heston transform prices at the calibrated point") {
    const std::vector<double> strikes = canonical_strikes();
    const std::vector<double> prices = {0.0904911485744, 0.0494312882176,
                                        0.0182855400433, 0.00436740763968,
                                        0.000777904014260};
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        const double c = heston_call(kHeston, 1.2478, strikes[i], 0.25, 1.0);
        CHECK(std::abs(c - prices[i]) <= 1e-9);
    }
    // ATM implied vol of the model
    const double atm = fxinv::market::atm_strike(1.2478, 0.0755, 0.25);
    const double iv =
        implied_vol(heston_call(kHeston, 1.2478, atm, 0.25, 1.0), 1.2478, atm, 0.25, 1.0);
    CHECK(std::abs(iv - 0.0752161949) <= 1e-8);
}

TEST_CASE("heston degenerates to black as vol-of-vol vanishes") {
    // flat variance path: v0 = vbar makes total variance v0*T regardless of kappa
    const HestonParams p{0.04, 0.04, 1.5, 1e-3, 0.0};
    for (double k : {0.9, 1.0, 1.15}) {
        const double hc = heston_call(p, 1.0, k, 1.0, 1.0);
        const double bc = black_call(1.0, k, 1.0, 0.2, 1.0);
        CHECK(std::abs(hc - bc) <= 1e-6);
    }
}

TEST_CASE("heston price respects static no-arbitrage bounds") {
    for (double k : canonical_strikes()) {
        const double c = heston_call(kHeston, 1.2478, k, 0.25, 1.0);
        CHECK(c > std::max(1.2478 - k, 0.0));
        CHECK(c < 1.2478);
    }
}

TEST_CASE("hagan vol at the calibrated point") {
    const SabrParams p{0.0748, 0.5, 0.1435, 0.7330, 0.0};
    CHECK(std::abs(hagan_vol(p, 1.2478, 1.2478, 0.25) - 0.0677040168751653) <= 1e-12);
    const std::vector<double> strikes = canonical_strikes();
    const std::vector<double> vols = {0.0719941280, 0.0681929440, 0.0677305080,
                                      0.0708412580, 0.0763392140};
    for (std::size_t i = 0; i < strikes.size(); ++i)
        CHECK(std::abs(hagan_vol(p, 1.2478, strikes[i], 0.25) - vols[i]) <= 1e-8);
}

TEST_CASE("hagan vol is continuous through the at-the-money switch") {
    const SabrParams p{0.0748, 0.5, 0.1435, 0.7330, 0.0};
    const double at = hagan_vol(p, 1.2478, 1.2478, 0.25);
    const double near = hagan_vol(p, 1.2478, 1.2478 * (1.0 + 1e-9), 0.25);
    CHECK(std::abs(at - near) <= 1e-9);
}

TEST_CASE("hagan beta = 1, nu = 0 is exactly lognormal") {
    const SabrParams p{0.23, 1.0, 0.0, 0.0, 0.0};
    for (double k : {0.8, 1.0, 1.4})
        CHECK(std::abs(hagan_vol(p, 1.0, k, 2.0) - 0.23) <= 1e-12);
}

}  // TEST_SUITE
