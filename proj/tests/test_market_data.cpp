#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "doctest.h"
#include "fxinv/market_data.hpp"

using namespace fxinv::market;

namespace {

MarketSmile demo_smile() {
    MarketSmile s;
    s.spot = 1.24122;
    s.forward = 1.2478;
    s.maturity = 0.25;
    s.rate_differential = std::log(s.forward / s.spot) / s.maturity;
    s.quotes = {{1.15, 0.080, "put-wing"},
                {1.20, 0.076, ""},
                {1.2478, 0.0755, "atm"},
                {1.30, 0.078, ""},
                {1.35, 0.084, "call-wing"}};
    return s;
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("market_data") {

TEST_CASE("atm strike sits at the d1 = 0 point") {
    CHECK(std::abs(atm_strike(1.2478, 0.0755, 0.25) - 1.24868941332351) <= 1e-12);
    CHECK(std::abs(atm_strike(2.0, 0.2, 1.0) - 2.04040268005351) <= 1e-12);
}

TEST_CASE("validation rejects malformed smiles") {
    CHECK_NOTHROW(validate(demo_smile()));

    auto s = demo_smile();
    s.maturity = 0.0;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);

    s = demo_smile();
    s.spot = -1.0;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);

    s = demo_smile();
    s.domestic_discount = 1.5;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);

    s = demo_smile();
    s.rate_differential = 0.05;  // no longer matches spot/forward
    CHECK_THROWS_WITH_AS(validate(s),
                         doctest::Contains("forward inconsistent"),
                         std::invalid_argument);

    s = demo_smile();
    s.quotes[1].strike = s.quotes[2].strike;  // not strictly increasing
    CHECK_THROWS_AS(validate(s), std::invalid_argument);

    s = demo_smile();
    s.quotes[3].vol = 0.0;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);

    s = demo_smile();
    s.quotes.clear();  // quote-free skeletons are legal
    CHECK_NOTHROW(validate(s));
}

TEST_CASE("json round trip") {
    const TempFile tmp("tmp_market_data_roundtrip.json");
    const MarketSmile s = demo_smile();
    save_smile(s, tmp.path);
    const MarketSmile r = load_smile(tmp.path);
    CHECK(r.spot == doctest::Approx(s.spot).epsilon(1e-14));
    CHECK(r.forward == doctest::Approx(s.forward).epsilon(1e-14));
    CHECK(r.maturity == doctest::Approx(s.maturity).epsilon(1e-14));
    REQUIRE(r.quotes.size() == s.quotes.size());
    for (std::size_t i = 0; i < s.quotes.size(); ++i) {
        CHECK(r.quotes[i].strike == doctest::Approx(s.quotes[i].strike).epsilon(1e-14));
        CHECK(r.quotes[i].vol == doctest::Approx(s.quotes[i].vol).epsilon(1e-14));
        CHECK(r.quotes[i].label == s.quotes[i].label);
    }
}

TEST_CASE("loader derives the missing carry field") {
    const TempFile tmp("tmp_market_data_derive.json");
    {
        std::ofstream f(tmp.path);
        f << R"({"spot": 2.0, "forward": 2.1, "maturity_years": 0.5,
                 "quotes": [{"strike": 2.0, "vol": 0.1}]})";
    }
    const MarketSmile s = load_smile(tmp.path);
    CHECK(std::abs(s.rate_differential - std::log(2.1 / 2.0) / 0.5) <= 1e-12);

    {
        std::ofstream f(tmp.path);
        f << R"({"spot": 2.0, "rate_differential": 0.04, "maturity_years": 0.5,
                 "quotes": [{"strike": 2.0, "vol": 0.1}]})";
    }
    const MarketSmile t = load_smile(tmp.path);
    CHECK(std::abs(t.forward - 2.0 * std::exp(0.04 * 0.5)) <= 1e-12);
}

TEST_CASE("loader rejects underdetermined or empty input") {
    const TempFile tmp("tmp_market_data_bad.json");
    {
        std::ofstream f(tmp.path);
        f << R"({"spot": 2.0, "maturity_years": 0.5, "quotes": []})";
    }
    CHECK_THROWS_AS(load_smile(tmp.path), std::invalid_argument);
    {
        std::ofstream f(tmp.path);
        f << R"({"spot": 2.0, "forward": 2.1, "maturity_years": 0.5})";
    }
    CHECK_THROWS_AS(load_smile(tmp.path), std::invalid_argument);
    CHECK_THROWS_AS(load_smile("does_not_exist_anywhere.json"), std::runtime_error);
}

TEST_CASE("reciprocal axis flips strikes, forward and carry") {
    const MarketSmile s = demo_smile();
    const MarketSmile r = reciprocal_axis(s);

    CHECK(std::abs(r.spot - 1.0 / 1.24122) <= 1e-15);
    CHECK(std::abs(r.spot - 0.80565894845394) <= 1e-12);
    CHECK(std::abs(r.forward - 1.0 / 1.2478) <= 1e-15);
    CHECK(r.rate_differential == doctest::Approx(-s.rate_differential).epsilon(1e-14));
    CHECK(r.maturity == s.maturity);
    CHECK(r.domestic_discount == s.domestic_discount);

    REQUIRE(r.quotes.size() == s.quotes.size());
    const std::size_t n = s.quotes.size();
    bool ascending = true;
    for (std::size_t i = 0; i + 1 < n; ++i)
        ascending &= (r.quotes[i].strike < r.quotes[i + 1].strike);
    CHECK(ascending);
    for (std::size_t i = 0; i < n; ++i) {
        // quote i pairs with original quote n-1-i: strike reciprocated,
        // vol and label carried (the duality identity)
        CHECK(r.quotes[i].strike ==
              doctest::Approx(1.0 / s.quotes[n - 1 - i].strike).epsilon(1e-15));
        CHECK(r.quotes[i].vol == s.quotes[n - 1 - i].vol);
        CHECK(r.quotes[i].label == s.quotes[n - 1 - i].label);
    }

    // applying the map twice lands back on the original within rounding
    const MarketSmile rr = reciprocal_axis(r);
    CHECK(std::abs(rr.forward - s.forward) <= 1e-14);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(rr.quotes[i].strike - s.quotes[i].strike) <= 1e-14);
}

}  // TEST_SUITE
