#include "fxinv/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace fxinv::market {

using nlohmann::json;

void validate(const MarketSmile& smile) {
    if (!(smile.maturity > 0.0))
        throw std::invalid_argument("smile: maturity must be positive");
    if (!(smile.spot > 0.0))
        throw std::invalid_argument("smile: spot must be positive");
    if (!(smile.forward > 0.0))
        throw std::invalid_argument("smile: forward must be positive");
    if (!(smile.domestic_discount > 0.0 && smile.domestic_discount <= 1.0))
        throw std::invalid_argument("smile: domestic_discount must lie in (0,1]");

    const double implied_fwd =
        smile.spot * std::exp(smile.rate_differential * smile.maturity);
    if (std::fabs(implied_fwd - smile.forward) > 1e-10 * smile.forward)
        throw std::invalid_argument(
            "smile: forward inconsistent with spot and rate_differential");

    double prev = 0.0;
    for (const VolQuote& q : smile.quotes) {
        if (!(q.strike > 0.0))
            throw std::invalid_argument("smile: strikes must be positive");
        if (!(q.strike > prev))
            throw std::invalid_argument("smile: strikes must be strictly increasing");
        if (!(q.vol > 0.0))
            throw std::invalid_argument("smile: vols must be positive");
        prev = q.strike;
    }
}

MarketSmile load_smile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open smile file: " + path);

    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("smile file " + path + ": " + e.what());
    }

    MarketSmile smile;
    if (!j.contains("spot") || !j.contains("maturity_years"))
        throw std::invalid_argument("smile file: spot and maturity_years are required");
    smile.spot = j.at("spot").get<double>();
    smile.maturity = j.at("maturity_years").get<double>();
    if (!(smile.maturity > 0.0))
        throw std::invalid_argument("smile file: maturity_years must be positive");
    smile.domestic_discount = j.value("domestic_discount", 1.0);

    const bool has_fwd = j.contains("forward");
    const bool has_rd = j.contains("rate_differential");
    if (!has_fwd && !has_rd)
        throw std::invalid_argument(
            "smile file: need forward or rate_differential (or both)");
    if (has_fwd) smile.forward = j.at("forward").get<double>();
    if (has_rd) smile.rate_differential = j.at("rate_differential").get<double>();
    if (!has_fwd)
        smile.forward = smile.spot * std::exp(smile.rate_differential * smile.maturity);
    if (!has_rd) {
        if (!(smile.forward > 0.0 && smile.spot > 0.0))
            throw std::invalid_argument("smile file: spot and forward must be positive");
        smile.rate_differential = std::log(smile.forward / smile.spot) / smile.maturity;
    }

    if (!j.contains("quotes") || !j.at("quotes").is_array())
        throw std::invalid_argument("smile file: quotes array is required");
    for (const json& jq : j.at("quotes")) {
        VolQuote q;
        q.strike = jq.at("strike").get<double>();
        q.vol = jq.at("vol").get<double>();
        q.label = jq.value("label", std::string());
        smile.quotes.push_back(std::move(q));
    }

    validate(smile);
    return smile;
}

void save_smile(const MarketSmile& smile, const std::string& path) {
    json j;
    j["spot"] = smile.spot;
    j["forward"] = smile.forward;
    j["maturity_years"] = smile.maturity;
    j["rate_differential"] = smile.rate_differential;
    j["domestic_discount"] = smile.domestic_discount;
    j["quotes"] = json::array();
    for (const VolQuote& q : smile.quotes) {
        json jq = {{"strike", q.strike}, {"vol", q.vol}};
        if (!q.label.empty()) jq["label"] = q.label;
        j["quotes"].push_back(std::move(jq));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write smile file: " + path);
    out << j.dump(2) << '\n';
}

double atm_strike(double forward, double vol, double maturity) {
    if (!(forward > 0.0)) throw std::invalid_argument("atm_strike: forward must be positive");
    if (!(vol > 0.0)) throw std::invalid_argument("atm_strike: vol must be positive");
    if (!(maturity > 0.0)) throw std::invalid_argument("atm_strike: maturity must be positive");
    return forward * std::exp(0.5 * vol * vol * maturity);
}

MarketSmile reciprocal_axis(const MarketSmile& smile) {
    validate(smile);
    MarketSmile out;
    out.spot = 1.0 / smile.spot;
    out.forward = 1.0 / smile.forward;
    out.maturity = smile.maturity;
    out.rate_differential = -smile.rate_differential;
    out.domestic_discount = smile.domestic_discount;
    out.quotes.reserve(smile.quotes.size());
    // Reciprocal strikes of an increasing grid come out decreasing; walk the
    // source backwards so the output grid is increasing again.
    for (auto it = smile.quotes.rbegin(); it != smile.quotes.rend(); ++it)
        out.quotes.push_back({1.0 / it->strike, it->vol, it->label});
    return out;
}

}  // namespace fxinv::market
