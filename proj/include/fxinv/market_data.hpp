#pragma once

#include <string>
#include <vector>

namespace fxinv::market {

struct VolQuote {
    double strike = 0.0;
    double vol = 0.0;          // Black implied vol, annualised
    std::string label;         // optional tag, e.g. "25d-put"
};

/// One maturity slice of an FX vol surface plus the forward/carry data needed
/// to price it. rate_differential is the domestic-minus-foreign short rate
/// spread, so forward = spot * exp(rate_differential * maturity).
struct MarketSmile {
    double spot = 0.0;
    double forward = 0.0;
    double maturity = 0.0;            // year fraction, > 0
    double rate_differential = 0.0;
    double domestic_discount = 1.0;   // df to maturity, in (0, 1]
    std::vector<VolQuote> quotes;     // strictly increasing strikes
};

/// Throws std::invalid_argument when any field violates its contract
/// (non-positive maturity, spot/forward/carry inconsistent beyond 1e-10
/// relative, strikes not strictly increasing or non-positive, vols
/// non-positive, discount outside (0,1]).
void validate(const MarketSmile& smile);

/// Reads a smile from a JSON file. Exactly one of "forward" or
/// "rate_differential" may be omitted; the missing one is derived from the
/// other. "domestic_discount" defaults to 1. The result is validated.
MarketSmile load_smile(const std::string& path);

/// Writes the smile as JSON (schema identical to what load_smile reads).
void save_smile(const MarketSmile& smile, const std::string& path);

/// ATM-forward strike convention used throughout: the strike where the
/// Black d1 of a vanilla equals zero, K = F * exp(vol^2 * maturity / 2).
double atm_strike(double forward, double vol, double maturity);

/// Maps a smile to the reciprocal-rate axis: strike K becomes 1/K (order
/// re-sorted ascending), the vol at K is carried over unchanged, spot and
/// forward become their reciprocals and the carry flips sign. This is the
/// model-free symmetry of FX vanillas: a call on the rate struck at K and a
/// put on the reciprocal rate struck at 1/K are the same contract, so they
/// share one implied vol. The domestic discount factor is carried over
/// unchanged and quote labels are preserved.
MarketSmile reciprocal_axis(const MarketSmile& smile);

}  // namespace fxinv::market
