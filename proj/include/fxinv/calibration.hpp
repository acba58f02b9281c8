#pragma once

#include <variant>
#include <vector>

#include "fxinv/market_data.hpp"
#include "fxinv/pricing.hpp"

namespace fxinv::calib {

struct CalibrationResult {
    std::variant<pricing::HestonParams, pricing::SabrParams> params;
    double residual = 0.0;  // RMS vol error across quotes
    int iterations = 0;     // of the winning start
    bool converged = false;
    std::vector<double> per_quote_errors;  // model vol - market vol
    bool feller_ok = true;  // Heston only; informational, never imposed
    int best_start = 0;     // index of the winning start point
};

/// Deterministic multi-start seeds: a heuristic centre built from the ATM
/// quote followed by count-1 low-discrepancy points spread over the
/// parameter box.
std::vector<pricing::HestonParams> default_heston_starts(
    const market::MarketSmile& smile, int count = 8);

/// Least-squares fit of Heston to the smile's implied vols (full pricing and
/// vol inversion per quote). Box constraints: v0, vbar in [1e-6, 4], kappa
/// in [1e-4, 20], sigma in [1e-4, 5], rho in [-0.999, 0.999]. Starts run
/// independently (in parallel when OpenMP is on) and the best final cost
/// wins, ties broken by start index, so the result does not depend on
/// thread count. Needs at least 3 quotes.
CalibrationResult calibrate_heston(const market::MarketSmile& smile,
                                   std::vector<pricing::HestonParams> starts = {});

/// Fit of (alpha, rho, nu) at fixed beta to the smile via the lognormal vol
/// expansion. alpha is pre-solved from the ATM level, then six deterministic
/// (rho, nu) starts compete. Needs at least 3 quotes; beta must lie in
/// [0, 1].
CalibrationResult calibrate_sabr(const market::MarketSmile& smile, double beta);

}  // namespace fxinv::calib
