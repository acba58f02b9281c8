#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fxinv/calibration.hpp"
#include "fxinv/inversion.hpp"
#include "fxinv/market_data.hpp"
#include "fxinv/montecarlo.hpp"
#include "fxinv/pricing.hpp"

namespace fxinv::report {

/// Distance between two smiles on identical grids (same maturity to 1e-12,
/// same strikes to 1e-10 relative): sup and RMS of vol differences.
struct SmileDistance {
    double sup = 0.0;
    double rms = 0.0;
};

SmileDistance smile_distance(const market::MarketSmile& a,
                             const market::MarketSmile& b);

struct ConditionFlag {
    std::string name;
    bool ok = true;
    double value = 0.0;
};

/// Outcome of one inversion-consistency experiment. "duality" is the
/// model-free benchmark: the original smile carried to the reciprocal axis.
/// "mapped" is what the candidate parameter map produces on that axis. For
/// SABR, "simulated" prices the exact inverted dynamics by Monte Carlo.
struct ConsistencyReport {
    std::string model;
    market::MarketSmile original;
    market::MarketSmile duality;
    market::MarketSmile mapped;
    std::optional<mc::McSmile> simulated;
    SmileDistance mapped_vs_duality;
    std::optional<SmileDistance> simulated_vs_duality;  // over usable strikes
    std::vector<ConditionFlag> conditions;
    /// Best in-family fit (RMS vol) to the duality smile; NaN when not run.
    /// For SABR this quantifies how far the true inverse sits from the
    /// family: it stays well above fitting noise.
    double refit_residual = 0.0;
};

/// Smile of the model at the layout's strikes (vols in the layout are
/// ignored, everything else is taken from it).
market::MarketSmile model_smile_heston(const pricing::HestonParams& p,
                                       const market::MarketSmile& layout);
market::MarketSmile model_smile_sabr(const pricing::SabrParams& p,
                                     const market::MarketSmile& layout);

/// The parameter-level SABR guess for the reciprocal market: alpha rescaled
/// by the reciprocal forward's backbone factor, rho negated.
///   alpha' = alpha * F_recip^{2(1-beta)}, beta' = beta, rho' = -rho, nu' = nu.
/// ATM-exact (and exact for beta = 1) but wrong in the wings; quantifying
/// that error is the point of the experiment.
pricing::SabrParams naive_sabr_map(const pricing::SabrParams& p,
                                   double reciprocal_forward);

/// Prices the original and parameter-mapped inverse Heston on both axes and
/// measures their agreement. Throws std::domain_error (from invert_heston)
/// when the inverse leaves the family.
ConsistencyReport heston_consistency_experiment(const pricing::HestonParams& p,
                                                const market::MarketSmile& layout);

/// Three-way SABR experiment on the reciprocal axis: duality benchmark vs
/// naive parameter map vs Monte Carlo of the exact inverted dynamics, plus
/// a best in-family refit of the duality smile.
ConsistencyReport sabr_inconsistency_experiment(const pricing::SabrParams& p,
                                                const market::MarketSmile& layout,
                                                const mc::McConfig& cfg);

/// Five demo strikes K = atm * exp(j w), j = -2..2, w = vol sqrt(T), around
/// the d1 = 0 ATM point.
std::vector<double> demo_strike_grid(double forward, double vol, double maturity);

/// Smile skeleton carrying the demo strike grid (quote vols hold the
/// placeholder vol; experiments overwrite them with model vols).
market::MarketSmile demo_layout(double spot, double forward, double maturity,
                                double vol, double discount = 1.0);

/// Fixed-point formatting used by every emitter: 12 significant digits.
std::string format_significant(double v);

void write_csv(const ConsistencyReport& r, std::ostream& os);
void write_structured(const ConsistencyReport& r, std::ostream& os);

}  // namespace fxinv::report
