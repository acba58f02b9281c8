#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "fxinv/inversion.hpp"
#include "fxinv/jump_densities.hpp"
#include "fxinv/market_data.hpp"
#include "fxinv/pricing.hpp"

namespace fxinv::mc {

enum class ExecMode { serial, parallel };

/// Jump component of a simulated jump-diffusion: none, constant-size, or
/// compound Poisson. Measure tags inside the specs are the caller's
/// bookkeeping; the simulators interpret drift and jumps under whatever
/// measure the caller is simulating.
using JumpComponent =
    std::variant<std::monostate, inversion::ConstantJumpSpec, jumps::CompoundJumpSpec>;

struct McConfig {
    std::size_t paths = 100000;
    std::size_t steps = 1;       // ignored by the exact scheme
    std::uint64_t seed = 0;
    bool antithetic = false;     // requires an even path count
    ExecMode exec = ExecMode::parallel;
};

/// Terminal simulation output. Path i is fully determined by (seed, i), so
/// results are identical across thread counts and between serial and
/// parallel execution. With antithetic on, paths 2k and 2k+1 share every
/// jump draw and use opposite Gaussians.
///
/// Kernels may additionally evolve a control twin: a constant-vol lognormal
/// driven by the same asset Gaussians as the true path. Its terminal law is
/// known in closed form (control_forward, control_vol), which lets mc_smile
/// regress payoff noise against the twin's matching payoff.
struct TerminalSample {
    std::vector<double> values;      // terminal asset levels
    std::vector<double> rn_weights;  // S_T e^{-carry T} / S_0 (exact scheme only)
    double maturity = 0.0;
    McConfig config;
    bool low_step_warning = false;   // fewer than 50 steps per year requested
    std::size_t clamped_paths = 0;   // paths where state clamping/truncation engaged

    std::vector<double> control_values;  // control-twin terminal levels, path-aligned
    double control_forward = 0.0;        // exact mean of the twin at maturity
    double control_vol = 0.0;            // the twin's constant lognormal volatility

    // Unit-mean lognormal factor exp(nu W2(T) - nu^2 T / 2) built from the
    // vol-driving Brownian, when the kernel has one. Tilting by the factor
    // shifts the twin's forward to control_tilted_forward = E[twin * factor]
    // while keeping it lognormal with the same vol, so expectations of
    // twin-payoff-times-factor stay closed form.
    std::vector<double> control_vol_factors;
    double control_tilted_forward = 0.0;

    bool has_control() const { return !control_values.empty(); }
};

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

/// Sample mean and standard error. With antithetic on, (2k, 2k+1) pairs are
/// averaged first so the error reflects the number of independent pairs.
MeanSe mean_se(std::span<const double> values, bool antithetic);

/// Exact terminal simulation of geometric Brownian motion with Poisson jumps
/// under the given carry:
///   S_T = s0 exp((carry - lambda E[J] - sigma^2/2) T + sigma W_T) prod (1+J_i).
/// No time discretisation error; steps is ignored. rn_weights holds the
/// change-of-numeraire density S_T e^{-carry T}/s0 for each path.
TerminalSample simulate_jump_gbm_exact(double s0, double carry, double sigma,
                                       const JumpComponent& jump, double maturity,
                                       const McConfig& cfg);

/// Log-Euler Heston with full truncation: the variance may go negative and
/// enters every coefficient through max(V, 0); the asset log-step uses the
/// start-of-step variance, which keeps E[S_T] exactly at s0 e^{carry T}
/// for any step count.
TerminalSample simulate_heston(const pricing::HestonParams& p, double s0,
                               double carry, double maturity, const McConfig& cfg);

/// Log-Euler scheme for the exact inverted-SABR dynamics. The Brownian pair
/// uses dyn.correlation (already negated relative to the source model); V is
/// absorbed at zero and the level is clamped to [1e-8, 1e8], with clamping
/// recorded in clamped_paths. V(0) = source alpha.
///
/// The sample carries a control twin: a lognormal with the same carry and
/// vol frozen at the initial instantaneous value alpha * y0^(1-beta), fed by
/// the same asset Gaussians, plus the unit-mean vol factor built from the
/// vol-driving Brownian. Neither consumes extra random numbers, so the true
/// paths are unaffected by their presence.
TerminalSample simulate_inverse_sabr(const inversion::InverseSabrDynamics& dyn,
                                     double y0, double maturity, const McConfig& cfg);

/// Implied-vol smile extracted from a terminal sample. Strikes may arrive in
/// any order and are quoted ascending. Strikes whose Monte Carlo price falls
/// outside the open no-arbitrage band (intrinsic, df*F), or whose vol leaves
/// the inversion bracket, are omitted and reported.
///
/// Estimator: strikes below the forward are priced through the
/// out-of-the-money put and converted with put-call parity against the
/// supplied forward — the schemes preserve the forward exactly, and the
/// constant shift adds no Monte Carlo noise. When the sample carries a
/// control twin, each payoff is regression-adjusted against controls built
/// from the twin — its matching payoff, that payoff scaled by the vol
/// factor, the twin level, and the factor itself — each with an exactly
/// known mean (plain and tilted Black values). Standard errors are
/// antithetic-pair aware and reflect every adjustment.
struct McSmile {
    market::MarketSmile smile;            // quotes only for usable strikes
    std::vector<double> vol_std_errors;   // aligned with smile.quotes
    std::vector<double> omitted_strikes;
};

McSmile mc_smile(const TerminalSample& sample, double forward,
                 std::span<const double> strikes, double discount);

struct PricedValue {
    double value = 0.0;
    double std_error = 0.0;
};

/// Inverted-measure expectation via the sample's exact Radon-Nikodym
/// weights: mean of L_T * payoff(1/S_T). This prices claims on the
/// reciprocal rate under the other measure without simulating it. Requires
/// a sample produced with weights (the exact scheme).
PricedValue rn_weighted_price(const TerminalSample& sample,
                              const std::function<double(double)>& payoff);

}  // namespace fxinv::mc
