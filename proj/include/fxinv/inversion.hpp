#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fxinv/measure.hpp"
#include "fxinv/pricing.hpp"

namespace fxinv::inversion {

/// Parameters of the reciprocal FX rate under the foreign measure when the
/// original rate is Heston under the domestic measure. The map is
///   v0'    = v0
///   kappa' = kappa - rho * sigma
///   vbar'  = kappa * vbar / kappa'
///   sigma' = sigma
///   rho'   = -rho
/// and the inverted model is again Heston, so the two sides must produce
/// identical smiles through the reciprocal-axis symmetry. Throws
/// std::domain_error when kappa - rho*sigma <= 0 (the inverse process would
/// not mean-revert and the map leaves the Heston family).
pricing::HestonParams invert_heston(const pricing::HestonParams& p);

/// Exact dynamics of the reciprocal rate Y = 1/S under the foreign measure
/// when S is SABR under the domestic measure:
///   dY = -dr Y dt + (V Y^{2-beta}) dB1,   dV = nu rho_src Y^{1-beta} V^2 dt + nu V dB2,
/// with corr(B1, B2) = correlation = -rho_src and V(0) = alpha. The minus on
/// the correlation comes from writing the Y diffusion with a positive
/// coefficient: the measure change hands Y a negated asset Brownian. Note the
/// V drift keeps the *source* rho. These dynamics are not of SABR form (the
/// V equation gains a Y-dependent quadratic drift), which is exactly why a
/// parameter-level "inverse SABR" cannot be consistent.
struct InverseSabrDynamics {
    pricing::SabrParams source;
    double rate_differential = 0.0;  // domestic-minus-foreign carry of the original market
    double correlation = 0.0;        // to use for (B1, B2); equals -source.rho

    double drift_y(double y, double v) const;
    double diff_y(double y, double v) const;   // positive coefficient convention
    double drift_v(double y, double v) const;
    double diff_v(double y, double v) const;
};

InverseSabrDynamics inverse_sabr(const pricing::SabrParams& p,
                                 double rate_differential);

/// Time-homogeneous local-vol shapes with enough structure to decide the
/// reciprocal symmetry sigma(1/x) = sigma(x) exactly where possible.
enum class LocalVolFamily { log_polynomial, symmetric_laurent, log_symmetric, opaque };

struct LocalVolFunction {
    LocalVolFamily family = LocalVolFamily::opaque;
    std::vector<double> coefficients;  // log_polynomial a_0..a_n, or laurent a_{-k}..a_k
    int laurent_order = 0;
    std::function<double(double)> shape;          // log_symmetric payload f(log x)
    std::function<double(double, double)> fn;     // opaque payload (x, t)

    double operator()(double x, double t) const;
};

/// sigma(x) = sum_j a_j (log x)^j. Symmetric exactly when odd coefficients
/// vanish.
LocalVolFunction make_log_polynomial(std::vector<double> coeffs);

/// sigma(x) = sum_{j=-k..k} a_j x^j; coefficients must be palindromic
/// (a_j == a_{-j}), which makes the shape symmetric by construction. Throws
/// std::invalid_argument otherwise. coeffs holds a_{-k}..a_k, size 2k+1.
LocalVolFunction make_symmetric_laurent(int k, std::vector<double> coeffs);

/// sigma(x) = f(log x); consistency requires |f(z)| = |f(-z)|.
LocalVolFunction make_log_symmetric(std::function<double(double)> f);

/// Arbitrary surface sigma(x, t); checked only pointwise.
LocalVolFunction make_opaque(std::function<double(double, double)> fn);

struct ConsistencyCheck {
    bool consistent = true;
    double max_violation = 0.0;
    double worst_point = 0.0;            // grid point attaining max_violation
    std::vector<double> grid;
    std::vector<double> violations;      // aligned with grid

    /// Violation at a specific grid point (matched to 1e-12 relative);
    /// throws std::invalid_argument when x is not on the grid.
    double violation_at(double x) const;
};

/// Evaluates the reciprocal-symmetry violation |sigma(1/x,t) - sigma(x,t)|
/// (family-aware, so algebraically symmetric families report exactly zero)
/// at every grid point. The grid must be closed under x -> 1/x to 1e-12
/// relative; otherwise std::invalid_argument. consistent means
/// max_violation <= tol.
ConsistencyCheck check_local_vol_consistency(const LocalVolFunction& lv,
                                             std::span<const double> grid,
                                             double t, double tol = 1e-12);

/// 101 log-spaced points on [1/8, 8], exactly closed under reciprocals.
std::vector<double> default_log_grid();

/// Single-sized (constant relative size) jump component of a jump-diffusion,
/// tagged with the measure its parameters live under.
struct ConstantJumpSpec {
    double gamma = 0.0;   // relative jump size, > -1
    double lambda = 0.0;  // Poisson intensity, >= 0
    Measure measure = Measure::domestic;
};

/// Measure inversion of a constant jump: size gamma' = -gamma/(1+gamma),
/// intensity lambda' = lambda (1+gamma), measure tag flipped. Requires
/// gamma > -1 and lambda > 0. Applying it twice returns the input exactly
/// (algebraically): gamma'' = gamma, lambda'' = lambda.
ConstantJumpSpec invert_constant_jump(const ConstantJumpSpec& spec);

/// Diagnostics for a claimed domestic/foreign jump pair.
struct CompensationResidual {
    /// lambda_d gamma_d + lambda_f gamma_f; zero iff the pair compensates.
    double residual = 0.0;
    /// Same with the domestic term negated; generally nonzero, reported
    /// because the identity circulates with that sign error.
    double sign_flipped_residual = 0.0;
    /// lambda_f/lambda_d - |gamma_d/gamma_f|; zero for a true inverse pair
    /// (NaN when gamma_f == 0).
    double intensity_ratio_gap = 0.0;
};

/// Requires dom tagged domestic and frn tagged foreign.
CompensationResidual jump_compensation_residual(const ConstantJumpSpec& dom,
                                                const ConstantJumpSpec& frn);

}  // namespace fxinv::inversion
