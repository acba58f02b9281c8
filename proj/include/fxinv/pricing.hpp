#pragma once

#include <stdexcept>

namespace fxinv::pricing {

/// Heston square-root stochastic volatility parameters:
///   dS = mu S dt + sqrt(V) S dW1,  dV = kappa (vbar - V) dt + sigma sqrt(V) dW2,
///   d<W1,W2> = rho dt,  V(0) = v0.
struct HestonParams {
    double v0 = 0.0;     // initial variance, >= 0
    double vbar = 0.0;   // long-run variance, >= 0
    double kappa = 0.0;  // mean-reversion speed, > 0
    double sigma = 0.0;  // vol of variance, > 0
    double rho = 0.0;    // spot/variance correlation, in (-1, 1)
};

void validate(const HestonParams& p);

/// Whether 2 kappa vbar >= sigma^2 (variance stays strictly positive).
/// Reported for information; nothing in this library imposes it.
bool feller_condition(const HestonParams& p);

/// SABR parameters for dF = V F^beta dW1, dV = nu V dW2, V(0) = alpha.
/// alpha_shift is an additive regularisation applied to alpha wherever the
/// vol expansion uses it; zero by default.
struct SabrParams {
    double alpha = 0.0;  // initial vol level, > 0 after shift
    double beta = 0.0;   // backbone exponent, in [0, 1]
    double rho = 0.0;    // in (-1, 1)
    double nu = 0.0;     // vol of vol, >= 0
    double alpha_shift = 0.0;
};

void validate(const SabrParams& p);

double norm_cdf(double x);
double norm_pdf(double x);

/// Undiscounted-forward Black formula, price = df * (F Phi(d1) - K Phi(d2)).
double black_call(double forward, double strike, double maturity, double vol,
                  double discount);

/// Put via parity: put = call - df * (F - K).
double black_put(double forward, double strike, double maturity, double vol,
                 double discount);

/// Black vega, d(price)/d(vol).
double black_vega(double forward, double strike, double maturity, double vol,
                  double discount);

/// Inverts the Black call formula for the vol on the bracket [1e-6, 5].
/// Throws std::domain_error when the price sits at or outside the
/// no-arbitrage band (intrinsic, df*F) or corresponds to a vol outside the
/// bracket. The result reprices to within 1e-12 * df * forward.
double implied_vol(double price, double forward, double strike,
                   double maturity, double discount);

/// Heston vanilla call by characteristic-function integration, using the
/// d-branch convention that keeps the complex log single-valued for long
/// maturities. Absolute price accuracy around 1e-10 * df * forward.
double heston_call(const HestonParams& p, double forward, double strike,
                   double maturity, double discount);

/// Hagan's lognormal SABR vol expansion, with the usual series fallbacks for
/// the ATM point (|log(F/K)| < 1e-8) and small z.
double hagan_vol(const SabrParams& p, double forward, double strike,
                 double maturity);

}  // namespace fxinv::pricing
