#include "fxinv/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "fxinv/quadrature.hpp"

namespace fxinv::pricing {

void validate(const HestonParams& p) {
    if (!(p.v0 >= 0.0)) throw std::invalid_argument("heston: v0 must be non-negative");
    if (!(p.vbar >= 0.0)) throw std::invalid_argument("heston: vbar must be non-negative");
    if (!(p.kappa > 0.0)) throw std::invalid_argument("heston: kappa must be positive");
    if (!(p.sigma > 0.0)) throw std::invalid_argument("heston: sigma must be positive");
    if (!(std::fabs(p.rho) < 1.0)) throw std::invalid_argument("heston: |rho| must be below 1");
}

bool feller_condition(const HestonParams& p) {
    return 2.0 * p.kappa * p.vbar >= p.sigma * p.sigma;
}

void validate(const SabrParams& p) {
    if (!(p.alpha + p.alpha_shift > 0.0))
        throw std::invalid_argument("sabr: alpha (after shift) must be positive");
    if (!(p.beta >= 0.0 && p.beta <= 1.0))
        throw std::invalid_argument("sabr: beta must lie in [0,1]");
    if (!(std::fabs(p.rho) < 1.0)) throw std::invalid_argument("sabr: |rho| must be below 1");
    if (!(p.nu >= 0.0)) throw std::invalid_argument("sabr: nu must be non-negative");
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double norm_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014327;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

namespace {

void check_black_args(double forward, double strike, double maturity,
                      double discount) {
    if (!(forward > 0.0)) throw std::invalid_argument("black: forward must be positive");
    if (!(strike > 0.0)) throw std::invalid_argument("black: strike must be positive");
    if (!(maturity > 0.0)) throw std::invalid_argument("black: maturity must be positive");
    if (!(discount > 0.0 && discount <= 1.0))
        throw std::invalid_argument("black: discount must lie in (0,1]");
}

}  // namespace

double black_call(double forward, double strike, double maturity, double vol,
                  double discount) {
    check_black_args(forward, strike, maturity, discount);
    if (!(vol > 0.0)) throw std::invalid_argument("black: vol must be positive");
    const double sd = vol * std::sqrt(maturity);
    const double d1 = std::log(forward / strike) / sd + 0.5 * sd;
    const double d2 = d1 - sd;
    return discount * (forward * norm_cdf(d1) - strike * norm_cdf(d2));
}

double black_put(double forward, double strike, double maturity, double vol,
                 double discount) {
    return black_call(forward, strike, maturity, vol, discount) -
           discount * (forward - strike);
}

double black_vega(double forward, double strike, double maturity, double vol,
                  double discount) {
    check_black_args(forward, strike, maturity, discount);
    if (!(vol > 0.0)) throw std::invalid_argument("black: vol must be positive");
    const double sd = vol * std::sqrt(maturity);
    const double d1 = std::log(forward / strike) / sd + 0.5 * sd;
    return discount * forward * norm_pdf(d1) * std::sqrt(maturity);
}

double implied_vol(double price, double forward, double strike,
                   double maturity, double discount) {
    check_black_args(forward, strike, maturity, discount);
    const double intrinsic = discount * std::max(forward - strike, 0.0);
    const double cap = discount * forward;
    if (!(price > intrinsic))
        throw std::domain_error("implied_vol: price at or below intrinsic value");
    if (!(price < cap))
        throw std::domain_error("implied_vol: price at or above forward bound");

    const double lo = 1e-6, hi = 5.0;
    const double tol = 1e-12 * discount * forward;
    auto f = [&](double v) {
        return black_call(forward, strike, maturity, v, discount) - price;
    };

    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa > 0.0) throw std::domain_error("implied_vol: vol below bracket [1e-6, 5]");
    if (fb < 0.0) throw std::domain_error("implied_vol: vol above bracket [1e-6, 5]");

    // Brent's method: inverse quadratic / secant steps guarded by bisection.
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b);
        const double xm = 0.5 * (c - b);
        if (std::fabs(fb) <= tol) return b;
        if (std::fabs(xm) <= tol1) {
            if (std::fabs(fb) <= 64.0 * tol) return b;
            break;
        }
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {  // secant
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {  // inverse quadratic
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q),
                                   std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    throw std::runtime_error("implied_vol: root refinement failed to meet tolerance");
}

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

// log characteristic function of ln(S_T/F) under the pricing measure,
// phi(u) = E[exp(i u ln(S_T/F))]. Uses g = (xi - d)/(xi + d) with the
// principal-branch d, which keeps the complex log continuous in T.
cd heston_log_cf(cd u, const HestonParams& p, double maturity) {
    const double s2 = p.sigma * p.sigma;
    const cd xi = p.kappa - p.rho * p.sigma * I * u;
    const cd d = std::sqrt(xi * xi + s2 * (I * u + u * u));
    const cd g = (xi - d) / (xi + d);
    const cd edt = std::exp(-d * maturity);
    const cd D = (xi - d) / s2 * (1.0 - edt) / (1.0 - g * edt);
    const cd C = p.kappa * p.vbar / s2 *
                 ((xi - d) * maturity - 2.0 * std::log((1.0 - g * edt) / (1.0 - g)));
    return C + D * p.v0;
}

// In-phase probabilities P1 (delta-like) and P2 (exercise probability) via
// Gil-Pelaez inversion. Integration proceeds over geometrically growing
// blocks until two consecutive blocks are negligible.
double heston_probability(const HestonParams& p, double log_moneyness,
                          double maturity, bool first) {
    auto integrand = [&](double u) {
        const cd uc{u, 0.0};
        cd phi;
        if (first) {
            // phi(u - i) / phi(-i); phi(-i) = 1 since S/F is a martingale
            // with expectation 1 in forward units: E[S_T/F] = 1.
            phi = std::exp(heston_log_cf(uc - I, p, maturity));
        } else {
            phi = std::exp(heston_log_cf(uc, p, maturity));
        }
        const cd val = std::exp(-I * uc * log_moneyness) * phi / (I * uc);
        return val.real();
    };

    double integral = 0.0;
    double lo = 0.0, width = 10.0;
    int negligible = 0;
    for (int block = 0; block < 40; ++block) {
        const quad::QuadResult r =
            quad::integrate(integrand, lo, lo + width, 1e-12, 2000);
        integral += r.value;
        if (std::fabs(r.value) < 1e-13)
            ++negligible;
        else
            negligible = 0;
        if (negligible >= 2) break;
        lo += width;
        width *= 2.0;
    }
    return 0.5 + integral / M_PI;
}

}  // namespace

double heston_call(const HestonParams& p, double forward, double strike,
                   double maturity, double discount) {
    validate(p);
    check_black_args(forward, strike, maturity, discount);
    const double k = std::log(strike / forward);
    const double p1 = heston_probability(p, k, maturity, true);
    const double p2 = heston_probability(p, k, maturity, false);
    return discount * (forward * p1 - strike * p2);
}

double hagan_vol(const SabrParams& p, double forward, double strike,
                 double maturity) {
    validate(p);
    if (!(forward > 0.0)) throw std::invalid_argument("hagan_vol: forward must be positive");
    if (!(strike > 0.0)) throw std::invalid_argument("hagan_vol: strike must be positive");
    if (!(maturity > 0.0)) throw std::invalid_argument("hagan_vol: maturity must be positive");

    const double a = p.alpha + p.alpha_shift;
    const double omb = 1.0 - p.beta;
    const double log_fk = std::log(forward / strike);
    const double fk_pow = std::pow(forward * strike, 0.5 * omb);

    const double t1 = omb * omb / 24.0 * a * a / (fk_pow * fk_pow);
    const double t2 = 0.25 * p.rho * p.beta * p.nu * a / fk_pow;
    const double t3 = (2.0 - 3.0 * p.rho * p.rho) / 24.0 * p.nu * p.nu;
    const double corr = 1.0 + (t1 + t2 + t3) * maturity;

    if (std::fabs(log_fk) < 1e-8) return a / fk_pow * corr;

    const double l2 = log_fk * log_fk;
    const double denom =
        fk_pow * (1.0 + omb * omb / 24.0 * l2 + omb * omb * omb * omb / 1920.0 * l2 * l2);

    const double z = p.nu / a * fk_pow * log_fk;
    double z_over_x;
    if (std::fabs(z) < 1e-6) {
        // x(z) = z + rho z^2/2 + O(z^3), so z/x = 1 - rho z/2 + O(z^2).
        z_over_x = 1.0 - 0.5 * p.rho * z;
    } else {
        const double x = std::log(
            (std::sqrt(1.0 - 2.0 * p.rho * z + z * z) + z - p.rho) / (1.0 - p.rho));
        z_over_x = z / x;
    }
    return a / denom * z_over_x * corr;
}

}  // namespace fxinv::pricing
