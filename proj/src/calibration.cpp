#include "fxinv/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace fxinv::calib {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double halton(std::size_t index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % static_cast<std::size_t>(base));
        index /= static_cast<std::size_t>(base);
    }
    return r;
}

struct LmOutcome {
    std::vector<double> x;
    double cost = kInf;  // 0.5 * sum r^2
    int iterations = 0;
    bool converged = false;
};

using ResidualFn = std::function<void(const std::vector<double>&, std::vector<double>&)>;

// Damped least-squares step: solve [J; sqrt(lambda) D] delta = [-r; 0] by
// Householder QR, with D^2 the diagonal of J^T J (MINPACK's scaling). Working
// on the augmented rectangular system instead of the normal equations keeps
// the condition number of J instead of its square, which is what lets lambda
// shrink all the way down on the badly-scaled, nearly-degenerate smile fits.
// Returns false when the system is numerically singular.
bool solve_damped_qr(const std::vector<double>& jac, const std::vector<double>& r,
                     std::size_t m, std::size_t n, double lambda,
                     const std::vector<double>& d2, std::vector<double>& delta) {
    const std::size_t rows = m + n;
    std::vector<double> a(rows * n, 0.0), b(rows, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = jac[i * n + j];
        b[i] = -r[i];
    }
    for (std::size_t j = 0; j < n; ++j)
        a[(m + j) * n + j] = std::sqrt(lambda * d2[j]);

    for (std::size_t k = 0; k < n; ++k) {
        double ss = 0.0;
        for (std::size_t i = k; i < rows; ++i) ss += a[i * n + k] * a[i * n + k];
        if (!(ss > 0.0) || !std::isfinite(ss)) return false;
        double norm = std::sqrt(ss);
        if (a[k * n + k] > 0.0) norm = -norm;
        const double vk = a[k * n + k] - norm;
        const double vtv = ss - 2.0 * norm * a[k * n + k] + norm * norm;
        a[k * n + k] = vk;  // column k now holds the reflector v
        for (std::size_t c = k + 1; c < n; ++c) {
            double w = 0.0;
            for (std::size_t i = k; i < rows; ++i) w += a[i * n + k] * a[i * n + c];
            w *= 2.0 / vtv;
            for (std::size_t i = k; i < rows; ++i) a[i * n + c] -= w * a[i * n + k];
        }
        double wb = 0.0;
        for (std::size_t i = k; i < rows; ++i) wb += a[i * n + k] * b[i];
        wb *= 2.0 / vtv;
        for (std::size_t i = k; i < rows; ++i) b[i] -= wb * a[i * n + k];
        a[k * n + k] = norm;  // diagonal entry of R
    }

    delta.resize(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t c = k + 1; c < n; ++c) s -= a[k * n + c] * delta[c];
        if (a[k * n + k] == 0.0) return false;
        delta[k] = s / a[k * n + k];
    }
    return true;
}

// Box-constrained Levenberg-Marquardt with central-difference Jacobians.
// Deliberately simple: the objective surfaces here are smooth and
// low-dimensional, and multi-start handles the rest.
LmOutcome levenberg_marquardt(const ResidualFn& fn, std::vector<double> x,
                              const std::vector<double>& lo,
                              const std::vector<double>& hi, int max_iters = 300) {
    const std::size_t n = x.size();
    for (std::size_t j = 0; j < n; ++j) x[j] = std::clamp(x[j], lo[j], hi[j]);

    std::vector<double> r, r_trial, r_up, r_dn;
    fn(x, r);
    const std::size_t m = r.size();
    auto cost_of = [](const std::vector<double>& rr) {
        double c = 0.0;
        for (double v : rr) c += v * v;
        return 0.5 * c;
    };

    LmOutcome out;
    out.x = x;
    out.cost = cost_of(r);
    double lambda = 1e-3;
    std::vector<double> jac(m * n), d2(n), delta(n), vel(n), acc(n), curv(m);
    std::vector<double> r_geo;
    std::vector<double> x_trial(n), x_geo(n), x_up(n), x_dn(n);

    for (int iter = 1; iter <= max_iters; ++iter) {
        out.iterations = iter;

        for (std::size_t j = 0; j < n; ++j) {
            // Central differences with a bound-aware spread. The residuals
            // carry a little implied-vol inversion noise, so the step has to
            // stay wide enough for the genuine slope to dominate it; the
            // second-order accuracy keeps the wider step from biasing the
            // Jacobian, which would otherwise stall the final digits.
            const double h = 1e-4 * std::max(std::fabs(x[j]), 1e-2);
            x_up = x;
            x_dn = x;
            x_up[j] = std::min(x[j] + h, hi[j]);
            x_dn[j] = std::max(x[j] - h, lo[j]);
            const double spread = x_up[j] - x_dn[j];
            fn(x_up, r_up);
            fn(x_dn, r_dn);
            for (std::size_t i = 0; i < m; ++i)
                jac[i * n + j] = (r_up[i] - r_dn[i]) / spread;
        }
        for (std::size_t p = 0; p < n; ++p) {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += jac[i * n + p] * jac[i * n + p];
            d2[p] = std::max(s, 1e-12);
        }

        bool stepped = false;
        for (int inner = 0; inner < 12; ++inner) {
            if (!solve_damped_qr(jac, r, m, n, lambda, d2, delta)) {
                lambda *= 10.0;
                continue;
            }
            double step_inf = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                x_trial[j] = std::clamp(x[j] + delta[j], lo[j], hi[j]);
                step_inf = std::max(step_inf, std::fabs(x_trial[j] - x[j]));
            }
            fn(x_trial, r_trial);
            double cost_trial = cost_of(r_trial);

            // Geodesic acceleration: the smile fits sit in curved valleys
            // where the damped linear step caps out well short of the
            // minimum. Probe the residual curvature along the step that was
            // just evaluated and retry with the second-order correction;
            // keep whichever trial is cheaper.
            for (std::size_t j = 0; j < n; ++j) vel[j] = x_trial[j] - x[j];
            for (std::size_t i = 0; i < m; ++i) {
                double jv = 0.0;
                for (std::size_t j = 0; j < n; ++j) jv += jac[i * n + j] * vel[j];
                curv[i] = 2.0 * (r_trial[i] - r[i] - jv);
            }
            if (solve_damped_qr(jac, curv, m, n, lambda, d2, acc)) {
                double na = 0.0, nv = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    acc[j] *= 0.5;
                    na += acc[j] * acc[j];
                    nv += vel[j] * vel[j];
                }
                // Trust the correction only while it stays subordinate to
                // the velocity (|acc| <= 0.75 |vel|).
                if (na <= 0.5625 * nv) {
                    for (std::size_t j = 0; j < n; ++j)
                        x_geo[j] = std::clamp(x[j] + vel[j] + acc[j], lo[j], hi[j]);
                    fn(x_geo, r_geo);
                    const double cost_geo = cost_of(r_geo);
                    if (cost_geo < cost_trial) {
                        cost_trial = cost_geo;
                        r_trial = r_geo;
                        step_inf = 0.0;
                        for (std::size_t j = 0; j < n; ++j) {
                            x_trial[j] = x_geo[j];
                            step_inf = std::max(step_inf, std::fabs(x_geo[j] - x[j]));
                        }
                    }
                }
            }

            if (cost_trial < out.cost) {
                const double improvement = out.cost - cost_trial;
                x = x_trial;
                r = r_trial;
                out.x = x;
                out.cost = cost_trial;
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                // Relative-reduction test in the MINPACK style: once an
                // accepted step wins less than a 1e-9 fraction of the cost,
                // the fit is stable to nine digits and any further sliding
                // along a flat valley is noise.
                if (improvement <= 1e-9 * out.cost || step_inf <= 1e-12) {
                    out.converged = true;
                    return out;
                }
                break;
            }
            lambda *= 4.0;
            if (step_inf <= 1e-14) {
                // Cannot move: we are pinned at a (possibly boxed) minimum.
                out.converged = true;
                return out;
            }
        }
        if (!stepped) {
            out.converged = true;  // no descent direction left at this scale
            return out;
        }
    }
    return out;  // iteration budget exhausted; converged stays false
}

// Model vol with soft edges: prices outside the no-arbitrage band or vols
// outside the inversion bracket are pushed to the bracket ends instead of
// throwing, so the optimiser sees a finite (if flat) objective.
double implied_vol_soft(double price, double forward, double strike,
                        double maturity, double discount) {
    const double intrinsic = discount * std::max(forward - strike, 0.0);
    const double cap = discount * forward;
    const double span = cap - intrinsic;
    const double lo = intrinsic + 1e-14 * span;
    const double hi = cap - 1e-14 * span;
    const double clamped = std::clamp(price, lo, hi);
    try {
        return pricing::implied_vol(clamped, forward, strike, maturity, discount);
    } catch (const std::domain_error&) {
        return (clamped - intrinsic < 0.5 * span) ? 1e-6 : 5.0;
    }
}

struct QuoteGrid {
    std::vector<double> strikes;
    std::vector<double> vols;
};

QuoteGrid quote_grid(const market::MarketSmile& smile, std::size_t min_quotes) {
    market::validate(smile);
    if (smile.quotes.size() < min_quotes)
        throw std::invalid_argument("calibrate: insufficient quotes (need at least 3)");
    QuoteGrid g;
    for (const auto& q : smile.quotes) {
        g.strikes.push_back(q.strike);
        g.vols.push_back(q.vol);
    }
    return g;
}

double atm_vol_guess(const market::MarketSmile& smile) {
    double best = smile.quotes.front().vol;
    double dist = kInf;
    for (const auto& q : smile.quotes) {
        const double d = std::fabs(std::log(q.strike / smile.forward));
        if (d < dist) {
            dist = d;
            best = q.vol;
        }
    }
    return best;
}

}  // namespace

std::vector<pricing::HestonParams> default_heston_starts(
    const market::MarketSmile& smile, int count) {
    market::validate(smile);
    if (count < 1) throw std::invalid_argument("default_heston_starts: count must be positive");
    if (smile.quotes.empty())
        throw std::invalid_argument("default_heston_starts: smile has no quotes");

    const double sig = atm_vol_guess(smile);
    const double v_atm = sig * sig;

    std::vector<pricing::HestonParams> starts;
    starts.reserve(static_cast<std::size_t>(count));
    starts.push_back({v_atm, v_atm, 1.5, 0.5, -0.3});
    for (int i = 1; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        pricing::HestonParams p;
        p.v0 = std::clamp(v_atm * std::pow(4.0, 2.0 * halton(idx, 2) - 1.0), 1e-6, 4.0);
        p.vbar = std::clamp(v_atm * std::pow(4.0, 2.0 * halton(idx, 3) - 1.0), 1e-6, 4.0);
        p.kappa = 0.1 * std::pow(100.0, halton(idx, 5));
        p.sigma = 0.05 * std::pow(40.0, halton(idx, 7));
        p.rho = -0.8 + 1.6 * halton(idx, 11);
        starts.push_back(p);
    }
    return starts;
}

CalibrationResult calibrate_heston(const market::MarketSmile& smile,
                                   std::vector<pricing::HestonParams> starts) {
    const QuoteGrid grid = quote_grid(smile, 3);
    if (starts.empty()) starts = default_heston_starts(smile, 8);

    const std::vector<double> lo = {1e-6, 1e-6, 1e-4, 1e-4, -0.999};
    const std::vector<double> hi = {4.0, 4.0, 20.0, 5.0, 0.999};

    auto unpack = [](const std::vector<double>& x) {
        return pricing::HestonParams{x[0], x[1], x[2], x[3], x[4]};
    };
    const ResidualFn fn = [&](const std::vector<double>& x, std::vector<double>& r) {
        const pricing::HestonParams p = unpack(x);
        r.resize(grid.strikes.size());
        for (std::size_t i = 0; i < grid.strikes.size(); ++i) {
            const double price = pricing::heston_call(
                p, smile.forward, grid.strikes[i], smile.maturity, smile.domestic_discount);
            const double vol = implied_vol_soft(price, smile.forward, grid.strikes[i],
                                                smile.maturity, smile.domestic_discount);
            r[i] = vol - grid.vols[i];
        }
    };

    std::vector<LmOutcome> outcomes(starts.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long s = 0; s < static_cast<long long>(starts.size()); ++s) {
        const auto& st = starts[static_cast<std::size_t>(s)];
        std::vector<double> x0 = {st.v0, st.vbar, st.kappa, st.sigma, st.rho};
        try {
            outcomes[static_cast<std::size_t>(s)] = levenberg_marquardt(fn, x0, lo, hi);
        } catch (const std::exception&) {
            // leave the infinite-cost default; another start will win
        }
    }

    std::size_t best = 0;
    for (std::size_t s = 1; s < outcomes.size(); ++s)
        if (outcomes[s].cost < outcomes[best].cost) best = s;
    if (!(outcomes[best].cost < kInf))
        throw std::runtime_error("calibrate_heston: all starts failed");

    const LmOutcome& win = outcomes[best];
    CalibrationResult res;
    const pricing::HestonParams p = unpack(win.x);
    res.params = p;
    res.iterations = win.iterations;
    res.converged = win.converged;
    res.best_start = static_cast<int>(best);
    res.feller_ok = pricing::feller_condition(p);
    fn(win.x, res.per_quote_errors);
    double ss = 0.0;
    for (double e : res.per_quote_errors) ss += e * e;
    res.residual = std::sqrt(ss / static_cast<double>(res.per_quote_errors.size()));
    return res;
}

CalibrationResult calibrate_sabr(const market::MarketSmile& smile, double beta) {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument("calibrate_sabr: beta out of range [0,1]");
    const QuoteGrid grid = quote_grid(smile, 3);

    // Initial alpha from the ATM level: invert
    // vol_atm = a/F^{1-b} (1 + (1-b)^2/24 a^2/F^{2-2b} T) by Newton.
    const double sig_atm = atm_vol_guess(smile);
    const double fpow = std::pow(smile.forward, 1.0 - beta);
    double alpha0 = sig_atm * fpow;
    for (int it = 0; it < 20; ++it) {
        const double c2 = (1.0 - beta) * (1.0 - beta) / 24.0 / (fpow * fpow) * smile.maturity;
        const double f = alpha0 / fpow * (1.0 + c2 * alpha0 * alpha0) - sig_atm;
        const double fp = 1.0 / fpow * (1.0 + 3.0 * c2 * alpha0 * alpha0);
        const double step = f / fp;
        alpha0 -= step;
        if (std::fabs(step) < 1e-14 * std::max(alpha0, 1e-8)) break;
    }
    alpha0 = std::clamp(alpha0, 1e-8, 10.0);

    const std::vector<double> lo = {1e-8, -0.999, 0.0};
    const std::vector<double> hi = {10.0, 0.999, 10.0};
    const ResidualFn fn = [&](const std::vector<double>& x, std::vector<double>& r) {
        const pricing::SabrParams p{x[0], beta, x[1], x[2], 0.0};
        r.resize(grid.strikes.size());
        for (std::size_t i = 0; i < grid.strikes.size(); ++i)
            r[i] = pricing::hagan_vol(p, smile.forward, grid.strikes[i], smile.maturity) -
                   grid.vols[i];
    };

    constexpr double rho_starts[] = {0.0, 0.4, -0.4};
    constexpr double nu_starts[] = {0.5, 1.5};
    std::vector<LmOutcome> outcomes;
    for (double rs : rho_starts)
        for (double ns : nu_starts)
            outcomes.push_back(levenberg_marquardt(fn, {alpha0, rs, ns}, lo, hi));

    std::size_t best = 0;
    for (std::size_t s = 1; s < outcomes.size(); ++s)
        if (outcomes[s].cost < outcomes[best].cost) best = s;

    const LmOutcome& win = outcomes[best];
    CalibrationResult res;
    res.params = pricing::SabrParams{win.x[0], beta, win.x[1], win.x[2], 0.0};
    res.iterations = win.iterations;
    res.converged = win.converged;
    res.best_start = static_cast<int>(best);
    fn(win.x, res.per_quote_errors);
    double ss = 0.0;
    for (double e : res.per_quote_errors) ss += e * e;
    res.residual = std::sqrt(ss / static_cast<double>(res.per_quote_errors.size()));
    return res;
}

}  // namespace fxinv::calib
