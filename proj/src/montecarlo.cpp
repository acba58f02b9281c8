#include "fxinv/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "fxinv/rng.hpp"

namespace fxinv::mc {

namespace {

void validate_config(const McConfig& cfg, bool needs_steps) {
    if (cfg.paths == 0) throw std::invalid_argument("mc: no paths");
    if (cfg.antithetic && cfg.paths % 2 != 0)
        throw std::invalid_argument("mc: antithetic requires an even path count");
    if (needs_steps && cfg.steps == 0)
        throw std::invalid_argument("mc: steps must be positive");
}

// Runs fn(slot) for every slot index. A slot is one random substream: one
// path, or one antithetic pair. Writing results by slot index keeps the
// output independent of the execution order.
template <class Fn>
void run_slots(std::size_t n, ExecMode exec, const Fn& fn) {
    if (exec == ExecMode::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            fn(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) fn(i);
    }
}

struct JumpModel {
    double lambda = 0.0;
    double mean = 0.0;                                 // E[J] under the simulated measure
    double log_one_plus_gamma = 0.0;                   // constant jumps
    std::unique_ptr<jumps::JumpSampler> sampler;       // compound jumps
};

JumpModel make_jump_model(const JumpComponent& jump) {
    JumpModel m;
    if (std::holds_alternative<std::monostate>(jump)) return m;
    if (const auto* c = std::get_if<inversion::ConstantJumpSpec>(&jump)) {
        if (!(c->gamma > -1.0)) throw std::invalid_argument("mc: jump gamma must exceed -1");
        if (!(c->lambda >= 0.0)) throw std::invalid_argument("mc: jump lambda must be non-negative");
        m.lambda = c->lambda;
        m.mean = c->gamma;
        m.log_one_plus_gamma = std::log1p(c->gamma);
        return m;
    }
    const auto& comp = std::get<jumps::CompoundJumpSpec>(jump);
    if (!comp.density) throw std::invalid_argument("mc: compound jump without density");
    if (!(comp.lambda > 0.0)) throw std::invalid_argument("mc: compound jump lambda must be positive");
    m.lambda = comp.lambda;
    m.mean = jumps::mean_jump(*comp.density);
    m.sampler = std::make_unique<jumps::JumpSampler>(*comp.density);
    return m;
}

// Control-variate least squares: subtract b . (x - exact_mean) from each
// payoff, b solving the sample normal equations over the q regressors in
// xs. Zero-variance regressors are dropped; if the remaining Gram matrix is
// not positive definite the payoffs are left unadjusted. The adjustment
// changes neither the estimator's target nor its determinism.
void control_adjust(std::vector<double>& pay,
                    const std::array<std::vector<double>, 4>& xs,
                    const std::array<double, 4>& exact_mean, std::size_t q) {
    const std::size_t n = pay.size();
    if (n < 8 || q == 0) return;

    double pm = 0.0;
    for (double p : pay) pm += p;
    pm /= static_cast<double>(n);
    std::array<double, 4> cm{};
    for (std::size_t a = 0; a < q; ++a) {
        for (double x : xs[a]) cm[a] += x;
        cm[a] /= static_cast<double>(n);
    }

    std::array<std::size_t, 4> keep{};
    std::size_t qk = 0;
    for (std::size_t a = 0; a < q; ++a) {
        double va = 0.0;
        for (double x : xs[a]) va += (x - cm[a]) * (x - cm[a]);
        if (va > 0.0) keep[qk++] = a;
    }
    if (qk == 0) return;

    std::array<std::array<double, 4>, 4> g{};
    std::array<double, 4> rhs{};
    for (std::size_t i = 0; i < n; ++i) {
        const double dp = pay[i] - pm;
        for (std::size_t a = 0; a < qk; ++a) {
            const double da = xs[keep[a]][i] - cm[keep[a]];
            rhs[a] += da * dp;
            for (std::size_t b = 0; b <= a; ++b)
                g[a][b] += da * (xs[keep[b]][i] - cm[keep[b]]);
        }
    }

    // Cholesky g = L L^T on the lower triangle; bail out on a pivot too
    // small relative to the diagonal (near-collinear controls).
    std::array<std::array<double, 4>, 4> l{};
    for (std::size_t a = 0; a < qk; ++a) {
        for (std::size_t b = 0; b <= a; ++b) {
            double s = g[a][b];
            for (std::size_t c = 0; c < b; ++c) s -= l[a][c] * l[b][c];
            if (a == b) {
                if (!(s > 1e-12 * g[a][a])) return;
                l[a][a] = std::sqrt(s);
            } else {
                l[a][b] = s / l[b][b];
            }
        }
    }
    std::array<double, 4> bcoef{};
    for (std::size_t a = 0; a < qk; ++a) {
        double s = rhs[a];
        for (std::size_t c = 0; c < a; ++c) s -= l[a][c] * bcoef[c];
        bcoef[a] = s / l[a][a];
    }
    for (std::size_t a = qk; a-- > 0;) {
        double s = bcoef[a];
        for (std::size_t c = a + 1; c < qk; ++c) s -= l[c][a] * bcoef[c];
        bcoef[a] = s / l[a][a];
    }

    for (std::size_t i = 0; i < n; ++i) {
        double adj = 0.0;
        for (std::size_t a = 0; a < qk; ++a)
            adj += bcoef[a] * (xs[keep[a]][i] - exact_mean[keep[a]]);
        pay[i] -= adj;
    }
}

}  // namespace

MeanSe mean_se(std::span<const double> values, bool antithetic) {
    if (values.empty()) throw std::invalid_argument("mean_se: empty sample");
    if (antithetic && values.size() % 2 != 0)
        throw std::invalid_argument("mean_se: antithetic sample must have even size");

    const std::size_t n = antithetic ? values.size() / 2 : values.size();
    auto at = [&](std::size_t i) {
        return antithetic ? 0.5 * (values[2 * i] + values[2 * i + 1]) : values[i];
    };
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += at(i);
    mean /= static_cast<double>(n);
    if (n < 2) return {mean, 0.0};
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = at(i) - mean;
        ss += d * d;
    }
    const double var = ss / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

TerminalSample simulate_jump_gbm_exact(double s0, double carry, double sigma,
                                       const JumpComponent& jump, double maturity,
                                       const McConfig& cfg) {
    if (!(s0 > 0.0)) throw std::invalid_argument("mc: s0 must be positive");
    if (!(sigma >= 0.0)) throw std::invalid_argument("mc: sigma must be non-negative");
    if (!(maturity > 0.0)) throw std::invalid_argument("mc: maturity must be positive");
    validate_config(cfg, false);

    const JumpModel jm = make_jump_model(jump);
    const double drift = (carry - jm.lambda * jm.mean - 0.5 * sigma * sigma) * maturity;
    const double diff = sigma * std::sqrt(maturity);
    const double poisson_mean = jm.lambda * maturity;
    const double inv_growth = std::exp(-carry * maturity) / s0;

    TerminalSample out;
    out.values.resize(cfg.paths);
    out.rn_weights.resize(cfg.paths);
    out.maturity = maturity;
    out.config = cfg;

    const std::size_t slots = cfg.antithetic ? cfg.paths / 2 : cfg.paths;
    run_slots(slots, cfg.exec, [&](std::size_t slot) {
        rng::PathStream stream(cfg.seed, slot);
        // Jumps first, Gaussian last: the antithetic twin shares the jump
        // part and only flips the Gaussian.
        double log_jumps = 0.0;
        if (poisson_mean > 0.0) {
            const std::uint64_t n_jumps = stream.poisson(poisson_mean);
            if (jm.sampler) {
                for (std::uint64_t j = 0; j < n_jumps; ++j)
                    log_jumps += std::log1p(jm.sampler->draw(stream));
            } else {
                log_jumps = static_cast<double>(n_jumps) * jm.log_one_plus_gamma;
            }
        }
        const double z = stream.gaussian();
        const double base = drift + log_jumps;
        if (cfg.antithetic) {
            const double up = s0 * std::exp(base + diff * z);
            const double dn = s0 * std::exp(base - diff * z);
            out.values[2 * slot] = up;
            out.values[2 * slot + 1] = dn;
            out.rn_weights[2 * slot] = up * inv_growth;
            out.rn_weights[2 * slot + 1] = dn * inv_growth;
        } else {
            const double v = s0 * std::exp(base + diff * z);
            out.values[slot] = v;
            out.rn_weights[slot] = v * inv_growth;
        }
    });
    return out;
}

TerminalSample simulate_heston(const pricing::HestonParams& p, double s0,
                               double carry, double maturity, const McConfig& cfg) {
    pricing::validate(p);
    if (!(s0 > 0.0)) throw std::invalid_argument("mc: s0 must be positive");
    if (!(maturity > 0.0)) throw std::invalid_argument("mc: maturity must be positive");
    validate_config(cfg, true);

    const double dt = maturity / static_cast<double>(cfg.steps);
    const double sdt = std::sqrt(dt);
    const double rho_c = std::sqrt(1.0 - p.rho * p.rho);

    TerminalSample out;
    out.values.resize(cfg.paths);
    out.maturity = maturity;
    out.config = cfg;
    out.low_step_warning =
        static_cast<double>(cfg.steps) / maturity < 50.0;

    const std::size_t slots = cfg.antithetic ? cfg.paths / 2 : cfg.paths;
    std::vector<std::uint8_t> clamped(slots, 0);

    run_slots(slots, cfg.exec, [&](std::size_t slot) {
        rng::PathStream stream(cfg.seed, slot);
        const int legs = cfg.antithetic ? 2 : 1;
        double x[2] = {std::log(s0), std::log(s0)};
        double v[2] = {p.v0, p.v0};
        bool hit = false;
        for (std::size_t k = 0; k < cfg.steps; ++k) {
            const double z1 = stream.gaussian();
            const double z2 = p.rho * z1 + rho_c * stream.gaussian();
            for (int leg = 0; leg < legs; ++leg) {
                const double sgn = (leg == 0) ? 1.0 : -1.0;
                const double vp = std::max(v[leg], 0.0);
                if (v[leg] < 0.0) hit = true;
                const double sv = std::sqrt(vp);
                x[leg] += (carry - 0.5 * vp) * dt + sv * sdt * sgn * z1;
                v[leg] += p.kappa * (p.vbar - vp) * dt + p.sigma * sv * sdt * sgn * z2;
            }
        }
        if (cfg.antithetic) {
            out.values[2 * slot] = std::exp(x[0]);
            out.values[2 * slot + 1] = std::exp(x[1]);
        } else {
            out.values[slot] = std::exp(x[0]);
        }
        clamped[slot] = hit ? 1 : 0;
    });

    out.clamped_paths = std::accumulate(clamped.begin(), clamped.end(), std::size_t{0});
    if (cfg.antithetic) out.clamped_paths *= 2;
    return out;
}

TerminalSample simulate_inverse_sabr(const inversion::InverseSabrDynamics& dyn,
                                     double y0, double maturity, const McConfig& cfg) {
    pricing::validate(dyn.source);
    if (!(y0 > 0.0)) throw std::invalid_argument("mc: y0 must be positive");
    if (!(maturity > 0.0)) throw std::invalid_argument("mc: maturity must be positive");
    validate_config(cfg, true);

    const double dt = maturity / static_cast<double>(cfg.steps);
    const double sdt = std::sqrt(dt);
    const double corr = dyn.correlation;
    if (!(std::fabs(corr) < 1.0))
        throw std::invalid_argument("mc: |correlation| must be below 1");
    const double corr_c = std::sqrt(1.0 - corr * corr);
    constexpr double x_lo = -18.420680743952367;  // log(1e-8)
    constexpr double x_hi = 18.420680743952367;   // log(1e8)

    // Control twin: constant-vol lognormal with the same carry, vol frozen
    // at the initial instantaneous value. It rides on the same z1 draws, so
    // the true paths are bit-identical with or without it. The companion
    // vol factor exp(nu W2 - nu^2 T/2) rides on the z2 draws; tilting by it
    // adds drift rho*nu to the asset Brownian, hence the tilted forward.
    const double ctrl_vol = dyn.diff_y(y0, dyn.source.alpha) / y0;
    const double ctrl_step = (dyn.drift_y(y0, dyn.source.alpha) / y0 -
                              0.5 * ctrl_vol * ctrl_vol) * dt;
    const double nu = dyn.source.nu;

    TerminalSample out;
    out.values.resize(cfg.paths);
    out.maturity = maturity;
    out.config = cfg;
    out.low_step_warning =
        static_cast<double>(cfg.steps) / maturity < 50.0;
    out.control_values.resize(cfg.paths);
    out.control_vol_factors.resize(cfg.paths);
    out.control_forward = y0 * std::exp(dyn.drift_y(y0, dyn.source.alpha) / y0 * maturity);
    out.control_vol = ctrl_vol;
    out.control_tilted_forward = out.control_forward * std::exp(ctrl_vol * corr * nu * maturity);

    const std::size_t slots = cfg.antithetic ? cfg.paths / 2 : cfg.paths;
    std::vector<std::uint8_t> clamped(slots, 0);

    run_slots(slots, cfg.exec, [&](std::size_t slot) {
        rng::PathStream stream(cfg.seed, slot);
        const int legs = cfg.antithetic ? 2 : 1;
        double x[2] = {std::log(y0), std::log(y0)};
        double xc[2] = {std::log(y0), std::log(y0)};
        double v[2] = {dyn.source.alpha, dyn.source.alpha};
        double w2 = 0.0;  // vol-driving Brownian at T, first-leg sign
        bool hit = false;
        for (std::size_t k = 0; k < cfg.steps; ++k) {
            const double z1 = stream.gaussian();
            const double z2 = corr * z1 + corr_c * stream.gaussian();
            w2 += sdt * z2;
            for (int leg = 0; leg < legs; ++leg) {
                const double sgn = (leg == 0) ? 1.0 : -1.0;
                const double y = std::exp(x[leg]);
                const double vol_y = dyn.diff_y(y, v[leg]) / y;
                x[leg] += (dyn.drift_y(y, v[leg]) / y - 0.5 * vol_y * vol_y) * dt +
                          vol_y * sdt * sgn * z1;
                xc[leg] += ctrl_step + ctrl_vol * sdt * sgn * z1;
                v[leg] += dyn.drift_v(y, v[leg]) * dt +
                          dyn.diff_v(y, v[leg]) * sdt * sgn * z2;
                if (v[leg] < 0.0) {
                    v[leg] = 0.0;  // absorbed: drift and diffusion both vanish at 0
                    hit = true;
                }
                if (x[leg] < x_lo || x[leg] > x_hi) {
                    x[leg] = std::clamp(x[leg], x_lo, x_hi);
                    hit = true;
                }
            }
        }
        const double half_nu2t = 0.5 * nu * nu * maturity;
        if (cfg.antithetic) {
            out.values[2 * slot] = std::exp(x[0]);
            out.values[2 * slot + 1] = std::exp(x[1]);
            out.control_values[2 * slot] = std::exp(xc[0]);
            out.control_values[2 * slot + 1] = std::exp(xc[1]);
            out.control_vol_factors[2 * slot] = std::exp(nu * w2 - half_nu2t);
            out.control_vol_factors[2 * slot + 1] = std::exp(-nu * w2 - half_nu2t);
        } else {
            out.values[slot] = std::exp(x[0]);
            out.control_values[slot] = std::exp(xc[0]);
            out.control_vol_factors[slot] = std::exp(nu * w2 - half_nu2t);
        }
        clamped[slot] = hit ? 1 : 0;
    });

    out.clamped_paths = std::accumulate(clamped.begin(), clamped.end(), std::size_t{0});
    if (cfg.antithetic) out.clamped_paths *= 2;
    return out;
}

McSmile mc_smile(const TerminalSample& sample, double forward,
                 std::span<const double> strikes, double discount) {
    if (sample.values.empty()) throw std::invalid_argument("mc_smile: empty sample");
    if (!(forward > 0.0)) throw std::invalid_argument("mc_smile: forward must be positive");
    if (!(discount > 0.0 && discount <= 1.0))
        throw std::invalid_argument("mc_smile: discount must lie in (0,1]");

    std::vector<double> sorted(strikes.begin(), strikes.end());
    std::sort(sorted.begin(), sorted.end());
    for (double k : sorted)
        if (!(k > 0.0)) throw std::invalid_argument("mc_smile: strikes must be positive");

    McSmile out;
    out.smile.spot = forward;  // quoted directly on the forward axis
    out.smile.forward = forward;
    out.smile.rate_differential = 0.0;
    out.smile.maturity = sample.maturity;
    out.smile.domestic_discount = discount;

    const bool anti = sample.config.antithetic;
    const std::size_t n_slots = anti ? sample.values.size() / 2 : sample.values.size();
    const bool has_ctrl = sample.has_control() && sample.control_vol > 0.0 &&
                          sample.control_forward > 0.0 &&
                          sample.control_values.size() == sample.values.size();
    const bool has_factor = has_ctrl && sample.control_tilted_forward > 0.0 &&
                            sample.control_vol_factors.size() == sample.values.size();
    // Pair-collapsed per-path quantity per independent slot; with antithetic
    // on, a slot is the mean of the two mirrored legs.
    auto collapse = [&](auto&& per_path, std::vector<double>& dst) {
        for (std::size_t i = 0; i < n_slots; ++i)
            dst[i] = anti ? 0.5 * (per_path(2 * i) + per_path(2 * i + 1))
                          : per_path(i);
    };

    std::vector<double> pay(n_slots);
    std::array<std::vector<double>, 4> xs;
    if (has_ctrl)
        for (auto& x : xs) x.resize(n_slots);
    std::array<double, 4> exact_mean{};
    for (double k : sorted) {
        // Price the out-of-the-money instrument: its payoff excludes the
        // forward's own variance. Parity restores the call afterwards.
        const bool use_put = k < forward;
        auto instrument = [&](double s) {
            return use_put ? std::max(k - s, 0.0) : std::max(s - k, 0.0);
        };
        collapse([&](std::size_t j) { return instrument(sample.values[j]); }, pay);
        if (has_ctrl) {
            // Controls from the twin, all with closed-form means: its
            // instrument payoff, the twin level, and (when the vol factor
            // is present) the payoff scaled by the factor — a Black value
            // at the tilted forward — and the unit-mean factor itself.
            auto black_instrument = [&](double fwd) {
                double m = pricing::black_call(fwd, k, sample.maturity,
                                               sample.control_vol, 1.0);
                if (use_put) m -= fwd - k;
                return m;
            };
            std::size_t q = 0;
            collapse([&](std::size_t j) { return instrument(sample.control_values[j]); },
                     xs[q]);
            exact_mean[q++] = black_instrument(sample.control_forward);
            collapse([&](std::size_t j) { return sample.control_values[j]; }, xs[q]);
            exact_mean[q++] = sample.control_forward;
            if (has_factor) {
                collapse(
                    [&](std::size_t j) {
                        return instrument(sample.control_values[j]) *
                               sample.control_vol_factors[j];
                    },
                    xs[q]);
                exact_mean[q++] = black_instrument(sample.control_tilted_forward);
                collapse([&](std::size_t j) { return sample.control_vol_factors[j]; },
                         xs[q]);
                exact_mean[q++] = 1.0;
            }
            control_adjust(pay, xs, exact_mean, q);
        }
        const MeanSe ms = mean_se(pay, false);
        const double call_mean = use_put ? ms.mean + (forward - k) : ms.mean;
        const double price = discount * call_mean;
        const double intrinsic = discount * std::max(forward - k, 0.0);
        if (!(price > intrinsic) || !(price < discount * forward)) {
            out.omitted_strikes.push_back(k);
            continue;
        }
        double vol;
        try {
            vol = pricing::implied_vol(price, forward, k, sample.maturity, discount);
        } catch (const std::domain_error&) {
            out.omitted_strikes.push_back(k);
            continue;
        }
        const double vega = pricing::black_vega(forward, k, sample.maturity, vol, discount);
        out.smile.quotes.push_back({k, vol, ""});
        out.vol_std_errors.push_back(discount * ms.se / vega);
    }
    return out;
}

PricedValue rn_weighted_price(const TerminalSample& sample,
                              const std::function<double(double)>& payoff) {
    if (!payoff) throw std::invalid_argument("rn_weighted_price: empty payoff");
    if (sample.rn_weights.size() != sample.values.size() || sample.values.empty())
        throw std::invalid_argument(
            "rn_weighted_price: sample carries no measure-change weights");
    std::vector<double> vals(sample.values.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        vals[i] = sample.rn_weights[i] * payoff(1.0 / sample.values[i]);
    const MeanSe ms = mean_se(vals, sample.config.antithetic);
    return {ms.mean, ms.se};
}

}  // namespace fxinv::mc
