// Acceptance gate: one check per release-blocking property, each printing a
// single [PASS]/[FAIL] line with its measured quantities, pinned tolerance
// and runtime budget. The binary exits nonzero when any check fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fxinv/calibration.hpp"
#include "fxinv/inversion.hpp"
#include "fxinv/jump_densities.hpp"
#include "fxinv/market_data.hpp"
#include "fxinv/montecarlo.hpp"
#include "fxinv/pricing.hpp"
#include "fxinv/quadrature.hpp"
#include "fxinv/report.hpp"
#include "fxinv/rng.hpp"

namespace {

using namespace fxinv;
using Clock = std::chrono::steady_clock;

const pricing::HestonParams kHeston{0.0025, 0.0287, 1.1718, 0.1720, 0.0952};
const pricing::SabrParams kSabr{0.0748, 0.5, 0.1435, 0.7330, 0.0};

market::MarketSmile eurusd_layout() {
    return report::demo_layout(1.24122, 1.2478, 0.25, 0.0755);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

bool heston_smile_consistency(std::string& detail) {
    const report::ConsistencyReport rep =
        report::heston_consistency_experiment(kHeston, eurusd_layout());
    detail = fmt("sup_vol_gap=%.3e (tol 1e-06)", rep.mapped_vs_duality.sup);
    return rep.mapped_vs_duality.sup <= 1e-6;
}

bool heston_parameter_map(std::string& detail) {
    const pricing::HestonParams q = inversion::invert_heston(kHeston);
    const double dk = std::abs(q.kappa - 1.1554256);
    const double dv = std::abs(q.vbar - 0.0291067);
    const double positivity = kHeston.kappa - kHeston.rho * kHeston.sigma;
    detail = fmt("kappa_err=%.2e vbar_err=%.2e kappa-rho*sigma=%.7f (tol 1e-06)",
                 dk, dv, positivity);
    return dk <= 1e-6 && dv <= 1e-6 && positivity > 0.0;
}

bool sabr_three_way(std::string& detail) {
    mc::McConfig cfg;
    cfg.paths = 200000;
    cfg.steps = 320;
    cfg.seed = 90210;
    cfg.antithetic = true;
    const report::ConsistencyReport rep =
        report::sabr_inconsistency_experiment(kSabr, eurusd_layout(), cfg);

    if (!rep.simulated.has_value() || rep.simulated->smile.quotes.size() != 5) {
        detail = "simulated smile incomplete";
        return false;
    }
    const auto& sim = *rep.simulated;

    double worst_z = 0.0, max_se = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        const double gap =
            std::abs(sim.smile.quotes[i].vol - rep.duality.quotes[i].vol);
        worst_z = std::max(worst_z, gap / sim.vol_std_errors[i]);
        max_se = std::max(max_se, sim.vol_std_errors[i]);
    }
    const bool mc_matches = worst_z <= 3.0;

    bool naive_fails_in_wing = false;
    double wing_gap = 0.0;
    for (std::size_t i : {std::size_t{0}, std::size_t{4}}) {
        const double gap =
            std::abs(rep.mapped.quotes[i].vol - rep.duality.quotes[i].vol);
        if (gap > 10e-4 && sim.vol_std_errors[i] < 2e-4)
            naive_fails_in_wing = true;
        wing_gap = std::max(wing_gap, gap);
    }
    detail = fmt("mc_worst_gap=%.2f se (limit 3), naive_wing_gap=%.1f bp "
                 "(req >10), max_se=%.2f bp (req <2)",
                 worst_z, wing_gap * 1e4, max_se * 1e4);
    return mc_matches && naive_fails_in_wing;
}

bool constant_jump_identities(std::string& detail) {
    rng::PathStream s(4242, 0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double gamma = -0.99 + 10.99 * s.uniform();
        const double lambda = 0.05 + 8.0 * s.uniform();
        const inversion::ConstantJumpSpec dom{gamma, lambda, Measure::domestic};
        const inversion::ConstantJumpSpec frn = inversion::invert_constant_jump(dom);
        const inversion::ConstantJumpSpec back = inversion::invert_constant_jump(frn);

        const double inv_err =
            std::max(std::abs(back.gamma - gamma) / std::max(1.0, std::abs(gamma)),
                     std::abs(back.lambda - lambda) / lambda);
        const inversion::CompensationResidual r =
            inversion::jump_compensation_residual(dom, frn);
        const double comp_err =
            std::abs(r.residual) / std::max(1.0, lambda * std::abs(gamma));
        const double ratio_err =
            std::abs(r.intensity_ratio_gap) / (frn.lambda / lambda);
        worst = std::max({worst, inv_err, comp_err, ratio_err});
    }
    detail = fmt("worst_identity_err=%.3e over 1000 draws (tol 1e-12)", worst);
    return worst <= 1e-12;
}

bool compound_jump_transforms(std::string& detail) {
    rng::PathStream s(555, 0);
    double worst_mass = 0.0, worst_resid = 0.0, worst_pointwise = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double alpha = 0.5 + 2.0 * s.uniform();
        const double q = 0.2 + 4.8 * s.uniform();
        const auto d = std::make_shared<jumps::PowerLawCutoffDensity>(alpha, q);
        const double lambda_d = 1.7;
        const double beta_d = jumps::mean_jump(*d);
        const double lambda_f = jumps::foreign_intensity(lambda_d, beta_d);

        const double mass =
            quad::integrate_jump_support(
                [&](double x) {
                    return jumps::foreign_density_Jd(*d, lambda_d, lambda_f, x);
                },
                1e-11)
                .value;
        worst_mass = std::max(worst_mass, std::abs(mass - 1.0));

        worst_resid = std::max(
            worst_resid,
            std::abs(jumps::no_arb_residual({d, lambda_d, Measure::domestic})));

        const auto [a_f, q_f] = jumps::family_closure(alpha, q);
        if (a_f != 3.0 - alpha || q_f != q) {
            detail = "family_closure image mismatch";
            return false;
        }
        const jumps::PowerLawCutoffDensity closed(a_f, q_f);
        for (double y : {-0.6, -0.25, 0.0, 0.3, 1.0, 2.5}) {
            const double generic =
                jumps::foreign_density_Jf(*d, lambda_d, lambda_f, y);
            worst_pointwise =
                std::max(worst_pointwise, std::abs(generic - closed.pdf(y)));
        }
    }
    detail = fmt("worst: mass_err=%.2e (tol 1e-08), no_arb=%.2e (tol 1e-08), "
                 "pointwise=%.2e (tol 1e-10)",
                 worst_mass, worst_resid, worst_pointwise);
    return worst_mass <= 1e-8 && worst_resid <= 1e-8 && worst_pointwise <= 1e-10;
}

bool sampling_ks(std::string& detail) {
    const jumps::PowerLawCutoffDensity d(2.0, 1.0);
    const double lambda_d = 2.0;
    const double lambda_f = jumps::foreign_intensity(lambda_d, jumps::mean_jump(d));

    const std::size_t n = 100000;
    const std::vector<double> xs = jumps::sample(d, n, 424242);
    std::vector<double> ys(n), ws(n);
    for (std::size_t i = 0; i < n; ++i) {
        ys[i] = jumps::jf_of_jd(xs[i]);
        ws[i] = (1.0 + xs[i]) * lambda_d / lambda_f;
    }
    const jumps::CdfTable table(jumps::PowerLawCutoffDensity(1.0, 1.0));
    const double ks = jumps::weighted_ks_distance(
        ys, ws, [&](double y) { return table.cdf(y); });
    detail = fmt("weighted_ks=%.4f at n=1e5 (tol 0.005)", ks);
    return ks <= 0.005;
}

struct Leg {
    double value = 0.0;
    double se = 0.0;
};

bool measure_change_pricing(std::string& detail) {
    const double s0 = 1.2, dr = 0.03;
    const double y0 = 1.0 / s0, strike = 1.0 / s0;
    const auto payoff = [strike](double y) { return std::max(y - strike, 0.0); };

    const auto run = [&](const mc::JumpComponent& dom_jump,
                         const mc::JumpComponent& frn_jump, double sigma, double t,
                         std::uint64_t seed) {
        mc::McConfig cfg;
        cfg.paths = 1000000;
        cfg.antithetic = true;
        cfg.seed = seed;
        const mc::TerminalSample dom =
            mc::simulate_jump_gbm_exact(s0, dr, sigma, dom_jump, t, cfg);
        const mc::PricedValue a = mc::rn_weighted_price(dom, payoff);

        cfg.seed = seed + 1;
        const mc::TerminalSample frn =
            mc::simulate_jump_gbm_exact(y0, -dr, sigma, frn_jump, t, cfg);
        std::vector<double> pays(frn.values.size());
        for (std::size_t i = 0; i < pays.size(); ++i) pays[i] = payoff(frn.values[i]);
        const mc::MeanSe b = mc::mean_se(pays, cfg.antithetic);

        Leg la{a.value, a.std_error}, lb{b.mean, b.se};
        return std::pair<Leg, Leg>{la, lb};
    };

    // constant jump
    const inversion::ConstantJumpSpec cdom{0.1, 2.0, Measure::domestic};
    const auto [ca, cb] = run(cdom, inversion::invert_constant_jump(cdom), 0.2, 1.0, 71);
    const double c_gap = std::abs(ca.value - cb.value);
    const double c_band = 3.0 * std::hypot(ca.se, cb.se);

    // compound jump
    const auto dens = std::make_shared<jumps::PowerLawCutoffDensity>(2.0, 1.0);
    const jumps::CompoundJumpSpec kdom{dens, 1.5, Measure::domestic};
    const jumps::ForeignJumpLaw law = jumps::invert_compound(kdom);
    const jumps::CompoundJumpSpec kfrn{law.density_Jf, law.lambda, Measure::foreign};
    const auto [ka, kb] = run(kdom, kfrn, 0.25, 0.75, 81);
    const double k_gap = std::abs(ka.value - kb.value);
    const double k_band = 3.0 * std::hypot(ka.se, kb.se);

    detail = fmt("constant: gap=%.2e band=%.2e; ", c_gap, c_band) +
             fmt("compound: gap=%.2e band=%.2e (3 combined se)", k_gap, k_band);
    return c_gap <= c_band && k_gap <= k_band;
}

bool martingale_compensator(std::string& detail) {
    mc::McConfig cfg;
    cfg.paths = 1000000;
    cfg.antithetic = true;

    const double s0 = 1.31, dr = 0.024, t = 1.4;
    const double target = s0 * std::exp(dr * t);

    cfg.seed = 91;
    const mc::TerminalSample a = mc::simulate_jump_gbm_exact(
        s0, dr, 0.18, inversion::ConstantJumpSpec{-0.3, 3.0, Measure::domestic}, t, cfg);
    const mc::MeanSe am = mc::mean_se(a.values, cfg.antithetic);
    const double za = std::abs(am.mean - target) / am.se;

    cfg.seed = 92;
    const mc::TerminalSample b = mc::simulate_jump_gbm_exact(
        s0, dr, 0.18,
        jumps::CompoundJumpSpec{std::make_shared<jumps::PowerLawCutoffDensity>(2.2, 0.9),
                                2.0, Measure::domestic},
        t, cfg);
    const mc::MeanSe bm = mc::mean_se(b.values, cfg.antithetic);
    const double zb = std::abs(bm.mean - target) / bm.se;

    const mc::PricedValue wa = mc::rn_weighted_price(a, [](double) { return 1.0; });
    const mc::PricedValue wb = mc::rn_weighted_price(b, [](double) { return 1.0; });
    const double zwa = std::abs(wa.value - 1.0) / wa.std_error;
    const double zwb = std::abs(wb.value - 1.0) / wb.std_error;

    detail = fmt("forward z: const=%.2f compound=%.2f; ", za, zb) +
             fmt("rn-weight-mean z: const=%.2f compound=%.2f (limit 3)", zwa, zwb);
    return za <= 3.0 && zb <= 3.0 && zwa <= 3.0 && zwb <= 3.0;
}

bool local_vol_symmetry(std::string& detail) {
    const auto even = inversion::make_log_polynomial({0.2, 0.0, 0.05});
    const auto grid = inversion::default_log_grid();
    const auto c1 = inversion::check_local_vol_consistency(even, grid, 0.5);

    const auto laurent = inversion::make_symmetric_laurent(1, {0.1, 0.5, 0.1});
    const auto c2 = inversion::check_local_vol_consistency(laurent, grid, 0.5);

    const auto root =
        inversion::make_opaque([](double x, double) { return std::sqrt(x); });
    const std::vector<double> small_grid{0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    const auto c3 = inversion::check_local_vol_consistency(root, small_grid, 0.0);
    const double at2 = c3.violation_at(2.0);
    const double err = std::abs(at2 - std::sqrt(0.5));

    detail = fmt("symmetric violations: %.1e, %.1e (exact 0); ", c1.max_violation,
                 c2.max_violation) +
             fmt("sqrt local vol at x=2: %.12f (err %.1e, tol 1e-12)", at2, err);
    return c1.max_violation == 0.0 && c2.max_violation == 0.0 && err <= 1e-12;
}

bool calibration_round_trip(std::string& detail) {
    const market::MarketSmile hsmile =
        report::model_smile_heston(kHeston, eurusd_layout());
    const calib::CalibrationResult hres = calib::calibrate_heston(hsmile);

    const market::MarketSmile ssmile =
        report::model_smile_sabr(kSabr, eurusd_layout());
    const calib::CalibrationResult sres = calib::calibrate_sabr(ssmile, 0.5);

    detail = fmt("heston_rms=%.2e (tol 1e-06), ", hres.residual) +
             fmt("sabr_rms=%.2e (tol 1e-08)", sres.residual);
    return hres.residual <= 1e-6 && sres.residual <= 1e-8;
}

}  // namespace

int main() {
    struct Check {
        const char* name;
        double budget_seconds;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Check> checks = {
        {"heston-inversion-smile-consistency", 5.0, heston_smile_consistency},
        {"heston-inverse-parameter-map", 1.0, heston_parameter_map},
        {"sabr-inversion-three-way", 60.0, sabr_three_way},
        {"constant-jump-identities", 1.0, constant_jump_identities},
        {"compound-jump-transforms", 30.0, compound_jump_transforms},
        {"jump-sampling-ks", 10.0, sampling_ks},
        {"measure-change-pricing", 60.0, measure_change_pricing},
        {"martingale-compensator", 30.0, martingale_compensator},
        {"local-vol-symmetry", 1.0, local_vol_symmetry},
        {"calibration-round-trip", 60.0, calibration_round_trip},
    };

    int failures = 0;
    for (const auto& check : checks) {
        std::string detail;
        bool ok = false;
        const auto t0 = Clock::now();
        try {
            ok = check.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
            ok = false;
        }
        const double seconds =
            std::chrono::duration<double>(Clock::now() - t0).count();
        const bool in_budget = seconds <= check.budget_seconds;
        if (!in_budget)
            detail += fmt("  [over budget %.0fs]", check.budget_seconds);
        const bool pass = ok && in_budget;
        std::printf("[%s] %-36s %6.2fs/%-3.0fs  %s\n", pass ? "PASS" : "FAIL",
                    check.name, seconds, check.budget_seconds, detail.c_str());
        std::fflush(stdout);
        failures += pass ? 0 : 1;
    }

    std::printf("acceptance: %zu/%zu checks passed\n", checks.size() - failures,
                checks.size());
    return failures == 0 ? 0 : 1;
}
