#include "fxinv/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace fxinv::report {

namespace {

void require_same_grid(const market::MarketSmile& a, const market::MarketSmile& b) {
    if (std::fabs(a.maturity - b.maturity) > 1e-12)
        throw std::invalid_argument("smile_distance: maturities differ");
    if (a.quotes.size() != b.quotes.size())
        throw std::invalid_argument("smile_distance: quote counts differ");
    for (std::size_t i = 0; i < a.quotes.size(); ++i)
        if (std::fabs(a.quotes[i].strike - b.quotes[i].strike) >
            1e-10 * a.quotes[i].strike)
            throw std::invalid_argument("smile_distance: strike grids differ");
}

// Distance over the strikes both smiles actually quote (used for the Monte
// Carlo leg, which may omit strikes). Returns the per-strike count matched.
SmileDistance distance_over_common(const market::MarketSmile& a,
                                   const market::MarketSmile& b,
                                   std::size_t& matched) {
    SmileDistance d;
    double ss = 0.0;
    matched = 0;
    for (const auto& qa : a.quotes) {
        for (const auto& qb : b.quotes) {
            if (std::fabs(qa.strike - qb.strike) <= 1e-10 * qa.strike) {
                const double diff = std::fabs(qa.vol - qb.vol);
                d.sup = std::max(d.sup, diff);
                ss += diff * diff;
                ++matched;
                break;
            }
        }
    }
    if (matched > 0) d.rms = std::sqrt(ss / static_cast<double>(matched));
    return d;
}

market::MarketSmile reciprocal_layout(const market::MarketSmile& layout) {
    market::MarketSmile r = market::reciprocal_axis(layout);
    return r;
}

}  // namespace

SmileDistance smile_distance(const market::MarketSmile& a,
                             const market::MarketSmile& b) {
    market::validate(a);
    market::validate(b);
    require_same_grid(a, b);
    SmileDistance d;
    double ss = 0.0;
    for (std::size_t i = 0; i < a.quotes.size(); ++i) {
        const double diff = std::fabs(a.quotes[i].vol - b.quotes[i].vol);
        d.sup = std::max(d.sup, diff);
        ss += diff * diff;
    }
    if (!a.quotes.empty()) d.rms = std::sqrt(ss / static_cast<double>(a.quotes.size()));
    return d;
}

market::MarketSmile model_smile_heston(const pricing::HestonParams& p,
                                       const market::MarketSmile& layout) {
    market::validate(layout);
    market::MarketSmile out = layout;
    for (auto& q : out.quotes) {
        const double price = pricing::heston_call(p, layout.forward, q.strike,
                                                  layout.maturity, layout.domestic_discount);
        q.vol = pricing::implied_vol(price, layout.forward, q.strike,
                                     layout.maturity, layout.domestic_discount);
    }
    return out;
}

market::MarketSmile model_smile_sabr(const pricing::SabrParams& p,
                                     const market::MarketSmile& layout) {
    market::validate(layout);
    market::MarketSmile out = layout;
    for (auto& q : out.quotes)
        q.vol = pricing::hagan_vol(p, layout.forward, q.strike, layout.maturity);
    return out;
}

pricing::SabrParams naive_sabr_map(const pricing::SabrParams& p,
                                   double reciprocal_forward) {
    pricing::validate(p);
    if (!(reciprocal_forward > 0.0))
        throw std::invalid_argument("naive_sabr_map: forward must be positive");
    pricing::SabrParams q = p;
    q.alpha = p.alpha * std::pow(reciprocal_forward, 2.0 * (1.0 - p.beta));
    q.rho = -p.rho;
    return q;
}

ConsistencyReport heston_consistency_experiment(const pricing::HestonParams& p,
                                                const market::MarketSmile& layout) {
    ConsistencyReport rep;
    rep.model = "heston";
    rep.refit_residual = std::nan("");

    const pricing::HestonParams q = inversion::invert_heston(p);  // may throw

    rep.original = model_smile_heston(p, layout);
    rep.duality = market::reciprocal_axis(rep.original);
    rep.mapped = model_smile_heston(q, reciprocal_layout(layout));
    rep.mapped_vs_duality = smile_distance(rep.duality, rep.mapped);

    const double kms = p.kappa - p.rho * p.sigma;
    rep.conditions.push_back({"kappa_minus_rho_sigma_positive", kms > 0.0, kms});
    rep.conditions.push_back({"feller_original", pricing::feller_condition(p),
                              2.0 * p.kappa * p.vbar - p.sigma * p.sigma});
    rep.conditions.push_back({"feller_inverse", pricing::feller_condition(q),
                              2.0 * q.kappa * q.vbar - q.sigma * q.sigma});
    return rep;
}

ConsistencyReport sabr_inconsistency_experiment(const pricing::SabrParams& p,
                                                const market::MarketSmile& layout,
                                                const mc::McConfig& cfg) {
    ConsistencyReport rep;
    rep.model = "sabr";

    rep.original = model_smile_sabr(p, layout);
    rep.duality = market::reciprocal_axis(rep.original);

    const market::MarketSmile rlayout = reciprocal_layout(layout);
    rep.mapped = model_smile_sabr(naive_sabr_map(p, rlayout.forward), rlayout);
    rep.mapped_vs_duality = smile_distance(rep.duality, rep.mapped);

    const inversion::InverseSabrDynamics dyn =
        inversion::inverse_sabr(p, layout.rate_differential);
    const mc::TerminalSample sample =
        mc::simulate_inverse_sabr(dyn, 1.0 / layout.spot, layout.maturity, cfg);
    std::vector<double> strikes;
    for (const auto& q : rep.duality.quotes) strikes.push_back(q.strike);
    rep.simulated = mc::mc_smile(sample, rlayout.forward, strikes,
                                 layout.domestic_discount);

    std::size_t matched = 0;
    rep.simulated_vs_duality =
        distance_over_common(rep.duality, rep.simulated->smile, matched);

    rep.refit_residual = calib::calibrate_sabr(rep.duality, p.beta).residual;

    rep.conditions.push_back({"mc_steps_per_year_at_least_50",
                              !sample.low_step_warning,
                              static_cast<double>(cfg.steps) / layout.maturity});
    rep.conditions.push_back({"mc_no_clamped_paths", sample.clamped_paths == 0,
                              static_cast<double>(sample.clamped_paths)});
    rep.conditions.push_back({"mc_all_strikes_usable",
                              rep.simulated->omitted_strikes.empty(),
                              static_cast<double>(matched)});
    return rep;
}

std::vector<double> demo_strike_grid(double forward, double vol, double maturity) {
    const double atm = market::atm_strike(forward, vol, maturity);
    const double w = vol * std::sqrt(maturity);
    std::vector<double> ks;
    for (int j = -2; j <= 2; ++j) ks.push_back(atm * std::exp(j * w));
    return ks;
}

market::MarketSmile demo_layout(double spot, double forward, double maturity,
                                double vol, double discount) {
    if (!(spot > 0.0) || !(forward > 0.0))
        throw std::invalid_argument("demo_layout: spot and forward must be positive");
    if (!(maturity > 0.0)) throw std::invalid_argument("demo_layout: maturity must be positive");
    if (!(vol > 0.0)) throw std::invalid_argument("demo_layout: vol must be positive");
    market::MarketSmile s;
    s.spot = spot;
    s.forward = forward;
    s.maturity = maturity;
    s.rate_differential = std::log(forward / spot) / maturity;
    s.domestic_discount = discount;
    for (double k : demo_strike_grid(forward, vol, maturity))
        s.quotes.push_back({k, vol, ""});
    market::validate(s);
    return s;
}

std::string format_significant(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

// The simulated smile may omit strikes; pull the vol/se for a strike if
// present.
bool simulated_at(const std::optional<mc::McSmile>& sim, double strike,
                  double& vol, double& se) {
    if (!sim) return false;
    for (std::size_t i = 0; i < sim->smile.quotes.size(); ++i) {
        if (std::fabs(sim->smile.quotes[i].strike - strike) <= 1e-10 * strike) {
            vol = sim->smile.quotes[i].vol;
            se = sim->vol_std_errors[i];
            return true;
        }
    }
    return false;
}

}  // namespace

void write_csv(const ConsistencyReport& r, std::ostream& os) {
    os << "# model," << r.model << '\n';
    os << "# maturity," << format_significant(r.original.maturity) << '\n';
    os << "# forward," << format_significant(r.original.forward) << '\n';
    os << "# reciprocal_forward," << format_significant(r.duality.forward) << '\n';
    for (const auto& c : r.conditions)
        os << "# condition," << c.name << ',' << (c.ok ? "ok" : "violated") << ','
           << format_significant(c.value) << '\n';
    os << "# mapped_vs_duality_sup," << format_significant(r.mapped_vs_duality.sup) << '\n';
    os << "# mapped_vs_duality_rms," << format_significant(r.mapped_vs_duality.rms) << '\n';
    if (r.simulated_vs_duality) {
        os << "# simulated_vs_duality_sup,"
           << format_significant(r.simulated_vs_duality->sup) << '\n';
        os << "# simulated_vs_duality_rms,"
           << format_significant(r.simulated_vs_duality->rms) << '\n';
    }
    if (!std::isnan(r.refit_residual))
        os << "# refit_residual," << format_significant(r.refit_residual) << '\n';
    if (r.simulated && !r.simulated->omitted_strikes.empty()) {
        os << "# omitted_strikes";
        for (double k : r.simulated->omitted_strikes) os << ',' << format_significant(k);
        os << '\n';
    }

    os << "strike_original,vol_original,strike_reciprocal,vol_duality,vol_mapped,"
          "vol_simulated,se_simulated\n";
    const std::size_t n = r.duality.quotes.size();
    for (std::size_t i = 0; i < n; ++i) {
        // Row i of the reciprocal grid corresponds to the original quote at
        // the mirrored position.
        const auto& dq = r.duality.quotes[i];
        const auto& oq = r.original.quotes[n - 1 - i];
        os << format_significant(oq.strike) << ',' << format_significant(oq.vol) << ','
           << format_significant(dq.strike) << ',' << format_significant(dq.vol) << ','
           << format_significant(r.mapped.quotes[i].vol);
        double vol = 0.0, se = 0.0;
        if (simulated_at(r.simulated, dq.strike, vol, se))
            os << ',' << format_significant(vol) << ',' << format_significant(se);
        else
            os << ",,";
        os << '\n';
    }
}

void write_structured(const ConsistencyReport& r, std::ostream& os) {
    os << "model: " << r.model << '\n';
    os << "maturity: " << format_significant(r.original.maturity) << '\n';
    os << "forward: " << format_significant(r.original.forward) << '\n';
    os << "reciprocal_forward: " << format_significant(r.duality.forward) << '\n';
    os << "conditions:\n";
    for (const auto& c : r.conditions)
        os << "  " << c.name << ": " << (c.ok ? "ok" : "violated")
           << " (value " << format_significant(c.value) << ")\n";
    os << "distances:\n";
    os << "  mapped_vs_duality_sup: " << format_significant(r.mapped_vs_duality.sup) << '\n';
    os << "  mapped_vs_duality_rms: " << format_significant(r.mapped_vs_duality.rms) << '\n';
    if (r.simulated_vs_duality) {
        os << "  simulated_vs_duality_sup: "
           << format_significant(r.simulated_vs_duality->sup) << '\n';
        os << "  simulated_vs_duality_rms: "
           << format_significant(r.simulated_vs_duality->rms) << '\n';
    }
    if (!std::isnan(r.refit_residual))
        os << "refit_residual: " << format_significant(r.refit_residual) << '\n';

    os << "smile:\n";
    os << "  strike_original vol_original strike_reciprocal vol_duality vol_mapped"
          " vol_simulated se_simulated\n";
    const std::size_t n = r.duality.quotes.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& dq = r.duality.quotes[i];
        const auto& oq = r.original.quotes[n - 1 - i];
        os << "  " << format_significant(oq.strike) << ' ' << format_significant(oq.vol)
           << ' ' << format_significant(dq.strike) << ' ' << format_significant(dq.vol)
           << ' ' << format_significant(r.mapped.quotes[i].vol);
        double vol = 0.0, se = 0.0;
        if (simulated_at(r.simulated, dq.strike, vol, se))
            os << ' ' << format_significant(vol) << ' ' << format_significant(se);
        else
            os << " - -";
        os << '\n';
    }
    if (r.simulated && !r.simulated->omitted_strikes.empty()) {
        os << "omitted_strikes:";
        for (double k : r.simulated->omitted_strikes) os << ' ' << format_significant(k);
        os << '\n';
    }
}

}  // namespace fxinv::report
