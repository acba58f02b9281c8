// Command-line front end: calibration, parameter inversion, consistency
// reports, jump-measure transforms, simulation export and smile diffing.
// Exit codes: 0 success, 1 domain/computation error, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fxinv/calibration.hpp"
#include "fxinv/inversion.hpp"
#include "fxinv/jump_densities.hpp"
#include "fxinv/market_data.hpp"
#include "fxinv/montecarlo.hpp"
#include "fxinv/pricing.hpp"
#include "fxinv/report.hpp"

namespace {

using nlohmann::json;
using fxinv::report::format_significant;

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot write output file: " + path);
    return file;
}

json heston_to_json(const fxinv::pricing::HestonParams& p) {
    return {{"v0", p.v0}, {"vbar", p.vbar}, {"kappa", p.kappa},
            {"sigma", p.sigma}, {"rho", p.rho}};
}

json sabr_to_json(const fxinv::pricing::SabrParams& p) {
    return {{"alpha", p.alpha}, {"beta", p.beta}, {"rho", p.rho},
            {"nu", p.nu}, {"alpha_shift", p.alpha_shift}};
}

fxinv::pricing::HestonParams heston_from_json(const json& j) {
    return {j.at("v0").get<double>(), j.at("vbar").get<double>(),
            j.at("kappa").get<double>(), j.at("sigma").get<double>(),
            j.at("rho").get<double>()};
}

fxinv::pricing::SabrParams sabr_from_json(const json& j) {
    return {j.at("alpha").get<double>(), j.at("beta").get<double>(),
            j.at("rho").get<double>(), j.at("nu").get<double>(),
            j.value("alpha_shift", 0.0)};
}

std::shared_ptr<const fxinv::jumps::JumpDensity> density_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "power_law_cutoff") {
        return std::make_shared<fxinv::jumps::PowerLawCutoffDensity>(
            j.at("alpha").get<double>(), j.at("q").get<double>());
    }
    if (family == "tabulated") {
        return std::make_shared<fxinv::jumps::TabulatedDensity>(
            j.at("grid").get<std::vector<double>>(),
            j.at("pdf").get<std::vector<double>>());
    }
    throw std::invalid_argument("unknown density family: " + family);
}

struct LayoutFlags {
    std::string smile_path;
    double spot = 1.24122;
    double forward = 1.2478;
    double maturity = 0.25;
    double vol = 0.0755;
    double discount = 1.0;
};

void add_layout_flags(CLI::App* cmd, LayoutFlags& lf) {
    cmd->add_option("--smile", lf.smile_path,
                    "smile JSON supplying the strike grid and market data");
    cmd->add_option("--spot", lf.spot, "spot for the built-in 5-strike layout");
    cmd->add_option("--forward", lf.forward, "forward for the built-in layout");
    cmd->add_option("--maturity", lf.maturity, "maturity (years) for the built-in layout");
    cmd->add_option("--vol", lf.vol, "vol sizing the built-in strike grid");
    cmd->add_option("--discount", lf.discount, "domestic discount factor");
}

fxinv::market::MarketSmile resolve_layout(const LayoutFlags& lf) {
    if (!lf.smile_path.empty()) return fxinv::market::load_smile(lf.smile_path);
    return fxinv::report::demo_layout(lf.spot, lf.forward, lf.maturity, lf.vol,
                                      lf.discount);
}

struct McFlags {
    std::size_t paths = 200000;
    std::size_t steps = 320;
    std::uint64_t seed = 777;
    bool antithetic = true;
    bool serial = false;
};

void add_mc_flags(CLI::App* cmd, McFlags& mf) {
    cmd->add_option("--paths", mf.paths, "Monte Carlo path count");
    cmd->add_option("--steps", mf.steps, "time steps (Euler schemes)");
    cmd->add_option("--seed", mf.seed, "random seed");
    cmd->add_flag("--antithetic,!--no-antithetic", mf.antithetic,
                  "antithetic pairing (default on)");
    cmd->add_flag("--serial", mf.serial, "force single-threaded path loop");
}

fxinv::mc::McConfig resolve_mc(const McFlags& mf) {
    fxinv::mc::McConfig cfg;
    cfg.paths = mf.paths;
    cfg.steps = mf.steps;
    cfg.seed = mf.seed;
    cfg.antithetic = mf.antithetic;
    cfg.exec = mf.serial ? fxinv::mc::ExecMode::serial : fxinv::mc::ExecMode::parallel;
    return cfg;
}

int run_calibrate(const std::string& model, const std::string& smile_path,
                  double beta, const std::string& out_path) {
    const fxinv::market::MarketSmile smile = fxinv::market::load_smile(smile_path);
    fxinv::calib::CalibrationResult res;
    json fit;
    if (model == "heston") {
        res = fxinv::calib::calibrate_heston(smile);
        fit["params"] = heston_to_json(std::get<fxinv::pricing::HestonParams>(res.params));
        fit["feller_ok"] = res.feller_ok;
    } else {
        res = fxinv::calib::calibrate_sabr(smile, beta);
        fit["params"] = sabr_to_json(std::get<fxinv::pricing::SabrParams>(res.params));
    }
    fit["model"] = model;
    fit["residual"] = res.residual;
    fit["iterations"] = res.iterations;
    fit["converged"] = res.converged;
    fit["best_start"] = res.best_start;
    fit["per_quote_errors"] = res.per_quote_errors;

    std::cout << "model: " << model << '\n';
    std::cout << "residual_rms_vol: " << format_significant(res.residual) << '\n';
    std::cout << "iterations: " << res.iterations << '\n';
    std::cout << "converged: " << (res.converged ? "yes" : "no") << '\n';
    for (const auto& [key, value] : fit["params"].items())
        std::cout << key << ": " << format_significant(value.get<double>()) << '\n';
    if (model == "heston")
        std::cout << "feller_ok: " << (res.feller_ok ? "yes" : "no") << '\n';

    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write output file: " + out_path);
        out << fit.dump(2) << '\n';
    }
    return 0;
}

int run_invert_heston(const fxinv::pricing::HestonParams& p) {
    const fxinv::pricing::HestonParams q = fxinv::inversion::invert_heston(p);
    std::cout << "v0: " << format_significant(q.v0) << '\n';
    std::cout << "vbar: " << format_significant(q.vbar) << '\n';
    std::cout << "kappa: " << format_significant(q.kappa) << '\n';
    std::cout << "sigma: " << format_significant(q.sigma) << '\n';
    std::cout << "rho: " << format_significant(q.rho) << '\n';
    std::cout << "kappa_minus_rho_sigma: "
              << format_significant(p.kappa - p.rho * p.sigma) << '\n';
    std::cout << "feller_ok: "
              << (fxinv::pricing::feller_condition(q) ? "yes" : "no") << '\n';
    return 0;
}

int run_invert_sabr(const fxinv::pricing::SabrParams& p, double rate_diff) {
    const fxinv::inversion::InverseSabrDynamics dyn =
        fxinv::inversion::inverse_sabr(p, rate_diff);
    std::cout << "dynamics: dY = -dr*Y dt + V*Y^(2-beta) dB1, "
                 "dV = nu*rho_src*Y^(1-beta)*V^2 dt + nu*V dB2\n";
    std::cout << "rate_differential: " << format_significant(dyn.rate_differential) << '\n';
    std::cout << "correlation: " << format_significant(dyn.correlation) << '\n';
    std::cout << "beta: " << format_significant(p.beta) << '\n';
    std::cout << "nu: " << format_significant(p.nu) << '\n';
    std::cout << "v_drift_coefficient: " << format_significant(p.nu * p.rho) << '\n';
    std::cout << "v0: " << format_significant(p.alpha) << '\n';
    const double y = 1.0, v = p.alpha;
    std::cout << "eval_at_y1_v_alpha: drift_y="
              << format_significant(dyn.drift_y(y, v))
              << " diff_y=" << format_significant(dyn.diff_y(y, v))
              << " drift_v=" << format_significant(dyn.drift_v(y, v))
              << " diff_v=" << format_significant(dyn.diff_v(y, v)) << '\n';
    std::cout << "note: inverted dynamics leave the SABR family "
                 "(V drift depends on Y)\n";
    return 0;
}

int run_consistency(const std::string& model, const json& params,
                    const LayoutFlags& lf, const McFlags& mf,
                    const std::string& format, const std::string& out_path) {
    const fxinv::market::MarketSmile layout = resolve_layout(lf);
    fxinv::report::ConsistencyReport rep;
    if (model == "heston") {
        rep = fxinv::report::heston_consistency_experiment(heston_from_json(params), layout);
    } else {
        rep = fxinv::report::sabr_inconsistency_experiment(sabr_from_json(params), layout,
                                                           resolve_mc(mf));
    }
    std::ofstream file;
    std::ostream& os = open_out(file, out_path);
    if (format == "csv")
        fxinv::report::write_csv(rep, os);
    else
        fxinv::report::write_structured(rep, os);
    return 0;
}

int run_jump_invert(double gamma, double lambda) {
    const fxinv::inversion::ConstantJumpSpec dom{gamma, lambda,
                                                 fxinv::Measure::domestic};
    const fxinv::inversion::ConstantJumpSpec frn =
        fxinv::inversion::invert_constant_jump(dom);
    const fxinv::inversion::CompensationResidual res =
        fxinv::inversion::jump_compensation_residual(dom, frn);
    std::cout << "gamma_f: " << format_significant(frn.gamma) << '\n';
    std::cout << "lambda_f: " << format_significant(frn.lambda) << '\n';
    std::cout << "compensation_residual: " << format_significant(res.residual) << '\n';
    std::cout << "sign_flipped_residual: "
              << format_significant(res.sign_flipped_residual) << '\n';
    std::cout << "intensity_ratio_gap: "
              << format_significant(res.intensity_ratio_gap) << '\n';
    return 0;
}

int run_density_invert(const json& density_spec, double lambda,
                       const std::string& out_path) {
    const auto density = density_from_json(density_spec);
    const fxinv::jumps::CompoundJumpSpec spec{density, lambda,
                                              fxinv::Measure::domestic};
    const fxinv::jumps::ForeignJumpLaw law = fxinv::jumps::invert_compound(spec);
    const double residual = fxinv::jumps::no_arb_residual(spec);

    std::cout << "family: " << density->family() << '\n';
    std::cout << "beta_d: " << format_significant(law.beta_d) << '\n';
    std::cout << "lambda_f: " << format_significant(law.lambda) << '\n';
    json out_density;
    if (const auto* plc = dynamic_cast<const fxinv::jumps::PowerLawCutoffDensity*>(
            law.density_Jf.get())) {
        std::cout << "foreign_family: power_law_cutoff\n";
        std::cout << "alpha_f: " << format_significant(plc->alpha()) << '\n';
        std::cout << "q_f: " << format_significant(plc->q()) << '\n';
        out_density = {{"family", "power_law_cutoff"},
                       {"alpha", plc->alpha()},
                       {"q", plc->q()}};
    } else {
        // Map the input grid pointwise: y = -x/(1+x) reverses orientation.
        const auto* tab =
            dynamic_cast<const fxinv::jumps::TabulatedDensity*>(density.get());
        std::cout << "foreign_family: tabulated\n";
        std::vector<double> grid_f, pdf_f;
        if (tab) {
            const auto& g = tab->grid();
            for (auto it = g.rbegin(); it != g.rend(); ++it)
                grid_f.push_back(fxinv::jumps::jf_of_jd(*it));
            for (double y : grid_f) pdf_f.push_back(law.density_Jf->pdf(y));
        }
        out_density = {{"family", "tabulated"}, {"grid", grid_f}, {"pdf", pdf_f}};
    }
    std::cout << "no_arb_residual: " << format_significant(residual) << '\n';

    if (!out_path.empty()) {
        json out = {{"measure", "foreign"},
                    {"lambda", law.lambda},
                    {"beta_d", law.beta_d},
                    {"no_arb_residual", residual},
                    {"density_Jf", out_density}};
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot write output file: " + out_path);
        f << out.dump(2) << '\n';
    }
    return 0;
}

int run_simulate(const std::string& dynamics, const json& params, double s0,
                 double carry, double sigma, double maturity,
                 const fxinv::mc::JumpComponent& jump, const McFlags& mf,
                 const std::string& out_path, bool binary) {
    const fxinv::mc::McConfig cfg = resolve_mc(mf);
    fxinv::mc::TerminalSample sample;
    if (dynamics == "jump-gbm") {
        sample = fxinv::mc::simulate_jump_gbm_exact(s0, carry, sigma, jump, maturity, cfg);
    } else if (dynamics == "heston") {
        sample = fxinv::mc::simulate_heston(heston_from_json(params), s0, carry,
                                            maturity, cfg);
    } else {
        const auto dyn = fxinv::inversion::inverse_sabr(sabr_from_json(params), carry);
        sample = fxinv::mc::simulate_inverse_sabr(dyn, s0, maturity, cfg);
    }

    const fxinv::mc::MeanSe ms = fxinv::mc::mean_se(sample.values, cfg.antithetic);
    std::cout << "paths: " << sample.values.size() << '\n';
    std::cout << "terminal_mean: " << format_significant(ms.mean) << '\n';
    std::cout << "terminal_se: " << format_significant(ms.se) << '\n';
    if (sample.low_step_warning)
        std::cout << "warning: fewer than 50 steps per year\n";
    if (sample.clamped_paths > 0)
        std::cout << "warning: state clamped on " << sample.clamped_paths << " paths\n";

    if (!out_path.empty()) {
        const bool weights = !sample.rn_weights.empty();
        if (binary) {
            std::ofstream f(out_path, std::ios::binary);
            if (!f) throw std::runtime_error("cannot write output file: " + out_path);
            const char magic[8] = {'F', 'X', 'M', 'C', '0', '0', '0', '1'};
            f.write(magic, 8);
            const std::uint64_t n = sample.values.size();
            const std::uint64_t flags = weights ? 1 : 0;
            f.write(reinterpret_cast<const char*>(&n), 8);
            f.write(reinterpret_cast<const char*>(&flags), 8);
            f.write(reinterpret_cast<const char*>(sample.values.data()),
                    static_cast<std::streamsize>(n * sizeof(double)));
            if (weights)
                f.write(reinterpret_cast<const char*>(sample.rn_weights.data()),
                        static_cast<std::streamsize>(n * sizeof(double)));
        } else {
            std::ofstream f(out_path);
            if (!f) throw std::runtime_error("cannot write output file: " + out_path);
            f << "# dynamics," << dynamics << '\n';
            f << "# paths," << sample.values.size() << '\n';
            f << "# seed," << cfg.seed << '\n';
            f << "# maturity," << format_significant(maturity) << '\n';
            f << (weights ? "value,rn_weight\n" : "value\n");
            for (std::size_t i = 0; i < sample.values.size(); ++i) {
                f << format_significant(sample.values[i]);
                if (weights) f << ',' << format_significant(sample.rn_weights[i]);
                f << '\n';
            }
        }
    }
    return 0;
}

int run_smile_distance(const std::string& a_path, const std::string& b_path) {
    const auto a = fxinv::market::load_smile(a_path);
    const auto b = fxinv::market::load_smile(b_path);
    const fxinv::report::SmileDistance d = fxinv::report::smile_distance(a, b);
    std::cout << "sup: " << format_significant(d.sup) << '\n';
    std::cout << "rms: " << format_significant(d.rms) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FX rate-model inversion toolkit"};
    app.require_subcommand(1);

    // calibrate
    std::string cal_model = "heston", cal_smile, cal_out;
    double cal_beta = 0.5;
    auto* cal = app.add_subcommand("calibrate", "fit model parameters to a smile");
    cal->add_option("--model", cal_model, "heston or sabr")
        ->check(CLI::IsMember({"heston", "sabr"}));
    cal->add_option("--smile", cal_smile, "smile JSON file")->required();
    cal->add_option("--beta", cal_beta, "fixed SABR beta");
    cal->add_option("--out", cal_out, "write fit JSON here");

    // invert
    std::string inv_model = "heston";
    double iv0 = 0.0025, ivbar = 0.0287, ikappa = 1.1718, isigma = 0.172, irho = 0.0952;
    double ialpha = 0.0748, ibeta = 0.5, isrho = 0.1435, inu = 0.733, irate = 0.0;
    auto* inv = app.add_subcommand("invert", "measure-invert model parameters");
    inv->add_option("--model", inv_model, "heston or sabr")
        ->check(CLI::IsMember({"heston", "sabr"}));
    inv->add_option("--v0", iv0);
    inv->add_option("--vbar", ivbar);
    inv->add_option("--kappa", ikappa);
    inv->add_option("--sigma", isigma);
    inv->add_option("--rho", irho, "heston rho (sabr uses --srho)");
    inv->add_option("--alpha", ialpha);
    inv->add_option("--beta", ibeta);
    inv->add_option("--srho", isrho, "sabr rho");
    inv->add_option("--nu", inu);
    inv->add_option("--rate-diff", irate, "domestic-minus-foreign carry");

    // consistency
    std::string con_model = "heston", con_format = "structured", con_out, con_fit;
    double cv0 = 0.0025, cvbar = 0.0287, ckappa = 1.1718, csigma = 0.172, crho = 0.0952;
    double calpha = 0.0748, cbeta = 0.5, csrho = 0.1435, cnu = 0.733, cshift = 0.0;
    LayoutFlags con_layout;
    McFlags con_mc;
    auto* con = app.add_subcommand("consistency",
                                   "inversion-consistency report for a model");
    con->add_option("--model", con_model, "heston or sabr")
        ->check(CLI::IsMember({"heston", "sabr"}));
    con->add_option("--fit", con_fit, "read params from a calibrate --out file");
    con->add_option("--v0", cv0);
    con->add_option("--vbar", cvbar);
    con->add_option("--kappa", ckappa);
    con->add_option("--sigma", csigma);
    con->add_option("--rho", crho, "heston rho (sabr uses --srho)");
    con->add_option("--alpha", calpha);
    con->add_option("--beta", cbeta);
    con->add_option("--srho", csrho, "sabr rho");
    con->add_option("--nu", cnu);
    con->add_option("--alpha-shift", cshift);
    con->add_option("--format", con_format, "csv or structured")
        ->check(CLI::IsMember({"csv", "structured"}));
    con->add_option("--out", con_out, "output file (default stdout)");
    add_layout_flags(con, con_layout);
    add_mc_flags(con, con_mc);

    // jump-invert
    double jgamma = 0.1, jlambda = 2.0;
    auto* jmp = app.add_subcommand("jump-invert", "invert a constant-size jump");
    jmp->add_option("--gamma", jgamma, "relative jump size")->required();
    jmp->add_option("--lambda", jlambda, "jump intensity")->required();

    // density-invert
    double dalpha = 2.0, dq = 1.0, dlambda = 2.0;
    std::string dens_file, dens_out;
    auto* den = app.add_subcommand("density-invert",
                                   "invert a compound Poisson jump law");
    den->add_option("--alpha", dalpha, "power-law-cutoff alpha");
    den->add_option("--q", dq, "power-law-cutoff q");
    den->add_option("--lambda", dlambda, "domestic intensity")->required();
    den->add_option("--density", dens_file, "density spec JSON (overrides --alpha/--q)");
    den->add_option("--out", dens_out, "write the foreign law JSON here");

    // simulate
    std::string sim_dynamics = "jump-gbm", sim_out;
    double ss0 = 1.24122, scarry = 0.0, ssigma = 0.1, smaturity = 1.0;
    double sjgamma = 0.0, sjlambda = 0.0, sjalpha = 2.0, sjq = 1.0;
    bool sim_binary = false, sim_compound = false;
    double sv0 = 0.0025, svbar = 0.0287, skappa = 1.1718, ssig_v = 0.172, srho_h = 0.0952;
    double salpha = 0.0748, sbeta = 0.5, ssrho = 0.1435, snu = 0.733;
    McFlags sim_mc;
    auto* sim = app.add_subcommand("simulate", "export terminal Monte Carlo samples");
    sim->add_option("--dynamics", sim_dynamics, "jump-gbm, heston or inverse-sabr")
        ->check(CLI::IsMember({"jump-gbm", "heston", "inverse-sabr"}));
    sim->add_option("--s0", ss0, "initial level");
    sim->add_option("--rate-diff", scarry, "carry of the simulated measure");
    sim->add_option("--sigma", ssigma, "diffusive vol (jump-gbm)");
    sim->add_option("--maturity", smaturity, "horizon in years");
    sim->add_option("--jump-gamma", sjgamma, "constant jump size");
    sim->add_option("--jump-lambda", sjlambda, "jump intensity");
    sim->add_flag("--compound", sim_compound, "compound jumps from --jump-alpha/--jump-q");
    sim->add_option("--jump-alpha", sjalpha, "compound density alpha");
    sim->add_option("--jump-q", sjq, "compound density q");
    sim->add_option("--v0", sv0);
    sim->add_option("--vbar", svbar);
    sim->add_option("--kappa", skappa);
    sim->add_option("--sigma-v", ssig_v, "heston vol of variance");
    sim->add_option("--rho", srho_h, "heston rho (inverse-sabr uses --srho)");
    sim->add_option("--alpha", salpha);
    sim->add_option("--beta", sbeta);
    sim->add_option("--srho", ssrho, "sabr rho");
    sim->add_option("--nu", snu);
    sim->add_option("--out", sim_out, "sample export path");
    sim->add_flag("--binary", sim_binary, "binary sample export");
    add_mc_flags(sim, sim_mc);

    // smile-distance
    std::string sd_a, sd_b;
    auto* sdist = app.add_subcommand("smile-distance", "sup/RMS distance of two smiles");
    sdist->add_option("a", sd_a, "first smile JSON")->required();
    sdist->add_option("b", sd_b, "second smile JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cal->parsed()) return run_calibrate(cal_model, cal_smile, cal_beta, cal_out);
        if (inv->parsed()) {
            if (inv_model == "heston")
                return run_invert_heston({iv0, ivbar, ikappa, isigma, irho});
            return run_invert_sabr({ialpha, ibeta, isrho, inu, 0.0}, irate);
        }
        if (con->parsed()) {
            json params;
            if (!con_fit.empty()) {
                std::ifstream f(con_fit);
                if (!f) throw std::runtime_error("cannot open fit file: " + con_fit);
                json fit;
                f >> fit;
                con_model = fit.at("model").get<std::string>();
                params = fit.at("params");
            } else if (con_model == "heston") {
                params = heston_to_json({cv0, cvbar, ckappa, csigma, crho});
            } else {
                params = sabr_to_json({calpha, cbeta, csrho, cnu, cshift});
            }
            return run_consistency(con_model, params, con_layout, con_mc, con_format,
                                   con_out);
        }
        if (jmp->parsed()) return run_jump_invert(jgamma, jlambda);
        if (den->parsed()) {
            json spec;
            if (!dens_file.empty()) {
                std::ifstream f(dens_file);
                if (!f) throw std::runtime_error("cannot open density file: " + dens_file);
                f >> spec;
            } else {
                spec = {{"family", "power_law_cutoff"}, {"alpha", dalpha}, {"q", dq}};
            }
            return run_density_invert(spec, dlambda, dens_out);
        }
        if (sim->parsed()) {
            fxinv::mc::JumpComponent jump = std::monostate{};
            json params;
            if (sim_dynamics == "jump-gbm") {
                if (sim_compound) {
                    jump = fxinv::jumps::CompoundJumpSpec{
                        std::make_shared<fxinv::jumps::PowerLawCutoffDensity>(sjalpha, sjq),
                        sjlambda, fxinv::Measure::domestic};
                } else if (sjlambda > 0.0) {
                    jump = fxinv::inversion::ConstantJumpSpec{sjgamma, sjlambda,
                                                              fxinv::Measure::domestic};
                }
            } else if (sim_dynamics == "heston") {
                params = heston_to_json({sv0, svbar, skappa, ssig_v, srho_h});
            } else {
                params = sabr_to_json({salpha, sbeta, ssrho, snu, 0.0});
            }
            return run_simulate(sim_dynamics, params, ss0, scarry, ssigma, smaturity,
                                jump, sim_mc, sim_out, sim_binary);
        }
        if (sdist->parsed()) return run_smile_distance(sd_a, sd_b);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
