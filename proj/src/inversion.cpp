#include "fxinv/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fxinv::inversion {

pricing::HestonParams invert_heston(const pricing::HestonParams& p) {
    pricing::validate(p);
    const double kappa_f = p.kappa - p.rho * p.sigma;
    if (!(kappa_f > 0.0))
        throw std::domain_error(
            "invert_heston: inverse not mean-reverting (kappa - rho*sigma <= 0)");
    pricing::HestonParams q;
    q.v0 = p.v0;
    q.kappa = kappa_f;
    q.vbar = p.kappa * p.vbar / kappa_f;
    q.sigma = p.sigma;
    q.rho = -p.rho;
    return q;
}

double InverseSabrDynamics::drift_y(double y, double /*v*/) const {
    return -rate_differential * y;
}

double InverseSabrDynamics::diff_y(double y, double v) const {
    return v * std::pow(y, 2.0 - source.beta);
}

double InverseSabrDynamics::drift_v(double y, double v) const {
    return source.nu * source.rho * std::pow(y, 1.0 - source.beta) * v * v;
}

double InverseSabrDynamics::diff_v(double /*y*/, double v) const {
    return source.nu * v;
}

InverseSabrDynamics inverse_sabr(const pricing::SabrParams& p,
                                 double rate_differential) {
    pricing::validate(p);
    InverseSabrDynamics dyn;
    dyn.source = p;
    dyn.rate_differential = rate_differential;
    dyn.correlation = -p.rho;
    return dyn;
}

double LocalVolFunction::operator()(double x, double t) const {
    if (!(x > 0.0)) throw std::invalid_argument("local vol: level must be positive");
    switch (family) {
        case LocalVolFamily::log_polynomial: {
            const double l = std::log(x);
            double acc = 0.0;
            for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
                acc = acc * l + *it;
            return acc;
        }
        case LocalVolFamily::symmetric_laurent: {
            double acc = 0.0;
            for (int j = -laurent_order; j <= laurent_order; ++j)
                acc += coefficients[static_cast<std::size_t>(j + laurent_order)] *
                       std::pow(x, j);
            return acc;
        }
        case LocalVolFamily::log_symmetric:
            return shape(std::log(x));
        case LocalVolFamily::opaque:
            return fn(x, t);
    }
    throw std::logic_error("local vol: unknown family");
}

LocalVolFunction make_log_polynomial(std::vector<double> coeffs) {
    if (coeffs.empty())
        throw std::invalid_argument("log polynomial: need at least one coefficient");
    LocalVolFunction lv;
    lv.family = LocalVolFamily::log_polynomial;
    lv.coefficients = std::move(coeffs);
    return lv;
}

LocalVolFunction make_symmetric_laurent(int k, std::vector<double> coeffs) {
    if (k < 0) throw std::invalid_argument("laurent: order must be non-negative");
    if (coeffs.size() != static_cast<std::size_t>(2 * k + 1))
        throw std::invalid_argument("laurent: need 2k+1 coefficients (a_{-k}..a_k)");
    for (int j = 1; j <= k; ++j)
        if (coeffs[static_cast<std::size_t>(k - j)] !=
            coeffs[static_cast<std::size_t>(k + j)])
            throw std::invalid_argument("laurent: coefficients must be palindromic");
    LocalVolFunction lv;
    lv.family = LocalVolFamily::symmetric_laurent;
    lv.laurent_order = k;
    lv.coefficients = std::move(coeffs);
    return lv;
}

LocalVolFunction make_log_symmetric(std::function<double(double)> f) {
    if (!f) throw std::invalid_argument("log symmetric: callable is empty");
    LocalVolFunction lv;
    lv.family = LocalVolFamily::log_symmetric;
    lv.shape = std::move(f);
    return lv;
}

LocalVolFunction make_opaque(std::function<double(double, double)> fn) {
    if (!fn) throw std::invalid_argument("opaque local vol: callable is empty");
    LocalVolFunction lv;
    lv.family = LocalVolFamily::opaque;
    lv.fn = std::move(fn);
    return lv;
}

namespace {

// Reciprocal-symmetry defect at one point, evaluated in the form that is
// exact for the structured families: even log-polynomials and palindromic
// Laurent sums cancel term by term, so they report a hard 0.0 instead of
// rounding noise.
double violation_at_point(const LocalVolFunction& lv, double x, double t) {
    switch (lv.family) {
        case LocalVolFamily::log_polynomial: {
            const double l = std::log(x);
            double diff = 0.0;
            double lp = 1.0;   // l^j
            double lm = 1.0;   // (-l)^j
            for (double a : lv.coefficients) {
                diff += a * (lm - lp);
                lp *= l;
                lm *= -l;
            }
            return std::fabs(diff);
        }
        case LocalVolFamily::symmetric_laurent: {
            double diff = 0.0;
            for (int j = 1; j <= lv.laurent_order; ++j) {
                const double am = lv.coefficients[static_cast<std::size_t>(lv.laurent_order - j)];
                const double ap = lv.coefficients[static_cast<std::size_t>(lv.laurent_order + j)];
                diff += (am - ap) * (std::pow(x, j) - std::pow(x, -j));
            }
            return std::fabs(diff);
        }
        case LocalVolFamily::log_symmetric: {
            const double l = std::log(x);
            return std::fabs(std::fabs(lv.shape(-l)) - std::fabs(lv.shape(l)));
        }
        case LocalVolFamily::opaque:
            return std::fabs(lv.fn(1.0 / x, t) - lv.fn(x, t));
    }
    throw std::logic_error("local vol: unknown family");
}

}  // namespace

double ConsistencyCheck::violation_at(double x) const {
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (std::fabs(grid[i] - x) <= 1e-12 * std::fabs(x)) return violations[i];
    throw std::invalid_argument("violation_at: level is not on the checking grid");
}

ConsistencyCheck check_local_vol_consistency(const LocalVolFunction& lv,
                                             std::span<const double> grid,
                                             double t, double tol) {
    if (grid.empty()) throw std::invalid_argument("consistency check: empty grid");
    if (!(tol >= 0.0)) throw std::invalid_argument("consistency check: negative tolerance");
    for (double x : grid)
        if (!(x > 0.0))
            throw std::invalid_argument("consistency check: grid levels must be positive");

    // The check compares x against 1/x, so the grid must contain both.
    std::vector<double> sorted(grid.begin(), grid.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double prod = sorted[i] * sorted[n - 1 - i];
        if (std::fabs(prod - 1.0) > 1e-12)
            throw std::invalid_argument(
                "consistency check: grid not closed under x -> 1/x");
    }

    ConsistencyCheck out;
    out.grid.assign(grid.begin(), grid.end());
    out.violations.reserve(out.grid.size());
    for (double x : out.grid) {
        const double v = violation_at_point(lv, x, t);
        out.violations.push_back(v);
        if (v > out.max_violation) {
            out.max_violation = v;
            out.worst_point = x;
        }
    }
    if (out.max_violation == 0.0 && !out.grid.empty()) out.worst_point = out.grid.front();
    out.consistent = out.max_violation <= tol;
    return out;
}

std::vector<double> default_log_grid() {
    // 101 points, log-spaced on [1/8, 8]. Build the lower half and mirror it
    // with exact reciprocals so the grid is closed under x -> 1/x to the bit.
    constexpr int n = 101;
    constexpr int mid = n / 2;
    std::vector<double> grid(n);
    grid[mid] = 1.0;
    for (int i = 0; i < mid; ++i) {
        // pow keeps the endpoints exact: 8^-1 is 0.125 and 1/0.125 is 8
        const double x = std::pow(8.0, static_cast<double>(i - mid) / mid);
        grid[static_cast<std::size_t>(i)] = x;
        grid[static_cast<std::size_t>(n - 1 - i)] = 1.0 / x;
    }
    return grid;
}

ConstantJumpSpec invert_constant_jump(const ConstantJumpSpec& spec) {
    if (!(spec.gamma > -1.0))
        throw std::invalid_argument("invert_constant_jump: gamma must exceed -1");
    if (!(spec.lambda > 0.0))
        throw std::invalid_argument("invert_constant_jump: lambda must be positive");
    ConstantJumpSpec out;
    out.gamma = -spec.gamma / (1.0 + spec.gamma);
    out.lambda = spec.lambda * (1.0 + spec.gamma);
    out.measure = flip(spec.measure);
    return out;
}

CompensationResidual jump_compensation_residual(const ConstantJumpSpec& dom,
                                                const ConstantJumpSpec& frn) {
    if (dom.measure != Measure::domestic || frn.measure != Measure::foreign)
        throw std::invalid_argument(
            "jump_compensation_residual: expected (domestic, foreign) pair");
    CompensationResidual r;
    r.residual = dom.lambda * dom.gamma + frn.lambda * frn.gamma;
    r.sign_flipped_residual = -dom.lambda * dom.gamma + frn.lambda * frn.gamma;
    r.intensity_ratio_gap =
        frn.lambda / dom.lambda - std::fabs(dom.gamma / frn.gamma);
    return r;
}

}  // namespace fxinv::inversion
