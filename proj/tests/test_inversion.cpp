#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fxinv/inversion.hpp"
#include "fxinv/rng.hpp"

using namespace fxinv::inversion;
using fxinv::Measure;
using fxinv::pricing::HestonParams;
using fxinv::pricing::SabrParams;

TEST_SUITE("inversion") {

TEST_CASE("heston parameter map at the calibrated point") {
    const HestonParams p{0.0025, 0.0287, 1.1718, 0.1720, 0.0952};
    const HestonParams q = invert_heston(p);
    CHECK(std::abs(q.kappa - 1.1554256) <= 1e-12);
    CHECK(std::abs(q.vbar - 0.0291067291567713) <= 1e-12);
    CHECK(q.v0 == p.v0);
    CHECK(q.sigma == p.sigma);
    CHECK(q.rho == -p.rho);
}

TEST_CASE("heston map requires a mean-reverting inverse") {
    CHECK_THROWS_AS(invert_heston({0.04, 0.04, 0.1, 0.5, 0.9}), std::domain_error);
    // boundary: kappa - rho*sigma exactly zero is rejected too
    CHECK_THROWS_AS(invert_heston({0.04, 0.04, 0.45, 0.5, 0.9}), std::domain_error);
}

TEST_CASE("heston map is an involution") {
    fxinv::rng::PathStream s(2024, 0);
    int tested = 0;
    while (tested < 200) {
        HestonParams p{0.001 + 0.1 * s.uniform(), 0.001 + 0.1 * s.uniform(),
                       0.2 + 3.0 * s.uniform(), 0.05 + 0.8 * s.uniform(),
                       -0.95 + 1.9 * s.uniform()};
        if (p.kappa - p.rho * p.sigma <= 1e-3) continue;
        ++tested;
        const HestonParams back = invert_heston(invert_heston(p));
        CHECK(std::abs(back.kappa - p.kappa) <= 1e-12 * p.kappa);
        CHECK(std::abs(back.vbar - p.vbar) <= 1e-12);
        CHECK(back.rho == p.rho);
        CHECK(back.v0 == p.v0);
        // the inverse of a valid model always maps back: kappa' - rho'sigma' = kappa
        const HestonParams q = invert_heston(p);
        CHECK(std::abs((q.kappa - q.rho * q.sigma) - p.kappa) <= 1e-12 * p.kappa);
    }
}

TEST_CASE("mean-reversion level trades off against speed") {
    // kappa' vbar' = kappa vbar is built into the map
    const HestonParams p{0.01, 0.05, 2.0, 0.6, -0.4};
    const HestonParams q = invert_heston(p);
    CHECK(std::abs(q.kappa * q.vbar - p.kappa * p.vbar) <= 1e-15);
}

TEST_CASE("inverse sabr dynamics coefficients") {
    const SabrParams p{0.0748, 0.5, 0.1435, 0.7330, 0.0};
    const InverseSabrDynamics dyn = inverse_sabr(p, -0.0211);
    CHECK(dyn.correlation == -0.1435);
    CHECK(dyn.rate_differential == -0.0211);

    // drift of Y is pure carry
    CHECK(std::abs(dyn.drift_y(0.8, 0.07) - (0.0211 * 0.8)) <= 1e-15);
    // diffusion of Y: v * y^{2-beta}
    CHECK(std::abs(dyn.diff_y(4.0, 0.07) - 0.07 * 8.0) <= 1e-15);
    CHECK(std::abs(dyn.diff_y(1.0, 0.0748) - 0.0748) <= 1e-16);
    // drift of V: nu * rho_src * y^{1-beta} * v^2, with the source rho
    CHECK(std::abs(dyn.drift_v(4.0, 0.1) - 0.7330 * 0.1435 * 2.0 * 0.01) <= 1e-15);
    CHECK(dyn.drift_v(1.0, 0.1) > 0.0);  // positive source rho keeps positive drift
    // diffusion of V: nu * v, no y dependence
    CHECK(std::abs(dyn.diff_v(7.0, 0.1) - 0.07330) <= 1e-15);

    // beta = 1 removes the y dependence everywhere
    const InverseSabrDynamics ln = inverse_sabr({0.2, 1.0, -0.3, 0.5, 0.0}, 0.0);
    CHECK(std::abs(ln.diff_y(5.0, 0.2) - 1.0) <= 1e-15);
    CHECK(std::abs(ln.drift_v(5.0, 0.2) - 0.5 * (-0.3) * 0.04) <= 1e-15);
}

TEST_CASE("log-polynomial local vol symmetry is decided algebraically") {
    // even powers only: exactly symmetric, violation is exactly zero
    const LocalVolFunction even = make_log_polynomial({0.2, 0.0, 0.05});
    const auto grid = default_log_grid();
    const ConsistencyCheck ok = check_local_vol_consistency(even, grid, 0.5);
    CHECK(ok.consistent);
    CHECK(ok.max_violation == 0.0);

    // odd term: violation |2 a1 log x|, largest at the grid edge
    const LocalVolFunction odd = make_log_polynomial({0.2, 0.1});
    const ConsistencyCheck bad = check_local_vol_consistency(odd, grid, 0.5);
    CHECK(!bad.consistent);
    CHECK(std::abs(bad.max_violation - 0.2 * std::log(8.0)) <= 1e-13);
    CHECK((bad.worst_point == 8.0 || bad.worst_point == 0.125));
}

TEST_CASE("laurent local vol requires palindromic coefficients") {
    const LocalVolFunction lv = make_symmetric_laurent(1, {0.1, 0.5, 0.1});
    CHECK(std::abs(lv(2.0, 0.0) - (0.1 * 0.5 + 0.5 + 0.1 * 2.0)) <= 1e-15);
    const ConsistencyCheck c =
        check_local_vol_consistency(lv, default_log_grid(), 1.0);
    CHECK(c.consistent);
    CHECK(c.max_violation == 0.0);

    CHECK_THROWS_AS(make_symmetric_laurent(1, {0.1, 0.5, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(make_symmetric_laurent(2, {0.1, 0.5, 0.1}), std::invalid_argument);
}

TEST_CASE("log-symmetric and opaque local vols") {
    const LocalVolFunction sym =
        make_log_symmetric([](double z) { return 0.1 + z * z; });
    const ConsistencyCheck c =
        check_local_vol_consistency(sym, default_log_grid(), 0.0);
    CHECK(c.consistent);
    CHECK(c.max_violation == 0.0);

    // sqrt local vol is maximally asymmetric: violation sqrt(x) - sqrt(1/x)
    const LocalVolFunction root =
        make_opaque([](double x, double) { return std::sqrt(x); });
    const std::vector<double> grid{0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    const ConsistencyCheck r = check_local_vol_consistency(root, grid, 0.0);
    CHECK(!r.consistent);
    CHECK(std::abs(r.violation_at(2.0) - 0.707106781186548) <= 1e-12);
    CHECK(std::abs(r.violation_at(1.0)) <= 1e-15);
    CHECK(std::abs(r.max_violation - (std::sqrt(8.0) - std::sqrt(0.125))) <= 1e-13);
}

TEST_CASE("violation lookup and grid closure are strict") {
    const LocalVolFunction lv = make_log_polynomial({0.2});
    const std::vector<double> grid{0.25, 0.5, 1.0, 2.0, 4.0};
    const ConsistencyCheck c = check_local_vol_consistency(lv, grid, 0.0);
    CHECK_THROWS_AS(c.violation_at(3.0), std::invalid_argument);
    CHECK_NOTHROW(c.violation_at(2.0));

    const std::vector<double> open_grid{0.5, 1.0, 3.0};
    CHECK_THROWS_AS(check_local_vol_consistency(lv, open_grid, 0.0),
                    std::invalid_argument);
    // closure is an unordered property: a shuffled grid passes and produces
    // the same defect as its sorted counterpart
    const std::vector<double> shuffled{2.0, 0.5, 1.0};
    const std::vector<double> in_order{0.5, 1.0, 2.0};
    const ConsistencyCheck a = check_local_vol_consistency(lv, shuffled, 0.0);
    const ConsistencyCheck b = check_local_vol_consistency(lv, in_order, 0.0);
    CHECK(a.max_violation == b.max_violation);
}

TEST_CASE("default grid is reciprocal-closed") {
    const auto grid = default_log_grid();
    REQUIRE(grid.size() == 101);
    CHECK(grid.front() == 0.125);
    CHECK(grid.back() == 8.0);
    CHECK(grid[50] == 1.0);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(grid[i] * grid[grid.size() - 1 - i] - 1.0) <= 1e-15);
}

TEST_CASE("constant jump inversion") {
    const ConstantJumpSpec dom{0.1, 2.0, Measure::domestic};
    const ConstantJumpSpec frn = invert_constant_jump(dom);
    CHECK(frn.measure == Measure::foreign);
    CHECK(std::abs(frn.gamma + 0.0909090909090909) <= 1e-15);
    CHECK(std::abs(frn.lambda - 2.2) <= 1e-15);

    const ConstantJumpSpec back = invert_constant_jump(frn);
    CHECK(back.measure == Measure::domestic);
    CHECK(std::abs(back.gamma - dom.gamma) <= 1e-15);
    CHECK(std::abs(back.lambda - dom.lambda) <= 1e-15);

    CHECK_THROWS_AS(invert_constant_jump({-1.0, 2.0, Measure::domestic}),
                    std::invalid_argument);
    CHECK_THROWS_AS(invert_constant_jump({0.1, 0.0, Measure::domestic}),
                    std::invalid_argument);
}

TEST_CASE("jump inversion identities hold over random sizes") {
    fxinv::rng::PathStream s(99, 0);
    for (int i = 0; i < 500; ++i) {
        const double gamma = -0.99 + 10.99 * s.uniform();
        const double lambda = 0.1 + 5.0 * s.uniform();
        const ConstantJumpSpec dom{gamma, lambda, Measure::domestic};
        const ConstantJumpSpec frn = invert_constant_jump(dom);
        const ConstantJumpSpec back = invert_constant_jump(frn);
        CHECK(std::abs(back.gamma - gamma) <= 1e-12 * std::max(1.0, std::abs(gamma)));
        CHECK(std::abs(back.lambda - lambda) <= 1e-12 * lambda);
        const CompensationResidual r = jump_compensation_residual(dom, frn);
        CHECK(std::abs(r.residual) <= 1e-12 * std::max(1.0, lambda * std::abs(gamma)));
        CHECK(std::abs(r.intensity_ratio_gap) <= 1e-12 * (frn.lambda / lambda + 1.0));
    }
}

TEST_CASE("compensation diagnostics flag the wrong sign") {
    const ConstantJumpSpec dom{0.1, 2.0, Measure::domestic};
    const ConstantJumpSpec frn = invert_constant_jump(dom);
    const CompensationResidual r = jump_compensation_residual(dom, frn);
    CHECK(std::abs(r.residual) <= 1e-15);
    // negating the domestic term does not compensate: -0.2 + (-0.2)
    CHECK(std::abs(std::abs(r.sign_flipped_residual) - 0.4) <= 1e-15);
    CHECK(std::abs(r.intensity_ratio_gap) <= 1e-13);

    CHECK_THROWS_AS(jump_compensation_residual(frn, dom), std::invalid_argument);
}

}  // TEST_SUITE
