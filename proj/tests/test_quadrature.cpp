#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fxinv/quadrature.hpp"

using fxinv::quad::integrate;
using fxinv::quad::integrate_jump_range;
using fxinv::quad::integrate_jump_support;
using fxinv::quad::QuadResult;

TEST_SUITE("quadrature") {

TEST_CASE("polynomials are exact") {
    const QuadResult r = integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 1.0 / 3.0) <= 1e-14);

    const QuadResult s =
        integrate([](double x) { return 3.0 * x * x - 2.0 * x + 7.0; }, -2.0, 5.0);
    CHECK(s.converged);
    // antiderivative x^3 - x^2 + 7x evaluated at the endpoints
    const double truth = (125.0 - 25.0 + 35.0) - (-8.0 - 4.0 - 14.0);
    CHECK(std::abs(s.value - truth) <= 1e-12 * std::abs(truth));
}

TEST_CASE("smooth transcendentals") {
    const double pi = std::acos(-1.0);
    const QuadResult r = integrate([](double x) { return std::sin(x); }, 0.0, pi);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 2.0) <= 1e-12);

    const QuadResult g = integrate(
        [](double x) { return std::exp(-x * x / 2.0); }, -8.0, 8.0, 1e-13);
    CHECK(g.converged);
    CHECK(std::abs(g.value - std::sqrt(2.0 * pi)) <= 1e-11);
}

TEST_CASE("integrable endpoint singularity") {
    const QuadResult r =
        integrate([](double x) { return 1.0 / std::sqrt(x); }, 1e-300, 1.0, 1e-10);
    CHECK(std::abs(r.value - 2.0) <= 1e-8);
}

TEST_CASE("oscillatory integrand cancels") {
    const double pi = std::acos(-1.0);
    const QuadResult r = integrate([](double x) { return std::sin(x); }, 0.0, 10.0 * pi);
    CHECK(r.converged);
    CHECK(std::abs(r.value) <= 1e-10);
}

TEST_CASE("budget exhaustion is reported, not hidden") {
    const QuadResult r = integrate(
        [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3) + 1e-15); }, 0.0, 1.0,
        1e-14, 2);
    CHECK(!r.converged);
}

TEST_CASE("endpoint and tolerance preconditions") {
    const auto f = [](double x) { return x; };
    CHECK_THROWS_AS(integrate(f, 0.0, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate(f, std::nan(""), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate(f, 0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("jump-support transform covers (-1, inf)") {
    // Standard normal restricted to (-1, inf): mass is Phi(1).
    const double pi = std::acos(-1.0);
    const QuadResult r = integrate_jump_support(
        [pi](double x) { return std::exp(-x * x / 2.0) / std::sqrt(2.0 * pi); }, 1e-12);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 0.841344746068543) <= 1e-10);
}

TEST_CASE("jump-support partial ranges") {
    // integral of 1/(1+x) over (-0.5, 0) is log 2
    const QuadResult r = integrate_jump_range(
        [](double x) { return 1.0 / (1.0 + x); }, -0.5, 0.0, 1e-12);
    CHECK(r.converged);
    CHECK(std::abs(r.value - std::log(2.0)) <= 1e-12);

    CHECK_THROWS_AS(integrate_jump_range([](double x) { return x; }, -1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_jump_range([](double x) { return x; }, 0.5, 0.5),
                    std::invalid_argument);
}

}  // TEST_SUITE
