#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fxinv::quad {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
    bool converged = false;
    std::size_t evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1, 1]. Nodes are symmetric; only the
// non-negative abscissae are tabulated. The odd-indexed abscissae are the
// embedded Gauss-7 nodes.
inline constexpr double gk_abscissae[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};

inline constexpr double k15_weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};

inline constexpr double g7_weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class F>
void gk15(F& f, double a, double b, double& value, double& error) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double k15 = 0.0;
    double g7 = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double x = h * gk_abscissae[i];
        const double fb = (i == 7) ? f(c) : f(c - x) + f(c + x);
        k15 += k15_weights[i] * fb;
        if (i % 2 == 1) g7 += g7_weights[i / 2] * fb;
    }
    value = k15 * h;
    error = std::fabs((k15 - g7) * h);
}

struct Segment {
    double a, b, value, error;
};

}  // namespace detail

/// Adaptive Gauss-Kronrod 7-15 quadrature of f over [knots.front(),
/// knots.back()], seeded with one segment per consecutive knot pair. Seeding
/// at known landmarks keeps narrow features near a knot visible to the first
/// pass; a single wide segment can step right over them. The worst segment
/// is bisected until the summed error estimate drops below abs_tol or the
/// segment budget is exhausted (in which case converged is false and the
/// best available estimate is returned).
template <class F>
QuadResult integrate_partitioned(F&& f, std::span<const double> knots,
                                 double abs_tol = 1e-12,
                                 std::size_t max_segments = 4000) {
    if (knots.size() < 2)
        throw std::invalid_argument("integrate: need at least two knots");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i]))
            throw std::invalid_argument("integrate: endpoints must be finite");
        if (i > 0 && !(knots[i] > knots[i - 1]))
            throw std::invalid_argument("integrate: knots must be strictly increasing");
    }
    if (!(abs_tol > 0)) throw std::invalid_argument("integrate: abs_tol must be positive");

    QuadResult res;
    std::vector<detail::Segment> segs;
    segs.reserve(64);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        detail::Segment s{knots[i], knots[i + 1], 0.0, 0.0};
        detail::gk15(f, s.a, s.b, s.value, s.error);
        res.evaluations += 15;
        segs.push_back(s);
    }

    while (true) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].value;
            err += segs[i].error;
            if (segs[i].error > segs[worst].error) worst = i;
        }
        res.value = total;
        res.error = err;
        if (err <= abs_tol) {
            res.converged = true;
            return res;
        }
        if (segs.size() >= max_segments) return res;  // converged stays false

        detail::Segment w = segs[worst];
        const double mid = 0.5 * (w.a + w.b);
        if (mid <= w.a || mid >= w.b) return res;  // interval exhausted at double precision
        detail::Segment left{w.a, mid, 0.0, 0.0}, right{mid, w.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        res.evaluations += 30;
        segs[worst] = left;
        segs.push_back(right);
    }
}

/// Adaptive Gauss-Kronrod 7-15 quadrature of f over the finite interval
/// [a, b].
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol = 1e-12,
                     std::size_t max_segments = 4000) {
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw std::invalid_argument("integrate: endpoints must be finite");
    if (!(abs_tol > 0)) throw std::invalid_argument("integrate: abs_tol must be positive");
    if (a == b) {
        QuadResult res;
        res.converged = true;
        return res;
    }
    const double knots[2] = {a, b};
    return integrate_partitioned(f, knots, abs_tol, max_segments);
}

/// Integral of f over the jump-size support (-1, inf), mapped to the unit
/// interval with u = (1+x)/(2+x), i.e. x = (2u-1)/(1-u) and dx = du/(1-u)^2.
/// The integrand must decay fast enough at both ends for the transformed
/// integrand to vanish (densities with finite mass do).
template <class F>
QuadResult integrate_jump_support(F&& f, double abs_tol = 1e-12,
                                  std::size_t max_segments = 4000) {
    auto g = [&f](double u) {
        const double om = 1.0 - u;
        const double x = (2.0 * u - 1.0) / om;
        const double v = f(x) / (om * om);
        return std::isfinite(v) ? v : 0.0;
    };
    // Endpoints u=0 (x=-1) and u=1 (x=inf) are never hit by Kronrod nodes,
    // but guard against overflow from steep integrands anyway. The interior
    // knot at u=1/2 pins x=0 to a segment boundary: jump densities pile up
    // there, and integrands like x f(x) vanish exactly at the centre node of
    // a [0,1] rule, which can hide an arbitrarily tall spike from the error
    // estimate.
    constexpr double knots[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    return integrate_partitioned(g, knots, abs_tol, max_segments);
}

/// Same transform restricted to (x_lo, x_hi), with -1 < x_lo < x_hi <= inf.
/// Named separately from the full-support version so integer literals for
/// max_segments never steal an overload.
template <class F>
QuadResult integrate_jump_range(F&& f, double x_lo, double x_hi,
                                double abs_tol = 1e-12,
                                std::size_t max_segments = 4000) {
    if (!(x_lo > -1.0)) throw std::invalid_argument("integrate_jump_range: x_lo must exceed -1");
    if (!(x_hi > x_lo)) throw std::invalid_argument("integrate_jump_range: empty range");
    auto u_of = [](double x) { return (1.0 + x) / (2.0 + x); };
    const double u_lo = u_of(x_lo);
    const double u_hi = std::isinf(x_hi) ? 1.0 : u_of(x_hi);
    auto g = [&f](double u) {
        const double om = 1.0 - u;
        const double x = (2.0 * u - 1.0) / om;
        const double v = f(x) / (om * om);
        return std::isfinite(v) ? v : 0.0;
    };
    std::vector<double> knots{u_lo};
    for (double u : {0.25, 0.5, 0.75})
        if (u > u_lo && u < u_hi) knots.push_back(u);
    knots.push_back(u_hi);
    return integrate_partitioned(g, knots, abs_tol, max_segments);
}

}  // namespace fxinv::quad
