#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pmblue/error.hpp"

namespace pmblue {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    std::size_t max_evaluations = 100000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

namespace detail {

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// One 21-point Kronrod panel with the embedded 10-point Gauss estimate.
// Error estimate follows the QUADPACK qk21 heuristic.
template <class F>
Segment kronrod21(F& f, double a, double b) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    const auto& xk = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();

    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[21];
    fv[0] = f(c);
    for (std::size_t i = 1; i < xk.size(); ++i) {
        fv[2 * i - 1] = f(c - h * xk[i]);
        fv[2 * i] = f(c + h * xk[i]);
    }
    double rk = wk[0] * fv[0];
    double rg = 0.0;
    double rabs = std::abs(rk);
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double s = fv[2 * i - 1] + fv[2 * i];
        rk += wk[i] * s;
        rabs += wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
        if (i % 2 == 1) rg += wg[i / 2] * s;
    }
    const double mean = 0.5 * rk;
    double asc = wk[0] * std::abs(fv[0] - mean);
    for (std::size_t i = 1; i < xk.size(); ++i)
        asc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));

    rk *= h;
    rabs *= std::abs(h);
    asc *= std::abs(h);
    double err = std::abs((rk - rg * h));
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (rabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * rabs, err);
    if (!std::isfinite(rk)) err = std::numeric_limits<double>::infinity();
    return {a, b, rk, err};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod over [points.front(), points.back()] with
// the interior points as initial breaks.  Endpoints must be finite.
template <class F>
QuadratureResult integrate_points(F&& f, const std::vector<double>& points, const QuadratureOptions& opt = {}) {
    QuadratureResult res;
    if (points.size() < 2) return res;
    std::priority_queue<detail::Segment> heap;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1] > points[i])) continue;
        auto s = detail::kronrod21(f, points[i], points[i + 1]);
        res.evaluations += 21;
        total += s.value;
        err += s.error;
        heap.push(s);
    }
    // Segments too narrow to split further are retired with their error.
    double retired_err = 0.0, retired_val = 0.0;
    auto tolerance = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
    while (!heap.empty() && err > tolerance()) {
        if (res.evaluations + 42 > opt.max_evaluations) break;
        detail::Segment s = heap.top();
        heap.pop();
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b) || (s.b - s.a) <= 64 * std::numeric_limits<double>::epsilon() * std::max(std::abs(s.a), std::abs(s.b))) {
            retired_err += s.error;
            retired_val += s.value;
            continue;
        }
        auto l = detail::kronrod21(f, s.a, mid);
        auto r = detail::kronrod21(f, mid, s.b);
        res.evaluations += 42;
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
    }
    // Re-sum to shed drift from the running updates.
    total = retired_val;
    err = retired_err;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    res.value = total;
    res.error = err;
    res.converged = std::isfinite(total) && err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    return res;
}

// Integral over [a, b]; infinite ends are compactified with x = tan(pi v / 2).
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opt = {},
                           const std::vector<double>& breaks = {}) {
    if (std::isfinite(a) && std::isfinite(b)) {
        std::vector<double> pts{a};
        for (double x : breaks)
            if (x > a && x < b) pts.push_back(x);
        pts.push_back(b);
        std::sort(pts.begin(), pts.end());
        return integrate_points(f, pts, opt);
    }
    constexpr double half_pi = std::numbers::pi / 2.0;
    auto to_v = [](double x) { return std::isinf(x) ? (x > 0 ? 1.0 : -1.0) : std::atan(x) / half_pi; };
    std::vector<double> pts{to_v(a)};
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(to_v(x));
    pts.push_back(to_v(b));
    std::sort(pts.begin(), pts.end());
    auto g = [&f](double v) {
        const double t = half_pi * v;
        const double c = std::cos(t);
        if (c == 0.0) return 0.0;
        const double x = std::tan(t);
        const double val = f(x);
        return val == 0.0 ? 0.0 : val * half_pi / (c * c);
    };
    return integrate_points(g, pts, opt);
}

// Throws NumericalError naming `what` when the budget runs out.
inline double require_converged(const QuadratureResult& r, const std::string& what) {
    if (!r.converged)
        throw NumericalError("quadrature did not converge for " + what + " (estimate " + std::to_string(r.value) +
                             ", error " + std::to_string(r.error) + ", evaluations " +
                             std::to_string(r.evaluations) + ")");
    return r.value;
}

}  // namespace pmblue
