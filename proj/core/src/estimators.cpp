#include "pmblue/estimators.hpp"

#include <cmath>

#include "pmblue/error.hpp"
#include "pmblue/linalg.hpp"

namespace pmblue {

const char* to_string(EstimatorKind k) {
    switch (k) {
        case EstimatorKind::blue_location: return "blue_location";
        case EstimatorKind::blue_scale: return "blue_scale";
        case EstimatorKind::blie_location: return "blie_location";
        case EstimatorKind::blie_scale: return "blie_scale";
        case EstimatorKind::simple_scale: return "simple_scale";
    }
    return "";
}

const char* to_string(Basis b) { return b == Basis::spacings ? "spacings" : "partial_maxima"; }

EstimatorKind estimator_kind_from(const std::string& s) {
    for (auto k : {EstimatorKind::blue_location, EstimatorKind::blue_scale, EstimatorKind::blie_location,
                   EstimatorKind::blie_scale, EstimatorKind::simple_scale})
        if (s == to_string(k)) return k;
    if (s == "L1") return EstimatorKind::blue_location;
    if (s == "L2") return EstimatorKind::blue_scale;
    if (s == "T1") return EstimatorKind::blie_location;
    if (s == "T2") return EstimatorKind::blie_scale;
    if (s == "U2") return EstimatorKind::simple_scale;
    throw ValidationError("estimators", "unknown estimator kind " + s);
}

Basis basis_from(const std::string& s) {
    if (s == "spacings") return Basis::spacings;
    if (s == "partial_maxima") return Basis::partial_maxima;
    throw ValidationError("basis", "unknown basis " + s);
}

bool EstimatorSolution::ill_conditioned() const { return condition_estimate > kIllConditioned; }

namespace {

void require_n(int n) {
    if (n < 2) throw ValidationError("n", "estimators need n >= 2");
}

std::vector<double> combine(double a, const std::vector<double>& x, double b, const std::vector<double>& y) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + b * y[i];
    return r;
}

}  // namespace

EstimatorPair solve_blue(const PartialMaximaMoments& pm) {
    require_n(pm.n);
    const SpdSolver solver(pm.sigma);
    const std::vector<double> one(pm.n, 1.0);
    const auto x1 = solver.solve(one);
    const auto xmu = solver.solve(pm.mu);
    const double A = dot(one, x1), B = dot(pm.mu, xmu), C = dot(one, xmu);
    const double delta = A * B - C * C;
    if (!(delta > 0)) throw NumericalError("Delta = A B - C^2 is not positive");

    EstimatorPair out;
    for (auto* s : {&out.location, &out.scale}) {
        s->basis = Basis::partial_maxima;
        s->n = pm.n;
        s->family = pm.family;
        s->condition_estimate = solver.condition();
        s->delta = delta;
    }
    out.location.kind = EstimatorKind::blue_location;
    out.location.coefficients = combine(B / delta, x1, -C / delta, xmu);
    out.location.variance = B / delta;
    out.scale.kind = EstimatorKind::blue_scale;
    out.scale.coefficients = combine(A / delta, xmu, -C / delta, x1);
    out.scale.variance = A / delta;
    return out;
}

EstimatorPair solve_blie(const PartialMaximaMoments& pm) {
    require_n(pm.n);
    const SpdSolver solver(pm.second_moment);
    const std::vector<double> one(pm.n, 1.0);
    const auto y1 = solver.solve(one);
    const auto ymu = solver.solve(pm.mu);
    const double A = dot(one, y1), B = dot(pm.mu, ymu), C = dot(one, ymu);

    EstimatorPair out;
    for (auto* s : {&out.location, &out.scale}) {
        s->basis = Basis::partial_maxima;
        s->n = pm.n;
        s->family = pm.family;
        s->condition_estimate = solver.condition();
    }
    out.location.kind = EstimatorKind::blie_location;
    out.location.coefficients = combine(1.0 / A, y1, 0.0, y1);
    out.location.variance = 1.0 / A;
    out.scale.kind = EstimatorKind::blie_scale;
    out.scale.coefficients = combine(1.0, ymu, -C / A, y1);
    out.scale.variance = 1.0 - (A * B - C * C) / A;
    return out;
}

EstimatorSolution solve_blue_spacings(const SpacingMoments& sm) {
    require_n(sm.n);
    const SpdSolver solver(sm.s_mat);
    const auto w = solver.solve(sm.m);
    const double q = dot(sm.m, w);
    if (!(q > 0)) throw NumericalError("m' S^{-1} m is not positive");
    EstimatorSolution s;
    s.kind = EstimatorKind::blue_scale;
    s.basis = Basis::spacings;
    s.n = sm.n;
    s.family = sm.family;
    s.coefficients = combine(1.0 / q, w, 0.0, w);
    s.variance = 1.0 / q;
    s.condition_estimate = solver.condition();
    return s;
}

EstimatorSolution solve_blie_spacings(const SpacingMoments& sm) {
    require_n(sm.n);
    const SpdSolver dsolve(sm.d_mat);
    const auto v = dsolve.solve(sm.m);
    const double a = dot(sm.m, v);
    const SpdSolver ssolve(sm.s_mat);
    const double q = dot(sm.m, ssolve.solve(sm.m));
    EstimatorSolution s;
    s.kind = EstimatorKind::blie_scale;
    s.basis = Basis::spacings;
    s.n = sm.n;
    s.family = sm.family;
    s.coefficients = v;
    s.variance = 1.0 - a;
    s.condition_estimate = dsolve.condition();
    s.blie_ratio_a = a;
    s.ratio_identity_residual = std::abs(a - q / (1.0 + q));
    return s;
}

EstimatorSolution simple_scale_estimator(const SpacingMoments& sm) {
    require_n(sm.n);
    const int d = sm.n - 1;
    std::vector<double> w(d);
    double cn = 0.0;
    for (int k = 0; k < d; ++k) {
        const double s2 = sm.s_mat(k, k);
        if (!(s2 > 0)) throw NumericalError("spacing variance s_" + std::to_string(k + 1) + "^2 is not positive");
        w[k] = sm.m[k] / s2;
        cn += sm.m[k] * sm.m[k] / s2;
    }
    EstimatorSolution s;
    s.kind = EstimatorKind::simple_scale;
    s.basis = Basis::spacings;
    s.n = sm.n;
    s.family = sm.family;
    s.coefficients = combine(1.0 / cn, w, 0.0, w);
    s.variance = quadratic_form(sm.s_mat, s.coefficients);
    s.variance_bound = 1.0 / cn;
    s.condition_estimate = 1.0;
    return s;
}

EstimatorSolution to_partial_maxima_basis(const EstimatorSolution& sol) {
    if (sol.basis == Basis::partial_maxima) return sol;
    EstimatorSolution r = sol;
    r.basis = Basis::partial_maxima;
    const auto& b = sol.coefficients;
    const int n = static_cast<int>(b.size()) + 1;
    r.coefficients.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double prev = i >= 1 ? b[i - 1] : 0.0;
        const double cur = i < n - 1 ? b[i] : 0.0;
        r.coefficients[i] = prev - cur;
    }
    return r;
}

double evaluate(const EstimatorSolution& sol, const std::vector<double>& data) {
    const auto& c = sol.coefficients;
    if (sol.basis == Basis::spacings && data.size() == c.size()) {
        for (double z : data)
            if (z < 0) throw ValidationError("data", "spacings must be non-negative");
        return dot(c, data);
    }
    const std::size_t n = sol.basis == Basis::spacings ? c.size() + 1 : c.size();
    if (data.size() != n)
        throw ValidationError("data", "expected " + std::to_string(n) + " partial maxima, got " + std::to_string(data.size()));
    for (std::size_t i = 1; i < data.size(); ++i)
        if (data[i] < data[i - 1]) throw ValidationError("data", "partial maxima must be non-decreasing");
    if (sol.basis == Basis::partial_maxima) return dot(c, data);
    long double s = 0;
    for (std::size_t k = 0; k < c.size(); ++k) s += static_cast<long double>(c[k]) * (data[k + 1] - data[k]);
    return static_cast<double>(s);
}

}  // namespace pmblue
