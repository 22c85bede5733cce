#include <gtest/gtest.h>

#include <cmath>

#include "pmblue/error.hpp"
#include "pmblue/estimators.hpp"
#include "pmblue/linalg.hpp"
#include "pmblue/moments.hpp"
#include "pmblue/uniform.hpp"

using namespace pmblue;

namespace {

const std::vector<std::string> worked = {"power:lambda=1", "power:lambda=2", "logistic", "pareto:a=3", "negexp",
                                         "weibull:c=1",    "weibull:c=2",    "gumbel",   "normal"};

double sum(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s;
}

// Location-invariant scale MSE: E[(c'X - 1)^2] for a standard sample.
double scale_mse(const PartialMaximaMoments& pm, const std::vector<double>& c) {
    return quadratic_form(pm.second_moment, c) - 2 * dot(c, pm.mu) + 1;
}

// Direction d with d'1 = 0 and d'mu = 0.
std::vector<double> null_direction(const PartialMaximaMoments& pm, int seed) {
    std::vector<double> d(pm.n);
    for (int i = 0; i < pm.n; ++i) d[i] = std::sin(1.3 * (i + 1) * (seed + 1));
    // Project out span{1, mu} by Gram-Schmidt.
    std::vector<double> e1(pm.n, 1.0 / std::sqrt(pm.n)), e2 = pm.mu;
    const double p = dot(e2, e1);
    for (int i = 0; i < pm.n; ++i) e2[i] -= p * e1[i];
    const double nrm = std::sqrt(dot(e2, e2));
    for (double& x : e2) x /= nrm;
    const double a = dot(d, e1), b = dot(d, e2);
    for (int i = 0; i < pm.n; ++i) d[i] -= a * e1[i] + b * e2[i];
    return d;
}

}  // namespace

TEST(Blue, ConstraintsAndVariance) {
    for (const auto& name : worked) {
        const auto pm = pm_moments_table(parse_family(name), 8);
        const auto p = solve_blue(pm);
        EXPECT_NEAR(sum(p.location.coefficients), 1.0, 1e-10) << name;
        EXPECT_NEAR(dot(p.location.coefficients, pm.mu), 0.0, 1e-10) << name;
        EXPECT_NEAR(sum(p.scale.coefficients), 0.0, 1e-10) << name;
        EXPECT_NEAR(dot(p.scale.coefficients, pm.mu), 1.0, 1e-10) << name;
        EXPECT_NEAR(quadratic_form(pm.sigma, p.location.coefficients), p.location.variance, 1e-10) << name;
        EXPECT_NEAR(quadratic_form(pm.sigma, p.scale.coefficients), p.scale.variance, 1e-10) << name;
        EXPECT_GT(*p.scale.delta, 0.0);
        EXPECT_FALSE(p.scale.ill_conditioned());
    }
}

TEST(Blue, PerturbationsDoNotImprove) {
    for (const auto& name : worked) {
        const auto pm = pm_moments_table(parse_family(name), 7);
        const auto p = solve_blue(pm);
        const auto b = solve_blie(pm);
        for (int s = 0; s < 5; ++s) {
            const auto d = null_direction(pm, s);
            for (double eps : {1e-3, -1e-3, 0.1}) {
                auto c = p.scale.coefficients;
                for (int i = 0; i < pm.n; ++i) c[i] += eps * d[i];
                EXPECT_GE(quadratic_form(pm.sigma, c), p.scale.variance - 1e-13) << name;
                auto l = p.location.coefficients;
                for (int i = 0; i < pm.n; ++i) l[i] += eps * d[i];
                EXPECT_GE(quadratic_form(pm.sigma, l), p.location.variance - 1e-13) << name;
                // The scale BLIE only has to keep c'1 = 0; d qualifies.
                auto t = b.scale.coefficients;
                for (int i = 0; i < pm.n; ++i) t[i] += eps * d[i];
                EXPECT_GE(scale_mse(pm, t), b.scale.variance - 1e-13) << name;
            }
        }
    }
}

TEST(Blie, MseDefinitions) {
    for (const auto& name : worked) {
        const auto pm = pm_moments_table(parse_family(name), 6);
        const auto b = solve_blie(pm);
        const auto u = solve_blue(pm);
        EXPECT_NEAR(sum(b.location.coefficients), 1.0, 1e-10);
        EXPECT_NEAR(sum(b.scale.coefficients), 0.0, 1e-10);
        EXPECT_NEAR(quadratic_form(pm.second_moment, b.location.coefficients), b.location.variance, 1e-10) << name;
        EXPECT_NEAR(scale_mse(pm, b.scale.coefficients), b.scale.variance, 1e-10) << name;
        EXPECT_LE(b.scale.variance, u.scale.variance + 1e-12) << name;
        // Scale BLIE is the shrunk BLUE: MSE = V/(1+V).
        EXPECT_NEAR(b.scale.variance, u.scale.variance / (1 + u.scale.variance), 1e-10) << name;
    }
}

TEST(Blue, ShiftScaleInvariance) {
    const auto pm = pm_moments_table(make_family("logistic"), 6);
    const auto p = solve_blue(pm);
    const std::vector<double> x{-0.4, 0.1, 0.1, 0.9, 1.7, 1.7};
    const double l = evaluate(p.location, x), s = evaluate(p.scale, x);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 3 + 2.5 * x[i];
    EXPECT_NEAR(evaluate(p.location, y), 3 + 2.5 * l, 1e-12);
    EXPECT_NEAR(evaluate(p.scale, y), 2.5 * s, 1e-12);
    // The exact expectation vector recovers the parameters.
    std::vector<double> m(pm.mu);
    for (double& v : m) v = -1 + 4 * v;
    EXPECT_NEAR(evaluate(p.location, m), -1, 1e-11);
    EXPECT_NEAR(evaluate(p.scale, m), 4, 1e-11);
}

TEST(Spacings, BlueMatchesFullForm) {
    for (const auto& name : worked) {
        const auto d = parse_family(name);
        for (int n = 2; n <= 12; ++n) {
            const auto pm = pm_moments_table(d, n);
            const auto full = solve_blue(pm).scale;
            const auto sp = solve_blue_spacings(spacing_moments_from(pm));
            EXPECT_NEAR(sp.variance, full.variance, 1e-9 * full.variance) << name << " n=" << n;
            const auto back = to_partial_maxima_basis(sp);
            for (int i = 0; i < n; ++i) EXPECT_NEAR(back.coefficients[i], full.coefficients[i], 1e-7) << name << n;
            const auto blie_full = solve_blie(pm).scale;
            const auto blie_sp = solve_blie_spacings(spacing_moments_from(pm));
            EXPECT_NEAR(blie_sp.variance, blie_full.variance, 1e-9) << name << " n=" << n;
        }
    }
}

TEST(Spacings, BlieIsShrunkBlue) {
    for (const auto& name : worked) {
        const auto sm = spacing_moments(parse_family(name), 10);
        const auto l2 = solve_blue_spacings(sm);
        const auto t2 = solve_blie_spacings(sm);
        const double a = *t2.blie_ratio_a;
        EXPECT_GT(a, 0.0);
        EXPECT_LT(a, 1.0);
        EXPECT_LT(*t2.ratio_identity_residual, 1e-12);
        for (std::size_t k = 0; k < l2.coefficients.size(); ++k)
            EXPECT_NEAR(t2.coefficients[k], a * l2.coefficients[k], 1e-11) << name;
        EXPECT_NEAR(t2.variance, 1 - a, 1e-14);
        EXPECT_LT(t2.variance, l2.variance);
    }
}

TEST(Spacings, SInverseMIsNonNegativeUnderNcp) {
    for (const auto& name : worked) {
        const auto sm = spacing_moments(parse_family(name), 10);
        const auto w = SpdSolver(sm.s_mat).solve(sm.m);
        for (double v : w) EXPECT_GE(v, -1e-12) << name;
    }
}

TEST(Spacings, SimpleEstimatorBound) {
    for (const auto& name : worked) {
        const auto sm = spacing_moments(parse_family(name), 10);
        const auto u2 = simple_scale_estimator(sm);
        const auto l2 = solve_blue_spacings(sm);
        EXPECT_NEAR(dot(u2.coefficients, sm.m), 1.0, 1e-12);
        EXPECT_GE(u2.variance, l2.variance - 1e-12) << name;
        EXPECT_LE(u2.variance, *u2.variance_bound + 1e-12) << name;
        for (double b : u2.coefficients) EXPECT_GE(b, 0.0);
    }
}

TEST(Uniform, TwoByTwoByHand) {
    // Sigma = [[1/12, 1/24], [1/24, 1/18]], mu = (1/2, 2/3).
    const auto pm = uniform_closed_form(2).moments;
    const double det = 1.0 / 216 - 1.0 / 576;  // 5/1728
    const double i11 = (1.0 / 18) / det, i12 = -(1.0 / 24) / det, i22 = (1.0 / 12) / det;
    const double A = i11 + 2 * i12 + i22;
    const double B = i11 / 4 + 2 * i12 / 3 + i22 * 4 / 9;
    const double C = i11 / 2 + i12 * (0.5 + 2.0 / 3) + i22 * 2 / 3;
    const double delta = A * B - C * C;
    const auto p = solve_blue(pm);
    EXPECT_NEAR(p.scale.variance, A / delta, 1e-12);
    EXPECT_NEAR(p.location.variance, B / delta, 1e-12);
    // Only the spacing Z_1 = X_2 - X_1 carries scale information: L = Z_1/m_1 = 6 Z_1.
    EXPECT_NEAR(p.scale.coefficients[0], -6, 1e-10);
    EXPECT_NEAR(p.scale.coefficients[1], 6, 1e-10);
    EXPECT_NEAR(A / delta, 36 * (1.0 / 18 - 2.0 / 24 + 1.0 / 12), 1e-12);
}

TEST(Evaluate, InputChecks) {
    const auto pm = pm_moments_table(make_family("uniform"), 3);
    const auto p = solve_blue(pm);
    EXPECT_THROW(evaluate(p.scale, {0.1, 0.2}), ValidationError);
    EXPECT_THROW(evaluate(p.scale, {0.3, 0.2, 0.4}), ValidationError);
    const auto sp = solve_blue_spacings(spacing_moments_from(pm));
    EXPECT_THROW(evaluate(sp, {0.1, -0.2}), ValidationError);
    const std::vector<double> x{0.2, 0.5, 0.5};
    EXPECT_NEAR(evaluate(sp, x), evaluate(sp, {0.3, 0.0}), 1e-15);
    EXPECT_NEAR(evaluate(sp, x), evaluate(p.scale, x), 1e-10);
}

TEST(Solvers, RejectSmallN) {
    PartialMaximaMoments pm = pm_moments_table(make_family("uniform"), 2);
    pm = leading(pm, 1);
    EXPECT_THROW(solve_blue(pm), ValidationError);
    EXPECT_THROW(solve_blie(pm), ValidationError);
}

TEST(Solvers, SingularTableIsNumericalError) {
    auto pm = pm_moments_table(make_family("uniform"), 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) pm.sigma(i, j) = 1.0;
    EXPECT_THROW(solve_blue(pm), NumericalError);
}

TEST(Names, RoundTrip) {
    for (auto k : {EstimatorKind::blue_location, EstimatorKind::blue_scale, EstimatorKind::blie_location,
                   EstimatorKind::blie_scale, EstimatorKind::simple_scale})
        EXPECT_EQ(estimator_kind_from(to_string(k)), k);
    EXPECT_EQ(basis_from(to_string(Basis::spacings)), Basis::spacings);
    EXPECT_THROW(estimator_kind_from("median"), ValidationError);
}
