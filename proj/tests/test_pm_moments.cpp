#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "pmblue/error.hpp"
#include "pmblue/linalg.hpp"
#include "pmblue/moments.hpp"
#include "pmblue/panel_grid.hpp"
#include "pmblue/simulation.hpp"
#include "pmblue/uniform.hpp"

using namespace pmblue;

namespace {

const DistributionSpec& expo() {
    static const DistributionSpec e = reflect(make_family("negexp"));
    return e;
}

const std::vector<std::string> worked = {"power:lambda=1", "power:lambda=2", "logistic", "pareto:a=3", "negexp",
                                         "weibull:c=1",    "weibull:c=2",    "gumbel",   "normal"};

double harmonic(int n) {
    double h = 0;
    for (int k = n; k >= 1; --k) h += 1.0 / k;
    return h;
}

MomentOptions adaptive() {
    MomentOptions o;
    o.method = MomentMethod::adaptive;
    return o;
}

}  // namespace

TEST(PmMean, ClosedForms) {
    const auto u = make_family("uniform");
    EXPECT_NEAR(pm_mean(u, 3), 0.75, 1e-12);
    EXPECT_NEAR(pm_mean(make_family("negexp"), 1), -1.0, 1e-12);
    EXPECT_NEAR(pm_mean(expo(), 4), 25.0 / 12, 1e-12);
    for (int i = 1; i <= 12; ++i) {
        // Logistic: E max of i = psi(i) - psi(1) = H_{i-1}.
        EXPECT_NEAR(pm_mean(make_family("logistic"), i), harmonic(i - 1), 1e-10) << i;
        // Gumbel is max-stable: max of i is Gumbel shifted by log i.
        EXPECT_NEAR(pm_mean(make_family("gumbel"), i), std::numbers::egamma + std::log(i), 1e-10) << i;
        // Power(lambda): max of i is Power(i lambda).
        EXPECT_NEAR(pm_mean(make_family("power", {{"lambda", 2}}), i), 2.0 * i / (2.0 * i + 1), 1e-12) << i;
        // Pareto(a): Gamma(i+1) Gamma(1-1/a) / Gamma(i+1-1/a).
        const double a = 3;
        EXPECT_NEAR(pm_mean(make_family("pareto", {{"a", a}}), i),
                    std::exp(std::lgamma(i + 1.0) + std::lgamma(1 - 1 / a) - std::lgamma(i + 1 - 1 / a)), 1e-9)
            << i;
    }
    EXPECT_NEAR(pm_mean(make_family("normal"), 2), 1 / std::sqrt(std::numbers::pi), 1e-12);
    EXPECT_NEAR(pm_mean(make_family("normal"), 3), 1.5 / std::sqrt(std::numbers::pi), 1e-12);
}

TEST(PmMean, QuantileDomainIdentity) {
    boost::math::quadrature::tanh_sinh<double> ts;
    for (const auto& name : worked) {
        const auto d = parse_family(name);
        for (int i : {1, 2, 5, 9}) {
            const double oracle =
                ts.integrate([&](double u) { return d.quantile(u) * i * std::pow(u, i - 1); }, 0.0, 1.0, 1e-13);
            EXPECT_NEAR(pm_mean(d, i), oracle, 2e-10 * std::max(1.0, std::abs(oracle))) << name << " i=" << i;
        }
    }
}

TEST(PmCov, ClosedForms) {
    const auto u = make_family("uniform");
    EXPECT_NEAR(pm_cov(u, 1, 2), 1.0 / 24, 1e-12);
    EXPECT_NEAR(pm_cov(u, 2, 2), 1.0 / 18, 1e-12);
    EXPECT_NEAR(pm_cov(make_family("atom_truncated_uniform"), 1, 1), 13.0 / 192, 1e-12);
    for (int i = 1; i <= 6; ++i) EXPECT_NEAR(pm_cov(make_family("gumbel"), i, i), std::numbers::pi * std::numbers::pi / 6, 1e-9);
    EXPECT_NEAR(pm_cov(make_family("normal"), 2, 2), 1 - 1 / std::numbers::pi, 1e-11);
    // Exp: Var of the max of i is sum_{l<=i} 1/l^2.
    EXPECT_NEAR(pm_cov(expo(), 4, 4), 1 + 0.25 + 1.0 / 9 + 1.0 / 16, 1e-11);
    EXPECT_EQ(pm_cov(u, 3, 2), pm_cov(u, 2, 3));
    EXPECT_THROW(pm_cov(u, 0, 2), ValidationError);
    EXPECT_THROW(pm_mean(u, 0), ValidationError);
}

TEST(PmTable, UniformRationals) {
    const auto u = make_family("uniform");
    for (int n : {3, 12, 30}) {
        const auto pm = pm_moments_table(u, n);
        for (int i = 1; i <= n; ++i) {
            EXPECT_NEAR(pm.mu[i - 1], i / (i + 1.0), 1e-10);
            for (int j = i; j <= n; ++j)
                EXPECT_NEAR(pm.sigma(i - 1, j - 1), i / ((i + 1.0) * (j + 1.0) * (j + 2.0)), 1e-10) << i << "," << j;
        }
    }
    const auto pm = pm_moments_table(u, 3);
    EXPECT_NEAR(pm.sigma(0, 0), 1.0 / 12, 1e-12);
    EXPECT_NEAR(pm.sigma(0, 2), 1.0 / 40, 1e-12);
    EXPECT_NEAR(pm.sigma(1, 2), 1.0 / 30, 1e-12);
    EXPECT_NEAR(pm.sigma(2, 2), 3.0 / 80, 1e-12);
}

TEST(PmTable, ExtensionProperty) {
    for (bool cache : {true, false}) {
        clear_moment_cache();
        MomentOptions o;
        o.use_cache = cache;
        const auto big = pm_moments_table(make_family("logistic"), 5, o);
        const auto small = pm_moments_table(make_family("logistic"), 3, o);
        const auto cut = leading(big, 3);
        EXPECT_EQ(cut.mu, small.mu);
        EXPECT_EQ(cut.sigma, small.sigma);
        EXPECT_EQ(cut.second_moment, small.second_moment);
    }
}

TEST(PmTable, Invariants) {
    for (const auto& name : worked) {
        const auto d = parse_family(name);
        const auto pm = pm_moments_table(d, 8);
        for (int i = 0; i < 8; ++i) {
            if (i) EXPECT_GE(pm.mu[i], pm.mu[i - 1]) << name;
            for (int j = 0; j < 8; ++j) {
                EXPECT_EQ(pm.sigma(i, j), pm.sigma(j, i));
                EXPECT_GE(pm.sigma(i, j), -1e-10) << name;
                EXPECT_NEAR(pm.second_moment(i, j) - pm.sigma(i, j) - pm.mu[i] * pm.mu[j], 0.0, 1e-10) << name;
            }
        }
        EXPECT_NO_THROW(SpdSolver{pm.sigma}) << name;
    }
}

TEST(PmTable, PanelAgreesWithAdaptive) {
    MomentOptions panel;
    panel.method = MomentMethod::panel;
    panel.use_cache = false;
    MomentOptions adapt = adaptive();
    adapt.use_cache = false;
    for (const auto& name : worked) {
        const auto d = parse_family(name);
        const auto a = pm_moments_table(d, 10, adapt);
        const auto p = pm_moments_table(d, 10, panel);
        for (int i = 0; i < 10; ++i) {
            EXPECT_NEAR(a.mu[i], p.mu[i], 1e-10 * std::max(1.0, std::abs(a.mu[i]))) << name;
            for (int j = i; j < 10; ++j) EXPECT_NEAR(a.sigma(i, j), p.sigma(i, j), 1e-10) << name << " " << i << "," << j;
        }
    }
}

TEST(PmTable, GumbelMonteCarlo) {
    // Gumbel n = 4 against a direct simulation of the covariances.
    const auto d = make_family("gumbel");
    const auto pm = pm_moments_table(d, 4);
    SimulationConfig cfg;
    cfg.family = "gumbel";
    cfg.n = 4;
    cfg.seed = 99;
    const int R = 400000;
    std::vector<double> s1(4, 0.0), s2(16, 0.0), s4(16, 0.0);
    for (int r = 0; r < R; ++r) {
        const auto x = sample_partial_maxima(cfg, d, r);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const double p = (x[i] - pm.mu[i]) * (x[j] - pm.mu[j]);
                s2[i * 4 + j] += p;
                s4[i * 4 + j] += p * p;
            }
    }
    for (int k = 0; k < 16; ++k) {
        const double mean = s2[k] / R;
        const double se = std::sqrt((s4[k] / R - mean * mean) / R);
        EXPECT_NEAR(mean, pm.sigma(k / 4, k % 4), 4 * se) << k;
    }
}

TEST(PmTable, MonteCarloFamiliesAtFive) {
    // Pareto a=3 has no fourth moment, so its covariance check uses a=5.
    for (const std::string name : {"power:lambda=2", "logistic", "pareto:a=3", "pareto:a=5", "negexp", "weibull:c=2",
                                   "gumbel", "normal"}) {
        const auto d = parse_family(name);
        const auto pm = pm_moments_table(d, 5);
        SimulationConfig cfg;
        cfg.family = name;
        cfg.n = 5;
        cfg.seed = 7;
        const int R = 1000000;
        std::vector<double> m1(5), m2(5), c(25), c2(25);
        for (int r = 0; r < R; ++r) {
            const auto x = sample_partial_maxima(cfg, d, r);
            for (int i = 0; i < 5; ++i) {
                const double e = x[i] - pm.mu[i];
                m1[i] += e;
                m2[i] += e * e;
                for (int j = i; j < 5; ++j) {
                    const double p = e * (x[j] - pm.mu[j]);
                    c[i * 5 + j] += p;
                    c2[i * 5 + j] += p * p;
                }
            }
        }
        for (int i = 0; i < 5; ++i) {
            const double se = std::sqrt((m2[i] / R - (m1[i] / R) * (m1[i] / R)) / R);
            EXPECT_NEAR(m1[i] / R, 0.0, 4 * se) << name << " mu_" << i + 1;
            if (name == "pareto:a=3") continue;
            for (int j = i; j < 5; ++j) {
                const double mean = c[i * 5 + j] / R;
                const double sec = std::sqrt((c2[i * 5 + j] / R - mean * mean) / R);
                EXPECT_NEAR(mean, pm.sigma(i, j), 4 * sec) << name << " sigma_" << i + 1 << j + 1;
            }
        }
    }
}

TEST(Spacings, WorkedValues) {
    const auto sm = spacing_moments(make_family("uniform"), 3);
    EXPECT_NEAR(sm.m[0], 1.0 / 6, 1e-12);
    EXPECT_NEAR(sm.m[1], 1.0 / 12, 1e-12);
    EXPECT_NEAR(sm.s_mat(0, 1), -1.0 / 180, 1e-12);
    const auto atom = spacing_moments(make_family("atom_truncated_uniform"), 3);
    EXPECT_NEAR(atom.s_mat(0, 1), 59.0 / 184320, 1e-12);
}

TEST(Spacings, ExponentialOracle) {
    // Z_k is nonzero only when X_{k+1} sets a record; the excess is Exp(1), so
    // E Z_k = E[1 - F(M_k)] = 1/(k+1) and E Z_k^2 = 2/(k+1).
    const auto sm = spacing_moments(expo(), 12);
    for (int k = 1; k <= 11; ++k) {
        EXPECT_NEAR(sm.m[k - 1], 1.0 / (k + 1), 1e-12);
        EXPECT_NEAR(sm.d_mat(k - 1, k - 1), 2.0 / (k + 1), 1e-11);
        EXPECT_NEAR(spacing_mean(expo(), k), 1.0 / (k + 1), 1e-12);
        EXPECT_NEAR(spacing_second_moment(expo(), k), 2.0 / (k + 1), 1e-11);
    }
    for (int k : {100, 1000, 10000}) {
        EXPECT_NEAR(spacing_mean(expo(), k), 1.0 / (k + 1), 1e-10 / k);
        EXPECT_NEAR(spacing_second_moment(expo(), k), 2.0 / (k + 1), 1e-10 / k);
    }
}

TEST(Spacings, ConsistencyTriangle) {
    for (const auto& name : worked) {
        const auto d = parse_family(name);
        for (int n : {2, 5, 8}) {
            const auto pm = pm_moments_table(d, n);
            const auto from = spacing_moments_from(pm);
            const auto direct = spacing_moments(d, n);
            for (int k = 0; k < n - 1; ++k) {
                EXPECT_NEAR(from.m[k], direct.m[k], 1e-8) << name;
                EXPECT_NEAR(from.m[k], pm.mu[k + 1] - pm.mu[k], 1e-10) << name;
                EXPECT_GE(direct.m[k], 0.0);
                for (int l = 0; l < n - 1; ++l) {
                    EXPECT_NEAR(from.s_mat(k, l), direct.s_mat(k, l), 1e-8) << name << " " << k << "," << l;
                    EXPECT_NEAR(direct.d_mat(k, l), direct.s_mat(k, l) + direct.m[k] * direct.m[l], 1e-12);
                }
                EXPECT_NEAR(direct.s_mat(k, k), pm.sigma(k + 1, k + 1) - 2 * pm.sigma(k, k + 1) + pm.sigma(k, k), 1e-8);
            }
            EXPECT_NO_THROW(SpdSolver{direct.s_mat}) << name;
        }
    }
}

TEST(Spacings, PanelGFormMatchesLinearMap) {
    for (const std::string name : {"normal", "logistic", "pareto:a=3", "gumbel"}) {
        const auto d = parse_family(name);
        const auto g = panel_spacing_moments(d, 30);
        const auto lin = spacing_moments_from(panel_moments_table(d, 30));
        for (int k = 0; k < 29; ++k)
            for (int l = 0; l < 29; ++l) EXPECT_NEAR(g.s_mat(k, l), lin.s_mat(k, l), 1e-10) << name;
    }
}

TEST(Uniform, SmallCaseFormulas) {
    const auto cf = uniform_closed_form(2);
    EXPECT_NEAR(cf.sigma_inverse.diag[0], 96.0 / 5, 1e-12);
    EXPECT_NEAR(cf.sigma_inverse.off[0], 72.0 / 5, 1e-12);
    EXPECT_NEAR(cf.sigma_inverse.diag[1], 144.0 / 5, 1e-12);
}

TEST(Uniform, InverseIsInverse) {
    const int n = 10;
    const auto cf = uniform_closed_form(n);
    const auto& t = cf.sigma_inverse;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            long double s = 0;
            for (int k = 0; k < n; ++k) {
                double inv = 0;
                if (k == j) inv = t.diag[k];
                if (k == j + 1 || k + 1 == j) inv = -t.off[std::min(k, j)];
                s += static_cast<long double>(cf.moments.sigma(i, k)) * inv;
            }
            EXPECT_NEAR(static_cast<double>(s), i == j ? 1.0 : 0.0, 1e-12) << i << "," << j;
        }
}

TEST(Uniform, SumsMatchDenseSolve) {
    // Plain Cholesky in long double as the oracle.
    const int n = 100;
    const auto cf = uniform_closed_form(n);
    std::vector<long double> L(n * n, 0.0L);
    for (int j = 0; j < n; ++j) {
        long double d = cf.moments.sigma(j, j);
        for (int k = 0; k < j; ++k) d -= L[j * n + k] * L[j * n + k];
        L[j * n + j] = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            long double v = cf.moments.sigma(i, j);
            for (int k = 0; k < j; ++k) v -= L[i * n + k] * L[j * n + k];
            L[i * n + j] = v / L[j * n + j];
        }
    }
    auto solve = [&](std::vector<long double> b) {
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < i; ++k) b[i] -= L[i * n + k] * b[k];
            b[i] /= L[i * n + i];
        }
        for (int i = n - 1; i >= 0; --i) {
            for (int k = i + 1; k < n; ++k) b[i] -= L[k * n + i] * b[k];
            b[i] /= L[i * n + i];
        }
        return b;
    };
    std::vector<long double> one(n, 1.0L), w(n);
    for (int i = 0; i < n; ++i) w[i] = 1.0L / (i + 2);  // 1 - mu_i
    const auto s1 = solve(one), sw = solve(w);
    long double a = 0, b = 0, c = 0;
    for (int i = 0; i < n; ++i) {
        a += s1[i];
        b += w[i] * sw[i];
        c += w[i] * s1[i];
    }
    const auto sums = uniform_sums(n);
    EXPECT_NEAR(static_cast<double>(sums.a / a), 1.0, 1e-8);
    EXPECT_NEAR(static_cast<double>(sums.b / b), 1.0, 1e-8);
    EXPECT_NEAR(static_cast<double>(sums.c / c), 1.0, 1e-8);
    EXPECT_EQ(uniform_closed_form(n).sums.a, sums.a);
}

TEST(BetaAsymptotics, Examples) {
    const auto t0 = beta_tail_asymptotics_check(0, {10, 1000});
    EXPECT_NEAR(t0[0].value, 10.0 / 11, 1e-14);
    const auto t1 = beta_tail_asymptotics_check(1, {10});
    EXPECT_NEAR(t1[0].value, 100.0 / (11 * 12), 1e-14);
    const auto th = beta_tail_asymptotics_check(0.5, {1000});
    EXPECT_NEAR(th[0].limit, std::sqrt(std::numbers::pi) / 2, 1e-15);
    EXPECT_LT(th[0].rel_error, 0.01);
    EXPECT_THROW(beta_tail_asymptotics_check(-1, {10}), ValidationError);
}
