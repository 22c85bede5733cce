// Acceptance checks 1-10.  One PASS/FAIL line per criterion; exit status is
// non-zero when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pmblue/diagnostics.hpp"
#include "pmblue/estimators.hpp"
#include "pmblue/fisher.hpp"
#include "pmblue/linalg.hpp"
#include "pmblue/moments.hpp"
#include "pmblue/simulation.hpp"
#include "pmblue/uniform.hpp"

using namespace pmblue;

namespace {

const char* const kSweep[] = {"power:lambda=1", "power:lambda=2", "logistic", "pareto:a=3", "negexp",
                              "weibull:c=1",    "weibull:c=2",    "gumbel",   "normal"};

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    // Records one sub-check; the criterion passes only if all of them do.
    void expect(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

bool in(double v, double lo, double hi) { return v >= lo && v <= hi; }

Outcome uniform_closed_form_agreement() {
    Outcome o;
    const int n = 30;
    const auto pm = pm_moments_table(make_family("uniform"), n);
    double err = 0;
    for (int i = 1; i <= n; ++i) {
        err = std::max(err, std::abs(pm.mu[i - 1] - i / (i + 1.0)));
        for (int j = i; j <= n; ++j)
            err = std::max(err, std::abs(pm.sigma(i - 1, j - 1) - i / ((i + 1.0) * (j + 1.0) * (j + 2.0))));
    }
    o.expect(err <= 1e-9, "max |quadrature - rational| = " + fmt(err));

    const auto cf = uniform_closed_form(n);
    const SpdSolver solver(cf.moments.sigma);
    double rel = 0;
    for (int j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1;
        const auto col = solver.solve(e);
        for (int i = 0; i < n; ++i) {
            double tri = 0;
            if (i == j) tri = cf.sigma_inverse.diag[i];
            if (i == j + 1 || j == i + 1) tri = -cf.sigma_inverse.off[std::min(i, j)];
            const double scale = tri != 0 ? std::abs(tri) : std::abs(cf.sigma_inverse.diag[i]);
            rel = std::max(rel, std::abs(col[i] - tri) / scale);
        }
    }
    o.expect(rel <= 1e-8, "max rel |dense inverse - tridiagonal| = " + fmt(rel));
    return o;
}

Outcome uniform_rate_law() {
    Outcome o;
    const std::vector<long long> ladder{100, 1000, 10000, 100000};
    std::vector<double> l2, l1;
    for (long long n : ladder) {
        const auto s = uniform_sums(static_cast<int>(n));
        const double h = std::log(static_cast<double>(n)) / 2;
        l2.push_back(s.var_l2() * h);
        l1.push_back(s.var_l1() * h);
    }
    o.expect(in(l2[2], 1.0, 1.35), "Var[L2] log n/2 at 1e4 = " + fmt(l2[2]) + " in [1, 1.35]");
    o.expect(in(l1[2], 1.0, 1.35), "Var[L1] log n/2 at 1e4 = " + fmt(l1[2]) + " in [1, 1.35]");
    o.expect(in(l2[3], 1.0, 1.25), "Var[L2] log n/2 at 1e5 = " + fmt(l2[3]) + " in [1, 1.25]");
    o.expect(in(l1[3], 1.0, 1.25), "Var[L1] log n/2 at 1e5 = " + fmt(l1[3]) + " in [1, 1.25]");
    bool dec = true;
    for (std::size_t k = 1; k < ladder.size(); ++k) dec = dec && l2[k] < l2[k - 1] && l1[k] < l1[k - 1];
    o.expect(dec, "decreasing along 1e2..1e5");
    return o;
}

Outcome ncp_counterexample() {
    Outcome o;
    const auto r = ncp_check(make_family("atom_truncated_uniform"), 3);
    const double v = r.cov_matrix(0, 1);
    o.expect(std::abs(v - 59.0 / 184320) <= 1e-9, "Cov[Z1,Z2] = " + fmt(v) + " vs 59/184320");
    return o;
}

Outcome ncp_sweep() {
    Outcome o;
    for (const char* d : kSweep) {
        const auto r = ncp_check(parse_family(d), 6);
        o.expect(r.max_offdiag <= 1e-8, std::string(d) + " max " + fmt(r.max_offdiag));
    }
    return o;
}

Outcome blie_identities() {
    Outcome o;
    for (const char* d : kSweep) {
        const auto sm = spacing_moments(parse_family(d), 6);
        const auto l2 = solve_blue_spacings(sm);
        const auto t2 = solve_blie_spacings(sm);
        const double a = *t2.blie_ratio_a;
        double coef = 0;
        for (std::size_t k = 0; k < l2.coefficients.size(); ++k)
            coef = std::max(coef, std::abs(t2.coefficients[k] - a * l2.coefficients[k]));
        const bool ok = coef <= 1e-9 && *t2.ratio_identity_residual <= 1e-10 && a > 0 && a < 1;
        o.expect(ok, std::string(d) + " a=" + fmt(a) + " coef=" + fmt(coef) + " id=" + fmt(*t2.ratio_identity_residual));
    }
    return o;
}

Outcome von_mises_table() {
    Outcome o;
    const auto g = von_mises_profile(make_family("gumbel"), 1, 0);
    o.expect(std::abs(g.limit_estimate() - 1) <= 0.02, "gumbel " + fmt(g.limit_estimate()));
    const auto nm = von_mises_profile(make_family("normal"), 1, 0.5, 88);
    const double x = nm.probes.empty() ? 0 : nm.probes.back().x;
    o.expect(std::abs(nm.limit_estimate() - std::sqrt(2.0)) <= 0.01 * std::sqrt(2.0) && std::abs(x - 20) < 1,
             "normal " + fmt(nm.limit_estimate()) + " at x=" + fmt(x));
    const auto pa = von_mises_profile(make_family("pareto", {{"a", 3}}), 4.0 / 3, 0);
    o.expect(pa.flatness <= 1.05, "pareto flatness " + fmt(pa.flatness));
    return o;
}

Outcome fisher_counterexample() {
    Outcome o;
    const auto cx = make_family("fisher_counterexample_min");
    const auto lim = fisher_min_limit(cx);
    o.expect(std::abs(lim.integral_below_s - (std::log(1.5) - 5.0 / 18)) <= 1e-6, "below s " + fmt(lim.integral_below_s));
    o.expect(std::abs(lim.integral_above_s - 2.77) <= 0.05, "above s " + fmt(lim.integral_above_s) + " vs 2.77");
    o.expect(std::abs(lim.i_min - 2.9) <= 0.1, "I^min " + fmt(lim.i_min) + " vs 2.9");
    const double s = std::exp(-2.0), e = std::numbers::e;
    const bool smooth = std::abs(cx.cdf(s) - 1.0 / 3) <= 1e-10 && std::abs(cx.density(s) - e * e / 9) <= 1e-10 &&
                        std::abs(cx.density_slope(s) + std::pow(e, 4) / 27) <= 1e-10;
    o.expect(smooth, "F, F', F'' at s");
    return o;
}

Outcome monte_carlo() {
    Outcome o;
    SimulationConfig cfg;
    cfg.family = "negexp";
    cfg.reflected = true;
    cfg.theta2 = 2;
    cfg.n = 50;
    cfg.replicates = 100000;
    cfg.seed = 20240601;
    cfg.estimators = {"L2", "T2", "U2"};
    const auto r = run_simulation(cfg);
    const auto& l2 = r.estimators[0];
    const auto& t2 = r.estimators[1];
    const auto& u2 = r.estimators[2];
    o.expect(std::abs(l2.z_score_bias) <= 4, "L2 z " + fmt(l2.z_score_bias));
    o.expect(in(l2.variance_ratio, 0.95, 1.05), "L2 ratio " + fmt(l2.variance_ratio));
    o.expect(t2.empirical_mse <= l2.empirical_variance, "MSE[T2] " + fmt(t2.empirical_mse));
    o.expect(u2.empirical_variance >= l2.empirical_variance, "Var[U2] " + fmt(u2.empirical_variance));
    return o;
}

Outcome beta_asymptotics() {
    Outcome o;
    for (double t : {0.0, 0.5, 1.0}) {
        const auto row = beta_tail_asymptotics_check(t, {1000})[0];
        o.expect(row.rel_error <= 0.01, "t=" + fmt(t) + " rel " + fmt(row.rel_error));
    }
    return o;
}

// A compact rerun of the invariants the unit suites cover in depth.
Outcome property_suites() {
    Outcome o;
    double constraint = 0, pqd = 0, agree = 0;
    for (const char* d : kSweep) {
        const auto pm = pm_moments_table(parse_family(d), 8);
        const auto p = solve_blue(pm);
        double s1 = 0, sm = 0;
        for (int i = 0; i < pm.n; ++i) {
            s1 += p.scale.coefficients[i];
            sm += p.scale.coefficients[i] * pm.mu[i];
            for (int j = 0; j < pm.n; ++j) pqd = std::min(pqd, pm.sigma(i, j));
        }
        constraint = std::max({constraint, std::abs(s1), std::abs(sm - 1)});
        const auto sp = solve_blue_spacings(spacing_moments_from(pm));
        agree = std::max(agree, std::abs(sp.variance - p.scale.variance) / p.scale.variance);
    }
    o.expect(constraint <= 1e-10, "constraint residual " + fmt(constraint));
    o.expect(pqd >= -1e-10, "min sigma_ij " + fmt(pqd));
    o.expect(agree <= 1e-9, "spacings/full rel " + fmt(agree));

    SimulationConfig cfg;
    cfg.family = "logistic";
    cfg.n = 10;
    cfg.replicates = 3000;
    cfg.estimators = {"L1", "L2", "T2"};
    cfg.workers = 1;
    const auto a = run_simulation(cfg);
    cfg.workers = 4;
    const auto b = run_simulation(cfg);
    bool same = true;
    for (std::size_t e = 0; e < a.estimators.size(); ++e)
        same = same && a.estimators[e].empirical_mean == b.estimators[e].empirical_mean &&
               a.estimators[e].empirical_variance == b.estimators[e].empirical_variance;
    o.expect(same, "1 vs 4 workers bit-identical");

    Accumulator whole, left, right;
    for (int i = 0; i < 4096; ++i) {
        const double x = std::cos(0.1 * i) + 1e-3 * i;
        whole.add(x, 0.0);
        (i < 1024 ? left : right).add(x, 0.0);
    }
    left.merge(right);
    o.expect(left.count == whole.count && std::abs(left.mean - whole.mean) <= 1e-14 &&
                 std::abs(left.m2 - whole.m2) <= 1e-10 * whole.m2,
             "accumulator merge");
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
        double budget_s;  // 0 = no runtime limit
    };
    const std::vector<Criterion> criteria{
        {1, "uniform closed-form agreement", uniform_closed_form_agreement, 30},
        {2, "uniform rate law bands", uniform_rate_law, 10},
        {3, "NCP counterexample covariance", ncp_counterexample, 5},
        {4, "NCP family sweep", ncp_sweep, 300},
        {5, "BLIE/BLUE identities", blie_identities, 0},
        {6, "Von Mises table", von_mises_table, 60},
        {7, "Fisher counterexample", fisher_counterexample, 60},
        {8, "Monte Carlo validation", monte_carlo, 120},
        {9, "beta asymptotics", beta_asymptotics, 1},
        {10, "property suites", property_suites, 0},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0) o.expect(secs < c.budget_s, "runtime < " + fmt(c.budget_s) + " s");
        std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.str().c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
