#include <cmath>
#include <fstream>
#include <ostream>

#include "cli.hpp"
#include "pmblue/csv.hpp"
#include "pmblue/error.hpp"
#include "pmblue/fisher.hpp"
#include "pmblue/serialization.hpp"

namespace pmblue::cli {

namespace {

void write_table(const std::filesystem::path& p, const CsvTable& t) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ValidationError("out", "cannot write " + p.string());
    write_csv(f, t);
}

struct VonMisesRow {
    const char* dist;
    double gamma;
    double delta;
    int probes;
    double expected;
    double rel_tol;
};

}  // namespace

std::vector<PackCheck> paper_pack(const std::filesystem::path& dir, std::ostream& log) {
    std::filesystem::create_directories(dir);
    std::vector<PackCheck> checks;
    auto check = [&](std::string name, double expected, double observed, double tol) {
        const bool pass = std::abs(observed - expected) <= tol;
        log << (pass ? "PASS " : "FAIL ") << name << " expected=" << format_number(expected)
            << " observed=" << format_number(observed) << " tol=" << format_number(tol) << "\n";
        checks.push_back({std::move(name), expected, observed, tol, pass});
    };

    // Uniform rate table from the closed-form sums.
    const RateStudy rate = rate_study(make_family("uniform"), {10, 100, 1000, 10000, 100000, 1000000});
    write_table(dir / "uniform_rate.csv", rate_csv(rate));

    // NCP verdicts for the worked families, plus the atom counterexample.
    CsvTable ncp{{"family", "n", "max_offdiag", "max_i", "max_j", "verdict", "expected_verdict"}, {}};
    const char* sweep[] = {"power:lambda=1", "power:lambda=2", "logistic", "pareto:a=3", "negexp",
                           "weibull:c=1",    "weibull:c=2",    "gumbel",   "normal"};
    for (const char* d : sweep) {
        const NcpReport r = ncp_check(parse_family(d), 6);
        ncp.rows.push_back({r.family, "6", format_number(r.max_offdiag), std::to_string(r.max_i), std::to_string(r.max_j),
                            to_string(r.verdict), "ncp_pass"});
        check(std::string("ncp_pass ") + d, 1.0, r.verdict == NcpVerdict::ncp_pass ? 1.0 : 0.0, 0.0);
    }
    const NcpReport atom = ncp_check(make_family("atom_truncated_uniform"), 3);
    ncp.rows.push_back({atom.family, "3", format_number(atom.max_offdiag), std::to_string(atom.max_i),
                        std::to_string(atom.max_j), to_string(atom.verdict), "ncp_fail"});
    check("atom_truncated_uniform cov(Z1,Z2)", 59.0 / 184320.0, atom.cov_matrix(0, 1), 1e-9);
    write_table(dir / "ncp_verdicts.csv", ncp);

    // Von Mises limits.  The Normal needs depth 88 to reach x ~ 20.
    const VonMisesRow vm_rows[] = {
        {"power:lambda=2", 0, 0, 12, 2.0, 0.01},        {"logistic", 1, 0, 12, 1.0, 0.01},
        {"pareto:a=3", 1 + 1.0 / 3, 0, 12, 3.0, 0.01},  {"negexp", 0, 0, 12, 1.0, 0.01},
        {"weibull:c=2", 1, 0.5, 12, 2.0, 0.01},         {"gumbel", 1, 0, 12, 1.0, 0.02},
        {"normal", 1, 0.5, 88, std::sqrt(2.0), 0.01},
    };
    CsvTable vm{{"family", "gamma", "delta", "probes", "x_last", "limit_estimate", "expected_limit", "flatness",
                 "condition_met"},
                {}};
    for (const auto& row : vm_rows) {
        const VonMisesProfile p = von_mises_profile(parse_family(row.dist), row.gamma, row.delta, row.probes);
        const double x_last = p.probes.empty() ? std::nan("") : p.probes.back().x;
        vm.rows.push_back({p.family, format_number(row.gamma), format_number(row.delta), std::to_string(row.probes),
                           format_number(x_last), format_number(p.limit_estimate()), format_number(row.expected),
                           format_number(p.flatness), to_string(p.condition_met)});
        check(std::string("von_mises limit ") + row.dist, row.expected, p.limit_estimate(), row.rel_tol * row.expected);
    }
    write_table(dir / "von_mises.csv", vm);

    // Fisher counterexample.
    const DistributionSpec cx = make_family("fisher_counterexample_min");
    const FisherLimitReport lim = fisher_min_limit(cx);
    const FisherReport ladder = fisher_information(cx, Direction::minima, 50);
    const double s = std::exp(-2.0);
    const nlohmann::json fj{{"limit", lim},
                            {"minima_ladder", ladder},
                            {"i_min_theta2sq", number_to_json(lim.i_min)},
                            {"smoothness",
                             {{"F_s", number_to_json(cx.cdf(s))},
                              {"f_s", number_to_json(cx.density(s))},
                              {"f_prime_s", number_to_json(cx.density_slope(s))}}}};
    {
        std::ofstream f(dir / "fisher_counterexample.json", std::ios::binary);
        if (!f) throw ValidationError("out", "cannot write fisher_counterexample.json");
        f << fj.dump(2) << "\n";
    }
    write_table(dir / "fisher_minima_ladder.csv", fisher_csv(ladder));
    check("fisher integral below s", std::log(1.5) - 5.0 / 18.0, lim.integral_below_s, 1e-6);
    check("fisher integral above s", 2.77, lim.integral_above_s, 0.05);
    check("fisher i_min_theta2sq", 2.9, lim.i_min, 0.1);

    CsvTable ct{{"check", "expected", "observed", "tolerance", "pass"}, {}};
    for (const auto& k : checks)
        ct.rows.push_back({k.name, format_number(k.expected), format_number(k.observed), format_number(k.tolerance),
                           k.pass ? "true" : "false"});
    write_table(dir / "checks.csv", ct);
    return checks;
}

}  // namespace pmblue::cli
