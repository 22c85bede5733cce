#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "pmblue/csv.hpp"
#include "pmblue/error.hpp"
#include "pmblue/fisher.hpp"
#include "pmblue/serialization.hpp"

namespace pmblue::cli {

namespace {

using nlohmann::json;

struct RunConfig {
    std::string dist;
    bool reflect = false;
    int n = 0;
    std::vector<long long> n_ladder;
    double gamma = 0.0;
    double delta = 0.0;
    int probes = 12;
    double theta1 = 0.0;
    double theta2 = 1.0;
    std::uint64_t replicates = 1000;
    std::uint64_t seed = 0;
    std::optional<double> tol;
    std::string out;
    std::string format = "csv";
    std::string direction = "maxima";
    std::vector<std::string> estimators{"L2", "T2", "U2"};
    std::string method = "automatic";
    unsigned workers = 0;
    std::string dump;
    bool spacings = false;
    bool skip_ncp_check = false;
    bool limit = false;
    bool records = false;
};

std::string quote(const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') q += '\\';
        q += c == '\n' ? ' ' : c;
    }
    return q + "\"";
}

void error_line(std::ostream& err, const char* kind, const std::string& param, const std::string& msg) {
    err << "error: kind=" << kind << " param=" << (param.empty() ? "-" : param) << " message=" << quote(msg) << "\n";
}

DistributionSpec family(const RunConfig& c) {
    if (c.dist.empty()) throw ValidationError("dist", "--dist is required");
    DistributionSpec s = parse_family(c.dist);
    return c.reflect ? reflect(s) : s;
}

int require_n(const RunConfig& c, int min) {
    if (c.n < min) throw ValidationError("n", "--n must be >= " + std::to_string(min));
    return c.n;
}

MomentOptions moment_options(const RunConfig& c) {
    MomentOptions o;
    if (c.tol) o.tol = *c.tol;
    if (c.method == "adaptive")
        o.method = MomentMethod::adaptive;
    else if (c.method == "panel")
        o.method = MomentMethod::panel;
    else if (c.method != "automatic")
        throw ValidationError("method", "unknown moment method " + c.method);
    return o;
}

std::ofstream open_out(const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ValidationError("out", "cannot open " + path + " for writing");
    return f;
}

// The artifact goes to --out when given, stdout otherwise.  With --out the
// summary line is printed instead.
void emit(const RunConfig& c, std::ostream& out, const json& j, const CsvTable& t, const std::string& summary) {
    std::ostringstream body;
    if (c.format == "json")
        body << j.dump(2) << "\n";
    else
        write_csv(body, t);
    if (c.out.empty()) {
        out << body.str();
        return;
    }
    auto f = open_out(c.out);
    f << body.str();
    if (!summary.empty()) out << summary << "\n";
}

void run_moments(const RunConfig& c, std::ostream& out) {
    const auto spec = family(c);
    const int n = require_n(c, c.spacings ? 2 : 1);
    const auto opt = moment_options(c);
    if (c.spacings) {
        const SpacingMoments sm = spacing_moments(spec, n, opt);
        emit(c, out, sm, spacing_moments_csv(sm), "family=" + sm.family + " n=" + std::to_string(n));
        return;
    }
    const PartialMaximaMoments pm = pm_moments_table(spec, n, opt);
    emit(c, out, pm, moments_csv(pm), "family=" + pm.family + " n=" + std::to_string(n));
}

void run_blue(const RunConfig& c, std::ostream& out) {
    const auto spec = family(c);
    const int n = require_n(c, 2);
    const auto opt = moment_options(c);
    const PartialMaximaMoments pm = pm_moments_table(spec, n, opt);
    const EstimatorPair blue = solve_blue(pm);
    const EstimatorPair blie = solve_blie(pm);
    const SpacingMoments sm = spacing_moments(spec, n, opt);
    const EstimatorSolution l2s = solve_blue_spacings(sm);
    const EstimatorSolution t2s = solve_blie_spacings(sm);
    const EstimatorSolution u2 = simple_scale_estimator(sm);

    // Full-form L2 against the spacings solve rewritten on X.
    const EstimatorSolution l2x = to_partial_maxima_basis(l2s);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < l2x.coefficients.size(); ++i)
        max_diff = std::max(max_diff, std::abs(l2x.coefficients[i] - blue.scale.coefficients[i]));
    const double var_diff = std::abs(l2s.variance - blue.scale.variance);

    json j{{"family", pm.family},
           {"n", n},
           {"blue", blue},
           {"blie", blie},
           {"L2_spacings", l2s},
           {"T2_spacings", t2s},
           {"U2", u2},
           {"l2_path_agreement",
            {{"max_coefficient_difference", number_to_json(max_diff)}, {"variance_difference", number_to_json(var_diff)}}}};
    emit(c, out, j, estimators_csv({blue.location, blue.scale, blie.location, blie.scale, l2s, t2s, u2}),
         "family=" + pm.family + " n=" + std::to_string(n) + " var_L2=" + format_number(blue.scale.variance) +
             " l2_path_max_diff=" + format_number(max_diff));
}

void run_ncp(const RunConfig& c, std::ostream& out) {
    const auto spec = family(c);
    const int n = require_n(c, 2);
    const NcpReport r = ncp_check(spec, n, c.tol.value_or(1e-8));
    emit(c, out, r, ncp_csv(r),
         std::string("verdict=") + to_string(r.verdict) + " max_offdiag=" + format_number(r.max_offdiag) +
             " i=" + std::to_string(r.max_i) + " j=" + std::to_string(r.max_j));
}

void run_vonmises(const RunConfig& c, std::ostream& out) {
    const auto spec = family(c);
    const VonMisesProfile p = von_mises_profile(spec, c.gamma, c.delta, c.probes);
    emit(c, out, p, von_mises_csv(p),
         "limit_estimate=" + format_number(p.limit_estimate()) + " condition_met=" + to_string(p.condition_met));
}

void run_rate(const RunConfig& c, std::ostream& out) {
    const auto spec = family(c);
    const RateStudy st = rate_study(spec, c.n_ladder, c.skip_ncp_check);
    std::string summary = std::string("method=") + to_string(st.method);
    if (!st.rows.empty()) summary += " last_var_L2_times_log_n=" + format_number(st.rows.back().var_l2_times_log_n);
    emit(c, out, st, rate_csv(st), summary);
}

void run_fisher(const RunConfig& c, std::ostream& out) {
    const auto spec = family(c);
    FisherOptions o;
    if (c.tol) o.tol = *c.tol;
    if (c.limit) {
        const FisherLimitReport r = fisher_min_limit(spec, o);
        CsvTable t{{"split_point", "integral_below_s", "integral_above_s", "i_min", "error_estimate", "cramer_rao_floor",
                    "divergent", "verdict"},
                   {{format_number(r.split_point), format_number(r.integral_below_s), format_number(r.integral_above_s),
                     format_number(r.i_min), format_number(r.error_estimate),
                     r.cramer_rao_floor ? format_number(*r.cramer_rao_floor) : "", r.divergent ? "true" : "false",
                     r.verdict}}};
        emit(c, out, r, t, "i_min=" + format_number(r.i_min) + " verdict=" + quote(r.verdict));
        return;
    }
    const FisherReport r = fisher_information(spec, direction_from(c.direction), require_n(c, 1), o);
    emit(c, out, r, fisher_csv(r), "information=" + format_number(r.information.back()));
}

void run_simulate(const RunConfig& c, std::ostream& out) {
    SimulationConfig s;
    if (c.dist.empty()) throw ValidationError("dist", "--dist is required");
    s.family = c.dist;
    s.reflected = c.reflect;
    s.theta1 = c.theta1;
    s.theta2 = c.theta2;
    s.n = c.n;
    s.replicates = c.replicates;
    s.seed = c.seed;
    s.estimators = c.estimators;
    s.direction = direction_from(c.direction);
    s.workers = c.workers;
    if (c.records) {
        const RecordCountStats r = record_count_statistics(s);
        CsvTable t{{"mean_distinct_values", "std_error", "harmonic_reference"},
                   {{format_number(r.mean_distinct_values), format_number(r.std_error), format_number(r.harmonic_reference)}}};
        emit(c, out, r, t, "mean_distinct_values=" + format_number(r.mean_distinct_values));
        return;
    }
    if (!c.dump.empty()) s.dump_rows = kMaxDumpRows;
    const MonteCarloReport r = run_simulation(s);
    if (!c.dump.empty()) {
        auto f = open_out(c.dump);
        write_csv(f, replicate_dump_csv(r));
    }
    std::string summary;
    for (const auto& e : r.estimators)
        summary += (summary.empty() ? "" : " ") + e.label + ".variance_ratio=" + format_number(e.variance_ratio);
    emit(c, out, r, monte_carlo_csv(r), summary);
}

int run_paper_pack(const RunConfig& c, std::ostream& out) {
    if (c.out.empty()) throw ValidationError("out", "paper-pack needs --out DIR");
    const auto checks = paper_pack(c.out, out);
    bool ok = true;
    for (const auto& k : checks) ok = ok && k.pass;
    out << (ok ? "paper-pack: all checks passed" : "paper-pack: some checks failed") << "\n";
    return ok ? exit_ok : exit_check_failed;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Estimators and diagnostics for partial maxima (record) data", "pmblue"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with the same keys as the long options");
    RunConfig c;

    auto add_dist = [&](CLI::App* s) {
        s->add_option("--dist", c.dist, "Family, e.g. normal or weibull:c=2");
        s->add_flag("--reflect", c.reflect, "Use the distribution of -X");
    };
    auto add_output = [&](CLI::App* s) {
        s->add_option("--out", c.out, "Output path (stdout when omitted)");
        s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* moments = app.add_subcommand("moments", "Partial-maxima means and covariances");
    add_dist(moments);
    moments->add_option("--n", c.n, "Number of partial maxima");
    moments->add_option("--tol", c.tol, "Absolute quadrature tolerance");
    moments->add_option("--method", c.method, "automatic, adaptive or panel");
    moments->add_flag("--spacings", c.spacings, "Emit spacing moments instead");
    add_output(moments);

    auto* blue = app.add_subcommand("blue", "BLUE, BLIE and the spacings forms");
    add_dist(blue);
    blue->add_option("--n", c.n, "Number of partial maxima");
    blue->add_option("--tol", c.tol, "Absolute quadrature tolerance");
    blue->add_option("--method", c.method, "automatic, adaptive or panel");
    add_output(blue);

    auto* ncp = app.add_subcommand("ncp", "Check that spacing covariances are non-positive");
    add_dist(ncp);
    ncp->add_option("--n", c.n, "Number of partial maxima");
    ncp->add_option("--tol", c.tol, "Largest off-diagonal covariance accepted (default 1e-8)");
    add_output(ncp);

    auto* vm = app.add_subcommand("vonmises", "Generalized hazard-rate profile");
    add_dist(vm);
    vm->add_option("--gamma", c.gamma, "Exponent of 1-F");
    vm->add_option("--delta", c.delta, "Exponent of -log(1-F)");
    vm->add_option("--probes", c.probes, "Probe depths 1-F = 10^-k, k = 1..probes");
    add_output(vm);

    auto* rate = app.add_subcommand("rate", "Var[L2] along an n ladder");
    add_dist(rate);
    rate->add_option("--n-ladder", c.n_ladder, "Comma-separated sample sizes")->delimiter(',');
    rate->add_flag("--skip-ncp-check", c.skip_ncp_check, "Study a family even if it fails the NCP check");
    add_output(rate);

    auto* fisher = app.add_subcommand("fisher", "Fisher information about the scale");
    add_dist(fisher);
    fisher->add_option("--n", c.n, "Number of partial maxima (or minima)");
    fisher->add_option("--direction", c.direction, "maxima or minima");
    fisher->add_option("--tol", c.tol, "Absolute quadrature tolerance");
    fisher->add_flag("--limit", c.limit, "Limit of the partial-minima information instead");
    add_output(fisher);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo check of the estimator variances");
    add_dist(sim);
    sim->add_option("--n", c.n, "Number of partial maxima");
    sim->add_option("--theta1", c.theta1, "Location");
    sim->add_option("--theta2", c.theta2, "Scale");
    sim->add_option("--replicates", c.replicates, "Replicate count (>= 100)");
    sim->add_option("--seed", c.seed, "64-bit seed");
    sim->add_option("--estimators", c.estimators, "Comma-separated: L1,L2,T1,T2,U2")->delimiter(',');
    sim->add_option("--direction", c.direction, "maxima or minima");
    sim->add_option("--workers", c.workers, "Worker threads (0 = hardware concurrency)");
    sim->add_option("--dump", c.dump, "Per-replicate CSV, at most 100000 rows");
    sim->add_flag("--records", c.records, "Report the mean number of distinct partial maxima instead");
    add_output(sim);

    auto* pack = app.add_subcommand("paper-pack", "Write the reference tables and checks into a directory");
    pack->add_option("--out", c.out, "Output directory");

    // --config belongs to the top-level app; accept it after the subcommand too.
    std::vector<std::string> ordered;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            ordered.push_back(args[i]);
            ordered.push_back(args[++i]);
        } else if (args[i].rfind("--config=", 0) == 0) {
            ordered.push_back(args[i]);
        } else {
            rest.push_back(args[i]);
        }
    }
    ordered.insert(ordered.end(), rest.begin(), rest.end());
    std::vector<std::string> argv(ordered.rbegin(), ordered.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        error_line(err, "usage", "-", e.what());
        return exit_validation;
    }

    try {
        if (c.format != "csv" && c.format != "json") throw ValidationError("format", "format must be csv or json");
        if (*moments) run_moments(c, out);
        if (*blue) run_blue(c, out);
        if (*ncp) run_ncp(c, out);
        if (*vm) run_vonmises(c, out);
        if (*rate) run_rate(c, out);
        if (*fisher) run_fisher(c, out);
        if (*sim) run_simulate(c, out);
        if (*pack) return run_paper_pack(c, out);
    } catch (const ValidationError& e) {
        error_line(err, "validation", e.param(), e.what());
        return exit_validation;
    } catch (const NumericalError& e) {
        error_line(err, "numerical", "-", e.what());
        return exit_numerical;
    } catch (const std::exception& e) {
        error_line(err, "runtime", "-", e.what());
        return exit_numerical;
    }
    return exit_ok;
}

}  // namespace pmblue::cli
