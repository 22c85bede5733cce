#include "pmblue/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pmblue/error.hpp"
#include "pmblue/estimators.hpp"
#include "pmblue/panel_grid.hpp"
#include "pmblue/uniform.hpp"

namespace pmblue {

const char* to_string(LogConcavity v) {
    switch (v) {
        case LogConcavity::dist_log_concave: return "dist_log_concave";
        case LogConcavity::density_log_concave: return "density_log_concave";
        case LogConcavity::density_nonincreasing: return "density_nonincreasing";
        case LogConcavity::none_detected: return "none_detected";
    }
    return "";
}

const char* to_string(NcpVerdict v) { return v == NcpVerdict::ncp_pass ? "ncp_pass" : "ncp_fail"; }

const char* to_string(VonMisesCase v) {
    switch (v) {
        case VonMisesCase::case_i: return "case_i";
        case VonMisesCase::case_ii: return "case_ii";
        case VonMisesCase::not_met: return "not_met";
    }
    return "";
}

const char* to_string(RateMethod v) { return v == RateMethod::closed_form_uniform ? "closed_form_uniform" : "dense_solve"; }
const char* to_string(Direction v) { return v == Direction::maxima ? "maxima" : "minima"; }

namespace {

template <class E, std::size_t N>
E parse_enum(const std::string& s, const E (&all)[N], const char* what) {
    for (E e : all)
        if (s == to_string(e)) return e;
    throw ValidationError(what, std::string("unknown ") + what + " '" + s + "'");
}

}  // namespace

LogConcavity log_concavity_from(const std::string& s) {
    static const LogConcavity all[] = {LogConcavity::dist_log_concave, LogConcavity::density_log_concave,
                                       LogConcavity::density_nonincreasing, LogConcavity::none_detected};
    return parse_enum(s, all, "verdict");
}
NcpVerdict ncp_verdict_from(const std::string& s) {
    static const NcpVerdict all[] = {NcpVerdict::ncp_pass, NcpVerdict::ncp_fail};
    return parse_enum(s, all, "verdict");
}
VonMisesCase von_mises_case_from(const std::string& s) {
    static const VonMisesCase all[] = {VonMisesCase::case_i, VonMisesCase::case_ii, VonMisesCase::not_met};
    return parse_enum(s, all, "condition_met");
}
RateMethod rate_method_from(const std::string& s) {
    static const RateMethod all[] = {RateMethod::closed_form_uniform, RateMethod::dense_solve};
    return parse_enum(s, all, "method");
}
Direction direction_from(const std::string& s) {
    static const Direction all[] = {Direction::maxima, Direction::minima};
    return parse_enum(s, all, "direction");
}

namespace {

// Slopes of consecutive chords are non-increasing.
bool concave_on(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 3) return false;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        const double s = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
        if (!std::isfinite(s)) return false;
        if (std::isfinite(prev) && s > prev + 1e-9 * (std::abs(prev) + std::abs(s)) + 1e-12) return false;
        prev = s;
    }
    return true;
}

}  // namespace

LogConcavity log_concavity_probe(const DistributionSpec& spec, int grid_size) {
    if (grid_size < 8) throw ValidationError("grid_size", "log-concavity grid needs at least 8 points");
    std::vector<double> xs;
    for (int k = 1; k <= grid_size; ++k) {
        const double u = static_cast<double>(k) / (grid_size + 1);
        const double x = spec.quantile(u);
        const double F = spec.cdf(x);
        if (!(F > 0 && F < 1) || !std::isfinite(x)) continue;
        if (!xs.empty() && !(x > xs.back())) continue;
        xs.push_back(x);
    }
    std::vector<double> logF, f, logf;
    for (double x : xs) logF.push_back(std::log(spec.cdf(x)));
    if (spec.has_density()) {
        bool positive = true;
        for (double x : xs) {
            const double v = spec.density(x);
            positive = positive && v > 0;
            f.push_back(v);
            logf.push_back(std::log(v));
        }
        if (positive && concave_on(xs, logf)) return LogConcavity::density_log_concave;
        bool nonincreasing = xs.size() >= 3;
        for (std::size_t k = 0; k + 1 < f.size(); ++k)
            nonincreasing = nonincreasing && f[k + 1] <= f[k] * (1 + 1e-12);
        if (nonincreasing) return LogConcavity::density_nonincreasing;
    }
    if (concave_on(xs, logF)) return LogConcavity::dist_log_concave;
    return LogConcavity::none_detected;
}

NcpReport ncp_check(const DistributionSpec& spec, int n, double tolerance, const MomentOptions& opt) {
    if (n < 2) throw ValidationError("n", "NCP check needs n >= 2");
    if (!(tolerance >= 0)) throw ValidationError("tol", "tolerance must be non-negative");
    const SpacingMoments sm = spacing_moments_from(pm_moments_table(spec, n, opt));
    NcpReport r;
    r.family = spec.identity();
    r.n = n;
    r.tolerance = tolerance;
    r.cov_matrix = sm.s_mat;
    const int d = n - 1;
    bool any = false;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (!any || sm.s_mat(i, j) > r.max_offdiag) {
                any = true;
                r.max_offdiag = sm.s_mat(i, j);
                r.max_i = i + 1;
                r.max_j = j + 1;
            }
    r.verdict = r.max_offdiag <= tolerance ? NcpVerdict::ncp_pass : NcpVerdict::ncp_fail;
    return r;
}

VonMisesProfile von_mises_profile(const DistributionSpec& spec, double gamma, double delta, int probes) {
    if (!spec.has_density()) throw ValidationError("dist", "Von Mises profile needs a density");
    if (probes < 1 || probes > 300) throw ValidationError("probes", "probe count must be in [1, 300]");
    VonMisesProfile p;
    p.family = spec.identity();
    p.gamma = gamma;
    p.delta = delta;
    double last_x = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= probes; ++k) {
        const double q = std::pow(10.0, -k);
        const double x = spec.isf(q);
        if (!std::isfinite(x) || !(x > last_x)) {
            ++p.dropped_probes;
            continue;
        }
        const double f = spec.density(x);
        const double s = spec.sf(x);
        if (!(f > 0) || !(s > 0) || !(s < 1) || !std::isfinite(f)) {
            ++p.dropped_probes;
            continue;
        }
        const double v = f / (std::pow(s, gamma) * std::pow(-std::log(s), delta));
        if (!std::isfinite(v)) {
            ++p.dropped_probes;
            continue;
        }
        last_x = x;
        p.probes.push_back({k, x, v});
    }
    if (p.probes.empty()) return p;
    const std::size_t from = p.probes.size() > 5 ? p.probes.size() - 5 : 0;
    p.liminf_est = p.limsup_est = p.probes[from].value;
    for (std::size_t i = from; i < p.probes.size(); ++i) {
        p.liminf_est = std::min(p.liminf_est, p.probes[i].value);
        p.limsup_est = std::max(p.limsup_est, p.probes[i].value);
    }
    p.flatness = p.liminf_est > 0 ? p.limsup_est / p.liminf_est : std::numeric_limits<double>::infinity();
    p.limit_found = p.liminf_est > 0 && std::isfinite(p.limsup_est) && p.flatness <= 1.1;
    if (p.limit_found) {
        if (delta == 0.0 && gamma < 1.5)
            p.condition_met = VonMisesCase::case_i;
        else if (delta > 0.0 && gamma > 0.5 && gamma <= 1.0)
            p.condition_met = VonMisesCase::case_ii;
    }
    return p;
}

namespace {

bool is_uniform(const DistributionSpec& spec) {
    const std::string id = spec.identity();
    return id == "uniform" || id == "power:lambda=1";
}

}  // namespace

RateStudy rate_study(const DistributionSpec& spec, const std::vector<long long>& n_values, bool skip_ncp_check) {
    if (n_values.empty()) throw ValidationError("n-ladder", "rate study needs at least one n");
    for (long long n : n_values)
        if (n < 2) throw ValidationError("n-ladder", "every n must be >= 2");
    RateStudy st;
    st.family = spec.identity();
    if (is_uniform(spec)) {
        st.method = RateMethod::closed_form_uniform;
        for (long long n : n_values) {
            if (n > 100000000) throw ValidationError("n-ladder", "closed-form ladder capped at 1e8");
            const UniformSums s = uniform_sums(static_cast<int>(n));
            const double v2 = s.var_l2();
            st.rows.push_back({n, v2, v2 * std::log(static_cast<double>(n)), s.var_l1()});
        }
        return st;
    }
    st.method = RateMethod::dense_solve;
    const long long nmax = *std::max_element(n_values.begin(), n_values.end());
    if (nmax > kDenseRateLimit)
        throw ValidationError("n-ladder", "dense path limited to n <= " + std::to_string(kDenseRateLimit));
    if (!skip_ncp_check) {
        const NcpReport r = ncp_check(spec, static_cast<int>(std::min<long long>(6, std::max<long long>(nmax, 3))));
        if (r.verdict != NcpVerdict::ncp_pass)
            throw ValidationError("dist", spec.identity() + " failed the NCP check; pass the override to study it anyway");
    }
    const int N = static_cast<int>(std::max<long long>(nmax, 2));
    const SpacingMoments all = panel_spacing_moments(spec, N);
    for (long long n : n_values) {
        const int d = static_cast<int>(n) - 1;
        SpacingMoments sm;
        sm.n = static_cast<int>(n);
        sm.family = all.family;
        sm.m.assign(all.m.begin(), all.m.begin() + d);
        sm.s_mat = Matrix(d, d);
        sm.d_mat = Matrix(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                sm.s_mat(i, j) = all.s_mat(i, j);
                sm.d_mat(i, j) = all.d_mat(i, j);
            }
        const double v2 = solve_blue_spacings(sm).variance;
        st.rows.push_back({n, v2, v2 * std::log(static_cast<double>(n)), std::nullopt});
    }
    return st;
}

std::vector<ConsistencyRow> consistency_criterion(const DistributionSpec& spec, const std::vector<int>& k_values,
                                                  const MomentOptions& opt) {
    std::vector<ConsistencyRow> rows;
    for (int k : k_values) {
        if (k < 1) throw ValidationError("k", "k must be >= 1");
        ConsistencyRow r{k, 0, 0, 0, 0, {}};
        try {
            r.mean = spacing_mean(spec, k, opt);
            r.second_moment = spacing_second_moment(spec, k, opt);
            r.ratio = r.second_moment / (k * r.mean * r.mean);
            r.series_term = r.mean * r.mean / (r.second_moment - r.mean * r.mean);
        } catch (const NumericalError& e) {
            r.error = e.what();
        }
        rows.push_back(r);
    }
    return rows;
}

EndpointAtomReport endpoint_atom_check(const DistributionSpec& spec) {
    EndpointAtomReport r;
    const double w = spec.upper();
    if (std::isfinite(w)) r.atom_mass = std::max(0.0, spec.cdf(w) - spec.cdf_left(w));
    r.triviality_flag = r.atom_mass > 0.0;
    return r;
}

}  // namespace pmblue
