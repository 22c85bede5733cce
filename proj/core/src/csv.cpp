#include "pmblue/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "pmblue/error.hpp"

namespace pmblue {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

double parse_number(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ValidationError("csv", "not a number: '" + s + "'");
    return v;
}

std::size_t CsvTable::column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ValidationError("csv", "missing column " + name);
    return static_cast<std::size_t>(it - header.begin());
}

namespace {

void write_row(std::ostream& out, const std::vector<std::string>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (k) out << ',';
        out << row[k];
    }
    out << '\n';
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
        const std::size_t p = line.find(',', start);
        f.push_back(line.substr(start, p == std::string::npos ? std::string::npos : p - start));
        if (p == std::string::npos) return f;
        start = p + 1;
    }
}

long long parse_int(const std::string& s) {
    long long v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ValidationError("csv", "not an integer: '" + s + "'");
    return v;
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }
std::optional<double> opt_from(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_number(s);
}
std::string flag(bool b) { return b ? "true" : "false"; }
bool flag_from(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw ValidationError("csv", "not a boolean: '" + s + "'");
}

// Reads cells by column name from one row.
struct Row {
    const CsvTable& t;
    const std::vector<std::string>& r;
    const std::string& str(const char* name) const { return r.at(t.column(name)); }
    double num(const char* name) const { return parse_number(str(name)); }
    long long integer(const char* name) const { return parse_int(str(name)); }
};

void require_rows(const CsvTable& t) {
    if (t.rows.empty()) throw ValidationError("csv", "table has no rows");
}

}  // namespace

void write_csv(std::ostream& out, const CsvTable& t) {
    write_row(out, t.header);
    for (const auto& r : t.rows) write_row(out, r);
}

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = split(line);
        if (first) {
            t.header = std::move(f);
            first = false;
            continue;
        }
        if (f.size() != t.header.size())
            throw ValidationError("csv", "row has " + std::to_string(f.size()) + " fields, header has " +
                                             std::to_string(t.header.size()));
        t.rows.push_back(std::move(f));
    }
    if (first) throw ValidationError("csv", "empty input");
    return t;
}

CsvTable moments_csv(const PartialMaximaMoments& pm) {
    CsvTable t{{"i", "j", "mu_i", "sigma_ij"}, {}};
    for (int i = 0; i < pm.n; ++i)
        for (int j = i; j < pm.n; ++j)
            t.rows.push_back({std::to_string(i + 1), std::to_string(j + 1), format_number(pm.mu[i]), format_number(pm.sigma(i, j))});
    return t;
}

PartialMaximaMoments moments_from_csv(const CsvTable& t, const std::string& family) {
    PartialMaximaMoments pm;
    pm.family = family;
    long long n = 0;
    for (const auto& r : t.rows) n = std::max(n, Row{t, r}.integer("j"));
    pm.n = static_cast<int>(n);
    pm.mu.assign(n, 0.0);
    pm.sigma = Matrix(n, n);
    for (const auto& r : t.rows) {
        Row row{t, r};
        const auto i = row.integer("i") - 1, j = row.integer("j") - 1;
        if (i < 0 || j < i) throw ValidationError("csv", "moments rows need 1 <= i <= j");
        pm.mu[i] = row.num("mu_i");
        pm.sigma(i, j) = pm.sigma(j, i) = row.num("sigma_ij");
    }
    pm.second_moment = Matrix(n, n);
    for (long long i = 0; i < n; ++i)
        for (long long j = 0; j < n; ++j) pm.second_moment(i, j) = pm.sigma(i, j) + pm.mu[i] * pm.mu[j];
    return pm;
}

CsvTable spacing_moments_csv(const SpacingMoments& sm) {
    CsvTable t{{"k", "l", "m_k", "s_kl", "d_kl"}, {}};
    const int d = sm.n - 1;
    for (int k = 0; k < d; ++k)
        for (int l = k; l < d; ++l)
            t.rows.push_back({std::to_string(k + 1), std::to_string(l + 1), format_number(sm.m[k]),
                              format_number(sm.s_mat(k, l)), format_number(sm.d_mat(k, l))});
    return t;
}

SpacingMoments spacing_moments_from_csv(const CsvTable& t, const std::string& family) {
    SpacingMoments sm;
    sm.family = family;
    long long d = 0;
    for (const auto& r : t.rows) d = std::max(d, Row{t, r}.integer("l"));
    sm.n = static_cast<int>(d + 1);
    sm.m.assign(d, 0.0);
    sm.s_mat = Matrix(d, d);
    sm.d_mat = Matrix(d, d);
    for (const auto& r : t.rows) {
        Row row{t, r};
        const auto k = row.integer("k") - 1, l = row.integer("l") - 1;
        if (k < 0 || l < k) throw ValidationError("csv", "spacing rows need 1 <= k <= l");
        sm.m[k] = row.num("m_k");
        sm.s_mat(k, l) = sm.s_mat(l, k) = row.num("s_kl");
        sm.d_mat(k, l) = sm.d_mat(l, k) = row.num("d_kl");
    }
    return sm;
}

CsvTable estimators_csv(const std::vector<EstimatorSolution>& sols) {
    CsvTable t{{"kind", "basis", "n", "family", "index", "coefficient", "variance", "condition_estimate",
                "variance_bound", "delta", "blie_ratio_a", "ratio_identity_residual"},
               {}};
    for (const auto& s : sols)
        for (std::size_t k = 0; k < s.coefficients.size(); ++k)
            t.rows.push_back({to_string(s.kind), to_string(s.basis), std::to_string(s.n), s.family, std::to_string(k + 1),
                              format_number(s.coefficients[k]), format_number(s.variance),
                              format_number(s.condition_estimate), opt(s.variance_bound), opt(s.delta),
                              opt(s.blie_ratio_a), opt(s.ratio_identity_residual)});
    return t;
}

std::vector<EstimatorSolution> estimators_from_csv(const CsvTable& t) {
    std::vector<EstimatorSolution> out;
    for (const auto& r : t.rows) {
        Row row{t, r};
        if (row.integer("index") == 1) {
            EstimatorSolution s;
            s.kind = estimator_kind_from(row.str("kind"));
            s.basis = basis_from(row.str("basis"));
            s.n = static_cast<int>(row.integer("n"));
            s.family = row.str("family");
            s.variance = row.num("variance");
            s.condition_estimate = row.num("condition_estimate");
            s.variance_bound = opt_from(row.str("variance_bound"));
            s.delta = opt_from(row.str("delta"));
            s.blie_ratio_a = opt_from(row.str("blie_ratio_a"));
            s.ratio_identity_residual = opt_from(row.str("ratio_identity_residual"));
            out.push_back(std::move(s));
        }
        if (out.empty()) throw ValidationError("csv", "coefficient rows must start at index 1");
        out.back().coefficients.push_back(row.num("coefficient"));
    }
    return out;
}

CsvTable ncp_csv(const NcpReport& r) {
    CsvTable t{{"k", "l", "cov_kl", "family", "n", "tolerance", "max_offdiag", "max_i", "max_j", "verdict"}, {}};
    const int d = r.n - 1;
    for (int k = 0; k < d; ++k)
        for (int l = k; l < d; ++l)
            t.rows.push_back({std::to_string(k + 1), std::to_string(l + 1), format_number(r.cov_matrix(k, l)), r.family,
                              std::to_string(r.n), format_number(r.tolerance), format_number(r.max_offdiag),
                              std::to_string(r.max_i), std::to_string(r.max_j), to_string(r.verdict)});
    return t;
}

NcpReport ncp_from_csv(const CsvTable& t) {
    require_rows(t);
    Row first{t, t.rows.front()};
    NcpReport r;
    r.family = first.str("family");
    r.n = static_cast<int>(first.integer("n"));
    r.tolerance = first.num("tolerance");
    r.max_offdiag = first.num("max_offdiag");
    r.max_i = static_cast<int>(first.integer("max_i"));
    r.max_j = static_cast<int>(first.integer("max_j"));
    r.verdict = ncp_verdict_from(first.str("verdict"));
    r.cov_matrix = Matrix(r.n - 1, r.n - 1);
    for (const auto& row : t.rows) {
        Row x{t, row};
        const auto k = x.integer("k") - 1, l = x.integer("l") - 1;
        r.cov_matrix(k, l) = r.cov_matrix(l, k) = x.num("cov_kl");
    }
    return r;
}

// A profile without probes is written as one row with empty probe fields.
CsvTable von_mises_csv(const VonMisesProfile& p) {
    CsvTable t{{"k", "x", "value", "family", "gamma", "delta", "dropped_probes", "liminf_est", "limsup_est", "flatness",
                "limit_found", "limit_estimate", "condition_met"},
               {}};
    auto tail = [&] {
        return std::vector<std::string>{p.family, format_number(p.gamma), format_number(p.delta),
                                        std::to_string(p.dropped_probes), format_number(p.liminf_est),
                                        format_number(p.limsup_est), format_number(p.flatness), flag(p.limit_found),
                                        format_number(p.limit_estimate()), to_string(p.condition_met)};
    };
    auto emit = [&](std::vector<std::string> head) {
        auto rest = tail();
        head.insert(head.end(), rest.begin(), rest.end());
        t.rows.push_back(std::move(head));
    };
    if (p.probes.empty()) emit({"", "", ""});
    for (const auto& q : p.probes) emit({std::to_string(q.k), format_number(q.x), format_number(q.value)});
    return t;
}

VonMisesProfile von_mises_from_csv(const CsvTable& t) {
    require_rows(t);
    Row first{t, t.rows.front()};
    VonMisesProfile p;
    p.family = first.str("family");
    p.gamma = first.num("gamma");
    p.delta = first.num("delta");
    p.dropped_probes = static_cast<int>(first.integer("dropped_probes"));
    p.liminf_est = first.num("liminf_est");
    p.limsup_est = first.num("limsup_est");
    p.flatness = first.num("flatness");
    p.limit_found = flag_from(first.str("limit_found"));
    p.condition_met = von_mises_case_from(first.str("condition_met"));
    for (const auto& r : t.rows) {
        Row x{t, r};
        if (x.str("k").empty()) continue;
        p.probes.push_back({static_cast<int>(x.integer("k")), x.num("x"), x.num("value")});
    }
    return p;
}

CsvTable rate_csv(const RateStudy& st) {
    CsvTable t{{"n", "var_L2", "var_L2_times_log_n", "var_L1", "family", "method"}, {}};
    for (const auto& r : st.rows)
        t.rows.push_back({std::to_string(r.n), format_number(r.var_l2), format_number(r.var_l2_times_log_n), opt(r.var_l1),
                          st.family, to_string(st.method)});
    return t;
}

RateStudy rate_from_csv(const CsvTable& t) {
    require_rows(t);
    RateStudy st;
    Row first{t, t.rows.front()};
    st.family = first.str("family");
    st.method = rate_method_from(first.str("method"));
    for (const auto& r : t.rows) {
        Row x{t, r};
        st.rows.push_back({x.integer("n"), x.num("var_L2"), x.num("var_L2_times_log_n"), opt_from(x.str("var_L1"))});
    }
    return st;
}

CsvTable fisher_csv(const FisherReport& r) {
    CsvTable t{{"n", "term", "information", "family", "direction", "i_min_limit", "cramer_rao_floor", "numeric_slope"}, {}};
    for (std::size_t k = 0; k < r.n_values.size(); ++k)
        t.rows.push_back({std::to_string(r.n_values[k]), format_number(r.terms[k]), format_number(r.information[k]),
                          r.family, to_string(r.direction), opt(r.i_min_limit), opt(r.cramer_rao_floor),
                          flag(r.numeric_slope)});
    return t;
}

FisherReport fisher_from_csv(const CsvTable& t) {
    require_rows(t);
    FisherReport r;
    Row first{t, t.rows.front()};
    r.family = first.str("family");
    r.direction = direction_from(first.str("direction"));
    r.i_min_limit = opt_from(first.str("i_min_limit"));
    r.cramer_rao_floor = opt_from(first.str("cramer_rao_floor"));
    r.numeric_slope = flag_from(first.str("numeric_slope"));
    for (const auto& row : t.rows) {
        Row x{t, row};
        r.n_values.push_back(static_cast<int>(x.integer("n")));
        r.terms.push_back(x.num("term"));
        r.information.push_back(x.num("information"));
    }
    return r;
}

CsvTable consistency_csv(const std::vector<ConsistencyRow>& rows) {
    CsvTable t{{"k", "mean", "second_moment", "ratio", "series_term", "error"}, {}};
    for (const auto& r : rows) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        t.rows.push_back({std::to_string(r.k), format_number(r.mean), format_number(r.second_moment),
                          format_number(r.ratio), format_number(r.series_term), err});
    }
    return t;
}

std::vector<ConsistencyRow> consistency_from_csv(const CsvTable& t) {
    std::vector<ConsistencyRow> out;
    for (const auto& r : t.rows) {
        Row x{t, r};
        out.push_back({static_cast<int>(x.integer("k")), x.num("mean"), x.num("second_moment"), x.num("ratio"),
                       x.num("series_term"), x.str("error")});
    }
    return out;
}

CsvTable monte_carlo_csv(const MonteCarloReport& r) {
    CsvTable t{{"estimator", "true_value", "empirical_mean", "empirical_variance", "empirical_mse", "std_error_of_mean",
                "theoretical_value", "z_score_bias", "variance_ratio", "family", "direction", "n", "theta1", "theta2",
                "replicates", "seed"},
               {}};
    for (const auto& e : r.estimators)
        t.rows.push_back({e.label, format_number(e.true_value), format_number(e.empirical_mean),
                          format_number(e.empirical_variance), format_number(e.empirical_mse),
                          format_number(e.std_error_of_mean), format_number(e.theoretical_value),
                          format_number(e.z_score_bias), format_number(e.variance_ratio), r.family,
                          to_string(r.direction), std::to_string(r.n), format_number(r.theta1),
                          format_number(r.theta2), std::to_string(r.replicates), std::to_string(r.seed)});
    return t;
}

MonteCarloReport monte_carlo_from_csv(const CsvTable& t) {
    require_rows(t);
    MonteCarloReport r;
    Row first{t, t.rows.front()};
    r.family = first.str("family");
    r.direction = direction_from(first.str("direction"));
    r.n = static_cast<int>(first.integer("n"));
    r.theta1 = first.num("theta1");
    r.theta2 = first.num("theta2");
    r.replicates = static_cast<std::uint64_t>(first.integer("replicates"));
    r.seed = std::stoull(first.str("seed"));
    for (const auto& row : t.rows) {
        Row x{t, row};
        EstimatorStats e;
        e.label = x.str("estimator");
        e.true_value = x.num("true_value");
        e.empirical_mean = x.num("empirical_mean");
        e.empirical_variance = x.num("empirical_variance");
        e.empirical_mse = x.num("empirical_mse");
        e.std_error_of_mean = x.num("std_error_of_mean");
        e.theoretical_value = x.num("theoretical_value");
        e.z_score_bias = x.num("z_score_bias");
        e.variance_ratio = x.num("variance_ratio");
        r.estimators.push_back(e);
    }
    return r;
}

CsvTable replicate_dump_csv(const MonteCarloReport& r) {
    CsvTable t;
    t.header.push_back("replicate");
    for (const auto& e : r.estimators) t.header.push_back("estimate_" + e.label);
    for (std::size_t k = 0; k < r.dump.size(); ++k) {
        std::vector<std::string> row{std::to_string(k)};
        for (double v : r.dump[k]) row.push_back(format_number(v));
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace pmblue
