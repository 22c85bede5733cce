#include "pmblue/serialization.hpp"

#include <cmath>
#include <limits>

#include "pmblue/error.hpp"

namespace pmblue {

using nlohmann::json;

json number_to_json(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
    return v;
}

double number_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
        if (s == "Infinity") return std::numeric_limits<double>::infinity();
        if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
    }
    throw ValidationError("json", "expected a number, got " + j.dump());
}

namespace {

json numbers(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number_to_json(x));
    return a;
}

std::vector<double> numbers_from(const json& j) {
    std::vector<double> v;
    for (const auto& x : j) v.push_back(number_from_json(x));
    return v;
}

json optional_number(const std::optional<double>& v) { return v ? number_to_json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return number_from_json(j.at(key));
}

double num(const json& j, const char* key) { return number_from_json(j.at(key)); }

}  // namespace

void to_json(json& j, const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i)
        rows.push_back(numbers(std::vector<double>(m.data.begin() + i * m.cols, m.data.begin() + (i + 1) * m.cols)));
    j = rows;
}

void from_json(const json& j, Matrix& m) {
    const std::size_t r = j.size();
    const std::size_t c = r ? j.at(0).size() : 0;
    m = Matrix(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (j.at(i).size() != c) throw ValidationError("json", "ragged matrix");
        for (std::size_t k = 0; k < c; ++k) m(i, k) = number_from_json(j.at(i).at(k));
    }
}

void to_json(json& j, const PartialMaximaMoments& v) {
    j = json{{"n", v.n}, {"family", v.family}, {"mu", numbers(v.mu)}, {"sigma", v.sigma}, {"second_moment", v.second_moment}};
}

void from_json(const json& j, PartialMaximaMoments& v) {
    v.n = j.at("n").get<int>();
    v.family = j.at("family").get<std::string>();
    v.mu = numbers_from(j.at("mu"));
    j.at("sigma").get_to(v.sigma);
    j.at("second_moment").get_to(v.second_moment);
}

void to_json(json& j, const SpacingMoments& v) {
    j = json{{"n", v.n}, {"family", v.family}, {"m", numbers(v.m)}, {"S", v.s_mat}, {"D", v.d_mat}};
}

void from_json(const json& j, SpacingMoments& v) {
    v.n = j.at("n").get<int>();
    v.family = j.at("family").get<std::string>();
    v.m = numbers_from(j.at("m"));
    j.at("S").get_to(v.s_mat);
    j.at("D").get_to(v.d_mat);
}

void to_json(json& j, const EstimatorSolution& v) {
    j = json{{"kind", to_string(v.kind)},
             {"basis", to_string(v.basis)},
             {"n", v.n},
             {"family", v.family},
             {"coefficients", numbers(v.coefficients)},
             {v.is_blie() ? "mse" : "variance", number_to_json(v.variance)},
             {"condition_estimate", number_to_json(v.condition_estimate)},
             {"ill_conditioned", v.ill_conditioned()},
             {"variance_bound", optional_number(v.variance_bound)},
             {"delta", optional_number(v.delta)},
             {"blie_ratio_a", optional_number(v.blie_ratio_a)},
             {"ratio_identity_residual", optional_number(v.ratio_identity_residual)}};
}

void from_json(const json& j, EstimatorSolution& v) {
    v.kind = estimator_kind_from(j.at("kind").get<std::string>());
    v.basis = basis_from(j.at("basis").get<std::string>());
    v.n = j.at("n").get<int>();
    v.family = j.at("family").get<std::string>();
    v.coefficients = numbers_from(j.at("coefficients"));
    v.variance = num(j, v.is_blie() ? "mse" : "variance");
    v.condition_estimate = num(j, "condition_estimate");
    v.variance_bound = optional_from(j, "variance_bound");
    v.delta = optional_from(j, "delta");
    v.blie_ratio_a = optional_from(j, "blie_ratio_a");
    v.ratio_identity_residual = optional_from(j, "ratio_identity_residual");
}

void to_json(json& j, const EstimatorPair& v) { j = json{{"location", v.location}, {"scale", v.scale}}; }

void from_json(const json& j, EstimatorPair& v) {
    j.at("location").get_to(v.location);
    j.at("scale").get_to(v.scale);
}

void to_json(json& j, const NcpReport& v) {
    j = json{{"family", v.family},
             {"n", v.n},
             {"tolerance", number_to_json(v.tolerance)},
             {"cov_matrix", v.cov_matrix},
             {"max_offdiag", number_to_json(v.max_offdiag)},
             {"max_i", v.max_i},
             {"max_j", v.max_j},
             {"verdict", to_string(v.verdict)}};
}

void from_json(const json& j, NcpReport& v) {
    v.family = j.at("family").get<std::string>();
    v.n = j.at("n").get<int>();
    v.tolerance = num(j, "tolerance");
    j.at("cov_matrix").get_to(v.cov_matrix);
    v.max_offdiag = num(j, "max_offdiag");
    v.max_i = j.at("max_i").get<int>();
    v.max_j = j.at("max_j").get<int>();
    v.verdict = ncp_verdict_from(j.at("verdict").get<std::string>());
}

void to_json(json& j, const VonMisesProfile& v) {
    json probes = json::array();
    for (const auto& p : v.probes) probes.push_back({{"k", p.k}, {"x", number_to_json(p.x)}, {"value", number_to_json(p.value)}});
    j = json{{"family", v.family},
             {"gamma", number_to_json(v.gamma)},
             {"delta", number_to_json(v.delta)},
             {"probes", probes},
             {"dropped_probes", v.dropped_probes},
             {"liminf_est", number_to_json(v.liminf_est)},
             {"limsup_est", number_to_json(v.limsup_est)},
             {"flatness", number_to_json(v.flatness)},
             {"limit_found", v.limit_found},
             {"limit_estimate", number_to_json(v.limit_estimate())},
             {"condition_met", to_string(v.condition_met)}};
}

void from_json(const json& j, VonMisesProfile& v) {
    v.family = j.at("family").get<std::string>();
    v.gamma = num(j, "gamma");
    v.delta = num(j, "delta");
    v.probes.clear();
    for (const auto& p : j.at("probes")) v.probes.push_back({p.at("k").get<int>(), num(p, "x"), num(p, "value")});
    v.dropped_probes = j.at("dropped_probes").get<int>();
    v.liminf_est = num(j, "liminf_est");
    v.limsup_est = num(j, "limsup_est");
    v.flatness = num(j, "flatness");
    v.limit_found = j.at("limit_found").get<bool>();
    v.condition_met = von_mises_case_from(j.at("condition_met").get<std::string>());
}

void to_json(json& j, const RateStudy& v) {
    json rows = json::array();
    for (const auto& r : v.rows)
        rows.push_back({{"n", r.n},
                        {"var_L2", number_to_json(r.var_l2)},
                        {"var_L2_times_log_n", number_to_json(r.var_l2_times_log_n)},
                        {"var_L1", optional_number(r.var_l1)}});
    j = json{{"family", v.family}, {"method", to_string(v.method)}, {"rows", rows}};
}

void from_json(const json& j, RateStudy& v) {
    v.family = j.at("family").get<std::string>();
    v.method = rate_method_from(j.at("method").get<std::string>());
    v.rows.clear();
    for (const auto& r : j.at("rows"))
        v.rows.push_back({r.at("n").get<long long>(), num(r, "var_L2"), num(r, "var_L2_times_log_n"), optional_from(r, "var_L1")});
}

void to_json(json& j, const ConsistencyRow& v) {
    j = json{{"k", v.k},
             {"mean", number_to_json(v.mean)},
             {"second_moment", number_to_json(v.second_moment)},
             {"ratio", number_to_json(v.ratio)},
             {"series_term", number_to_json(v.series_term)},
             {"error", v.error}};
}

void from_json(const json& j, ConsistencyRow& v) {
    v.k = j.at("k").get<int>();
    v.mean = num(j, "mean");
    v.second_moment = num(j, "second_moment");
    v.ratio = num(j, "ratio");
    v.series_term = num(j, "series_term");
    v.error = j.at("error").get<std::string>();
}

void to_json(json& j, const EndpointAtomReport& v) {
    j = json{{"atom_mass", number_to_json(v.atom_mass)}, {"triviality_flag", v.triviality_flag}};
}

void from_json(const json& j, EndpointAtomReport& v) {
    v.atom_mass = num(j, "atom_mass");
    v.triviality_flag = j.at("triviality_flag").get<bool>();
}

void to_json(json& j, const FisherReport& v) {
    j = json{{"family", v.family},
             {"direction", to_string(v.direction)},
             {"n_values", v.n_values},
             {"terms", numbers(v.terms)},
             {"information", numbers(v.information)},
             {"i_min_limit", optional_number(v.i_min_limit)},
             {"cramer_rao_floor", optional_number(v.cramer_rao_floor)},
             {"numeric_slope", v.numeric_slope}};
}

void from_json(const json& j, FisherReport& v) {
    v.family = j.at("family").get<std::string>();
    v.direction = direction_from(j.at("direction").get<std::string>());
    v.n_values = j.at("n_values").get<std::vector<int>>();
    v.terms = numbers_from(j.at("terms"));
    v.information = numbers_from(j.at("information"));
    v.i_min_limit = optional_from(j, "i_min_limit");
    v.cramer_rao_floor = optional_from(j, "cramer_rao_floor");
    v.numeric_slope = j.at("numeric_slope").get<bool>();
}

void to_json(json& j, const FisherLimitReport& v) {
    j = json{{"family", v.family},
             {"split_point", number_to_json(v.split_point)},
             {"integral_below_s", number_to_json(v.integral_below_s)},
             {"integral_above_s", number_to_json(v.integral_above_s)},
             {"i_min", number_to_json(v.i_min)},
             {"error_estimate", number_to_json(v.error_estimate)},
             {"cramer_rao_floor", optional_number(v.cramer_rao_floor)},
             {"divergent", v.divergent},
             {"window_values", numbers(v.window_values)},
             {"verdict", v.verdict}};
}

void from_json(const json& j, FisherLimitReport& v) {
    v.family = j.at("family").get<std::string>();
    v.split_point = num(j, "split_point");
    v.integral_below_s = num(j, "integral_below_s");
    v.integral_above_s = num(j, "integral_above_s");
    v.i_min = num(j, "i_min");
    v.error_estimate = num(j, "error_estimate");
    v.cramer_rao_floor = optional_from(j, "cramer_rao_floor");
    v.divergent = j.at("divergent").get<bool>();
    v.window_values = numbers_from(j.at("window_values"));
    v.verdict = j.at("verdict").get<std::string>();
}

void to_json(json& j, const EstimatorStats& v) {
    j = json{{"label", v.label},
             {"true_value", number_to_json(v.true_value)},
             {"empirical_mean", number_to_json(v.empirical_mean)},
             {"empirical_variance", number_to_json(v.empirical_variance)},
             {"empirical_mse", number_to_json(v.empirical_mse)},
             {"std_error_of_mean", number_to_json(v.std_error_of_mean)},
             {"theoretical_value", number_to_json(v.theoretical_value)},
             {"z_score_bias", number_to_json(v.z_score_bias)},
             {"variance_ratio", number_to_json(v.variance_ratio)}};
}

void from_json(const json& j, EstimatorStats& v) {
    v.label = j.at("label").get<std::string>();
    v.true_value = num(j, "true_value");
    v.empirical_mean = num(j, "empirical_mean");
    v.empirical_variance = num(j, "empirical_variance");
    v.empirical_mse = num(j, "empirical_mse");
    v.std_error_of_mean = num(j, "std_error_of_mean");
    v.theoretical_value = num(j, "theoretical_value");
    v.z_score_bias = num(j, "z_score_bias");
    v.variance_ratio = num(j, "variance_ratio");
}

// The per-replicate dump goes to CSV, not JSON.
void to_json(json& j, const MonteCarloReport& v) {
    j = json{{"family", v.family},
             {"direction", to_string(v.direction)},
             {"n", v.n},
             {"theta1", number_to_json(v.theta1)},
             {"theta2", number_to_json(v.theta2)},
             {"replicates", v.replicates},
             {"seed", v.seed},
             {"estimators", v.estimators}};
}

void from_json(const json& j, MonteCarloReport& v) {
    v.family = j.at("family").get<std::string>();
    v.direction = direction_from(j.at("direction").get<std::string>());
    v.n = j.at("n").get<int>();
    v.theta1 = num(j, "theta1");
    v.theta2 = num(j, "theta2");
    v.replicates = j.at("replicates").get<std::uint64_t>();
    v.seed = j.at("seed").get<std::uint64_t>();
    j.at("estimators").get_to(v.estimators);
    v.dump.clear();
}

void to_json(json& j, const RecordCountStats& v) {
    j = json{{"mean_distinct_values", number_to_json(v.mean_distinct_values)},
             {"std_error", number_to_json(v.std_error)},
             {"harmonic_reference", number_to_json(v.harmonic_reference)}};
}

void from_json(const json& j, RecordCountStats& v) {
    v.mean_distinct_values = num(j, "mean_distinct_values");
    v.std_error = num(j, "std_error");
    v.harmonic_reference = num(j, "harmonic_reference");
}

}  // namespace pmblue
