#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmblue/distribution.hpp"
#include "pmblue/moments.hpp"

namespace pmblue {

enum class LogConcavity { dist_log_concave, density_log_concave, density_nonincreasing, none_detected };
enum class NcpVerdict { ncp_pass, ncp_fail };
enum class VonMisesCase { case_i, case_ii, not_met };
enum class RateMethod { closed_form_uniform, dense_solve };
enum class Direction { maxima, minima };

const char* to_string(LogConcavity v);
const char* to_string(NcpVerdict v);
const char* to_string(VonMisesCase v);
const char* to_string(RateMethod v);
const char* to_string(Direction v);
LogConcavity log_concavity_from(const std::string& s);
NcpVerdict ncp_verdict_from(const std::string& s);
VonMisesCase von_mises_case_from(const std::string& s);
RateMethod rate_method_from(const std::string& s);
Direction direction_from(const std::string& s);

// Strongest of the checks that passes on an interior quantile grid.
// Numeric evidence only.
LogConcavity log_concavity_probe(const DistributionSpec& spec, int grid_size = 64);

struct NcpReport {
    std::string family;
    int n = 0;
    double tolerance = 0.0;
    Matrix cov_matrix;  // (n-1) x (n-1) spacing covariances
    double max_offdiag = 0.0;
    int max_i = 0;  // 1-based location of max_offdiag; 0 when n = 2
    int max_j = 0;
    NcpVerdict verdict = NcpVerdict::ncp_pass;
};

NcpReport ncp_check(const DistributionSpec& spec, int n, double tolerance = 1e-8, const MomentOptions& opt = {});

struct VonMisesProbe {
    int k;        // probe depth, 1 - F(x) = 10^{-k}
    double x;
    double value;  // L(x)
};

struct VonMisesProfile {
    std::string family;
    double gamma = 0.0;
    double delta = 0.0;
    std::vector<VonMisesProbe> probes;
    int dropped_probes = 0;
    double liminf_est = 0.0;
    double limsup_est = 0.0;
    double flatness = 0.0;  // limsup / liminf over the last five probes
    bool limit_found = false;
    VonMisesCase condition_met = VonMisesCase::not_met;

    double limit_estimate() const { return probes.empty() ? 0.0 : probes.back().value; }
};

// L(x) = f / ((1-F)^gamma (-log(1-F))^delta) on the ladder 1 - F(x) = 10^{-k}, k = 1..probes.
VonMisesProfile von_mises_profile(const DistributionSpec& spec, double gamma, double delta, int probes = 12);

struct RateRow {
    long long n;
    double var_l2;
    double var_l2_times_log_n;
    std::optional<double> var_l1;  // uniform closed form only
};

struct RateStudy {
    std::string family;
    RateMethod method = RateMethod::dense_solve;
    std::vector<RateRow> rows;
};

inline constexpr long long kDenseRateLimit = 2000;

// Var[L2] along an n ladder.  Non-uniform families must pass an NCP check at
// n = 6 unless skip_ncp_check is set.
RateStudy rate_study(const DistributionSpec& spec, const std::vector<long long>& n_values, bool skip_ncp_check = false);

struct ConsistencyRow {
    int k;
    double mean;           // m_k
    double second_moment;  // E[Z_k^2]
    double ratio;          // E[Z_k^2] / (k m_k^2)
    double series_term;    // m_k^2 / s_k^2
    std::string error;     // non-empty when quadrature failed at this k
};

std::vector<ConsistencyRow> consistency_criterion(const DistributionSpec& spec, const std::vector<int>& k_values,
                                                  const MomentOptions& opt = {});

struct EndpointAtomReport {
    double atom_mass = 0.0;
    bool triviality_flag = false;
};

EndpointAtomReport endpoint_atom_check(const DistributionSpec& spec);

}  // namespace pmblue
