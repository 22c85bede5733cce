#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmblue/diagnostics.hpp"
#include "pmblue/distribution.hpp"
#include "pmblue/estimators.hpp"

namespace pmblue {

// Philox4x32-10 (Salmon et al., SC'11).  Stateless: the output is a pure
// function of counter and key.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

// The k-th uniform draw of a replicate, mapped through the quantile (or the
// inverse survival function for the upper half) of spec.  Draw k of replicate
// r depends only on (seed, r, k).
class DrawStream {
public:
    DrawStream(std::uint64_t seed, std::uint64_t replicate);
    // 53 random bits: the top bit picks the half, the rest give p in (0, 1/2)
    // with spacing 2^-53.
    std::uint64_t bits(std::uint64_t k) const;
    double sample(const DistributionSpec& spec, std::uint64_t k) const;

private:
    PhiloxKey key_;
    std::uint32_t rep_lo_, rep_hi_;
};

// Single-pass mean and sum of squared deviations; merge() is Chan's update.
struct Accumulator {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    // Sum of (x - target)^2 with a fixed target, for MSE.
    double sq_error = 0.0;

    void add(double x, double target);
    void merge(const Accumulator& o);
    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
};

// What an estimator estimates: theta1 or theta2.
enum class Target { location, scale };

struct PreparedEstimator {
    std::string label;  // L1, L2, T1, T2 or U2
    Target target = Target::scale;
    EstimatorSolution solution;
};

struct SimulationConfig {
    std::string family = "uniform";
    bool reflected = false;
    double theta1 = 0.0;
    double theta2 = 1.0;
    int n = 2;
    std::uint64_t replicates = 1000;
    std::uint64_t seed = 0;
    std::vector<std::string> estimators{"L2", "T2", "U2"};
    Direction direction = Direction::maxima;
    // 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;
    // Rows kept for the per-replicate dump; capped at kMaxDumpRows.
    std::uint64_t dump_rows = 0;
};

inline constexpr std::uint64_t kMaxDumpRows = 100000;
inline constexpr std::uint64_t kReplicateChunk = 1024;

struct EstimatorStats {
    std::string label;
    double true_value = 0.0;
    double empirical_mean = 0.0;
    double empirical_variance = 0.0;
    double empirical_mse = 0.0;
    double std_error_of_mean = 0.0;
    // Var (BLUE, U2) or MSE (BLIE) times theta2^2.
    double theoretical_value = 0.0;
    double z_score_bias = 0.0;
    // empirical variance over theoretical; empirical MSE for BLIEs.
    double variance_ratio = 0.0;
};

struct MonteCarloReport {
    std::string family;
    Direction direction = Direction::maxima;
    int n = 0;
    double theta1 = 0.0;
    double theta2 = 1.0;
    std::uint64_t replicates = 0;
    std::uint64_t seed = 0;
    std::vector<EstimatorStats> estimators;
    // dump[r][e] is the estimate of estimator e in replicate r.
    std::vector<std::vector<double>> dump;
};

DistributionSpec simulation_family(const SimulationConfig& cfg);

// Solutions for the distribution whose partial maxima are observed: spec
// itself for maxima, its reflection for minima.  L2 and T2 use the spacings form.
std::vector<PreparedEstimator> prepare_estimators(const DistributionSpec& spec, int n,
                                                  const std::vector<std::string>& labels, Direction direction,
                                                  const MomentOptions& opt = {});

// Replicate r as a non-decreasing (maxima) or non-increasing (minima) vector.
std::vector<double> sample_partial_maxima(const SimulationConfig& cfg, const DistributionSpec& spec,
                                          std::uint64_t replicate);

MonteCarloReport run_simulation(const SimulationConfig& cfg, const std::vector<PreparedEstimator>& estimators);
MonteCarloReport run_simulation(const SimulationConfig& cfg);

struct RecordCountStats {
    double mean_distinct_values = 0.0;
    double std_error = 0.0;
    // Expected count sum_{k<=n} 1/k for a continuous F.
    double harmonic_reference = 0.0;
};

RecordCountStats record_count_statistics(const SimulationConfig& cfg);

}  // namespace pmblue
