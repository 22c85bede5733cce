#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmblue/diagnostics.hpp"
#include "pmblue/distribution.hpp"

namespace pmblue {

struct FisherOptions {
    double tol = 1e-10;
    std::size_t max_evaluations = 200000;
};

// Information about theta2 in the first n partial maxima (or minima), in
// units of 1/theta2^2.  information[k-1] is the sum of the first k terms.
struct FisherReport {
    std::string family;
    Direction direction = Direction::maxima;
    std::vector<int> n_values;
    std::vector<double> terms;
    std::vector<double> information;
    std::optional<double> i_min_limit;
    std::optional<double> cramer_rao_floor;
    bool numeric_slope = false;
};

FisherReport fisher_information(const DistributionSpec& spec, Direction direction, int n, const FisherOptions& opt = {});

struct FisherLimitReport {
    std::string family;
    double split_point = 0.0;
    double integral_below_s = 0.0;
    double integral_above_s = 0.0;
    double i_min = 0.0;  // +inf when divergent
    double error_estimate = 0.0;
    std::optional<double> cramer_rao_floor;
    bool divergent = false;
    std::vector<double> window_values;  // partial integrals used for divergence detection
    std::string verdict;
};

// Limit of the partial-minima information for support (0, inf):
// integral of mu (1 + x f'/f - x mu)^2 + x^2 mu^2 (lambda + mu), where
// mu = f/F and lambda = f/(1-F).  Split at the first breakpoint, or at the
// median when the family has none.
FisherLimitReport fisher_min_limit(const DistributionSpec& spec, const FisherOptions& opt = {});

}  // namespace pmblue
