#pragma once

#include "pmblue/distribution.hpp"

namespace pmblue {

// Split log-probability coordinate z.  For z <= 0, F(x) = exp(z)/2; for z > 0,
// 1 - F(x) = exp(-z)/2.  Both tails stay resolved down to ~1e-300 and F^k
// concentrates near z = log k instead of piling up at u = 1.
inline constexpr double kScaleLimit = 700.0;

struct ScaleNode {
    double x;
    double cdf;
    double sf;
    double log_cdf;
    double dxdz;  // min(F, 1-F) / f(x); zero where the density vanishes or overflows
};

ScaleNode scale_node(const DistributionSpec& spec, double z);

// z at which F(x) = u.
double scale_of_probability(double u);

}  // namespace pmblue
