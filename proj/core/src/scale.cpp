#include "pmblue/scale.hpp"

#include <cmath>
#include <numbers>

namespace pmblue {

ScaleNode scale_node(const DistributionSpec& spec, double z) {
    ScaleNode n{};
    if (z <= 0) {
        n.cdf = 0.5 * std::exp(z);
        n.sf = 1.0 - n.cdf;
        n.log_cdf = z - std::numbers::ln2;
        n.x = spec.quantile(n.cdf);
    } else {
        n.sf = 0.5 * std::exp(-z);
        n.cdf = 1.0 - n.sf;
        n.log_cdf = std::log1p(-n.sf);
        n.x = spec.isf(n.sf);
    }
    const double f = std::isfinite(n.x) ? spec.density(n.x) : 0.0;
    const double w = std::min(n.cdf, n.sf) / f;
    n.dxdz = (f > 0 && std::isfinite(w)) ? w : 0.0;
    return n;
}

double scale_of_probability(double u) {
    return u <= 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
}

}  // namespace pmblue
