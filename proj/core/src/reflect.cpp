#include <algorithm>
#include <cmath>

#include "pmblue/distribution.hpp"

namespace pmblue {

DistributionSpec reflect(const DistributionSpec& spec) {
    const DistributionParts& o = spec.parts();
    DistributionParts p;
    const std::string prefix = "reflect(";
    if (o.name.rfind(prefix, 0) == 0 && o.name.back() == ')')
        p.name = o.name.substr(prefix.size(), o.name.size() - prefix.size() - 1);
    else
        p.name = prefix + o.name + ")";
    p.shape_params = o.shape_params;
    p.lower = -o.upper;
    p.upper = -o.lower;
    p.atom_at_lower = o.atom_at_upper;
    p.atom_at_upper = o.atom_at_lower;

    auto cdf = o.cdf, cdf_left = o.cdf_left, sf = o.sf;
    if (spec.has_atoms()) {
        p.cdf = [cdf_left](double x) { return 1.0 - cdf_left(-x); };
        p.cdf_left = [cdf](double x) { return 1.0 - cdf(-x); };
        p.sf = [cdf_left](double x) { return cdf_left(-x); };
    } else {
        p.cdf = [sf](double x) { return sf(-x); };
        p.sf = [cdf](double x) { return cdf(-x); };
    }
    if (o.density) {
        auto f = o.density;
        p.density = [f](double x) { return f(-x); };
    }
    if (o.density_slope) {
        auto fp = o.density_slope;
        p.density_slope = [fp](double x) { return -fp(-x); };
        p.numeric_slope = o.numeric_slope;
    }
    auto q = o.quantile, isf = o.isf;
    p.quantile = [isf](double u) { return -isf(u); };
    p.isf = [q](double s) { return -q(s); };
    for (double b : o.breakpoints) p.breakpoints.push_back(-b);
    std::sort(p.breakpoints.begin(), p.breakpoints.end());
    if (o.tail_point && !spec.has_atoms()) {
        auto tp = o.tail_point;
        p.tail_point = [tp](double t) {
            const TailPoint a = tp(t);
            return TailPoint{a.sf, a.cdf, -a.x_density, -a.x2_density_slope};
        };
    }
    return DistributionSpec(std::move(p));
}

}  // namespace pmblue
