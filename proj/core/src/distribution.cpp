#include "pmblue/distribution.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "pmblue/error.hpp"

namespace pmblue {

namespace {

std::string g17(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

}  // namespace

DistributionSpec::DistributionSpec(DistributionParts parts) : p_(std::move(parts)) {
    if (p_.name.empty()) throw ValidationError("name", "distribution name must be non-empty");
    if (!p_.cdf) throw ValidationError("cdf", "distribution " + p_.name + " has no cdf");
    if (!p_.quantile) throw ValidationError("quantile", "distribution " + p_.name + " has no quantile");
    if (std::isnan(p_.lower) || std::isnan(p_.upper) || !(p_.lower < p_.upper))
        throw ValidationError("support", "distribution " + p_.name + " needs lower < upper");
    if (p_.atom_at_lower < 0 || p_.atom_at_upper < 0 || p_.atom_at_lower + p_.atom_at_upper >= 1)
        throw ValidationError("atom", "atom masses must be non-negative and leave a continuous part");
    if ((p_.atom_at_upper > 0 && !std::isfinite(p_.upper)) || (p_.atom_at_lower > 0 && !std::isfinite(p_.lower)))
        throw ValidationError("atom", "atoms are supported only at finite endpoints");

    if (!p_.cdf_left) p_.cdf_left = p_.cdf;
    if (!p_.sf) {
        auto cdf = p_.cdf;
        p_.sf = [cdf](double x) { return 1.0 - cdf(x); };
    }
    if (!p_.isf) {
        auto q = p_.quantile;
        p_.isf = [q](double s) { return q(1.0 - s); };
    }
}

std::string DistributionSpec::identity() const {
    std::string s = p_.name;
    if (!p_.shape_params.empty()) {
        s += ':';
        bool first = true;
        for (const auto& [k, v] : p_.shape_params) {
            if (!first) s += ',';
            first = false;
            s += k + "=" + g17(v);
        }
    }
    return s;
}

double DistributionSpec::density(double x) const {
    if (!p_.density) throw ValidationError("density", "distribution " + p_.name + " has no density");
    return p_.density(x);
}

double DistributionSpec::density_slope(double x) const {
    if (!p_.density_slope) throw ValidationError("density_slope", "distribution " + p_.name + " has no density derivative");
    return p_.density_slope(x);
}

int DistributionSpec::half_line_sign() const {
    if (p_.lower == 0.0 && p_.upper > 0.0) return 1;
    if (p_.upper == 0.0 && p_.lower < 0.0) return -1;
    return 0;
}

TailPoint DistributionSpec::tail_point(double t) const {
    if (p_.tail_point) return p_.tail_point(t);
    const int sign = half_line_sign();
    if (sign == 0 || !p_.density) throw ValidationError("support", "distribution " + p_.name + " is not on a half-line");
    const double x = sign * std::exp(t);
    TailPoint tp;
    tp.cdf = p_.cdf(x);
    tp.sf = p_.sf(x);
    const double fx = p_.density(x);
    tp.x_density = fx == 0.0 ? 0.0 : x * fx;
    if (p_.density_slope) {
        const double d = p_.density_slope(x);
        tp.x2_density_slope = d == 0.0 ? 0.0 : x * x * d;
    } else {
        tp.x2_density_slope = std::numeric_limits<double>::quiet_NaN();
    }
    return tp;
}

DistributionSpec with_numeric_slope(const DistributionSpec& spec) {
    if (spec.has_density_slope()) return spec;
    DistributionParts p = spec.parts();
    auto f = p.density;
    p.density_slope = [f](double x) {
        const double h = std::max(1e-6, 1e-6 * std::abs(x));
        return (f(x + h) - f(x - h)) / (2.0 * h);
    };
    p.numeric_slope = true;
    p.tail_point = nullptr;
    return DistributionSpec(std::move(p));
}

}  // namespace pmblue
