#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pmblue {

using ScalarFn = std::function<double(double)>;

// Values at x = sign * exp(t) for a half-line support, computed without
// forming x when it would underflow.  x_density = x f(x), x2_density_slope = x^2 f'(x).
struct TailPoint {
    double cdf;
    double sf;
    double x_density;
    double x2_density_slope;
};

using TailFn = std::function<TailPoint(double)>;

// Everything needed to construct a DistributionSpec.  Only cdf, quantile and
// the endpoints are required; the constructor fills sf, isf and cdf_left
// from them when they are left empty.
struct DistributionParts {
    std::string name;
    std::map<std::string, double> shape_params;
    ScalarFn cdf;
    ScalarFn cdf_left;
    ScalarFn sf;
    ScalarFn density;
    ScalarFn density_slope;
    ScalarFn quantile;
    ScalarFn isf;
    double lower = 0.0;
    double upper = 0.0;
    double atom_at_lower = 0.0;
    double atom_at_upper = 0.0;
    std::vector<double> breakpoints;
    TailFn tail_point;
    // Set when density_slope is a finite-difference fallback rather than analytic.
    bool numeric_slope = false;
};

class DistributionSpec {
public:
    explicit DistributionSpec(DistributionParts parts);

    const std::string& name() const { return p_.name; }
    const std::map<std::string, double>& shape_params() const { return p_.shape_params; }

    // Canonical string of name and parameters; the moment cache keys on it.
    std::string identity() const;

    double cdf(double x) const { return p_.cdf(x); }
    double cdf_left(double x) const { return p_.cdf_left(x); }
    double sf(double x) const { return p_.sf(x); }
    double quantile(double u) const { return p_.quantile(u); }
    double isf(double q) const { return p_.isf(q); }

    bool has_density() const { return static_cast<bool>(p_.density); }
    bool has_density_slope() const { return static_cast<bool>(p_.density_slope); }
    bool numeric_slope() const { return p_.numeric_slope; }
    double density(double x) const;
    double density_slope(double x) const;

    double lower() const { return p_.lower; }
    double upper() const { return p_.upper; }
    double atom_at_lower() const { return p_.atom_at_lower; }
    double atom_at_upper() const { return p_.atom_at_upper; }
    bool has_atoms() const { return p_.atom_at_lower > 0.0 || p_.atom_at_upper > 0.0; }
    const std::vector<double>& breakpoints() const { return p_.breakpoints; }

    // True when the family supplies an underflow-free evaluation; tail_point()
    // otherwise falls back to forming x directly.
    bool has_tail_point() const { return static_cast<bool>(p_.tail_point); }
    // Evaluates at x = sign * exp(t) where sign is that of the half-line support.
    TailPoint tail_point(double t) const;
    // +1 for support in [0, inf), -1 for (-inf, 0], 0 otherwise.
    int half_line_sign() const;

    const DistributionParts& parts() const { return p_; }

private:
    DistributionParts p_;
};

// Built-in families.  Unknown names or parameters throw ValidationError.
// Defaults: power lambda=1, pareto a=3, weibull c=1.
DistributionSpec make_family(const std::string& name,
                             const std::map<std::string, double>& shape_params = {});

// Parses "name" or "name:key=value,key=value".
DistributionSpec parse_family(const std::string& text);

std::vector<std::string> family_names();

// Distribution of -X.  cdf_r(x) = 1 - F(-x-).
DistributionSpec reflect(const DistributionSpec& spec);

// Attach a central-difference f' to a spec that has a density but no slope.
DistributionSpec with_numeric_slope(const DistributionSpec& spec);

}  // namespace pmblue
