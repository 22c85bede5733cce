#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/roots.hpp>

#include "pmblue/distribution.hpp"
#include "pmblue/error.hpp"

namespace pmblue {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

using Params = std::map<std::string, double>;

double take(const std::string& family, const Params& given, const std::string& key, double fallback) {
    auto it = given.find(key);
    if (it == given.end()) return fallback;
    if (!std::isfinite(it->second)) throw ValidationError(key, family + ": parameter " + key + " must be finite");
    return it->second;
}

void reject_unknown(const std::string& family, const Params& given, std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : given) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw ValidationError(k, family + ": unknown shape parameter " + k);
    }
}

// Increasing g with g(lo) <= 0 < g(hi) after expanding hi.
double bracket_root(const std::function<double(double)>& g, double lo, double hi) {
    int guard = 0;
    while (g(hi) < 0.0) {
        lo = hi;
        hi = hi * 2.0 + 1.0;
        if (++guard > 200) throw NumericalError("root bracket expansion failed");
    }
    if (g(lo) == 0.0) return lo;
    boost::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-12 * std::max(1.0, std::abs(a)); };
    auto r = boost::math::tools::toms748_solve(g, lo, hi, tol, iters);
    return 0.5 * (r.first + r.second);
}

DistributionSpec power(double lambda, std::string name) {
    if (!(lambda > 0)) throw ValidationError("lambda", "power: lambda must be > 0");
    DistributionParts p;
    p.name = std::move(name);
    if (p.name == "power") p.shape_params = {{"lambda", lambda}};
    p.lower = 0.0;
    p.upper = 1.0;
    p.cdf = [lambda](double x) { return x <= 0 ? 0.0 : x >= 1 ? 1.0 : std::pow(x, lambda); };
    p.sf = [lambda](double x) { return x <= 0 ? 1.0 : x >= 1 ? 0.0 : -std::expm1(lambda * std::log(x)); };
    p.density = [lambda](double x) { return (x <= 0 || x >= 1) ? 0.0 : lambda * std::pow(x, lambda - 1); };
    p.density_slope = [lambda](double x) {
        return (x <= 0 || x >= 1) ? 0.0 : lambda * (lambda - 1) * std::pow(x, lambda - 2);
    };
    p.quantile = [lambda](double u) { return std::pow(u, 1.0 / lambda); };
    p.isf = [lambda](double q) { return std::exp(std::log1p(-q) / lambda); };
    return DistributionSpec(std::move(p));
}

DistributionSpec logistic() {
    DistributionParts p;
    p.name = "logistic";
    p.lower = -inf;
    p.upper = inf;
    p.cdf = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
    p.sf = [](double x) { return 1.0 / (1.0 + std::exp(x)); };
    p.density = [](double x) {
        const double e = std::exp(-std::abs(x));
        return e / ((1 + e) * (1 + e));
    };
    p.density_slope = [](double x) {
        const double e = std::exp(-std::abs(x));
        const double f = e / ((1 + e) * (1 + e));
        // f (1 - 2F) = f (S - F)
        return f * (x >= 0 ? -(1 - e) / (1 + e) : (1 - e) / (1 + e));
    };
    p.quantile = [](double u) { return std::log(u) - std::log1p(-u); };
    p.isf = [](double q) { return std::log1p(-q) - std::log(q); };
    return DistributionSpec(std::move(p));
}

DistributionSpec pareto(double a) {
    if (!(a > 2)) throw ValidationError("a", "pareto: a must be > 2 for a finite second moment");
    DistributionParts p;
    p.name = "pareto";
    p.shape_params = {{"a", a}};
    p.lower = 1.0;
    p.upper = inf;
    p.cdf = [a](double x) { return x <= 1 ? 0.0 : -std::expm1(-a * std::log(x)); };
    p.sf = [a](double x) { return x <= 1 ? 1.0 : std::pow(x, -a); };
    p.density = [a](double x) { return x <= 1 ? 0.0 : a * std::pow(x, -a - 1); };
    p.density_slope = [a](double x) { return x <= 1 ? 0.0 : -a * (a + 1) * std::pow(x, -a - 2); };
    p.quantile = [a](double u) { return std::exp(-std::log1p(-u) / a); };
    p.isf = [a](double q) { return std::pow(q, -1.0 / a); };
    return DistributionSpec(std::move(p));
}

DistributionSpec negexp() {
    DistributionParts p;
    p.name = "negexp";
    p.lower = -inf;
    p.upper = 0.0;
    p.cdf = [](double x) { return x >= 0 ? 1.0 : std::exp(x); };
    p.sf = [](double x) { return x >= 0 ? 0.0 : -std::expm1(x); };
    p.density = [](double x) { return x >= 0 ? 0.0 : std::exp(x); };
    p.density_slope = [](double x) { return x >= 0 ? 0.0 : std::exp(x); };
    p.quantile = [](double u) { return std::log(u); };
    p.isf = [](double q) { return std::log1p(-q); };
    return DistributionSpec(std::move(p));
}

DistributionSpec weibull(double c) {
    if (!(c > 0)) throw ValidationError("c", "weibull: c must be > 0");
    DistributionParts p;
    p.name = "weibull";
    p.shape_params = {{"c", c}};
    p.lower = 0.0;
    p.upper = inf;
    p.cdf = [c](double x) { return x <= 0 ? 0.0 : -std::expm1(-std::pow(x, c)); };
    p.sf = [c](double x) { return x <= 0 ? 1.0 : std::exp(-std::pow(x, c)); };
    p.density = [c](double x) {
        if (x <= 0) return 0.0;
        const double xc = std::pow(x, c);
        return c * xc / x * std::exp(-xc);
    };
    p.density_slope = [c](double x) {
        if (x <= 0) return 0.0;
        const double xc = std::pow(x, c);
        const double f = c * xc / x * std::exp(-xc);
        return f * ((c - 1) - c * xc) / x;
    };
    p.quantile = [c](double u) { return std::pow(-std::log1p(-u), 1.0 / c); };
    p.isf = [c](double q) { return std::pow(-std::log(q), 1.0 / c); };
    return DistributionSpec(std::move(p));
}

DistributionSpec gumbel() {
    DistributionParts p;
    p.name = "gumbel";
    p.lower = -inf;
    p.upper = inf;
    p.cdf = [](double x) { return std::exp(-std::exp(-x)); };
    p.sf = [](double x) { return -std::expm1(-std::exp(-x)); };
    p.density = [](double x) {
        const double e = std::exp(-x);
        return std::isinf(e) ? 0.0 : std::exp(-x - e);
    };
    p.density_slope = [](double x) {
        const double e = std::exp(-x);
        return std::isinf(e) ? 0.0 : std::exp(-x - e) * (e - 1);
    };
    p.quantile = [](double u) { return -std::log(-std::log(u)); };
    p.isf = [](double q) { return -std::log(-std::log1p(-q)); };
    return DistributionSpec(std::move(p));
}

// Upper tail 1 - Phi(x); continued fraction beyond x = 8 where erfc loses
// relative accuracy as it approaches underflow.
double normal_upper(double x) {
    if (x <= 8.0) return 0.5 * std::erfc(x / std::numbers::sqrt2);
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    double frac = x;
    for (int k = 60; k >= 1; --k) frac = x + k / frac;
    return phi / frac;
}

DistributionSpec normal() {
    DistributionParts p;
    p.name = "normal";
    p.lower = -inf;
    p.upper = inf;
    p.cdf = [](double x) { return normal_upper(-x); };
    p.sf = [](double x) { return normal_upper(x); };
    p.density = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); };
    p.density_slope = [](double x) { return -x * std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); };
    p.quantile = [](double u) { return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u); };
    p.isf = [](double q) { return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q); };
    return DistributionSpec(std::move(p));
}

DistributionSpec atom_truncated_uniform() {
    DistributionParts p;
    p.name = "atom_truncated_uniform";
    p.lower = 0.0;
    p.upper = 1.0;
    p.atom_at_upper = 0.75;
    p.cdf = [](double x) { return x < 0 ? 0.0 : x < 1 ? x / 4 : 1.0; };
    p.cdf_left = [](double x) { return x <= 0 ? 0.0 : x <= 1 ? x / 4 : 1.0; };
    p.sf = [](double x) { return x < 0 ? 1.0 : x < 1 ? 1.0 - x / 4 : 0.0; };
    p.quantile = [](double u) { return u <= 0.25 ? 4 * u : 1.0; };
    p.isf = [](double q) { return q >= 0.75 ? 4 * (1 - q) : 1.0; };
    p.breakpoints = {1.0};
    return DistributionSpec(std::move(p));
}

// Constants of the smooth upper piece (a x^2 + b x + c) e^{-x}, x >= s = e^{-2}.
struct Counter {
    double s, a, b, c;
};

const Counter& counter() {
    static const Counter k = [] {
        const double e2 = std::exp(2.0), e4 = std::exp(4.0);
        const double s = std::exp(-2.0);
        const double es = std::exp(s);
        Counter r;
        r.s = s;
        r.a = es * (18 - 6 * e2 + e4) / 54;
        r.b = -2.0 / 27 * std::exp(-2.0) * es * (9 - 12 * e2 + 2 * e4);
        r.c = std::exp(-4.0) * es * (18 - 42 * e2 + 43 * e4) / 54;
        return r;
    }();
    return k;
}

double counter_upper_sf(double x) {
    const auto& k = counter();
    return (k.a * x * x + k.b * x + k.c) * std::exp(-x);
}

// x >= s solving (a x^2 + b x + c) e^{-x} = q, for 0 < q <= 2/3.
double counter_upper_isf(double q) {
    const auto& k = counter();
    if (q <= 0) return inf;
    const double lq = std::log(q);
    auto g = [&](double x) { return lq - (std::log(k.a * x * x + k.b * x + k.c) - x); };
    return bracket_root(g, k.s, k.s + 4.0);
}

DistributionSpec counterexample_min() {
    const auto& k = counter();
    DistributionParts p;
    p.name = "fisher_counterexample_min";
    p.lower = 0.0;
    p.upper = inf;
    p.breakpoints = {k.s};
    p.cdf = [](double x) {
        if (x <= 0) return 0.0;
        if (x <= counter().s) return 1.0 / (1.0 - std::log(x));
        return 1.0 - counter_upper_sf(x);
    };
    p.sf = [](double x) {
        if (x <= 0) return 1.0;
        if (x <= counter().s) {
            const double l = -std::log(x);
            return l / (1.0 + l);
        }
        return counter_upper_sf(x);
    };
    p.density = [](double x) {
        if (x <= 0) return 0.0;
        const auto& k = counter();
        if (x <= k.s) {
            const double d = 1.0 - std::log(x);
            return 1.0 / (x * d * d);
        }
        return (k.a * x * x + (k.b - 2 * k.a) * x + k.c - k.b) * std::exp(-x);
    };
    p.density_slope = [](double x) {
        if (x <= 0) return 0.0;
        const auto& k = counter();
        if (x <= k.s) {
            const double l = std::log(x);
            const double d = 1.0 - l;
            return (1.0 + l) / (x * x * d * d * d);
        }
        return -(k.a * x * x + (k.b - 4 * k.a) * x + 2 * k.a - 2 * k.b + k.c) * std::exp(-x);
    };
    p.quantile = [](double u) {
        if (u <= 1.0 / 3) return std::exp(1.0 - 1.0 / u);
        return counter_upper_isf(1.0 - u);
    };
    p.isf = [](double q) {
        if (q >= 2.0 / 3) return std::exp(1.0 - 1.0 / (1.0 - q));
        return counter_upper_isf(q);
    };
    // Near zero x = e^t underflows long before F does; use y = -t directly.
    p.tail_point = [](double t) {
        const auto& k = counter();
        if (t <= std::log(k.s)) {
            const double y = -t;
            const double d = 1.0 + y;
            return TailPoint{1.0 / d, y / d, 1.0 / (d * d), (1.0 - y) / (d * d * d)};
        }
        const double x = std::exp(t);
        const double e = std::exp(-x);
        return TailPoint{1.0 - counter_upper_sf(x), counter_upper_sf(x),
                         x * (k.a * x * x + (k.b - 2 * k.a) * x + k.c - k.b) * e,
                         -x * x * (k.a * x * x + (k.b - 4 * k.a) * x + 2 * k.a - 2 * k.b + k.c) * e};
    };
    return DistributionSpec(std::move(p));
}

// The maxima version, written out piecewise on (-inf, 0).
DistributionSpec counterexample_max() {
    const auto& k = counter();
    DistributionParts p;
    p.name = "fisher_counterexample_max";
    p.lower = -inf;
    p.upper = 0.0;
    p.breakpoints = {-k.s};
    p.cdf = [](double x) {
        const auto& k = counter();
        if (x >= 0) return 1.0;
        if (x >= -k.s) {
            const double l = -std::log(-x);
            return l / (1.0 + l);
        }
        return (k.a * x * x - k.b * x + k.c) * std::exp(x);
    };
    p.sf = [](double x) {
        const auto& k = counter();
        if (x >= 0) return 0.0;
        if (x >= -k.s) return 1.0 / (1.0 - std::log(-x));
        return 1.0 - (k.a * x * x - k.b * x + k.c) * std::exp(x);
    };
    p.density = [](double x) {
        const auto& k = counter();
        if (x >= 0) return 0.0;
        if (x >= -k.s) {
            const double d = 1.0 - std::log(-x);
            return -1.0 / (x * d * d);
        }
        return (k.a * x * x + (2 * k.a - k.b) * x + k.c - k.b) * std::exp(x);
    };
    p.density_slope = [](double x) {
        const auto& k = counter();
        if (x >= 0) return 0.0;
        if (x >= -k.s) {
            const double l = std::log(-x);
            const double d = 1.0 - l;
            return -(1.0 + l) / (x * x * d * d * d);
        }
        return (k.a * x * x + (4 * k.a - k.b) * x + 2 * k.a - 2 * k.b + k.c) * std::exp(x);
    };
    p.quantile = [](double u) {
        if (u >= 2.0 / 3) return -std::exp(-u / (1.0 - u));
        return -counter_upper_isf(u);
    };
    p.isf = [](double q) {
        if (q <= 1.0 / 3) return -std::exp(-(1.0 - q) / q);
        return -counter_upper_isf(1.0 - q);
    };
    p.tail_point = [](double t) {
        const auto& k = counter();
        if (t <= std::log(k.s)) {
            const double y = -t;
            const double d = 1.0 + y;
            return TailPoint{y / d, 1.0 / d, -1.0 / (d * d), -(1.0 - y) / (d * d * d)};
        }
        const double x = -std::exp(t);
        const double e = std::exp(x);
        const double cdf = (k.a * x * x - k.b * x + k.c) * e;
        return TailPoint{cdf, 1.0 - cdf, x * (k.a * x * x + (2 * k.a - k.b) * x + k.c - k.b) * e,
                         x * x * (k.a * x * x + (4 * k.a - k.b) * x + 2 * k.a - 2 * k.b + k.c) * e};
    };
    return DistributionSpec(std::move(p));
}

}  // namespace

std::vector<std::string> family_names() {
    return {"power",  "uniform", "logistic", "pareto", "negexp", "weibull", "gumbel", "normal",
            "atom_truncated_uniform", "fisher_counterexample_min", "fisher_counterexample_max"};
}

DistributionSpec make_family(const std::string& name, const Params& shape) {
    if (name == "power") {
        reject_unknown(name, shape, {"lambda"});
        return power(take(name, shape, "lambda", 1.0), "power");
    }
    if (name == "pareto") {
        reject_unknown(name, shape, {"a"});
        return pareto(take(name, shape, "a", 3.0));
    }
    if (name == "weibull") {
        reject_unknown(name, shape, {"c"});
        return weibull(take(name, shape, "c", 1.0));
    }
    reject_unknown(name, shape, {});
    if (name == "uniform") return power(1.0, "uniform");
    if (name == "logistic") return logistic();
    if (name == "negexp") return negexp();
    if (name == "gumbel") return gumbel();
    if (name == "normal") return normal();
    if (name == "atom_truncated_uniform") return atom_truncated_uniform();
    if (name == "fisher_counterexample_min") return counterexample_min();
    if (name == "fisher_counterexample_max") return counterexample_max();
    throw ValidationError("dist", "unknown family " + name);
}

DistributionSpec parse_family(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    Params params;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0) throw ValidationError("dist", "expected key=value in '" + item + "'");
            const std::string key = item.substr(0, eq);
            const std::string val = item.substr(eq + 1);
            double v = 0;
            auto r = std::from_chars(val.data(), val.data() + val.size(), v);
            if (r.ec != std::errc() || r.ptr != val.data() + val.size())
                throw ValidationError(key, "shape parameter " + key + " is not a number: '" + val + "'");
            params[key] = v;
        }
    }
    return make_family(name, params);
}

}  // namespace pmblue
