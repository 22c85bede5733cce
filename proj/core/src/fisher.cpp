#include "pmblue/fisher.hpp"

#include <cmath>
#include <limits>

#include "pmblue/error.hpp"
#include "pmblue/quadrature.hpp"

namespace pmblue {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Integration runs on t = log|x| separately on each half-line of the support.
struct Half {
    int sign;
    double t_lo;
    double t_hi;
    bool hook;
};

std::vector<Half> halves(const DistributionSpec& spec) {
    const double lo = spec.lower(), hi = spec.upper();
    std::vector<int> signs;
    if (lo == -inf && hi == inf)
        signs = {1, -1};
    else if (lo == 0.0 && hi == inf)
        signs = {1};
    else if (lo == -inf && hi == 0.0)
        signs = {-1};
    else
        throw ValidationError("dist", spec.name() + ": support must be (-inf, inf), (-inf, 0) or (0, inf)");
    std::vector<Half> out;
    for (int s : signs) {
        Half h;
        h.sign = s;
        h.hook = signs.size() == 1 && spec.has_tail_point();
        // On the real line the neighbourhood of 0 contributes O(e^t).
        h.t_lo = signs.size() == 2 ? -60.0 : (h.hook ? -inf : -708.0);
        if (signs.size() == 1 && !h.hook) {
            // Stop where the probability near 0 underflows, or the integrand
            // plateaus and hides a divergence.
            const double xmin = s > 0 ? spec.quantile(1e-300) : -spec.isf(1e-300);
            if (xmin > 0) h.t_lo = std::max(h.t_lo, std::log(xmin));
        }
        const double xmax = s > 0 ? spec.isf(1e-300) : -spec.quantile(1e-300);
        h.t_hi = std::log(xmax) + 0.5;
        out.push_back(h);
    }
    return out;
}

TailPoint point_at(const DistributionSpec& spec, const Half& h, double t) {
    if (h.hook) return spec.tail_point(t);
    const double x = h.sign * std::exp(t);
    const double f = spec.density(x);
    const double fp = spec.density_slope(x);
    return TailPoint{spec.cdf(x), spec.sf(x), f == 0.0 ? 0.0 : x * f, fp == 0.0 ? 0.0 : x * x * fp};
}

std::vector<double> t_breaks(const DistributionSpec& spec, const Half& h, double lo, double hi) {
    std::vector<double> b;
    for (double x : spec.breakpoints())
        if (x * h.sign > 0) {
            const double t = std::log(std::abs(x));
            if (t > lo && t < hi) b.push_back(t);
        }
    for (double t : {-200.0, -40.0, -10.0, -3.0, -1.0, 0.0, 1.0, 2.0, 3.0})
        if (t > lo && t < hi) b.push_back(t);
    return b;
}

QuadratureOptions quad(const FisherOptions& opt) {
    QuadratureOptions q;
    q.abs_tol = opt.tol;
    q.rel_tol = 1e-13;
    q.max_evaluations = opt.max_evaluations;
    return q;
}

double fisher_term(const DistributionSpec& spec, Direction dir, int k, const FisherOptions& opt) {
    double total = 0.0;
    for (const Half& h : halves(spec)) {
        auto g = [&](double t) {
            const TailPoint p = point_at(spec, h, t);
            if (p.x_density == 0.0) return 0.0;
            const double P = dir == Direction::maxima ? p.cdf : p.sf;
            const double Q = dir == Direction::maxima ? p.sf : p.cdf;
            if (k > 1 && P == 0.0) return 0.0;
            const double logP = P > 0.5 ? std::log1p(-Q) : std::log(P);
            const double Pk = k > 1 ? std::exp((k - 1) * logP) : 1.0;
            if (Pk == 0.0) return 0.0;
            const double e = p.x2_density_slope / p.x_density;
            const double r = k > 1 ? (k - 1) * p.x_density / P : 0.0;
            const double b = 1.0 + e + (dir == Direction::maxima ? r : -r);
            return std::abs(p.x_density) * Pk * b * b;
        };
        auto res = integrate(g, h.t_lo, h.t_hi, quad(opt), t_breaks(spec, h, h.t_lo, h.t_hi));
        total += require_converged(res, "Fisher information term " + std::to_string(k));
    }
    return total;
}

}  // namespace

FisherReport fisher_information(const DistributionSpec& spec_in, Direction direction, int n, const FisherOptions& opt) {
    if (n < 1) throw ValidationError("n", "Fisher information needs n >= 1");
    if (!spec_in.has_density()) throw ValidationError("dist", spec_in.name() + " has no density");
    const DistributionSpec spec = spec_in.has_density_slope() ? spec_in : with_numeric_slope(spec_in);
    halves(spec);
    FisherReport r;
    r.family = spec_in.identity();
    r.direction = direction;
    r.numeric_slope = spec.numeric_slope();
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double term = fisher_term(spec, direction, k, opt);
        acc += term;
        r.n_values.push_back(k);
        r.terms.push_back(term);
        r.information.push_back(acc);
    }
    if (direction == Direction::minima && spec.lower() == 0.0 && spec.upper() == inf) {
        const FisherLimitReport lim = fisher_min_limit(spec, opt);
        if (!lim.divergent) {
            r.i_min_limit = lim.i_min;
            r.cramer_rao_floor = lim.cramer_rao_floor;
        }
    }
    return r;
}

FisherLimitReport fisher_min_limit(const DistributionSpec& spec_in, const FisherOptions& opt) {
    if (!(spec_in.lower() == 0.0 && spec_in.upper() == inf))
        throw ValidationError("dist", spec_in.name() + ": the minima limit needs support (0, inf)");
    if (!spec_in.has_density()) throw ValidationError("dist", spec_in.name() + " has no density");
    const DistributionSpec spec = spec_in.has_density_slope() ? spec_in : with_numeric_slope(spec_in);
    const Half h = halves(spec).front();

    auto g = [&](double t) {
        const TailPoint p = point_at(spec, h, t);
        if (p.x_density == 0.0 || p.cdf == 0.0 || p.sf == 0.0) return 0.0;
        const double xmu = p.x_density / p.cdf;
        const double xlam = p.x_density / p.sf;
        const double e = p.x2_density_slope / p.x_density;
        const double b = 1.0 + e - xmu;
        return xmu * b * b + xmu * xmu * (xlam + xmu);
    };

    FisherLimitReport r;
    r.family = spec_in.identity();
    r.split_point = spec.breakpoints().empty() ? spec.quantile(0.5) : spec.breakpoints().front();
    const double ts = std::log(r.split_point);
    const auto q = quad(opt);

    // Windows t in [-2^j, ts + 2^j]; growing increments mean divergence.
    std::vector<double> inc;
    for (int j = 1; j <= 20; ++j) {
        const double lo = -std::ldexp(1.0, j);
        if (lo < h.t_lo) break;
        const double hi = std::min(h.t_hi, ts + std::ldexp(1.0, j));
        auto res = integrate(g, lo, hi, q, t_breaks(spec, h, lo, hi));
        r.window_values.push_back(res.value);
        if (r.window_values.size() >= 2)
            inc.push_back(r.window_values.back() - r.window_values[r.window_values.size() - 2]);
    }
    if (inc.size() >= 3) {
        const std::size_t m = inc.size();
        r.divergent = inc[m - 1] > inc[m - 2] && inc[m - 2] > inc[m - 3] && inc[m - 3] > 0 && inc[m - 1] > 1e-6;
    }

    auto below = integrate(g, h.t_lo, ts, q, t_breaks(spec, h, h.t_lo, ts));
    auto above = integrate(g, ts, h.t_hi, q, t_breaks(spec, h, ts, h.t_hi));
    if (!r.divergent) {
        require_converged(below, "minima limit below the split");
        require_converged(above, "minima limit above the split");
    }
    r.integral_below_s = below.value;
    r.integral_above_s = above.value;
    r.error_estimate = below.error + above.error;
    if (r.divergent) {
        r.i_min = inf;
        r.verdict = "I^min diverges; no Cramer-Rao floor";
    } else {
        r.i_min = below.value + above.value;
        r.cramer_rao_floor = 1.0 / r.i_min;
        r.verdict = "finite I^min; no consistent unbiased estimator exists";
    }
    return r;
}

}  // namespace pmblue
