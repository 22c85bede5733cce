#include "pmblue/moments.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include "pmblue/error.hpp"
#include "pmblue/panel_grid.hpp"
#include "pmblue/quadrature.hpp"
#include "pmblue/scale.hpp"

namespace pmblue {

namespace {

// Initial breaks on the z scale; the F^k bump sits near z = log k.
const std::vector<double>& z_breaks() {
    static const std::vector<double> b{-kScaleLimit, -200, -60, -20, -6, -2, 0, 2, 6, 20, 60, 200, kScaleLimit};
    return b;
}

std::vector<double> z_breaks_from(double z0) {
    std::vector<double> pts{z0};
    for (double b : z_breaks())
        if (b > z0) pts.push_back(b);
    return pts;
}

bool use_z_scale(const DistributionSpec& spec, const MomentOptions& opt) {
    return !opt.x_scale && spec.has_density() && !spec.has_atoms();
}

QuadratureOptions outer_options(const MomentOptions& opt) {
    QuadratureOptions q;
    q.abs_tol = opt.tol;
    q.rel_tol = 1e-14;
    q.max_evaluations = opt.max_evaluations;
    return q;
}

// Inner tails can be large far out in a heavy lower tail (e.g. ~ -x for the
// logistic), where only a relative target is attainable.
QuadratureOptions inner_options(const MomentOptions& opt) {
    QuadratureOptions q;
    q.abs_tol = 0.01 * opt.tol;
    q.rel_tol = 1e-12;
    q.max_evaluations = opt.max_evaluations;
    return q;
}

double pow_cdf(double log_cdf, int m) { return std::exp(m * log_cdf); }
double one_minus_pow_cdf(double log_cdf, int m) { return -std::expm1(m * log_cdf); }

// x-scale helpers for specs with atoms or without a density.
std::vector<double> x_breaks(const DistributionSpec& spec) { return spec.breakpoints(); }

double ipow(double v, int m) { return std::pow(v, m); }

// Integral over (x, omega) on the x-scale.
template <class F>
double x_tail(const DistributionSpec& spec, F&& g, double x, const QuadratureOptions& q, const char* what) {
    return require_converged(integrate(g, x, spec.upper(), q, x_breaks(spec)), what);
}

double mean_x(const DistributionSpec& spec, int i, const MomentOptions& opt) {
    const double lo = spec.lower(), hi = spec.upper();
    const double ref = std::isfinite(lo) ? lo : std::isfinite(hi) ? hi : 0.0;
    auto q = outer_options(opt);
    double v = ref;
    if (ref < hi)
        v += require_converged(integrate([&](double x) { return 1.0 - ipow(spec.cdf(x), i); }, ref, hi, q, x_breaks(spec)),
                               "pm_mean upper part");
    if (lo < ref)
        v -= require_converged(integrate([&](double x) { return ipow(spec.cdf(x), i); }, lo, ref, q, x_breaks(spec)),
                               "pm_mean lower part");
    return v;
}

double mean_z(const DistributionSpec& spec, int i, const MomentOptions& opt) {
    auto q = outer_options(opt);
    auto up = [&](double z) {
        const ScaleNode s = scale_node(spec, z);
        return s.dxdz == 0.0 ? 0.0 : one_minus_pow_cdf(s.log_cdf, i) * s.dxdz;
    };
    auto down = [&](double z) {
        const ScaleNode s = scale_node(spec, z);
        return s.dxdz == 0.0 ? 0.0 : pow_cdf(s.log_cdf, i) * s.dxdz;
    };
    const auto& b = z_breaks();
    const std::vector<double> neg(b.begin(), b.begin() + 7), pos(b.begin() + 6, b.end());
    return spec.quantile(0.5) + require_converged(integrate_points(up, pos, q), "pm_mean upper part") -
           require_converged(integrate_points(down, neg, q), "pm_mean lower part");
}

double cov_z(const DistributionSpec& spec, int i, int j, const MomentOptions& opt) {
    const int d = j - i;
    auto qi = inner_options(opt);
    auto outer = [&](double zx) {
        const ScaleNode sx = scale_node(spec, zx);
        if (sx.dxdz == 0.0) return 0.0;
        const double Fi = pow_cdf(sx.log_cdf, i);
        if (Fi == 0.0) return 0.0;
        const double Fd = pow_cdf(sx.log_cdf, d);
        auto inner = [&](double zy) {
            const ScaleNode sy = scale_node(spec, zy);
            if (sy.dxdz == 0.0) return 0.0;
            const double coef = d == 0 ? 2.0 : Fd + pow_cdf(sy.log_cdf, d);
            return coef * one_minus_pow_cdf(sy.log_cdf, i) * sy.dxdz;
        };
        const double in = require_converged(integrate_points(inner, z_breaks_from(zx), qi), "inner integral");
        return Fi * in * sx.dxdz;
    };
    return require_converged(integrate_points(outer, z_breaks(), outer_options(opt)), "outer integral");
}

double cov_x(const DistributionSpec& spec, int i, int j, const MomentOptions& opt) {
    const int d = j - i;
    auto qi = inner_options(opt);
    auto outer = [&](double x) {
        const double F = spec.cdf(x);
        const double Fi = ipow(F, i);
        if (Fi == 0.0) return 0.0;
        const double Fd = ipow(F, d);
        auto inner = [&](double y) {
            const double G = spec.cdf(y);
            const double coef = d == 0 ? 2.0 : Fd + ipow(G, d);
            return coef * (1.0 - ipow(G, i));
        };
        return Fi * x_tail(spec, inner, x, qi, "inner integral");
    };
    return require_converged(integrate(outer, spec.lower(), spec.upper(), outer_options(opt), x_breaks(spec)),
                             "outer integral");
}

void check_index(int i, const char* name) {
    if (i < 1) throw ValidationError(name, std::string(name) + " must be >= 1");
}

// Cache of adaptive tables keyed by (identity, tol, path).
struct CacheKey {
    std::string id;
    double tol;
    bool x_scale;
    std::size_t budget;
    bool operator<(const CacheKey& o) const {
        return std::tie(id, tol, x_scale, budget) < std::tie(o.id, o.tol, o.x_scale, o.budget);
    }
};

std::mutex cache_mutex;
std::map<CacheKey, PartialMaximaMoments> adaptive_cache;
std::map<std::tuple<std::string, int>, PartialMaximaMoments> panel_cache;

MomentMethod resolve(const DistributionSpec& spec, int n, const MomentOptions& opt) {
    if (opt.method != MomentMethod::automatic) return opt.method;
    if (!use_z_scale(spec, opt)) return MomentMethod::adaptive;
    return n > opt.panel_threshold ? MomentMethod::panel : MomentMethod::adaptive;
}

void fill_second_moment(PartialMaximaMoments& pm) {
    pm.second_moment = Matrix(pm.n, pm.n);
    for (int i = 0; i < pm.n; ++i)
        for (int j = 0; j < pm.n; ++j) pm.second_moment(i, j) = pm.sigma(i, j) + pm.mu[i] * pm.mu[j];
}

// Grows `pm` from pm.n to n computing only the new rows.
void extend_adaptive(const DistributionSpec& spec, PartialMaximaMoments& pm, int n, const MomentOptions& opt) {
    const int old = pm.n;
    Matrix sigma(n, n);
    for (int i = 0; i < old; ++i)
        for (int j = 0; j < old; ++j) sigma(i, j) = pm.sigma(i, j);
    pm.mu.resize(n);
    for (int i = old + 1; i <= n; ++i) pm.mu[i - 1] = pm_mean(spec, i, opt);
    for (int j = old + 1; j <= n; ++j)
        for (int i = 1; i <= j; ++i) {
            double v;
            try {
                v = pm_cov(spec, i, j, opt);
            } catch (const NumericalError& e) {
                throw NumericalError("moment table entry (" + std::to_string(i) + "," + std::to_string(j) +
                                     ") failed: " + e.what());
            }
            sigma(i - 1, j - 1) = v;
            sigma(j - 1, i - 1) = v;
        }
    pm.n = n;
    pm.sigma = std::move(sigma);
    fill_second_moment(pm);
}

}  // namespace

double pm_mean(const DistributionSpec& spec, int i, const MomentOptions& opt) {
    check_index(i, "i");
    return use_z_scale(spec, opt) ? mean_z(spec, i, opt) : mean_x(spec, i, opt);
}

double pm_cov(const DistributionSpec& spec, int i, int j, const MomentOptions& opt) {
    check_index(i, "i");
    check_index(j, "j");
    if (i > j) std::swap(i, j);
    return use_z_scale(spec, opt) ? cov_z(spec, i, j, opt) : cov_x(spec, i, j, opt);
}

PartialMaximaMoments leading(const PartialMaximaMoments& pm, int n) {
    if (n > pm.n) throw ValidationError("n", "cannot restrict a table of size " + std::to_string(pm.n) + " to " + std::to_string(n));
    PartialMaximaMoments r;
    r.n = n;
    r.family = pm.family;
    r.mu.assign(pm.mu.begin(), pm.mu.begin() + n);
    r.sigma = Matrix(n, n);
    r.second_moment = Matrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            r.sigma(i, j) = pm.sigma(i, j);
            r.second_moment(i, j) = pm.second_moment(i, j);
        }
    return r;
}

PartialMaximaMoments pm_moments_table(const DistributionSpec& spec, int n, const MomentOptions& opt) {
    if (n < 2) throw ValidationError("n", "moment tables need n >= 2");
    const MomentMethod method = resolve(spec, n, opt);
    if (method == MomentMethod::panel) {
        if (!use_z_scale(spec, opt)) throw ValidationError("method", "panel moments need a density and no atoms");
        const auto key = std::make_tuple(spec.identity(), n);
        if (opt.use_cache) {
            std::lock_guard<std::mutex> lock(cache_mutex);
            // Any cached panel table at least as large restricts exactly.
            for (const auto& [k, v] : panel_cache)
                if (std::get<0>(k) == spec.identity() && v.n >= n) return leading(v, n);
        }
        PartialMaximaMoments pm = panel_moments_table(spec, n);
        if (opt.use_cache) {
            std::lock_guard<std::mutex> lock(cache_mutex);
            panel_cache[key] = pm;
        }
        return pm;
    }

    const CacheKey key{spec.identity(), opt.tol, !use_z_scale(spec, opt), opt.max_evaluations};
    PartialMaximaMoments pm;
    if (opt.use_cache) {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = adaptive_cache.find(key);
        if (it != adaptive_cache.end()) {
            if (it->second.n >= n) return leading(it->second, n);
            pm = it->second;
        }
    }
    if (pm.n == 0) pm.family = spec.identity();
    extend_adaptive(spec, pm, n, opt);
    if (opt.use_cache) {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto& slot = adaptive_cache[key];
        if (slot.n < pm.n) slot = pm;
    }
    return pm;
}

void clear_moment_cache() {
    std::lock_guard<std::mutex> lock(cache_mutex);
    adaptive_cache.clear();
    panel_cache.clear();
}

double spacing_mean(const DistributionSpec& spec, int k, const MomentOptions& opt) {
    check_index(k, "k");
    if (use_z_scale(spec, opt)) {
        auto g = [&](double z) {
            const ScaleNode s = scale_node(spec, z);
            return s.dxdz == 0.0 ? 0.0 : pow_cdf(s.log_cdf, k) * s.sf * s.dxdz;
        };
        return require_converged(integrate_points(g, z_breaks(), outer_options(opt)), "spacing mean");
    }
    auto g = [&](double x) {
        const double F = spec.cdf(x);
        return ipow(F, k) * (1.0 - F);
    };
    return require_converged(integrate(g, spec.lower(), spec.upper(), outer_options(opt), x_breaks(spec)),
                             "spacing mean");
}

double spacing_second_moment(const DistributionSpec& spec, int k, const MomentOptions& opt) {
    check_index(k, "k");
    auto qi = inner_options(opt);
    if (use_z_scale(spec, opt)) {
        auto outer = [&](double zx) {
            const ScaleNode sx = scale_node(spec, zx);
            if (sx.dxdz == 0.0) return 0.0;
            const double Fk = pow_cdf(sx.log_cdf, k);
            if (Fk == 0.0) return 0.0;
            auto inner = [&](double zy) {
                const ScaleNode sy = scale_node(spec, zy);
                return sy.sf * sy.dxdz;
            };
            return Fk * require_converged(integrate_points(inner, z_breaks_from(zx), qi), "inner integral") * sx.dxdz;
        };
        return 2.0 * require_converged(integrate_points(outer, z_breaks(), outer_options(opt)), "spacing second moment");
    }
    auto outer = [&](double x) {
        const double Fk = ipow(spec.cdf(x), k);
        if (Fk == 0.0) return 0.0;
        auto inner = [&](double y) { return 1.0 - spec.cdf(y); };
        return Fk * x_tail(spec, inner, x, qi, "inner integral");
    };
    return 2.0 * require_converged(integrate(outer, spec.lower(), spec.upper(), outer_options(opt), x_breaks(spec)),
                                   "spacing second moment");
}

SpacingMoments spacing_moments_from(const PartialMaximaMoments& pm) {
    if (pm.n < 2) throw ValidationError("n", "spacings need n >= 2");
    const int d = pm.n - 1;
    SpacingMoments sm;
    sm.n = pm.n;
    sm.family = pm.family;
    sm.m.resize(d);
    sm.s_mat = Matrix(d, d);
    sm.d_mat = Matrix(d, d);
    for (int k = 0; k < d; ++k) sm.m[k] = pm.mu[k + 1] - pm.mu[k];
    const Matrix& S = pm.sigma;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            sm.s_mat(i, j) = S(i + 1, j + 1) - S(i + 1, j) - S(i, j + 1) + S(i, j);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) sm.d_mat(i, j) = sm.s_mat(i, j) + sm.m[i] * sm.m[j];
    return sm;
}

SpacingMoments spacing_moments(const DistributionSpec& spec, int n, const MomentOptions& opt) {
    if (n < 2) throw ValidationError("n", "spacings need n >= 2");
    if (resolve(spec, n, opt) == MomentMethod::panel) return panel_spacing_moments(spec, n);
    SpacingMoments sm = spacing_moments_from(pm_moments_table(spec, n, opt));
    const int d = n - 1;
    for (int k = 1; k <= d; ++k) {
        const double mk = spacing_mean(spec, k, opt);
        const double e2 = spacing_second_moment(spec, k, opt);
        sm.m[k - 1] = mk;
        sm.s_mat(k - 1, k - 1) = e2 - mk * mk;
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) sm.d_mat(i, j) = sm.s_mat(i, j) + sm.m[i] * sm.m[j];
    return sm;
}

std::vector<BetaAsymptoticRow> beta_tail_asymptotics_check(double t, const std::vector<double>& k_list) {
    if (!(t > -1)) throw ValidationError("t", "t must be > -1");
    std::vector<BetaAsymptoticRow> rows;
    const double limit = std::tgamma(1.0 + t);
    for (double k : k_list) {
        if (!(k > 0)) throw ValidationError("k", "k must be > 0");
        const double logv = (1.0 + t) * std::log(k) + std::lgamma(k + 1.0) + std::lgamma(t + 1.0) - std::lgamma(k + t + 2.0);
        const double v = std::exp(logv);
        rows.push_back({k, v, limit, std::abs(v - limit) / limit});
    }
    return rows;
}

}  // namespace pmblue
