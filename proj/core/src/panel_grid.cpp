#include "pmblue/panel_grid.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "pmblue/error.hpp"
#include "pmblue/scale.hpp"

namespace pmblue {

namespace {

const std::vector<double>& panel_breaks() {
    static const std::vector<double> b = [] {
        std::vector<double> v{-700, -500, -350, -250, -180, -130, -95, -70, -50, -36, -26, -19, -14,
                              -10.5, -8, -6, -4.5, -3.5, -2.5, -1.75, -1, -0.5};
        for (int k = 0; k <= 24; ++k) v.push_back(0.5 * k);
        for (double x : {13.5, 15.0, 17.0, 20.0, 24.0, 29.0, 35.0, 43.0, 53.0, 66.0, 82.0, 100.0, 125.0, 155.0,
                         190.0, 235.0, 290.0, 360.0, 450.0, 560.0, 700.0})
            v.push_back(x);
        return v;
    }();
    return b;
}

// Lobatto nodes on [-1, 1] ascending, and the matrix mapping node values to
// int_{-1}^{t_l} of the interpolant.
void chebyshev_setup(int p, std::vector<double>& nodes, std::vector<double>& cum) {
    using M = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const long double pi = std::numbers::pi_v<long double>;
    std::vector<long double> t(p);
    for (int l = 0; l < p; ++l) t[l] = -std::cos(pi * l / (p - 1));
    auto cheb = [](int k, long double x) { return std::cos(k * std::acos(std::clamp(x, -1.0L, 1.0L))); };
    auto prim = [&](int k, long double x) -> long double {
        if (k == 0) return x;
        if (k == 1) return x * x / 2;
        return (cheb(k + 1, x) / (k + 1) - cheb(k - 1, x) / (k - 1)) / 2;
    };
    M V(p, p), J(p, p);
    for (int l = 0; l < p; ++l)
        for (int k = 0; k < p; ++k) {
            V(l, k) = cheb(k, t[l]);
            J(l, k) = prim(k, t[l]) - prim(k, -1.0L);
        }
    M C = J * V.partialPivLu().inverse();
    nodes.assign(p, 0.0);
    cum.assign(static_cast<std::size_t>(p) * p, 0.0);
    for (int l = 0; l < p; ++l) {
        nodes[l] = static_cast<double>(t[l]);
        for (int k = 0; k < p; ++k) cum[l * p + k] = static_cast<double>(C(l, k));
    }
}

}  // namespace

PanelGrid::PanelGrid(const DistributionSpec& spec, int order) : order_(order) {
    if (!spec.has_density() || spec.has_atoms())
        throw ValidationError("dist", "panel moments need a density and no atoms: " + spec.name());
    std::vector<double> t;
    chebyshev_setup(order, t, cum_);
    const auto& br = panel_breaks();
    const std::size_t np = br.size() - 1;
    z_.reserve(np * order);
    for (std::size_t P = 0; P < np; ++P) {
        const double a = br[P], b = br[P + 1];
        const double h = 0.5 * (b - a);
        half_width_.push_back(h);
        for (int l = 0; l < order; ++l) {
            // Keep panel ends exact so the two sides of z = 0 agree.
            const double zz = l == 0 ? a : l == order - 1 ? b : a + h * (t[l] + 1.0);
            const ScaleNode s = scale_node(spec, zz);
            z_.push_back(zz);
            x_.push_back(s.x);
            log_cdf_.push_back(s.log_cdf);
            sf_.push_back(s.sf);
            dxdz_.push_back(s.dxdz);
            weight_.push_back(h * cum_[(order - 1) * order + l]);
        }
    }
    median_ = spec.quantile(0.5);
}

void PanelGrid::tail_integral(const double* g, double* out) const {
    const std::size_t p = order_;
    const std::size_t np = panels();
    double above = 0.0;
    for (std::size_t P = np; P-- > 0;) {
        const double* gp = g + P * p;
        const double h = half_width_[P];
        double left[64];
        for (std::size_t l = 0; l < p; ++l) {
            double s = 0.0;
            const double* row = &cum_[l * p];
            for (std::size_t k = 0; k < p; ++k) s += row[k] * gp[k];
            left[l] = h * s;
        }
        const double total = left[p - 1];
        for (std::size_t l = 0; l < p; ++l) out[P * p + l] = above + (total - left[l]);
        above += total;
    }
}

namespace {

struct Powers {
    std::size_t N;
    std::vector<double> cdf_pow;   // (n+1) x N, row m = F^m
    std::vector<double> tail_pow;  // (n+1) x N, row m = 1 - F^m
};

Powers powers(const PanelGrid& g, int n) {
    Powers pw;
    pw.N = g.size();
    pw.cdf_pow.assign((n + 1) * pw.N, 0.0);
    pw.tail_pow.assign((n + 1) * pw.N, 0.0);
    for (int m = 0; m <= n; ++m)
        for (std::size_t k = 0; k < pw.N; ++k) {
            const double lm = m * g.log_cdf()[k];
            pw.cdf_pow[m * pw.N + k] = std::exp(lm);
            pw.tail_pow[m * pw.N + k] = -std::expm1(lm);
        }
    return pw;
}

}  // namespace

PartialMaximaMoments panel_moments_table(const DistributionSpec& spec, int n, int order) {
    if (n < 1) throw ValidationError("n", "sample size must be >= 1");
    const PanelGrid g(spec, order);
    const std::size_t N = g.size();
    const Powers pw = powers(g, n);
    const auto& w = g.dxdz();
    const auto& wt = g.weight();
    const auto& z = g.z();

    // H[m] = int_x^omega (1 - F^m), m = 0..n.
    std::vector<double> H((n + 1) * N, 0.0), tmp(N);
    for (int m = 1; m <= n; ++m) {
        for (std::size_t k = 0; k < N; ++k) tmp[k] = pw.tail_pow[m * N + k] * w[k];
        g.tail_integral(tmp.data(), &H[m * N]);
    }
    std::vector<double> ww(N);
    for (std::size_t k = 0; k < N; ++k) ww[k] = wt[k] * w[k];

    PartialMaximaMoments pm;
    pm.n = n;
    pm.family = spec.identity();
    pm.mu.resize(n);
    pm.sigma = Matrix(n, n);
    const std::size_t p = order;
    for (int m = 1; m <= n; ++m) {
        double up = 0.0, down = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            // Panels lie entirely on one side of z = 0.
            const bool upper = z[(k / p) * p + p - 1] > 0.0;
            if (upper)
                up += ww[k] * pw.tail_pow[m * N + k];
            else
                down += ww[k] * pw.cdf_pow[m * N + k];
        }
        pm.mu[m - 1] = g.median() + up - down;
    }
    for (int i = 1; i <= n; ++i) {
        const double* Pi = &pw.cdf_pow[i * N];
        const double* Hi = &H[i * N];
        for (int j = i; j <= n; ++j) {
            const double* Pj = &pw.cdf_pow[j * N];
            const double* Hj = &H[j * N];
            const double* Hd = &H[(j - i) * N];
            double s = 0.0;
            for (std::size_t k = 0; k < N; ++k) s += ww[k] * (Pj[k] * Hi[k] + Pi[k] * (Hj[k] - Hd[k]));
            pm.sigma(i - 1, j - 1) = s;
            pm.sigma(j - 1, i - 1) = s;
        }
    }
    pm.second_moment = Matrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) pm.second_moment(i, j) = pm.sigma(i, j) + pm.mu[i] * pm.mu[j];
    return pm;
}

SpacingMoments panel_spacing_moments(const DistributionSpec& spec, int n, int order) {
    if (n < 2) throw ValidationError("n", "spacings need n >= 2");
    const PanelGrid g(spec, order);
    const std::size_t N = g.size();
    const Powers pw = powers(g, n);
    const auto& w = g.dxdz();
    const auto& wt = g.weight();
    const auto& sf = g.sf();

    // G[m] = int_x^omega F^m (1 - F), m = 0..n-1.
    std::vector<double> G(n * N, 0.0), tmp(N);
    for (int m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < N; ++k) tmp[k] = pw.cdf_pow[m * N + k] * sf[k] * w[k];
        g.tail_integral(tmp.data(), &G[m * N]);
    }
    std::vector<double> ww(N);
    for (std::size_t k = 0; k < N; ++k) ww[k] = wt[k] * w[k];

    const int d = n - 1;
    SpacingMoments sm;
    sm.n = n;
    sm.family = spec.identity();
    sm.m.resize(d);
    sm.s_mat = Matrix(d, d);
    sm.d_mat = Matrix(d, d);
    for (int k = 1; k <= d; ++k) {
        const double* Pk = &pw.cdf_pow[k * N];
        double mk = 0.0, e2 = 0.0;
        for (std::size_t q = 0; q < N; ++q) {
            mk += ww[q] * Pk[q] * sf[q];
            e2 += ww[q] * Pk[q] * G[q];
        }
        sm.m[k - 1] = mk;
        sm.d_mat(k - 1, k - 1) = 2.0 * e2;
    }
    for (int i = 1; i <= d; ++i) {
        const double* Pi = &pw.cdf_pow[i * N];
        const double* Pi1 = &pw.cdf_pow[(i + 1) * N];
        const double* Gi = &G[i * N];
        for (int j = i + 1; j <= d; ++j) {
            const double* Pj = &pw.cdf_pow[j * N];
            const double* Gj = &G[j * N];
            const double* Ga = &G[(j - i) * N];
            const double* Gb = &G[(j - i - 1) * N];
            double s = 0.0;
            for (std::size_t q = 0; q < N; ++q)
                s += ww[q] * (Pi[q] * (Ga[q] - sf[q] * Gj[q]) - Pi1[q] * Gb[q] - Pj[q] * sf[q] * Gi[q]);
            sm.s_mat(i - 1, j - 1) = s;
            sm.s_mat(j - 1, i - 1) = s;
        }
    }
    for (int i = 0; i < d; ++i) sm.s_mat(i, i) = sm.d_mat(i, i) - sm.m[i] * sm.m[i];
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) sm.d_mat(i, j) = sm.s_mat(i, j) + sm.m[i] * sm.m[j];
    return sm;
}

}  // namespace pmblue
