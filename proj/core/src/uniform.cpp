#include "pmblue/uniform.hpp"

#include "pmblue/error.hpp"

namespace pmblue {

namespace {

long double gamma_i(long double i) {
    return 4 * (i + 1) * (i + 1) * (i + 1) * (i + 2) * (i + 2) / ((2 * i + 1) * (2 * i + 3));
}
long double delta_i(long double i) { return (i + 1) * (i + 2) * (i + 2) * (i + 3) / (2 * i + 3); }
long double gamma_last(long double n) { return (n + 1) * (n + 1) * (n + 2) * (n + 2) / (2 * n + 1); }

void check(int n) {
    if (n < 2) throw ValidationError("n", "uniform closed form needs n >= 2");
}

}  // namespace

double UniformSums::var_l2() const { return static_cast<double>(a / (a * b - c * c)); }
double UniformSums::var_l1() const { return static_cast<double>((a + b - 2 * c) / (a * b - c * c)); }

Tridiagonal uniform_sigma_inverse(int n) {
    check(n);
    Tridiagonal t;
    t.diag.resize(n);
    t.off.resize(n - 1);
    for (int i = 1; i < n; ++i) {
        t.diag[i - 1] = static_cast<double>(gamma_i(i));
        t.off[i - 1] = static_cast<double>(delta_i(i));
    }
    t.diag[n - 1] = static_cast<double>(gamma_last(n));
    return t;
}

UniformSums uniform_sums(int n) {
    check(n);
    // a(n) = sum_{i<n} (gamma_i - 2 delta_i) + gamma_n
    // b(n) = sum_{i<n} (gamma_i/(i+1)^2 - 2 delta_i/((i+1)(i+2))) + gamma_n/(n+1)^2
    // c(n) = sum_{i<n} (gamma_i/(i+1) - delta_i (2i+3)/((i+1)(i+2))) + gamma_n/(n+1)
    // with (1-mu)_i = 1/(i+1); Kahan-compensated long double sums.
    struct Kahan {
        long double s = 0, c = 0;
        void add(long double v) {
            long double y = v - c;
            long double t = s + y;
            c = (t - s) - y;
            s = t;
        }
    } a, b, c;
    for (int k = 1; k < n; ++k) {
        const long double i = k;
        const long double g = gamma_i(i), d = delta_i(i);
        a.add(g - 2 * d);
        b.add(g / ((i + 1) * (i + 1)) - 2 * d / ((i + 1) * (i + 2)));
        c.add(g / (i + 1) - d * (2 * i + 3) / ((i + 1) * (i + 2)));
    }
    const long double nn = n, gn = gamma_last(nn);
    a.add(gn);
    b.add(gn / ((nn + 1) * (nn + 1)));
    c.add(gn / (nn + 1));
    UniformSums r;
    r.n = n;
    r.a = a.s;
    r.b = b.s;
    r.c = c.s;
    return r;
}

UniformClosedForm uniform_closed_form(int n) {
    check(n);
    UniformClosedForm u;
    auto& pm = u.moments;
    pm.n = n;
    pm.family = "uniform";
    pm.mu.resize(n);
    pm.sigma = Matrix(n, n);
    pm.second_moment = Matrix(n, n);
    for (int i = 1; i <= n; ++i) pm.mu[i - 1] = static_cast<double>(i) / (i + 1);
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            const double v = static_cast<double>(i) / ((i + 1.0) * (j + 1.0) * (j + 2.0));
            pm.sigma(i - 1, j - 1) = v;
            pm.sigma(j - 1, i - 1) = v;
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) pm.second_moment(i, j) = pm.sigma(i, j) + pm.mu[i] * pm.mu[j];
    u.sigma_inverse = uniform_sigma_inverse(n);
    u.sums = uniform_sums(n);
    return u;
}

}  // namespace pmblue
