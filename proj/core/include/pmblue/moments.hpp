#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pmblue/distribution.hpp"
#include "pmblue/matrix.hpp"

namespace pmblue {

enum class MomentMethod {
    automatic,  // adaptive up to MomentOptions::panel_threshold, panel above
    adaptive,   // nested adaptive Gauss-Kronrod per entry
    panel,      // Chebyshev panels with cumulative integration, all entries at once
};

struct MomentOptions {
    double tol = 1e-10;
    std::size_t max_evaluations = 100000;
    MomentMethod method = MomentMethod::automatic;
    int panel_threshold = 24;
    bool use_cache = true;
    // Force the x-scale path even when the quantile scale is available.
    bool x_scale = false;
};

// Moments of X = (X_{1:1}, ..., X_{n:n}).
struct PartialMaximaMoments {
    int n = 0;
    std::string family;
    std::vector<double> mu;
    Matrix sigma;
    Matrix second_moment;
};

// Moments of the spacings Z_k = X_{k+1:k+1} - X_{k:k}, k = 1..n-1.
struct SpacingMoments {
    int n = 0;
    std::string family;
    std::vector<double> m;
    Matrix s_mat;
    Matrix d_mat;
};

// E[X_{i:i}], i >= 1.
double pm_mean(const DistributionSpec& spec, int i, const MomentOptions& opt = {});

// Cov[X_{i:i}, X_{j:j}], 1 <= i <= j.
double pm_cov(const DistributionSpec& spec, int i, int j, const MomentOptions& opt = {});

PartialMaximaMoments pm_moments_table(const DistributionSpec& spec, int n, const MomentOptions& opt = {});

// m via E[Z_k] = int F^k (1-F), diagonals via E[Z_k^2] = 2 int int_{x<y} F^k(x)(1-F(y)),
// off-diagonals from the partial-maxima table.
SpacingMoments spacing_moments(const DistributionSpec& spec, int n, const MomentOptions& opt = {});

// Exact linear map Z = A X applied to a partial-maxima table.
SpacingMoments spacing_moments_from(const PartialMaximaMoments& pm);

// E[Z_k] and E[Z_k^2] by direct quadrature.
double spacing_mean(const DistributionSpec& spec, int k, const MomentOptions& opt = {});
double spacing_second_moment(const DistributionSpec& spec, int k, const MomentOptions& opt = {});

// Restrict a table to its leading n x n block.
PartialMaximaMoments leading(const PartialMaximaMoments& pm, int n);

void clear_moment_cache();

struct BetaAsymptoticRow {
    double k;
    double value;   // k^{1+t} B(k+1, t+1)
    double limit;   // Gamma(1+t)
    double rel_error;
};

std::vector<BetaAsymptoticRow> beta_tail_asymptotics_check(double t, const std::vector<double>& k_list);

}  // namespace pmblue
