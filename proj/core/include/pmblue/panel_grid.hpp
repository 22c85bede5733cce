#pragma once

#include <cstddef>
#include <vector>

#include "pmblue/distribution.hpp"
#include "pmblue/moments.hpp"

namespace pmblue {

// Chebyshev-Lobatto panels over the split log-probability coordinate z
// (see scale.hpp).  Each panel carries its own nodes, so values at shared
// panel ends are stored twice.  Requires a density and no atoms.
class PanelGrid {
public:
    explicit PanelGrid(const DistributionSpec& spec, int order = 24);

    std::size_t size() const { return z_.size(); }
    int order() const { return order_; }
    std::size_t panels() const { return size() / static_cast<std::size_t>(order_); }

    const std::vector<double>& z() const { return z_; }
    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& log_cdf() const { return log_cdf_; }
    const std::vector<double>& sf() const { return sf_; }
    const std::vector<double>& dxdz() const { return dxdz_; }
    // Quadrature weights in z.
    const std::vector<double>& weight() const { return weight_; }
    double median() const { return median_; }

    // out[k] = integral of g over [z_k, zmax]; g sampled at the nodes.
    void tail_integral(const double* g, double* out) const;

private:
    int order_;
    std::vector<double> z_, x_, log_cdf_, sf_, dxdz_, weight_;
    std::vector<double> cum_;  // order x order left-cumulative matrix on [-1, 1]
    std::vector<double> half_width_;
    double median_ = 0.0;
};

PartialMaximaMoments panel_moments_table(const DistributionSpec& spec, int n, int order = 24);
SpacingMoments panel_spacing_moments(const DistributionSpec& spec, int n, int order = 24);

}  // namespace pmblue
