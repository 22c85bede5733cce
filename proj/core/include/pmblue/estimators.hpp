#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmblue/moments.hpp"

namespace pmblue {

enum class EstimatorKind { blue_location, blue_scale, blie_location, blie_scale, simple_scale };
enum class Basis { partial_maxima, spacings };

const char* to_string(EstimatorKind k);
const char* to_string(Basis b);
EstimatorKind estimator_kind_from(const std::string& s);
Basis basis_from(const std::string& s);

// All variances and MSEs are in units of theta2^2.
struct EstimatorSolution {
    EstimatorKind kind = EstimatorKind::blue_scale;
    Basis basis = Basis::partial_maxima;
    int n = 0;
    std::string family;
    std::vector<double> coefficients;
    // Var for BLUEs and U2 (exact b'Sb), MSE for BLIEs.
    double variance = 0.0;
    double condition_estimate = 0.0;
    std::optional<double> variance_bound;  // U2: 1/c_n
    std::optional<double> delta;           // full-form Delta
    std::optional<double> blie_ratio_a;    // m'D^{-1}m
    std::optional<double> ratio_identity_residual;  // |a - m'S^{-1}m/(1 + m'S^{-1}m)|

    bool is_blie() const { return kind == EstimatorKind::blie_location || kind == EstimatorKind::blie_scale; }
    bool ill_conditioned() const;
};

struct EstimatorPair {
    EstimatorSolution location;
    EstimatorSolution scale;
};

EstimatorPair solve_blue(const PartialMaximaMoments& pm);
EstimatorPair solve_blie(const PartialMaximaMoments& pm);
EstimatorSolution solve_blue_spacings(const SpacingMoments& sm);
EstimatorSolution solve_blie_spacings(const SpacingMoments& sm);
EstimatorSolution simple_scale_estimator(const SpacingMoments& sm);

// Spacings coefficients b rewritten on X: c_i = b_{i-1} - b_i, b_0 = b_n = 0.
EstimatorSolution to_partial_maxima_basis(const EstimatorSolution& sol);

// Point estimate from an observed partial-maxima vector of length n.  A
// spacings-basis solution also accepts the n-1 spacings directly.
double evaluate(const EstimatorSolution& sol, const std::vector<double>& data);

}  // namespace pmblue
