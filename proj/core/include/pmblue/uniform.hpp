#pragma once

#include <vector>

#include "pmblue/moments.hpp"

namespace pmblue {

// Sigma^{-1} for the standard uniform: diagonal gamma_1..gamma_n, off-diagonal
// entries (i, i+1) equal to -delta_i.
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;  // stored as delta_i > 0; the matrix entry is -delta_i
};

struct UniformSums {
    int n = 0;
    long double a = 0;  // 1' S^{-1} 1
    long double b = 0;  // (1-mu)' S^{-1} (1-mu)
    long double c = 0;  // (1-mu)' S^{-1} 1
    double var_l1() const;  // theta2^2 units
    double var_l2() const;
};

struct UniformClosedForm {
    PartialMaximaMoments moments;
    Tridiagonal sigma_inverse;
    UniformSums sums;
};

// mu_i = i/(i+1), sigma_ij = i/((i+1)(j+1)(j+2)) and the tridiagonal inverse.
// Builds dense n x n matrices; use uniform_sums for large n.
UniformClosedForm uniform_closed_form(int n);

Tridiagonal uniform_sigma_inverse(int n);

// a(n), b(n), c(n) in O(n) without forming any matrix.
UniformSums uniform_sums(int n);

}  // namespace pmblue
