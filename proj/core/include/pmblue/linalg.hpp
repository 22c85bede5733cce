#pragma once

#include <vector>

#include "pmblue/matrix.hpp"

namespace pmblue {

// Factorization of a symmetric positive-definite matrix.  Cholesky first,
// pivoted LDL' when Cholesky fails; NumericalError if neither yields a
// positive-definite factor.
class SpdSolver {
public:
    explicit SpdSolver(const Matrix& a);
    ~SpdSolver();
    SpdSolver(SpdSolver&&) noexcept;
    SpdSolver& operator=(SpdSolver&&) noexcept;

    std::vector<double> solve(const std::vector<double>& b) const;
    // 1-norm condition number estimate, 1/rcond.
    double condition() const { return condition_; }
    bool pivoted() const { return pivoted_; }

private:
    struct Impl;
    Impl* impl_;
    double condition_ = 0.0;
    bool pivoted_ = false;
};

inline constexpr double kIllConditioned = 1e12;

double dot(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> multiply(const Matrix& a, const std::vector<double>& x);
double quadratic_form(const Matrix& a, const std::vector<double>& x);

}  // namespace pmblue
