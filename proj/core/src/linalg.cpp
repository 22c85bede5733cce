#include "pmblue/linalg.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "pmblue/error.hpp"

namespace pmblue {

struct SpdSolver::Impl {
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::LDLT<Eigen::MatrixXd> ldlt;
    bool use_ldlt = false;
};

SpdSolver::SpdSolver(const Matrix& a) : impl_(new Impl) {
    if (a.rows != a.cols || a.rows == 0) {
        delete impl_;
        throw ValidationError("matrix", "expected a non-empty square matrix");
    }
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(a.data.data(), a.rows, a.cols);
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    impl_->llt.compute(sym);
    if (impl_->llt.info() == Eigen::Success) {
        const double rc = impl_->llt.rcond();
        condition_ = rc > 0 ? 1.0 / rc : INFINITY;
        return;
    }
    impl_->ldlt.compute(sym);
    const bool ok = impl_->ldlt.info() == Eigen::Success && impl_->ldlt.isPositive() &&
                    (impl_->ldlt.vectorD().array() > 0).all();
    if (!ok) {
        delete impl_;
        impl_ = nullptr;
        throw NumericalError("matrix is not positive definite");
    }
    impl_->use_ldlt = true;
    pivoted_ = true;
    const double rc = impl_->ldlt.rcond();
    condition_ = rc > 0 ? 1.0 / rc : INFINITY;
}

SpdSolver::~SpdSolver() { delete impl_; }

SpdSolver::SpdSolver(SpdSolver&& o) noexcept : impl_(o.impl_), condition_(o.condition_), pivoted_(o.pivoted_) {
    o.impl_ = nullptr;
}

SpdSolver& SpdSolver::operator=(SpdSolver&& o) noexcept {
    std::swap(impl_, o.impl_);
    condition_ = o.condition_;
    pivoted_ = o.pivoted_;
    return *this;
}

std::vector<double> SpdSolver::solve(const std::vector<double>& b) const {
    Eigen::Map<const Eigen::VectorXd> v(b.data(), b.size());
    Eigen::VectorXd x = impl_->use_ldlt ? Eigen::VectorXd(impl_->ldlt.solve(v)) : Eigen::VectorXd(impl_->llt.solve(v));
    return std::vector<double>(x.data(), x.data() + x.size());
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    long double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
    return static_cast<double>(s);
}

std::vector<double> multiply(const Matrix& a, const std::vector<double>& x) {
    std::vector<double> y(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        long double s = 0;
        for (std::size_t j = 0; j < a.cols; ++j) s += static_cast<long double>(a(i, j)) * x[j];
        y[i] = static_cast<double>(s);
    }
    return y;
}

double quadratic_form(const Matrix& a, const std::vector<double>& x) { return dot(x, multiply(a, x)); }

}  // namespace pmblue
