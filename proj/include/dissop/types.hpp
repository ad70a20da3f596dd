// types.hpp - shared scalar/matrix aliases and error types
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace dissop {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kCommutatorRelTol = 1e-9;
inline constexpr double kOdeTol = 1e-10;
inline constexpr double kConditionLimit = 1e12;
inline constexpr double kEigenClusterTol = 1e-9;
inline constexpr double kKernelSvRelTol = 1e-7;

// Bad user input (unknown node, malformed document, out-of-order arguments).
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Spec data violates a model assumption (non-Hermitian alpha, commutativity
// defect above tolerance, ...).
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A matrix that the theory needs invertible turned out numerically singular.
struct SingularityError : std::runtime_error {
    double t;
    cxd z;
    SingularityError(const std::string& what, double t_, cxd z_)
        : std::runtime_error(what), t(t_), z(z_) {}
};

// Step-size control of the path integrator failed to meet tolerance.
struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double operator_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return m.jacobiSvd().singularValues()(0);
}

inline double trace_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return m.jacobiSvd().singularValues().sum();
}

inline bool is_hermitian(const Mat& m, double tol = kHermitianTol) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

}  // namespace dissop
