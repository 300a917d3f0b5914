#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace gklab {

// Analytic operations are supported up to ambient dimension 8; the hyperboloid
// chart embeds in R^{n+1}, hence the +1 on the storage bound.  Keeping the
// bound small lets Eigen place every point and tangent vector on the stack.
inline constexpr int kMaxDim = 8;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim + 1, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                          Eigen::ColMajor, kMaxDim + 1, kMaxDim + 1>;

// Curvature operators act on the wedge space Lambda^2, dimension n(n-1)/2.
inline constexpr int kMaxWedgeDim = kMaxDim * (kMaxDim - 1) / 2;
using WedgeMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::ColMajor, kMaxWedgeDim, kMaxWedgeDim>;

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct SpaceMismatchError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

// Thrown when an iterative kernel fails to reach its tolerance.  The residual
// at the last iterate is always carried along so callers can report it.
struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& what) : Error(what) {}
    ConvergenceError(const std::string& what, double residual_)
        : Error(what + " (residual " + std::to_string(residual_) + ")"),
          residual(residual_) {}
    double residual = std::numeric_limits<double>::quiet_NaN();
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace gklab
