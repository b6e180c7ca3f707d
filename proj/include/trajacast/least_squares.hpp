#pragma once

#include <Eigen/Dense>

namespace trajacast {

struct LeastSquaresFit {
    Eigen::VectorXd coefficients;
    bool ridge = false; ///< the Gram matrix was singular and the ridge fallback was used
};

/// Relative ridge strength used when the Gram matrix is singular.
inline constexpr double kRidgeLambda = 1e-8;

/// Minimizes ||design·b - y||² through the normal equations. When the Gram
/// matrix is numerically singular it is regularized with
/// λ = kRidgeLambda · mean(diag(G)) · I. Throws std::runtime_error when the
/// solution is not finite.
LeastSquaresFit solve_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y);

} // namespace trajacast
