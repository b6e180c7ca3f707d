#include "trajacast/least_squares.hpp"

#include <stdexcept>

namespace trajacast {

LeastSquaresFit solve_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
    if (design.rows() != y.size() || design.cols() == 0) {
        throw std::invalid_argument("least squares: design/response size mismatch");
    }
    const Eigen::MatrixXd gram = design.transpose() * design;
    const Eigen::VectorXd rhs = design.transpose() * y;

    LeastSquaresFit fit;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    bool singular = design.rows() < design.cols() || ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
                    !(ldlt.rcond() > 1e-12);
    if (!singular) {
        // rcond() skips zero pivots, so check the pivot spread directly.
        const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
        singular = !(pivots.minCoeff() > 1e-12 * pivots.maxCoeff());
    }
    if (!singular) {
        fit.coefficients = ldlt.solve(rhs);
    }
    if (singular || !fit.coefficients.allFinite()) {
        const double scale = std::max(gram.diagonal().mean(), 1.0);
        Eigen::MatrixXd ridged = gram;
        ridged.diagonal().array() += kRidgeLambda * scale;
        fit.coefficients = Eigen::LDLT<Eigen::MatrixXd>(ridged).solve(rhs);
        fit.ridge = true;
    }
    if (!fit.coefficients.allFinite()) {
        throw std::runtime_error("least squares solve produced non-finite coefficients");
    }
    return fit;
}

} // namespace trajacast
