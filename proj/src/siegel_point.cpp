#include "siegel/siegel_point.hpp"

#include <stdexcept>

namespace siegel {

SiegelPoint make_siegel_point(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    if (X.rows() != X.cols() || Y.rows() != Y.cols() || X.rows() != Y.rows() || X.rows() < 1)
        throw std::invalid_argument("X and Y must be square of equal size");
    int g = static_cast<int>(X.rows());
    double scale = std::max({1.0, X.cwiseAbs().maxCoeff(), Y.cwiseAbs().maxCoeff()});
    if ((X - X.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("X is not symmetric");
    if ((Y - Y.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("Y is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y, Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues().minCoeff();
    if (!(lmin > 0))
        throw std::invalid_argument("Im(Z) is not positive definite");

    SiegelPoint P;
    P.g = g;
    P.X = X;
    P.Y = Y;
    P.lambda_min = lmin;
    Eigen::LLT<Eigen::MatrixXd> llt(Y);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("Cholesky factorization of Im(Z) failed");
    P.chol_u = llt.matrixL().transpose();
    return P;
}

SiegelPoint make_siegel_point(const Eigen::MatrixXcd& Z) {
    return make_siegel_point(Z.real(), Z.imag());
}

SiegelPoint diag_point(const std::vector<std::complex<double>>& taus) {
    int g = static_cast<int>(taus.size());
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(g, g);
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(g, g);
    for (int k = 0; k < g; ++k) {
        X(k, k) = taus[static_cast<std::size_t>(k)].real();
        Y(k, k) = taus[static_cast<std::size_t>(k)].imag();
    }
    return make_siegel_point(X, Y);
}

SiegelPoint scale_point(const SiegelPoint& Z, double c) {
    if (!(c > 0)) throw std::invalid_argument("scale factor must be positive");
    return make_siegel_point(Eigen::MatrixXd(Z.X * c), Eigen::MatrixXd(Z.Y * c));
}

SiegelPoint random_siegel_point(int g, Rng& rng) {
    Eigen::MatrixXd X(g, g), Q(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = i; j < g; ++j) X(i, j) = X(j, i) = rng.pm_half();
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) Q(i, j) = rng.pm_half();
    Eigen::MatrixXd Y = Q.transpose() * Q + Eigen::MatrixXd::Identity(g, g);
    return make_siegel_point(X, Y);
}

std::complex<double> random_tau(Rng& rng) {
    double x = rng.pm_half();
    double q = rng.pm_half();
    return {x, q * q + 1.0};
}

}  // namespace siegel
