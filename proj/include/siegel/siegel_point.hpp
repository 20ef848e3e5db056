#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace siegel {

// point of the Siegel upper half-space: Z = X + iY, X symmetric, Y positive definite
struct SiegelPoint {
    int g = 0;
    Eigen::MatrixXd X;
    Eigen::MatrixXd Y;
    double lambda_min = 0;   // least eigenvalue of Y
    Eigen::MatrixXd chol_u;  // upper factor G with Y = G^T G

    int genus() const { return g; }
    Eigen::MatrixXcd Z() const {
        return X.cast<std::complex<double>>() +
               std::complex<double>(0, 1) * Y.cast<std::complex<double>>();
    }
};

// validates symmetry (tolerance 1e-12 relative, rejects rather than symmetrizes)
// and positive-definiteness of Y
SiegelPoint make_siegel_point(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);
SiegelPoint make_siegel_point(const Eigen::MatrixXcd& Z);
SiegelPoint diag_point(const std::vector<std::complex<double>>& taus);
SiegelPoint scale_point(const SiegelPoint& Z, double c);  // c > 0

// deterministic generator: all randomness in the artifact flows through this
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double unit() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }  // [0,1)
    double pm_half() { return unit() - 0.5; }
    long integer(long n) { return static_cast<long>(eng() % static_cast<std::uint64_t>(n)); }  // [0,n)
};

// Z = X + i(Q^T Q + I), X symmetric and Q with entries uniform in [-1/2,1/2];
// guarantees lambda_min >= 1
SiegelPoint random_siegel_point(int g, Rng& rng);
std::complex<double> random_tau(Rng& rng);

}  // namespace siegel
