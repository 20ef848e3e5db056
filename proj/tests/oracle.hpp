#pragma once

// Slow reference implementations used only to pin expected values in tests.
// Deliberately written in the most direct way possible: fixed summation
// boxes, plain products, long double accumulation, no pruning and no
// certified bounds.  Kept independent of the library internals.

#include "siegel/characteristics.hpp"
#include "siegel/rational.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace oracle {

// theta_{(0,0)}(i), summed far past double precision
inline constexpr double kTheta00AtI = 1.08643481121330801457531612151;

using C = std::complex<long double>;

inline C e_of(C w) {
    const long double two_pi = 6.28318530717958647692528676655900577L;
    return std::exp(C(0.0L, 1.0L) * two_pi * w);
}

inline std::complex<double> box_theta(const siegel::FracVector& v,
                                      const Eigen::MatrixXcd& Z, int box = 12) {
    int g = v.genus();
    std::vector<long double> vu(static_cast<std::size_t>(g)),
        vl(static_cast<std::size_t>(g));
    for (int k = 0; k < g; ++k) {
        vu[static_cast<std::size_t>(k)] =
            static_cast<long double>(siegel::to_double(v[k]));
        vl[static_cast<std::size_t>(k)] =
            static_cast<long double>(siegel::to_double(v[k + g]));
    }
    std::vector<int> n(static_cast<std::size_t>(g), -box);
    C acc(0.0L, 0.0L);
    while (true) {
        C w(0.0L, 0.0L);
        for (int a = 0; a < g; ++a) {
            long double xa = n[static_cast<std::size_t>(a)] + vu[static_cast<std::size_t>(a)];
            for (int b = 0; b < g; ++b) {
                long double xb =
                    n[static_cast<std::size_t>(b)] + vu[static_cast<std::size_t>(b)];
                w += 0.5L * xa * xb *
                     C(static_cast<long double>(Z(a, b).real()),
                       static_cast<long double>(Z(a, b).imag()));
            }
            w += xa * vl[static_cast<std::size_t>(a)];
        }
        acc += e_of(w);
        int k = 0;
        while (k < g && ++n[static_cast<std::size_t>(k)] > box) {
            n[static_cast<std::size_t>(k)] = -box;
            ++k;
        }
        if (k == g) break;
    }
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

inline std::complex<double> product_siegel_g(const siegel::Rat& r, const siegel::Rat& s,
                                             std::complex<double> tau, int terms = 400) {
    long double rd = static_cast<long double>(siegel::to_double(r));
    long double sd = static_cast<long double>(siegel::to_double(s));
    C t(static_cast<long double>(tau.real()), static_cast<long double>(tau.imag()));
    long double b2 = rd * rd - rd + 1.0L / 6.0L;
    C val = -e_of(t * (b2 / 2.0L)) * e_of(C(sd * (rd - 1.0L) / 2.0L, 0.0L));
    val *= 1.0L - e_of(t * rd + C(sd, 0.0L));
    for (int n = 1; n <= terms; ++n) {
        val *= 1.0L - e_of(t * (n + rd) + C(sd, 0.0L));
        val *= 1.0L - e_of(t * (n - rd) - C(sd, 0.0L));
    }
    return {static_cast<double>(val.real()), static_cast<double>(val.imag())};
}

}  // namespace oracle
