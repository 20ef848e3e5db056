#pragma once

#include "siegel/characteristics.hpp"
#include "siegel/siegel_point.hpp"
#include "siegel/symplectic.hpp"

#include <complex>
#include <stdexcept>

namespace siegel {

// Value of a theta constant together with the enumeration radius that
// produced it and the certified bound on the discarded tail.  An exact
// zero (vanishing characteristic) is reported with radius 0 and bound 0.
struct ThetaValue {
    std::complex<double> value{0.0, 0.0};
    double radius = 0.0;
    double tail_bound = 0.0;
};

// log of a nonzero complex number, kept as magnitude-log plus argument so
// that huge powers of theta constants stay representable.
struct LogValue {
    double log_magnitude = 0.0;
    double argument = 0.0;
};

// Raised when no radius up to the cap certifies the requested tail bound.
struct TruncationError : std::runtime_error {
    double achieved_bound;
    TruncationError(const std::string& msg, double achieved)
        : std::runtime_error(msg), achieved_bound(achieved) {}
};

// Raised for quotient levels at which every member vanishes identically.
struct DegenerateLevelError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when a factor of the quotient cannot be certified nonzero.
struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// True iff theta with this characteristic vanishes identically: the class
// of v is half-integral and the count of index pairs (k, k+g) with both
// entries congruent to 1/2 is odd.
bool is_vanishing_char(const FracVector& v);

// Certified bound on the absolute value of the sum of all series terms
// m = n + v_u with m^T Y m > R^2, where lambda_min is the smallest
// eigenvalue of Y:  (2 + sqrt(2/lambda_min))^g * exp(-pi R^2 / 2).
double theta_tail_bound(double radius, double lambda_min, int g);

// Theta constant via lattice sum over the ellipsoid m^T Y m <= R^2, with
// R grown from 3 by factors of 1.3 until the certified tail is at most
// eps.  Throws TruncationError if the cap is reached first.  Does not
// shortcut vanishing characteristics.
ThetaValue theta_raw(const FracVector& v, const SiegelPoint& Z, double eps = 1e-12,
                     double radius_cap = 40.0);

// Same, but returns an exact zero for vanishing characteristics without
// summing anything.
ThetaValue theta(const FracVector& v, const SiegelPoint& Z, double eps = 1e-12,
                 double radius_cap = 40.0);

LogValue log_value(const std::complex<double>& z);

// |exp(a - b) - 1| computed from the log representations; the distance of
// the quotient from 1, immune to overflow of the values themselves.
double log_residual(const LogValue& a, const LogValue& b);

// log of the theta-constant quotient attached to a class of level N >= 3:
//   2^{4N} e(-2^g N (2^g-1)(2^g+1) v_u^T v_l)
//     * prod over odd half-integral a of theta_{a-v}^{4N(2^g+1)}
//     / prod over even half-integral b of theta_b^{4N(2^g-1)}.
// Throws DegenerateLevelError below level 3 and EvaluationError when a
// factor is smaller than its certified tail bound.
LogValue big_theta_log(const IndexClass& v, const SiegelPoint& Z, double eps = 1e-12,
                       double radius_cap = 40.0);

// exp of big_theta_log; may overflow to infinity for extreme exponents.
std::complex<double> big_theta(const IndexClass& v, const SiegelPoint& Z,
                               double eps = 1e-12, double radius_cap = 40.0);

// Residual of the identity  Theta_v(alpha Z) = Theta_{alpha^T v}(Z)  for an
// integral symplectic alpha (level 0, similitude factor 1).
double check_sp_action(const SymplecticMatrix& alpha, const IndexClass& v,
                       const SiegelPoint& Z, double eps = 1e-12,
                       double radius_cap = 40.0);

}  // namespace siegel
