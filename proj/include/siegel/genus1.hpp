#pragma once

#include "siegel/characteristics.hpp"
#include "siegel/siegel_point.hpp"
#include "siegel/theta.hpp"

#include <complex>
#include <vector>

namespace siegel {

// Value of the q-product together with the number of product factors taken
// and the size of the first discarded q-power.
struct QProductValue {
    std::complex<double> value{0.0, 0.0};
    long terms_used = 0;
    double truncation_error = 0.0;
};

// Siegel function
//   g_{(r,s)}(tau) = -q^{B2(r)/2} e(s(r-1)/2) (1 - q^r e(s))
//                    prod_{n>=1} (1 - q^{n+r} e(s)) (1 - q^{n-r} e(-s)),
// q = e(tau), B2(x) = x^2 - x + 1/6, using the parameters exactly as given.
// The product is cut at the first index n >= 40 with |q|^{n/2} < eps (and
// always past |r|).  Throws std::domain_error for integral (r, s), where
// the leading factor vanishes identically.
QProductValue siegel_g(const Rat& r, const Rat& s, std::complex<double> tau,
                       double eps = 1e-12);

// Order of vanishing in q of the Siegel function: B2(<r>)/2.
Rat ord_q(const Rat& r);

// Least-squares slope of log|g_{(r,s)}(iy)| against -2*pi*y over the grid,
// which converges to the q-order as the grid moves up.  The grid must be
// strictly increasing with at least two points and smallest point >= 2.
double numeric_order(const Rat& r, const Rat& s, const std::vector<double>& y_grid,
                     double eps = 1e-12);

// Residual of the diagonal-restriction factorization
//   theta_v(diag(tau_1..tau_g)) = prod_k xi_k g_{(1/2-v_k, 1/2-v_{k+g})}(tau_k)
//                                 g_{(1/2,1/2)}(tau_k)^{-1} theta_{(0,0)}(tau_k),
//   xi_k = e((2 v_k v_{k+g} + v_k - v_{k+g})/4),
// valid when no pair (<v_k>, <v_{k+g}>) equals (1/2, 1/2); in that excluded
// case theta vanishes at the diagonal and the returned value is |theta| itself.
double diag_restrict_check(const FracVector& v, const std::vector<std::complex<double>>& taus,
                           double eps = 1e-12);

// Residual of the genus-1 collapse  Theta_v(tau) = g_v(tau)^{12N}.
double genus1_identity_residual(const IndexClass& v, std::complex<double> tau,
                                double eps = 1e-12);

}  // namespace siegel
