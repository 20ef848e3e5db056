#include "siegel/genus1.hpp"

#include <cmath>

namespace siegel {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::complex<double> e_of(std::complex<double> z) {
    return std::exp(std::complex<double>(0.0, 2.0 * kPi) * z);
}

std::complex<double> e_of_rat(const Rat& x) {
    return e_of(std::complex<double>(to_double(frac_part(x)), 0.0));
}

bool is_integral(const Rat& x) { return exact_denominator(x) == 1; }

}  // namespace

QProductValue siegel_g(const Rat& r, const Rat& s, std::complex<double> tau, double eps) {
    if (!(tau.imag() > 0)) throw std::invalid_argument("tau must lie in the upper half-plane");
    if (!(eps > 0)) throw std::invalid_argument("tolerance must be positive");
    if (is_integral(r) && is_integral(s))
        throw std::domain_error("the product vanishes identically for integral parameters");

    double rd = to_double(r), sd = to_double(s);
    double log_abs_q = -2.0 * kPi * tau.imag();
    long M = 40;
    long by_eps = static_cast<long>(std::ceil(2.0 * std::log(eps) / log_abs_q)) + 1;
    long by_r = static_cast<long>(std::ceil(std::abs(rd))) + 2;
    M = std::max({M, by_eps, by_r});

    std::complex<double> q_pow_b2 = e_of(tau * (to_double(b2(r)) / 2.0));
    std::complex<double> val = -q_pow_b2 * e_of_rat(s * (r - 1) / 2) *
                               (1.0 - e_of(tau * rd + sd));
    for (long n = 1; n <= M; ++n) {
        double nd = static_cast<double>(n);
        val *= (1.0 - e_of(tau * (nd + rd) + sd)) * (1.0 - e_of(tau * (nd - rd) - sd));
    }

    QProductValue out;
    out.value = val;
    out.terms_used = M;
    out.truncation_error = std::exp(log_abs_q * static_cast<double>(M) / 2.0);
    return out;
}

Rat ord_q(const Rat& r) { return b2(frac_part(r)) / 2; }

double numeric_order(const Rat& r, const Rat& s, const std::vector<double>& y_grid,
                     double eps) {
    if (y_grid.size() < 2) throw std::invalid_argument("grid needs at least two points");
    for (std::size_t i = 0; i < y_grid.size(); ++i) {
        if (y_grid[i] < 2.0) throw std::invalid_argument("grid points must be >= 2");
        if (i > 0 && y_grid[i] <= y_grid[i - 1])
            throw std::invalid_argument("grid must be strictly increasing");
    }
    std::vector<double> xs(y_grid.size()), ls(y_grid.size());
    for (std::size_t i = 0; i < y_grid.size(); ++i) {
        xs[i] = -2.0 * kPi * y_grid[i];
        ls[i] = std::log(std::abs(siegel_g(r, s, {0.0, y_grid[i]}, eps).value));
    }
    double xm = 0, lm = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xm += xs[i];
        lm += ls[i];
    }
    xm /= static_cast<double>(xs.size());
    lm /= static_cast<double>(xs.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - xm) * (ls[i] - lm);
        den += (xs[i] - xm) * (xs[i] - xm);
    }
    return num / den;
}

double diag_restrict_check(const FracVector& v, const std::vector<std::complex<double>>& taus,
                           double eps) {
    int g = v.genus();
    if (static_cast<int>(taus.size()) != g)
        throw std::invalid_argument("number of diagonal entries must equal the genus");
    SiegelPoint diag = diag_point(taus);

    bool zero_branch = false;
    for (int k = 0; k < g; ++k)
        if (frac_part(v[k]) == Rat(1, 2) && frac_part(v[k + g]) == Rat(1, 2))
            zero_branch = true;

    ThetaValue lhs = theta_raw(v, diag, eps);
    if (zero_branch) return std::abs(lhs.value);

    std::complex<double> rhs = 1.0;
    for (int k = 0; k < g; ++k) {
        std::complex<double> xi = e_of_rat((2 * v[k] * v[k + g] + v[k] - v[k + g]) / 4);
        QProductValue g_num = siegel_g(Rat(1, 2) - v[k], Rat(1, 2) - v[k + g], taus[static_cast<std::size_t>(k)], eps);
        QProductValue g_den = siegel_g(Rat(1, 2), Rat(1, 2), taus[static_cast<std::size_t>(k)], eps);
        FracVector zero2;
        zero2.entries = {Rat(0), Rat(0)};
        ThetaValue t0 = theta_raw(zero2, diag_point({taus[static_cast<std::size_t>(k)]}), eps);
        rhs *= xi * g_num.value / g_den.value * t0.value;
    }
    return std::abs(lhs.value - rhs) / std::abs(rhs);
}

double genus1_identity_residual(const IndexClass& v, std::complex<double> tau, double eps) {
    if (v.rep.genus() != 1) throw std::invalid_argument("the collapse identity is a genus-1 statement");
    SiegelPoint pt = diag_point({tau});
    LogValue lhs = big_theta_log(v, pt, eps);
    QProductValue gq = siegel_g(v.rep[0], v.rep[1], tau, eps);
    double e12n = 12.0 * static_cast<double>(v.level);
    LogValue rhs;
    rhs.log_magnitude = e12n * std::log(std::abs(gq.value));
    rhs.argument = e12n * std::atan2(gq.value.imag(), gq.value.real());
    return log_residual(lhs, rhs);
}

}  // namespace siegel
