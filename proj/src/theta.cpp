#include "siegel/theta.hpp"

#include <boost/integer/common_factor_rt.hpp>

#include <cmath>

namespace siegel {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Neumaier compensated accumulator.
struct Accum {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double total() const { return sum + comp; }
};

// Lattice walk over all n with (n+a)^T Y (n+a) <= R^2, where Y = G^T G and
// G is upper triangular.  Row k of G only touches coordinates >= k, so the
// coordinates are fixed from the last one down and each level solves a
// quadratic inequality for an integer interval.
struct EllipsoidSum {
    const Eigen::MatrixXd& G;
    const Eigen::MatrixXd& X;
    const std::vector<double>& a;
    const std::vector<long long>& lower_num;  // numerators of v_l over common_q
    long long common_q;
    double base_frac;  // fractional part of a^T v_l
    double R2;
    int g;

    Eigen::VectorXd m;
    std::vector<long long> n;
    std::vector<double> used;  // used[k] = sum of squares of rows > k
    Accum re, im;

    EllipsoidSum(const Eigen::MatrixXd& G_, const Eigen::MatrixXd& X_,
                 const std::vector<double>& a_, const std::vector<long long>& ln_,
                 long long q_, double base_, double R2_)
        : G(G_), X(X_), a(a_), lower_num(ln_), common_q(q_), base_frac(base_), R2(R2_),
          g(static_cast<int>(G_.rows())), m(g), n(static_cast<std::size_t>(g), 0),
          used(static_cast<std::size_t>(g) + 1, 0.0) {}

    void walk(int k) {
        if (k < 0) {
            emit();
            return;
        }
        double c = 0.0;
        for (int j = k + 1; j < g; ++j) c += G(k, j) * m(j);
        double T = R2 - used[static_cast<std::size_t>(k) + 1];
        if (T < 0) return;
        double half = std::sqrt(T);
        double lo = (-half - c) / G(k, k) - a[static_cast<std::size_t>(k)];
        double hi = (half - c) / G(k, k) - a[static_cast<std::size_t>(k)];
        long long nlo = static_cast<long long>(std::ceil(lo - 1e-9));
        long long nhi = static_cast<long long>(std::floor(hi + 1e-9));
        for (long long nk = nlo; nk <= nhi; ++nk) {
            m(k) = static_cast<double>(nk) + a[static_cast<std::size_t>(k)];
            n[static_cast<std::size_t>(k)] = nk;
            double s = G(k, k) * m(k) + c;
            used[static_cast<std::size_t>(k)] =
                used[static_cast<std::size_t>(k) + 1] + s * s;
            if (used[static_cast<std::size_t>(k)] <= R2 * (1.0 + 1e-9)) walk(k - 1);
        }
    }

    void emit() {
        double quad = used[0];                     // m^T Y m
        double xq = m.dot(X * m);                  // m^T X m
        long long r = 0;
        for (int j = 0; j < g; ++j)
            r += n[static_cast<std::size_t>(j)] % common_q * lower_num[static_cast<std::size_t>(j)];
        r %= common_q;
        if (r < 0) r += common_q;
        double phase = kPi * xq +
                       2.0 * kPi * (static_cast<double>(r) / static_cast<double>(common_q) +
                                    base_frac);
        double mag = std::exp(-kPi * quad);
        re.add(mag * std::cos(phase));
        im.add(mag * std::sin(phase));
    }
};

}  // namespace

bool is_vanishing_char(const FracVector& v) {
    int g = v.genus();
    std::vector<Rat> f(v.entries.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] = frac_part(v.entries[k]);
        if (f[k] != 0 && f[k] != Rat(1, 2)) return false;
    }
    int cross = 0;
    for (int k = 0; k < g; ++k)
        if (f[static_cast<std::size_t>(k)] == Rat(1, 2) &&
            f[static_cast<std::size_t>(k + g)] == Rat(1, 2))
            ++cross;
    return cross % 2 == 1;
}

double theta_tail_bound(double radius, double lambda_min, int g) {
    double factor = 2.0 + std::sqrt(2.0 / lambda_min);
    return std::pow(factor, g) * std::exp(-kPi * radius * radius / 2.0);
}

ThetaValue theta_raw(const FracVector& v, const SiegelPoint& Z, double eps,
                     double radius_cap) {
    int g = Z.genus();
    if (v.genus() != g) throw std::invalid_argument("characteristic dimension does not match the genus");
    if (!(eps > 0)) throw std::invalid_argument("tolerance must be positive");
    if (!(radius_cap > 0)) throw std::invalid_argument("radius cap must be positive");

    double R = std::min(3.0, radius_cap);
    while (theta_tail_bound(R, Z.lambda_min, g) > eps) {
        if (R >= radius_cap)
            throw TruncationError(
                "certified tail bound " +
                    std::to_string(theta_tail_bound(radius_cap, Z.lambda_min, g)) +
                    " at the radius cap exceeds the requested tolerance",
                theta_tail_bound(radius_cap, Z.lambda_min, g));
        R = std::min(R * 1.3, radius_cap);
    }

    std::vector<double> a(static_cast<std::size_t>(g));
    Rat base = 0;
    Int q_lcm = 1;
    for (int k = 0; k < g; ++k) {
        Rat ak = frac_part(v[k]);
        a[static_cast<std::size_t>(k)] = to_double(ak);
        base += ak * v[k + g];
        q_lcm = boost::integer::lcm(q_lcm, exact_denominator(v[k + g]));
    }
    long long common_q = q_lcm.convert_to<long long>();
    std::vector<long long> lower_num(static_cast<std::size_t>(g));
    for (int k = 0; k < g; ++k) {
        Rat scaled = v[k + g] * Rat(q_lcm);
        lower_num[static_cast<std::size_t>(k)] =
            boost::multiprecision::numerator(scaled).convert_to<long long>() %
            common_q;
    }
    double base_frac = to_double(frac_part(base));

    EllipsoidSum walker(Z.chol_u, Z.X, a, lower_num, common_q, base_frac, R * R);
    walker.walk(g - 1);

    ThetaValue out;
    out.value = {walker.re.total(), walker.im.total()};
    out.radius = R;
    out.tail_bound = theta_tail_bound(R, Z.lambda_min, g);
    return out;
}

ThetaValue theta(const FracVector& v, const SiegelPoint& Z, double eps, double radius_cap) {
    if (is_vanishing_char(v)) return ThetaValue{};
    return theta_raw(v, Z, eps, radius_cap);
}

LogValue log_value(const std::complex<double>& z) {
    return LogValue{std::log(std::abs(z)), std::atan2(z.imag(), z.real())};
}

double log_residual(const LogValue& a, const LogValue& b) {
    double d = a.log_magnitude - b.log_magnitude;
    if (!(d < 700.0)) return std::numeric_limits<double>::infinity();
    double r = std::exp(d);
    double da = a.argument - b.argument;
    double x = r * std::cos(da) - 1.0;
    double y = r * std::sin(da);
    return std::sqrt(x * x + y * y);
}

LogValue big_theta_log(const IndexClass& v, const SiegelPoint& Z, double eps,
                       double radius_cap) {
    long N = v.level;
    if (N < 3)
        throw DegenerateLevelError(
            "the quotient becomes identically zero when N=2 and degenerates at N=1; "
            "classes must have level at least 3 (got " + std::to_string(N) + ")");
    int g = Z.genus();
    if (v.rep.genus() != g)
        throw std::invalid_argument("class dimension does not match the genus");

    auto [s_minus, s_plus] = enumerate_half_chars(g);
    long long two_g = 1ll << g;
    long long p_exp = 4ll * N * (two_g + 1);
    long long m_exp = 4ll * N * (two_g - 1);

    Rat dot = 0;
    for (int k = 0; k < g; ++k) dot += v.rep[k] * v.rep[k + g];
    Rat pref = Rat(-two_g * N * (two_g - 1) * (two_g + 1)) * dot;

    LogValue out;
    out.log_magnitude = 4.0 * static_cast<double>(N) * std::log(2.0);
    out.argument = 2.0 * kPi * to_double(frac_part(pref));

    for (const HalfChar& a : s_minus) {
        FracVector w = add(a.entries, negate(v.rep));
        ThetaValue t = theta_raw(w, Z, eps, radius_cap);
        if (std::abs(t.value) <= t.tail_bound)
            throw EvaluationError(
                "a numerator theta factor is smaller than its certified tail bound");
        out.log_magnitude += static_cast<double>(p_exp) * std::log(std::abs(t.value));
        out.argument += static_cast<double>(p_exp) * std::atan2(t.value.imag(), t.value.real());
    }
    for (const HalfChar& b : s_plus) {
        ThetaValue t = theta_raw(b.entries, Z, eps, radius_cap);
        if (std::abs(t.value) <= t.tail_bound)
            throw EvaluationError(
                "a denominator theta factor is smaller than its certified tail bound");
        out.log_magnitude -= static_cast<double>(m_exp) * std::log(std::abs(t.value));
        out.argument -= static_cast<double>(m_exp) * std::atan2(t.value.imag(), t.value.real());
    }
    return out;
}

std::complex<double> big_theta(const IndexClass& v, const SiegelPoint& Z, double eps,
                               double radius_cap) {
    LogValue lv = big_theta_log(v, Z, eps, radius_cap);
    double mag = std::exp(lv.log_magnitude);
    return {mag * std::cos(lv.argument), mag * std::sin(lv.argument)};
}

double check_sp_action(const SymplecticMatrix& alpha, const IndexClass& v,
                       const SiegelPoint& Z, double eps, double radius_cap) {
    if (alpha.level != 0)
        throw std::invalid_argument("the action check needs an integral matrix, not residues");
    if (alpha.nu != 1)
        throw std::invalid_argument("the action check needs similitude factor 1");
    IndexClass w = act_on_index(alpha.m, v.rep);
    LogValue lhs = big_theta_log(w, Z, eps, radius_cap);
    LogValue rhs = big_theta_log(v, act_on_H(alpha, Z), eps, radius_cap);
    return log_residual(lhs, rhs);
}

}  // namespace siegel
