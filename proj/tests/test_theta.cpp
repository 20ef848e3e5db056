#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "siegel/theta.hpp"
#include "oracle.hpp"

#include <cmath>

using namespace siegel;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// the defining product evaluated at a raw vector, no canonicalization
LogValue manual_big_theta_log(const FracVector& v, long N, const SiegelPoint& Z) {
    int g = v.genus();
    long long two_g = 1ll << g;
    auto [s_minus, s_plus] = enumerate_half_chars(g);

    Rat dot = 0;
    for (int k = 0; k < g; ++k) dot += v[k] * v[k + g];
    Rat pref = Rat(-two_g * N * (two_g - 1) * (two_g + 1)) * dot;

    LogValue out;
    out.log_magnitude = 4.0 * static_cast<double>(N) * std::log(2.0);
    out.argument = 2.0 * kPi * to_double(frac_part(pref));
    double p_exp = 4.0 * static_cast<double>(N) * static_cast<double>(two_g + 1);
    double m_exp = 4.0 * static_cast<double>(N) * static_cast<double>(two_g - 1);
    for (const HalfChar& a : s_minus) {
        ThetaValue t = theta_raw(add(a.entries, negate(v)), Z);
        out.log_magnitude += p_exp * std::log(std::abs(t.value));
        out.argument += p_exp * std::atan2(t.value.imag(), t.value.real());
    }
    for (const HalfChar& b : s_plus) {
        ThetaValue t = theta_raw(b.entries, Z);
        out.log_magnitude -= m_exp * std::log(std::abs(t.value));
        out.argument -= m_exp * std::atan2(t.value.imag(), t.value.real());
    }
    return out;
}

}  // namespace

TEST_CASE("theta at the classical point") {
    SiegelPoint Zi = diag_point({{0.0, 1.0}});
    ThetaValue t = theta_raw(parse_frac_vector("0,0"), Zi);
    CHECK(std::abs(t.value.real() - oracle::kTheta00AtI) < 1e-12);
    CHECK(std::abs(t.value.imag()) < 1e-14);
    CHECK(t.tail_bound < 1e-12);
    CHECK(t.radius >= 3.0);
}

TEST_CASE("agreement with the box oracle") {
    Rng rng(101);
    for (int g : {1, 2}) {
        for (int trial = 0; trial < 8; ++trial) {
            SiegelPoint Z = random_siegel_point(g, rng);
            FracVector v;
            for (int k = 0; k < 2 * g; ++k)
                v.entries.push_back(Rat(rng.integer(13) - 6, 1 + rng.integer(7)));
            std::complex<double> fast = theta_raw(v, Z).value;
            std::complex<double> slow = oracle::box_theta(v, Z.Z());
            CHECK(std::abs(fast - slow) < 1e-9);
        }
    }
}

TEST_CASE("vanishing characteristics") {
    // genus 1: only (1/2,1/2); genus 2: six odd characteristics
    CHECK(is_vanishing_char(parse_frac_vector("1/2,1/2")));
    CHECK(!is_vanishing_char(parse_frac_vector("0,1/2")));
    CHECK(!is_vanishing_char(parse_frac_vector("1/3,1/2")));
    // shifts by integers do not change the verdict
    CHECK(is_vanishing_char(parse_frac_vector("3/2,-1/2")));
    CHECK(is_vanishing_char(parse_frac_vector("1/2,1/2,1/2,0,1/2,0")));

    Rng rng(7);
    SiegelPoint Z = random_siegel_point(2, rng);
    auto [s_minus, s_plus] = enumerate_half_chars(2);
    REQUIRE(s_minus.size() == 6);
    for (const auto& a : s_minus) {
        CHECK(is_vanishing_char(a.entries));
        ThetaValue shortcut = theta(a.entries, Z);
        CHECK(shortcut.value == std::complex<double>(0.0, 0.0));
        CHECK(shortcut.radius == 0.0);
        // the raw sum cancels down to roundoff; the certified bound covers
        // truncation only, so it can sit below the rounding noise
        ThetaValue raw = theta_raw(a.entries, Z);
        CHECK(std::abs(raw.value) < 1e-10);
    }
    for (const auto& b : s_plus) {
        CHECK(!is_vanishing_char(b.entries));
        ThetaValue t = theta(b.entries, Z);
        CHECK(std::abs(t.value) > 100.0 * t.tail_bound);
    }
}

TEST_CASE("symmetries of the sum") {
    Rng rng(23);
    SiegelPoint Z = random_siegel_point(2, rng);
    FracVector v = parse_frac_vector("1/3,2/5,1/7,3/4");

    // theta_{-v} = theta_v
    CHECK(std::abs(theta_raw(v, Z).value - theta_raw(negate(v), Z).value) < 1e-11);

    // upper integer shifts are invisible
    FracVector up = add(v, parse_frac_vector("2,-1,0,0"));
    CHECK(std::abs(theta_raw(v, Z).value - theta_raw(up, Z).value) < 1e-11);

    // a lower integer shift multiplies by e(v_u^T t)
    FracVector lo = add(v, parse_frac_vector("0,0,3,-2"));
    Rat phase = v[0] * Rat(3) + v[1] * Rat(-2);
    double ang = 2.0 * kPi * to_double(frac_part(phase));
    std::complex<double> expected =
        theta_raw(v, Z).value * std::complex<double>(std::cos(ang), std::sin(ang));
    CHECK(std::abs(theta_raw(lo, Z).value - expected) < 1e-11);
}

TEST_CASE("truncation control") {
    Rng rng(5);
    SiegelPoint Z = random_siegel_point(2, rng);
    FracVector v = parse_frac_vector("1/3,0,0,2/3");

    ThetaValue coarse = theta_raw(v, Z, 1e-6);
    ThetaValue fine = theta_raw(v, Z, 1e-13);
    CHECK(std::abs(coarse.value - fine.value) <= coarse.tail_bound + fine.tail_bound);
    CHECK(fine.radius >= coarse.radius);
    CHECK(fine.tail_bound <= 1e-13);

    try {
        theta_raw(v, Z, 1e-12, 2.0);
        FAIL("expected TruncationError");
    } catch (const TruncationError& e) {
        CHECK(e.achieved_bound > 1e-12);
        CHECK(e.achieved_bound == theta_tail_bound(2.0, Z.lambda_min, 2));
    }

    CHECK_THROWS_AS(theta_raw(v, Z, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(theta_raw(v, Z, 1e-12, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(theta_raw(parse_frac_vector("1/2,0"), Z), std::invalid_argument);
}

TEST_CASE("quotient rejects degenerate levels") {
    Rng rng(3);
    SiegelPoint Z = random_siegel_point(1, rng);
    CHECK_THROWS_AS(big_theta_log(canonical(parse_frac_vector("1/2,0")), Z),
                    DegenerateLevelError);
    CHECK_THROWS_AS(big_theta_log(canonical(parse_frac_vector("1,2")), Z),
                    DegenerateLevelError);
    CHECK_THROWS_AS(big_theta(canonical(parse_frac_vector("1/2,1/2")), Z),
                    DegenerateLevelError);
}

TEST_CASE("quotient is well defined on classes") {
    Rng rng(31);
    for (int g : {1, 2}) {
        SiegelPoint Z = random_siegel_point(g, rng);
        FracVector v;
        long N = 5;
        v.entries.assign(static_cast<std::size_t>(2 * g), Rat(0));
        v[0] = Rat(1, N);
        v[g] = Rat(3, N);
        IndexClass cls = canonical(v);
        REQUIRE(cls.level == N);
        LogValue lib = big_theta_log(cls, Z);

        // raw evaluation at other representatives of the same class
        for (const FracVector& rep :
             {v, negate(v), add(v, ones_vector(g)), add(negate(v), basis_vector(g, 1))}) {
            LogValue manual = manual_big_theta_log(rep, N, Z);
            CHECK(log_residual(lib, manual) < 1e-8);
        }
    }
}

TEST_CASE("log residual semantics") {
    LogValue a{0.0, 0.0};
    CHECK(log_residual(a, a) == 0.0);
    LogValue b{0.0, kPi};
    CHECK(log_residual(a, b) == doctest::Approx(2.0));
    LogValue c{800.0, 0.0};
    CHECK(std::isinf(log_residual(c, a)));
    // huge magnitudes compare by difference, not by value
    LogValue d{5000.0, 0.1};
    LogValue e{5000.0, 0.1 + 1e-9};
    CHECK(log_residual(d, e) < 1e-8);
}

TEST_CASE("symplectic action on the quotient") {
    Rng rng(47);
    int g = 2;
    long N = 5;
    SiegelPoint Z = random_siegel_point(g, rng);
    auto classes = enumerate_I_N(g, N);
    const IndexClass& v = classes[17];

    CHECK(check_sp_action(make_symplectic(standard_J(g)), v, Z) < 1e-8);
    CHECK(check_sp_action(make_symplectic(upper_unipotent(emat_sym(g, 1, 2))), v, Z) < 1e-8);
    CHECK(check_sp_action(transvection_set({2}, 1, g), v, Z) < 1e-8);

    // similitude factor 1 is required
    CHECK_THROWS_AS(check_sp_action(make_symplectic(similitude_diag(g, 2)), v, Z),
                    std::invalid_argument);
    // residue matrices are rejected
    CHECK_THROWS_AS(check_sp_action(make_symplectic(standard_J(g), N), v, Z),
                    std::invalid_argument);
}

TEST_CASE("certified tail bound shrinks with radius and conditioning") {
    CHECK(theta_tail_bound(4.0, 1.0, 2) < theta_tail_bound(3.0, 1.0, 2));
    CHECK(theta_tail_bound(3.0, 2.0, 2) < theta_tail_bound(3.0, 0.5, 2));
    CHECK(theta_tail_bound(3.0, 1.0, 3) > theta_tail_bound(3.0, 1.0, 2));
    CHECK(theta_tail_bound(6.0, 1.0, 1) < 1e-20);
}
