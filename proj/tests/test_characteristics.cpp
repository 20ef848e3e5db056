#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "siegel/characteristics.hpp"

#include <map>
#include <set>

using namespace siegel;

TEST_CASE("fractional part and floor") {
    CHECK(frac_part(Rat(7, 3)) == Rat(1, 3));
    CHECK(frac_part(Rat(-1, 3)) == Rat(2, 3));
    CHECK(frac_part(Rat(-2)) == Rat(0));
    CHECK(rat_floor(Rat(-7, 2)) == Int(-4));
    CHECK(rat_floor(Rat(7, 2)) == Int(3));
    CHECK(b2(Rat(0)) == Rat(1, 6));
    CHECK(b2(Rat(1, 2)) == Rat(-1, 12));
    CHECK(b2(Rat(1, 3)) == Rat(-1, 18));
}

TEST_CASE("class counts per level, genus 1") {
    std::map<long, std::size_t> expected{{2, 3}, {3, 4}, {4, 6}, {5, 12}, {6, 12}, {7, 24}};
    for (auto [N, count] : expected) {
        auto cls = enumerate_I_N(1, N);
        CHECK(cls.size() == count);
        for (const auto& c : cls) {
            CHECK(c.level == N);
            CHECK(exact_denominator(c.rep) == N);
        }
    }
}

TEST_CASE("class counts, genus 2") {
    CHECK(enumerate_I_N(2, 3).size() == 40);
    CHECK(enumerate_I_N(2, 5).size() == 312);
}

TEST_CASE("classes are canonical and distinct") {
    auto cls = enumerate_I_N(2, 3);
    std::set<FracVector> reps;
    for (const auto& c : cls) {
        reps.insert(c.rep);
        CHECK(canonical(c.rep) == c);
        CHECK(canonical(negate(c.rep)) == c);
    }
    CHECK(reps.size() == cls.size());
}

TEST_CASE("enumeration budget is enforced") {
    CHECK_THROWS_AS(enumerate_I_N(3, 50), std::length_error);
    CHECK_THROWS_AS(enumerate_I_N(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_I_N(1, 1), std::invalid_argument);
}

TEST_CASE("half-integral census") {
    long minus_sizes[] = {1, 6, 28};
    long plus_sizes[] = {3, 10, 36};
    for (int g = 1; g <= 3; ++g) {
        auto [mi, pl] = enumerate_half_chars(g);
        CHECK(static_cast<long>(mi.size()) == minus_sizes[g - 1]);
        CHECK(static_cast<long>(pl.size()) == plus_sizes[g - 1]);
        CHECK(static_cast<long>(mi.size()) == (1L << (g - 1)) * ((1L << g) - 1));
        CHECK(static_cast<long>(pl.size()) == (1L << (g - 1)) * ((1L << g) + 1));
        for (const auto& h : mi) CHECK(h.parity == -1);
        for (const auto& h : pl) CHECK(h.parity == 1);
    }
}

TEST_CASE("coordinate counts over the odd characteristics") {
    // at every position, n_0 odd characteristics have entry 0 and n_half have 1/2
    for (int g = 1; g <= 3; ++g) {
        auto [mi, pl] = enumerate_half_chars(g);
        auto [n0, nh] = n_counts(g);
        CHECK(n0 + nh == static_cast<long>(mi.size()));
        for (int k = 0; k < 2 * g; ++k) {
            long zeros = 0, halves = 0;
            for (const auto& h : mi)
                (h.entries[k] == Rat(0) ? zeros : halves) += 1;
            CHECK(zeros == n0);
            CHECK(halves == nh);
        }
    }
}

TEST_CASE("canonical representative is the smaller of the two lifts") {
    FracVector v = parse_frac_vector("2/3,0,0,1/3");
    IndexClass c = canonical(v);
    CHECK(to_string(c.rep) == "1/3,0,0,2/3");
    CHECK(c.level == 3);

    // shifting by integers does not change the class
    FracVector shifted = add(v, parse_frac_vector("4,-2,1,3"));
    CHECK(canonical(shifted) == c);

    // a vector equal to its own negation mod 1
    FracVector w = parse_frac_vector("1/2,1/2,0,0");
    CHECK(canonical(w).rep == frac_part(w));
}

TEST_CASE("text grammar round trips") {
    for (const char* text : {"1/3,0,0,2/3", "0,0", "1/2,1/2,1/2,1/2", "1/5,2/5,3/5,4/5"}) {
        FracVector v = parse_frac_vector(text);
        CHECK(to_string(v) == text);
        CHECK(parse_frac_vector(to_string(v)) == v);
    }
    CHECK(parse_rat(" -3/6 ") == Rat(-1, 2));
    CHECK(rat_str(Rat(-1, 2)) == "-1/2");
    CHECK_THROWS_AS(parse_frac_vector(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat("x"), std::invalid_argument);
}

TEST_CASE("standard vectors") {
    CHECK(basis_vector(2, 1) == parse_frac_vector("1,0,0,0"));
    CHECK(basis_vector(2, 4) == parse_frac_vector("0,0,0,1"));
    CHECK(ones_vector(2) == parse_frac_vector("1,1,1,1"));
    CHECK(upper_ones_vector(2) == parse_frac_vector("1,1,0,0"));
    CHECK_THROWS_AS(basis_vector(2, 5), std::invalid_argument);
    CHECK_THROWS_AS(basis_vector(2, 0), std::invalid_argument);

    CHECK(canonical(scale(upper_ones_vector(2), Rat(1, 3))).level == 3);
    CHECK(exact_denominator(scale(ones_vector(2), Rat(1, 6))) == 6);
}

TEST_CASE("split and genus guards") {
    FracVector v = parse_frac_vector("1/3,0,1/4,2/3");
    auto [u, l] = split(v);
    CHECK(u == std::vector<Rat>{Rat(1, 3), Rat(0)});
    CHECK(l == std::vector<Rat>{Rat(1, 4), Rat(2, 3)});
    CHECK(exact_denominator(v) == 12);

    FracVector odd;
    odd.entries = {Rat(1), Rat(2), Rat(3)};
    CHECK_THROWS_AS(odd.genus(), std::invalid_argument);
}
