#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "siegel/symplectic.hpp"

#include <cstdio>
#include <set>

using namespace siegel;

namespace {

IMat ident(int n) { return IMat(IMat::Identity(n, n)); }

}  // namespace

TEST_CASE("similitude relation") {
    for (int g : {1, 2, 3}) {
        CHECK(is_gsp(standard_J(g)) == 1);
        CHECK(is_gsp(ident(2 * g)) == 1);
        CHECK(is_gsp(similitude_diag(g, 3)) == 3);
        CHECK(is_gsp(upper_unipotent(emat_sym(g, 1, 1))) == 1);
        CHECK(is_gsp(lower_unipotent(emat_sym(g, 1, 1))) == 1);
    }
    IMat bad = ident(4);
    bad(0, 1) = 1;  // not symplectic: A = I + E_12 with D = I
    CHECK(!is_gsp(bad));
    CHECK(!is_gsp_mod(bad, 5));
    // entries reduce mod N before the check
    IMat shifted = IMat(5 * similitude_diag(2, 1) + similitude_diag(2, 2));
    CHECK(is_gsp_mod(shifted, 5).value_or(0) == 2);
    CHECK_THROWS_AS(make_symplectic(bad), std::invalid_argument);
}

TEST_CASE("elementary transvections match their displays") {
    int g = 2;
    // [[I,O],[E'_11,I]] transposed
    SymplecticMatrix s = elementary(ElemKind::C3, g + 1, 1, 1, g);
    IMat D = IMat::Zero(2 * g, 2 * g);
    D.topLeftCorner(g, g) = ident(g);
    D.bottomRightCorner(g, g) = ident(g);
    D.bottomLeftCorner(g, g) = emat_sym(g, 1, 1);
    CHECK(s.m == IMat(D.transpose()));
    CHECK(s.m == upper_unipotent(emat_sym(g, 1, 1)));
    CHECK(s.nu == 1);

    // C4 flips the sign of C3
    CHECK(elementary(ElemKind::C4, g + 1, 1, 1, g).m ==
          elementary(ElemKind::C3, g + 1, 1, -1, g).m);
    // C2 flips the sign of C1
    CHECK(elementary(ElemKind::C2, 1, 2, 1, g).m == elementary(ElemKind::C1, 1, 2, -1, g).m);
    // the rotation transposes to the standard J
    CHECK(elementary(ElemKind::Rotation, 1, 1, 1, g).m == standard_J(g));

    CHECK_THROWS_AS(elementary(ElemKind::C1, 1, 1, 1, g), std::invalid_argument);
    CHECK_THROWS_AS(elementary(ElemKind::C3, 1, 1, 1, g), std::invalid_argument);
    CHECK_THROWS_AS(elementary(ElemKind::C1, 1, 2, 2, g), std::invalid_argument);
}

TEST_CASE("transvection sets") {
    // single transvection agrees with the elementary builder
    CHECK(transvection_set({1}, 2, 2).m == elementary(ElemKind::C1, 1, 2, 1, 2).m);

    SymplecticMatrix s = transvection_set({1, 3}, 2, 3);
    CHECK(s.nu == 1);
    CHECK(is_gsp(s.m) == 1);

    CHECK_THROWS_AS(transvection_set({2}, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(transvection_set({1, 1}, 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(transvection_set({4}, 2, 3), std::invalid_argument);
}

TEST_CASE("block builders validate their inputs") {
    CHECK_THROWS_AS(upper_unipotent(emat(2, 1, 2)), std::invalid_argument);  // not symmetric
    CHECK_THROWS_AS(gl_block(IMat(2 * ident(2))), std::invalid_argument);    // det 4
    IMat A = ident(2);
    A(0, 1) = 3;
    IMat M = gl_block(A);
    CHECK(is_gsp(M) == 1);
    // lower-right block is the inverse transpose: A^T D = I
    CHECK(IMat(A.transpose() * M.bottomRightCorner(2, 2)) == ident(2));
}

TEST_CASE("action on the upper half-space matches the direct formula") {
    Rng rng(11);
    for (int g : {1, 2, 3}) {
        SiegelPoint Z = random_siegel_point(g, rng);
        IMat W = standard_J(g);
        for (int r = 1; r <= g; ++r) W = IMat(W * upper_unipotent(emat_sym(g, 1, r)));
        SymplecticMatrix alpha = make_symplectic(W);
        SiegelPoint img = act_on_H(alpha, Z);

        Eigen::MatrixXcd Zc = Z.Z();
        Eigen::MatrixXcd Wd = W.cast<double>().cast<std::complex<double>>();
        Eigen::MatrixXcd up = Wd.topLeftCorner(g, g) * Zc + Wd.topRightCorner(g, g);
        Eigen::MatrixXcd lo = Wd.bottomLeftCorner(g, g) * Zc + Wd.bottomRightCorner(g, g);
        Eigen::MatrixXcd direct = up * lo.inverse();
        CHECK((img.Z() - direct).cwiseAbs().maxCoeff() < 1e-10);
    }
    // the similitude diag(I, nu I) sends Z to Z (nu I)^{-1} = Z / nu
    SiegelPoint Z = random_siegel_point(2, rng);
    SiegelPoint scaled = act_on_H(make_symplectic(similitude_diag(2, 3)), Z);
    CHECK((scaled.Y - Z.Y / 3.0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("index action composes contravariantly on points, covariantly on classes") {
    Rng rng(7);
    int g = 2;
    IMat Am = IMat(standard_J(g) * upper_unipotent(emat_sym(g, 1, 2)));
    IMat Bm = IMat(upper_unipotent(emat_sym(g, 2, 2)) * standard_J(g));
    FracVector v = parse_frac_vector("1/5,2/5,0,3/5");
    CHECK(act_on_index(IMat(Am * Bm), v) ==
          act_on_index(Bm, act_on_index(Am, v).rep));

    // the index action is trivial for -I and for integer translates
    IMat neg = IMat(-ident(2 * g));
    CHECK(act_on_index(neg, v) == canonical(v));

    // level-matched residue matrices act like their integral lifts
    SymplecticMatrix lift = make_symplectic(Am);
    SymplecticMatrix res = make_symplectic(Am, 5);
    IndexClass c = canonical(v);
    CHECK(act_on_index(lift, c) == act_on_index(res, c));
    IndexClass wrong = canonical(parse_frac_vector("1/3,0,0,0"));
    CHECK_THROWS_AS(act_on_index(res, wrong), std::invalid_argument);
}

TEST_CASE("congruence shapes") {
    long N = 3;
    int g = 2;
    CongruenceFlags f = congruence_tests(ident(2 * g), N);
    CHECK(f.principal);
    CHECK(f.upper);
    CHECK(f.lower);

    f = congruence_tests(upper_unipotent(emat_sym(g, 1, 2)), N);
    CHECK(!f.principal);
    CHECK(f.upper);
    CHECK(!f.lower);

    f = congruence_tests(lower_unipotent(emat_sym(g, 1, 2)), N);
    CHECK(!f.principal);
    CHECK(!f.upper);
    CHECK(f.lower);

    f = congruence_tests(upper_unipotent(IMat(3 * emat_sym(g, 1, 2))), N);
    CHECK(f.principal);
    CHECK(f.upper);
    CHECK(f.lower);

    f = congruence_tests(standard_J(g), N);
    CHECK(!f.principal);
    CHECK(!f.upper);
    CHECK(!f.lower);

    // 2I is a perfectly good similitude (nu = 4); reject only non-similitudes
    f = congruence_tests(IMat(2 * ident(2 * g)), N);
    CHECK(!f.principal);
    IMat bad = ident(2 * g);
    bad(0, 1) = 1;  // lone GL-corner shear, no compensating inverse transpose
    CHECK_THROWS_AS(congruence_tests(bad, N), std::invalid_argument);
}

TEST_CASE("canonical representatives up to sign") {
    long N = 7;
    IMat M = IMat(standard_J(2) * upper_unipotent(emat_sym(2, 1, 1)));
    IMat a = canonical_pm(M, N);
    IMat b = canonical_pm(IMat(-M), N);
    CHECK(a == b);
    CHECK(a.minCoeff() >= 0);
    CHECK(a.maxCoeff() < N);
    CHECK(canonical_pm(a, N) == a);
}

TEST_CASE("group closure sizes at genus 1") {
    // |SL_2(Z/N)| / |{+-1}|
    GroupTable t2 = bfs_group(1, 2, sp_generators(1));
    CHECK(t2.size() == 6);
    GroupTable t3 = bfs_group(1, 3, sp_generators(1));
    CHECK(t3.size() == 12);
    GroupTable t5 = bfs_group(1, 5, sp_generators(1));
    CHECK(t5.size() == 60);

    // similitude closure adds the unit cosets
    GroupTable g5 = bfs_group(1, 5, gsp_generators(1, 5));
    CHECK(g5.size() == 240);

    CHECK(t3.find(ident(2)).has_value());
    CHECK(t3.find(IMat(-standard_J(1))) == t3.find(standard_J(1)));
    CHECK_THROWS_AS(bfs_group(1, 5, sp_generators(1), 10), std::length_error);

    IMat nonsimilitude = ident(2);
    nonsimilitude(0, 0) = 0;
    CHECK_THROWS_AS(bfs_group(1, 3, {nonsimilitude}), std::invalid_argument);
}

TEST_CASE("every table element satisfies the mod-N relation") {
    GroupTable t = bfs_group(1, 3, gsp_generators(1, 3));
    CHECK(t.size() == 24);
    std::set<long long> nus;
    for (std::size_t i = 0; i < t.size(); ++i) {
        SymplecticMatrix e = t.element(i);
        auto nu = is_gsp_mod(e.m, 3);
        REQUIRE(nu.has_value());
        CHECK(*nu == e.nu);
        nus.insert(e.nu);
    }
    CHECK(nus == std::set<long long>{1, 2});
}

TEST_CASE("cache round trip") {
    std::string path = "test_group_cache.bin";
    std::remove(path.c_str());
    std::vector<IMat> gens = sp_generators(1);
    std::uint64_t h = generator_hash(1, 3, gens);

    GroupTable t = bfs_group_cached(1, 3, gens, path);
    CHECK(t.size() == 12);

    auto loaded = load_group_table(path, 1, 3, h);
    REQUIRE(loaded.has_value());
    CHECK(loaded->size() == t.size());
    CHECK(loaded->gen_hash == t.gen_hash);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(loaded->matrix(i) == t.matrix(i));

    // stale hash is rejected, wrong parameters are rejected
    CHECK(!load_group_table(path, 1, 3, h + 1).has_value());
    CHECK(!load_group_table(path, 2, 3, h).has_value());
    CHECK(!load_group_table("no_such_file.bin", 1, 3, h).has_value());

    // second cached call reloads rather than recomputing; equality is observable
    GroupTable again = bfs_group_cached(1, 3, gens, path);
    CHECK(again.size() == t.size());
    std::remove(path.c_str());
}

TEST_CASE("stabilizers in the similitude table") {
    GroupTable t = bfs_group(1, 3, gsp_generators(1, 3));

    // the empty index set is fixed by everything
    CHECK(stabilizer(t, {}).size() == t.size());

    // the full standard set pins down the identity
    std::vector<IndexClass> W;
    W.push_back(canonical(scale(basis_vector(1, 1), Rat(1, 3))));
    W.push_back(canonical(scale(basis_vector(1, 2), Rat(1, 3))));
    W.push_back(canonical(scale(ones_vector(1), Rat(1, 3))));
    auto stab = stabilizer(t, W);
    REQUIRE(stab.size() == 1);
    CHECK(t.matrix(stab[0]) == ident(2));

    IndexClass off_level = canonical(scale(basis_vector(1, 1), Rat(1, 5)));
    CHECK_THROWS_AS(stabilizer(t, {off_level}), std::invalid_argument);
}
