#include "siegel/orders.hpp"

#include "siegel/symplectic.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace siegel {

std::string OrderSignature::str() const {
    std::string s = "(";
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (k) s += ",";
        s += rat_str(entries[k]);
    }
    s += ")";
    return s;
}

OrderSignature order_signature(const FracVector& v, long level) {
    int g = v.genus();
    auto [n0, nh] = n_counts(g);
    OrderSignature sig;
    sig.level = level;
    sig.entries.reserve(v.entries.size());
    for (const Rat& x : v.entries)
        sig.entries.push_back(Rat(n0) * b2(frac_part(Rat(1, 2) + x)) +
                              Rat(nh) * b2(frac_part(x)));
    return sig;
}

OrderSignature order_signature(const IndexClass& v) {
    return order_signature(v.rep, v.level);
}

FracVector j_rotate(const FracVector& v) {
    int g = v.genus();
    FracVector w;
    w.entries.resize(v.entries.size());
    for (int k = 0; k < g; ++k) {
        w[k] = v[k + g];
        w[k + g] = -v[k];
    }
    return w;
}

std::pair<OrderSignature, OrderSignature> signature_pair(const IndexClass& v) {
    return {order_signature(v), order_signature(j_rotate(v.rep), v.level)};
}

bool has_half_integral_pair(const FracVector& v) {
    int g = v.genus();
    auto in_grid = [](const Rat& x) {
        Rat f = frac_part(x);
        return f == 0 || f == Rat(1, 2);
    };
    for (int k = 0; k < g; ++k)
        if (in_grid(v[k]) && in_grid(v[k + g])) return true;
    return false;
}

std::vector<long> case_candidates(long V, int g, long N, CaseKind kind) {
    if (g < 2) throw std::invalid_argument("the case analysis needs genus >= 2");
    if (N < 2) throw std::invalid_argument("level must be >= 2");
    long two_gm1 = 1l << (g - 1);
    long d = 2 * two_gm1 - 1;  // 2^g - 1
    V = ((V % N) + N) % N;

    std::vector<Rat> raw;
    switch (kind) {
        case CaseKind::BothLower:
            raw.push_back(Rat(V));
            raw.push_back(Rat(two_gm1 * N, d) - V);
            break;
        case CaseKind::LowerUpper:
            raw.push_back(Rat(N - V));
            raw.push_back(Rat(V) + Rat((two_gm1 - 1) * N, d));
            break;
        case CaseKind::UpperLower:
            raw.push_back(Rat(N - V));
            raw.push_back(Rat(V) - Rat((two_gm1 - 1) * N, d));
            break;
        case CaseKind::BothUpper:
            raw.push_back(Rat(V));
            raw.push_back(Rat(N) + Rat((two_gm1 - 1) * N, d) - V);
            break;
    }

    bool upper_half = (kind == CaseKind::LowerUpper || kind == CaseKind::BothUpper);
    std::set<long> out;
    for (const Rat& x : raw) {
        if (exact_denominator(x) != 1) continue;
        long val = boost::multiprecision::numerator(x).convert_to<long>();
        val = ((val % N) + N) % N;
        bool in_range = upper_half ? (2 * val >= N) : (2 * val < N);
        if (in_range) out.insert(val);
    }
    return std::vector<long>(out.begin(), out.end());
}

FiberCandidates special_fiber_candidates(FiberTarget target, int g, long N, int j) {
    if (g < 2) throw std::invalid_argument("the fiber analysis needs genus >= 2");
    if (N < 3) throw std::invalid_argument("level must be >= 3");
    if (target == FiberTarget::Ej && (j < 1 || j > 2 * g))
        throw std::invalid_argument("basis index must lie in 1..2g");

    std::set<Rat> active{Rat(1, N), Rat(N - 1, N)};
    std::vector<Rat> scalars{Rat(1, N)};
    if (N == (1l << g) - 1) {
        active.insert(Rat(N - 1, 2 * N));
        active.insert(Rat(N + 1, 2 * N));
        scalars.push_back(Rat(N - 1, 2 * N));
    }
    std::vector<Rat> active_sorted(active.begin(), active.end());
    std::vector<Rat> inert{Rat(0)};

    FracVector tgt;
    switch (target) {
        case FiberTarget::F:
            tgt = upper_ones_vector(g);
            break;
        case FiberTarget::E:
            tgt = ones_vector(g);
            break;
        case FiberTarget::Ej:
            tgt = basis_vector(g, j);
            break;
    }

    FiberCandidates out;
    out.per_coordinate.resize(static_cast<std::size_t>(2 * g));
    for (int k = 0; k < 2 * g; ++k)
        out.per_coordinate[static_cast<std::size_t>(k)] =
            (tgt[k] != 0) ? active_sorted : inert;

    std::set<IndexClass> classes;
    for (const Rat& c : scalars) classes.insert(canonical(scale(tgt, c)));
    out.assembled.assign(classes.begin(), classes.end());
    return out;
}

bool primitivity_precondition(int g, long N) {
    if (g < 2) return false;
    if (N == 1 || N == 2 || N == 4) return false;
    long d = (1l << g) - 1;
    if (N % d == 0) return false;
    return true;
}

std::vector<SignatureClass> signature_collision_classes(int g, long N) {
    if (g < 2) throw std::invalid_argument("signature grouping needs genus >= 2");
    std::vector<IndexClass> all = enumerate_I_N(g, N);
    std::map<std::string, std::vector<IndexClass>> groups;
    for (const IndexClass& v : all) {
        auto [s, rs] = signature_pair(v);
        groups[s.str() + "|" + rs.str()].push_back(v);
    }
    std::vector<SignatureClass> out;
    out.reserve(groups.size());
    for (auto& [key, members] : groups) out.push_back(SignatureClass{key, std::move(members)});
    return out;
}

namespace {

bool transport_column_ok(const Rat& x) {
    long d = exact_denominator(frac_part(x)).convert_to<long>();
    return d != 1 && d != 2 && d != 4;
}

std::vector<int> half_integral_pairs(const FracVector& v) {
    int g = v.genus();
    auto in_grid = [](const Rat& x) {
        Rat f = frac_part(x);
        return f == 0 || f == Rat(1, 2);
    };
    std::vector<int> ks;
    for (int k = 0; k < g; ++k)
        if (in_grid(v[k]) && in_grid(v[k + g])) ks.push_back(k + 1);
    return ks;
}

}  // namespace

std::string exact_separation(const IndexClass& v, const IndexClass& vp) {
    int g = v.rep.genus();
    if (vp.rep.genus() != g) throw std::invalid_argument("classes must share the genus");
    if (g < 2) return "";
    if (v == vp) return "";

    bool bad_v = has_half_integral_pair(v.rep);
    bool bad_vp = has_half_integral_pair(vp.rep);
    if (bad_v != bad_vp) return "pair-structure";
    if (!bad_v)
        return signature_pair(v) != signature_pair(vp) ? "signature" : "";

    FracVector a = v.rep, b = vp.rep;
    auto find_column = [&](const FracVector& x) {
        for (int k = 0; k < g; ++k)
            if (transport_column_ok(x[k])) return k + 1;
        return 0;
    };
    int col = find_column(a);
    if (col == 0) {
        a = j_rotate(a);
        b = j_rotate(b);
        col = find_column(a);
        if (col == 0) return "";
    }
    std::vector<int> ks = half_integral_pairs(a);
    if (ks.empty()) return "";
    SymplecticMatrix beta = transvection_set(ks, col, g);
    IndexClass w = act_on_index(beta.m, a);
    IndexClass wp = act_on_index(beta.m, b);
    bool bad_w = has_half_integral_pair(w.rep);
    bool bad_wp = has_half_integral_pair(wp.rep);
    if (bad_w) return "";  // transport failed to clear the pairs; leave to sampling
    if (bad_wp) return "transport+pair-structure";
    return signature_pair(w) != signature_pair(wp) ? "transport+signature" : "";
}

}  // namespace siegel
