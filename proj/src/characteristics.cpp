#include "siegel/characteristics.hpp"

#include <boost/integer/common_factor_rt.hpp>

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace siegel {

int FracVector::genus() const {
    if (entries.empty() || entries.size() % 2 != 0)
        throw std::invalid_argument("characteristic vector must have even positive dimension");
    return static_cast<int>(entries.size() / 2);
}

FracVector frac_part(const FracVector& v) {
    FracVector w;
    w.entries.reserve(v.entries.size());
    for (const Rat& x : v.entries) w.entries.push_back(frac_part(x));
    return w;
}

FracVector negate(const FracVector& v) {
    FracVector w;
    w.entries.reserve(v.entries.size());
    for (const Rat& x : v.entries) w.entries.push_back(-x);
    return w;
}

FracVector scale(const FracVector& v, const Rat& c) {
    FracVector w;
    w.entries.reserve(v.entries.size());
    for (const Rat& x : v.entries) w.entries.push_back(c * x);
    return w;
}

FracVector add(const FracVector& a, const FracVector& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
    FracVector w;
    w.entries.reserve(a.entries.size());
    for (int k = 0; k < a.dim(); ++k) w.entries.push_back(a[k] + b[k]);
    return w;
}

std::pair<std::vector<Rat>, std::vector<Rat>> split(const FracVector& v) {
    int g = v.genus();
    std::vector<Rat> u(v.entries.begin(), v.entries.begin() + g);
    std::vector<Rat> l(v.entries.begin() + g, v.entries.end());
    return {u, l};
}

long exact_denominator(const FracVector& v) {
    Int l = 1;
    for (const Rat& x : v.entries) l = boost::integer::lcm(l, exact_denominator(x));
    return l.convert_to<long>();
}

IndexClass canonical(const FracVector& v) {
    FracVector a = frac_part(v);
    FracVector b = frac_part(negate(v));
    IndexClass c;
    c.rep = (b < a) ? b : a;
    c.level = exact_denominator(c.rep);
    return c;
}

std::vector<IndexClass> enumerate_I_N(int g, long N) {
    if (g < 1) throw std::invalid_argument("genus must be >= 1");
    if (N < 2) throw std::invalid_argument("level must be >= 2");
    int dim = 2 * g;
    double total = std::pow(static_cast<double>(N), dim);
    if (total > 1e7)
        throw std::length_error("enumeration budget exceeded: N^{2g} > 1e7");

    std::map<std::vector<long>, IndexClass> seen;
    std::vector<long> a(static_cast<std::size_t>(dim), 0);
    while (true) {
        long gc = N;
        for (long x : a) gc = boost::integer::gcd(gc, x);
        if (gc == 1) {  // exact denominator is N
            FracVector v;
            v.entries.reserve(static_cast<std::size_t>(dim));
            for (long x : a) v.entries.push_back(Rat(x, N));
            IndexClass c = canonical(v);
            std::vector<long> key(static_cast<std::size_t>(dim));
            for (int k = 0; k < dim; ++k)
                key[static_cast<std::size_t>(k)] =
                    (c.rep[k] * N).convert_to<long>();
            seen.emplace(std::move(key), std::move(c));
        }
        int k = 0;
        for (; k < dim; ++k) {
            if (++a[static_cast<std::size_t>(k)] < N) break;
            a[static_cast<std::size_t>(k)] = 0;
        }
        if (k == dim) break;
    }

    std::vector<IndexClass> out;
    out.reserve(seen.size());
    for (auto& [key, c] : seen) out.push_back(std::move(c));
    return out;
}

std::pair<std::vector<HalfChar>, std::vector<HalfChar>> enumerate_half_chars(int g) {
    if (g < 1) throw std::invalid_argument("genus must be >= 1");
    int dim = 2 * g;
    std::vector<HalfChar> minus, plus;
    for (unsigned mask = 0; mask < (1u << dim); ++mask) {
        HalfChar h;
        h.entries.entries.resize(static_cast<std::size_t>(dim));
        for (int k = 0; k < dim; ++k)
            h.entries[k] = (mask >> k & 1u) ? Rat(1, 2) : Rat(0);
        // e(2 a_u^T a_l) = (-1)^{#\{k : a_k = a_{k+g} = 1/2\}}
        int cross = 0;
        for (int k = 0; k < g; ++k)
            if ((mask >> k & 1u) && (mask >> (k + g) & 1u)) ++cross;
        h.parity = (cross % 2 == 0) ? 1 : -1;
        (h.parity < 0 ? minus : plus).push_back(std::move(h));
    }
    return {minus, plus};
}

std::pair<long, long> n_counts(int g) {
    if (g < 1) throw std::invalid_argument("genus must be >= 1");
    long n0 = (1L << (2 * g - 2)) - (1L << (g - 1));
    long nh = 1L << (2 * g - 2);
    return {n0, nh};
}

FracVector basis_vector(int g, int j) {
    if (j < 1 || j > 2 * g) throw std::invalid_argument("basis index out of range");
    FracVector v;
    v.entries.assign(static_cast<std::size_t>(2 * g), Rat(0));
    v[j - 1] = Rat(1);
    return v;
}

FracVector ones_vector(int g) {
    FracVector v;
    v.entries.assign(static_cast<std::size_t>(2 * g), Rat(1));
    return v;
}

FracVector upper_ones_vector(int g) {
    FracVector v;
    v.entries.assign(static_cast<std::size_t>(2 * g), Rat(0));
    for (int k = 0; k < g; ++k) v[k] = Rat(1);
    return v;
}

FracVector parse_frac_vector(const std::string& text) {
    FracVector v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) v.entries.push_back(parse_rat(item));
    if (v.entries.empty()) throw std::invalid_argument("empty characteristic vector");
    return v;
}

std::string to_string(const FracVector& v) {
    std::string s;
    for (int k = 0; k < v.dim(); ++k) {
        if (k) s += ",";
        s += rat_str(v[k]);
    }
    return s;
}

}  // namespace siegel
