#pragma once

#include "siegel/rational.hpp"

#include <utility>
#include <vector>

namespace siegel {

// characteristic vector v in Q^{2g}
struct FracVector {
    std::vector<Rat> entries;

    FracVector() = default;
    explicit FracVector(std::vector<Rat> e) : entries(std::move(e)) {}

    int dim() const { return static_cast<int>(entries.size()); }
    int genus() const;  // dim/2, throws on odd dim

    const Rat& operator[](int k) const { return entries[static_cast<std::size_t>(k)]; }
    Rat& operator[](int k) { return entries[static_cast<std::size_t>(k)]; }

    bool operator==(const FracVector& o) const { return entries == o.entries; }
    bool operator<(const FracVector& o) const { return entries < o.entries; }
};

// orbit representative of {<v>, <-v>} together with the exact denominator
struct IndexClass {
    FracVector rep;
    long level = 1;

    bool operator==(const IndexClass& o) const { return rep == o.rep; }
    bool operator<(const IndexClass& o) const { return rep < o.rep; }
};

// element of {0,1/2}^{2g} with its sign e(2 a_u^T a_l)
struct HalfChar {
    FracVector entries;
    int parity = 1;
};

FracVector frac_part(const FracVector& v);
FracVector negate(const FracVector& v);
FracVector scale(const FracVector& v, const Rat& c);
FracVector add(const FracVector& a, const FracVector& b);

// (v_u, v_l): first and last g entries
std::pair<std::vector<Rat>, std::vector<Rat>> split(const FracVector& v);

long exact_denominator(const FracVector& v);  // lcm over entries

// lexicographic minimum of {<v>, <-v>}
IndexClass canonical(const FracVector& v);

// all classes of exact denominator N, deduplicated mod +-, sorted
std::vector<IndexClass> enumerate_I_N(int g, long N);

// partition of {0,1/2}^{2g} by parity: (S_minus, S_plus)
std::pair<std::vector<HalfChar>, std::vector<HalfChar>> enumerate_half_chars(int g);

// (n_0, n_half) = (2^{2g-2} - 2^{g-1}, 2^{2g-2})
std::pair<long, long> n_counts(int g);

// standard index vectors, all of dimension 2g
FracVector basis_vector(int g, int j);  // e_j, 1 <= j <= 2g
FracVector ones_vector(int g);          // e = (1,...,1)
FracVector upper_ones_vector(int g);    // f = e_1 + ... + e_g

// text grammar shared with the CLI: comma-separated rationals "1/3,0,0,2/3"
FracVector parse_frac_vector(const std::string& text);
std::string to_string(const FracVector& v);

}  // namespace siegel
