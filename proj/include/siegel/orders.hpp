#pragma once

#include "siegel/characteristics.hpp"

#include <string>
#include <vector>

namespace siegel {

// Exact vanishing-order data of the theta-constant quotient along diagonal
// degenerations: entry k is  n_0 B2(<1/2 + v_k>) + n_half B2(<v_k>)  with
// the counts n_0, n_half of zero and half entries over the odd half-integral
// characteristics.  Equal signatures are necessary for two quotients to
// agree (up to any nonzero power) when neither class has a coordinate pair
// inside {0,1/2}^2.
struct OrderSignature {
    long level = 1;
    std::vector<Rat> entries;
    bool operator==(const OrderSignature& o) const {
        return level == o.level && entries == o.entries;
    }
    bool operator!=(const OrderSignature& o) const { return !(*this == o); }
    std::string str() const;
};

OrderSignature order_signature(const FracVector& v, long level);
OrderSignature order_signature(const IndexClass& v);

// (v_u; v_l) -> (v_l; -v_u), the index action of the rotation matrix; used
// to pair a signature with the one constraining the other coordinate block.
FracVector j_rotate(const FracVector& v);

// (signature of v, signature of the rotated vector).
std::pair<OrderSignature, OrderSignature> signature_pair(const IndexClass& v);

// True iff some coordinate pair (<v_k>, <v_{k+g}>) lies in {0, 1/2}^2.
bool has_half_integral_pair(const FracVector& v);

// Coordinatewise case analysis for equal signatures.  V and the result are
// residues mod N standing for N<v_k> and N<v_k'>; the case names which half
// of [0,1) each fractional part occupies.  Results are filtered to the
// case's half-range for V'; the extra branch beyond the trivial solution
// survives only when (2^g - 1) divides N.
enum class CaseKind { BothLower, LowerUpper, UpperLower, BothUpper };
std::vector<long> case_candidates(long V, int g, long N, CaseKind kind);

// Admissible coordinates for classes whose quotient power can agree with
// the one attached to (1/N) times a standard target vector: f has ones in
// the upper block, e is all ones, e_j is the j-th standard basis vector.
enum class FiberTarget { F, E, Ej };
struct FiberCandidates {
    std::vector<std::vector<Rat>> per_coordinate;
    std::vector<IndexClass> assembled;
};
FiberCandidates special_fiber_candidates(FiberTarget target, int g, long N, int j = 0);

// g >= 2, N not in {1, 2, 4}, and (2^g - 1) does not divide N.
bool primitivity_precondition(int g, long N);

// Partition of I_N/± by the pair (signature, rotated signature).  Groups
// are keyed by the serialized pair and sorted by key; singleton groups are
// exactly separated, non-singletons are left to further transport or
// numeric comparison.
struct SignatureClass {
    std::string key;
    std::vector<IndexClass> members;
};
std::vector<SignatureClass> signature_collision_classes(int g, long N);

// Exact separation layers for two distinct classes: pair-structure mismatch,
// signature mismatch, or (when both classes have half-integral pairs) the
// same two tests after transport by the transvection moving every such pair
// off the half-integral grid.  Returns a short reason string, or "" when
// the exact layers are inconclusive and point sampling must decide.
std::string exact_separation(const IndexClass& v, const IndexClass& vp);

}  // namespace siegel
