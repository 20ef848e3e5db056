#pragma once

#include "siegel/characteristics.hpp"
#include "siegel/siegel_point.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace siegel {

using IMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// integral or mod-N similitude matrix; level 0 means integral entries
struct SymplecticMatrix {
    IMat m;
    long level = 0;
    long long nu = 1;
};

struct ConditioningError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// J = [[O,-I],[I,O]]
IMat standard_J(int g);

// returns nu with M^T J M = nu J, or nothing if the relation fails
std::optional<long long> is_gsp(const IMat& M);
// mod-N variant; nu must be a unit mod N
std::optional<long> is_gsp_mod(const IMat& M, long N);

// validates the similitude relation and records nu; level 0 = integral
SymplecticMatrix make_symplectic(const IMat& M, long level = 0);

// (AZ+B)(CZ+D)^{-1} via partial-pivot solves; requires nu > 0;
// condition number of CZ+D above 1e12 raises ConditioningError
SiegelPoint act_on_H(const Eigen::MatrixXd& alpha, const SiegelPoint& Z);
SiegelPoint act_on_H(const SymplecticMatrix& alpha, const SiegelPoint& Z);

// canonical(alpha^T v); alpha must be integral or of the same level as v
IndexClass act_on_index(const IMat& alpha, const FracVector& v);
IndexClass act_on_index(const SymplecticMatrix& alpha, const IndexClass& v);

struct CongruenceFlags {
    bool principal = false;  // alpha == I mod N
    bool upper = false;      // A == I, C == O, D == I mod N (B free)
    bool lower = false;      // A == I, B == O, D == I mod N (C free)
};
CongruenceFlags congruence_tests(const IMat& alpha, long N);

// the four coordinate-mixing transvections, plus the block rotation;
// every output satisfies is_gsp with nu = 1.
//   C1: [[I+E_ij, O],[O, I-E_ji]]^T   1 <= i,j <= g, i != j
//   C2: [[I-E_ij, O],[O, I+E_ji]]^T   1 <= i,j <= g, i != j
//   C3: [[I, O],[ E'_{i-g,j}, I]]^T   g+1 <= i <= 2g, 1 <= j <= g
//   C4: [[I, O],[-E'_{i-g,j}, I]]^T   g+1 <= i <= 2g, 1 <= j <= g
//   Rotation: [[O, I],[-I, O]]^T
// sign = -1 flips the displayed signs
enum class ElemKind { C1, C2, C3, C4, Rotation };
SymplecticMatrix elementary(ElemKind kind, int i, int j, int sign, int g);

// [[I + sum_i E_{k_i j}, O],[O, I - sum_i E_{j k_i}]]^T, ks subset of {1..g}\{j}
SymplecticMatrix transvection_set(const std::vector<int>& ks, int j, int g);

// block builders (no transpose applied)
IMat upper_unipotent(const IMat& S);       // [[I,S],[O,I]], S symmetric
IMat lower_unipotent(const IMat& S);       // [[I,O],[S,I]], S symmetric
IMat gl_block(const IMat& A);              // [[A,O],[O,(A^T)^{-1}]], |det A| = 1
IMat similitude_diag(int g, long long nu); // [[I,O],[O,nu I]]
IMat emat(int n, int r, int s);            // E_rs, 1-based
IMat emat_sym(int n, int r, int s);        // E'_rs = E_rs + E_sr (r != s), E_rr

// finite group of mod-N similitude matrices identified up to sign
struct GroupTable {
    int g = 0;
    long N = 0;
    std::vector<std::vector<std::uint8_t>> elems;  // row-major canonical reps
    std::vector<std::uint8_t> nus;
    std::string provenance;
    std::uint64_t gen_hash = 0;
    std::unordered_map<std::string, std::size_t> pos;

    std::size_t size() const { return elems.size(); }
    IMat matrix(std::size_t i) const;
    SymplecticMatrix element(std::size_t i) const;
    std::optional<std::size_t> find(const IMat& M) const;
};

// lexicographic minimum of {M mod N, -M mod N}
IMat canonical_pm(const IMat& M, long N);

std::vector<IMat> sp_generators(int g);           // rotation + upper transvections
std::vector<IMat> gsp_generators(int g, long N);  // plus similitude coset factors

std::uint64_t generator_hash(int g, long N, const std::vector<IMat>& generators);

// closure under multiplication, elements stored up to sign;
// exceeding the budget raises length_error rather than truncating
GroupTable bfs_group(int g, long N, const std::vector<IMat>& generators,
                     std::size_t budget = 10000000, const std::string& provenance = "");

void save_group_table(const GroupTable& t, const std::string& path);
std::optional<GroupTable> load_group_table(const std::string& path, int g, long N,
                                           std::uint64_t gen_hash);
// loads from cache_path when header matches, otherwise computes and saves
GroupTable bfs_group_cached(int g, long N, const std::vector<IMat>& generators,
                            const std::string& cache_path,
                            std::size_t budget = 10000000,
                            const std::string& provenance = "");

// indices of all table elements fixing every w in W under act_on_index
std::vector<std::size_t> stabilizer(const GroupTable& t, const std::vector<IndexClass>& W);

}  // namespace siegel
