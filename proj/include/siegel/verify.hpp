#pragma once

#include "siegel/genus1.hpp"
#include "siegel/orders.hpp"
#include "siegel/symplectic.hpp"
#include "siegel/theta.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace siegel {

struct RunConfig {
    int genus = 2;
    long level = 3;
    double epsilon = 1e-12;
    int samples = 8;
    std::uint64_t seed = 0;
    double radius_cap = 40.0;
    std::string cache_path;
};

// One verification record.  `identity` states the mathematical fact being
// checked; `status` is "pass", "fail", or "hypothesis-not-met"; `witness`
// carries whatever is needed to reproduce a failure or to document an
// exploratory observation.
struct CheckRecord {
    std::string name;
    std::string identity;
    std::string status;
    double max_residual = -1.0;  // negative = not applicable
    nlohmann::ordered_json witness;
};

struct Report {
    std::string command;
    nlohmann::ordered_json parameters;
    std::vector<CheckRecord> checks;
    double elapsed_seconds = 0.0;
    bool pass() const;
    nlohmann::ordered_json to_json() const;
};

// Serialization helpers shared with the CLI.
nlohmann::ordered_json json_complex_matrix(const Eigen::MatrixXcd& M);
std::string format_complex(const std::complex<double>& z);

// suite in {vanishing, diag, genus1, action, invariance, orders}.
Report run_suite(const std::string& suite, const RunConfig& cfg);

// Pairwise separation of I_N/± classes: exact layers first (pair structure,
// order signatures, transvection transport), point sampling for the rest.
// Outside the exact regime (g >= 2, N not 1, 2 or 4, 2^g - 1 not dividing N)
// the run is exploratory: it reports which hypothesis fails and runs the
// fiber scans instead of asserting the separation statement.
Report cmd_primitivity(const RunConfig& cfg);

// target in {f, e, e_1 .. e_{2g}} (also accepted as "e1".."e4" style): scan
// all classes for sampled agreement with the target's quotient and compare
// the survivors with the exact candidate set.
Report cmd_fibers(const std::string& target, const RunConfig& cfg);

// index_set "full": stabilizer of {(1/N)e_1..e_{2g}, (1/N)e} in the
// similitude group mod N (expected trivial); "gamma1-type": stabilizer of
// {(1/N)e_1..e_g, (1/N)f} (expected: classes of [[I,O],[C,nu I]] with C
// symmetric, up to sign).
Report cmd_stabilizer(const std::string& index_set, const RunConfig& cfg);

// Invariance of h(Z) = Theta_v(NZ) under words in the N-scaled unipotent
// generators, with negative controls that must visibly break it.
Report cmd_rescale_check(const RunConfig& cfg);

}  // namespace siegel
