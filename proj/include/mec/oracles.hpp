#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mec/config.hpp"
#include "mec/solver.hpp"

namespace mec {

/// Outcome of one oracle comparison.
struct OracleReport {
    std::string suite;
    std::uint64_t case_id = 0;
    double closed_form_objective = 0.0;
    double oracle_objective = 0.0;
    double abs_gap = 0.0;        // closed_form - oracle
    double rel_gap = 0.0;        // abs_gap / max(|oracle|, 1)
    double tolerance = 0.0;      // pass iff abs_gap <= tolerance
    double resolution = 0.0;     // grid step of the oracle, 0 when not a grid
    bool pass = false;
    nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json to_json(const OracleReport& report);

struct GridMin {
    double argmin = 0.0;
    double min = 0.0;
};

/// Evaluates `fn` on n_points uniformly spaced points of [lo, hi] (both ends
/// included). The first minimum wins ties.
GridMin grid_oracle_scalar(const std::function<double(double)>& fn, double lo, double hi, std::size_t n_points);

struct PgOptions {
    int max_iter = 20000;
    double step_tol = 1e-14;   // stop when the projected step is this small (scaled variables)
};

struct PgResult {
    std::vector<double> p_tx_w;
    std::vector<double> alpha;
    double objective = 0.0;
    int iterations = 0;
};

/// Projected gradient with backtracking on the offloader subproblem; the
/// feasible set is [0, p_max] x {alpha >= eps_A, sum alpha <= budget}.
PgResult projected_gradient_sp2(const OffloadProblem& problem, const PgOptions& opts = {});

/// Euclidean projection onto {x >= 0, sum x <= cap}.
std::vector<double> project_capped_simplex(std::span<const double> v, double cap);

struct Sp3OracleResult {
    std::vector<double> f_c_hz;
    std::vector<double> d_s_bits;
    double objective = 0.0;
};

/// Grid over per-core frequencies; every grid point gives all cycles to the
/// single device that minimizes the objective. Requires M <= 3, N <= 4.
Sp3OracleResult exhaustive_sp3(std::span<const double> t_bits, const SystemConfig& cfg, std::size_t grid_points);

/// Grid over per-core frequencies and over cycle shares split among all
/// devices (shares in steps of 1/share_points). Requires M <= 3, N <= 4.
Sp3OracleResult exhaustive_sp3_shares(std::span<const double> t_bits, const SystemConfig& cfg, std::size_t freq_points,
                                      std::size_t share_points);

enum class OracleSuite { sp1, pwr, sp2, sp3, zero_power };

std::string_view to_string(OracleSuite suite);

/// "all" expands to every suite.
std::vector<OracleSuite> parse_suites(std::string_view name);

std::size_t default_case_count(OracleSuite suite);

struct VerifyOptions {
    std::uint64_t seed = 1;
    double perturb = 0.0;   // test hook: closed forms scaled by (1 - perturb)
    unsigned threads = 1;
};

/// Runs one randomized case. Instances depend only on (suite, seed, case_id).
OracleReport verify_case(OracleSuite suite, std::uint64_t case_id, const VerifyOptions& opts);

std::vector<OracleReport> verify_suite(OracleSuite suite, std::size_t n_cases, const VerifyOptions& opts);

}  // namespace mec
