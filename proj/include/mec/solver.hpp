#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mec/config.hpp"
#include "mec/model.hpp"
#include "mec/types.hpp"

namespace mec {

/// Numerical constants for the per-slot solver.
struct SolverOptions {
    double gs_tol = 1e-8;                // relative objective change stopping the Gauss-Seidel loop
    int gs_max_iter = 100;
    double inner_rel_width = 1e-10;      // bisection accuracy for R_i(lambda)
    double outer_tol = 1e-7;             // |sum(alpha) - budget| accuracy of the lambda search
    int outer_max_iter = 200;
};

/// Devices with Q_i > T_i may offload; the rest get p = 0, alpha = eps_A.
struct OffloaderPartition {
    std::vector<std::size_t> offloaders;
    std::vector<std::size_t> non_offloaders;
};

OffloaderPartition partition_offloaders(const QueueState& state);

struct GaussSeidelTrace {
    int iterations = 0;
    std::vector<double> objective_history;
    bool converged = true;
    int bandwidth_nonconverged = 0;   // Lagrangian searches that hit the iteration cap
};

/// Joint transmit-power / bandwidth subproblem restricted to the offloaders:
///   min  -sum c_i D_r(alpha_i, p_i) + V sum w_i p_i
///   s.t. 0 <= p_i <= p_max,i,  alpha_i >= eps_A,  sum alpha_i <= alpha_budget
/// with c_i = Q_i - T_i > 0.
struct OffloadProblem {
    std::vector<std::size_t> devices;   // original device indices
    std::vector<double> backlog_gap;    // c_i
    std::vector<double> gamma;
    std::vector<double> weight;
    std::vector<double> p_max_w;
    RadioParams radio{};
    double control_v = 0.0;
    double eps_a = 0.0;
    double alpha_budget = 0.0;

    std::size_t size() const { return devices.size(); }
    double device_objective(std::size_t k, double alpha, double p) const;
    double objective(std::span<const double> p, std::span<const double> alpha) const;
};

OffloadProblem make_offload_problem(const QueueState& state, const SlotEnvironment& env, const SystemConfig& cfg,
                                    const OffloaderPartition& partition);

/// Closed-form local CPU frequencies.
std::vector<double> solve_sp1(std::span<const double> q_bits, const SystemConfig& cfg);

/// Closed-form transmit powers for a fixed bandwidth split (one entry per offloader).
std::vector<double> solve_power_given_bandwidth(const OffloadProblem& problem, std::span<const double> alpha);

struct BandwidthSolution {
    std::vector<double> alpha;
    int iterations = 0;
    bool converged = true;
};

/// Lagrangian bisection on the bandwidth multiplier for fixed transmit powers.
BandwidthSolution solve_bandwidth_given_power(const OffloadProblem& problem, std::span<const double> p,
                                              const SolverOptions& opts = {});

struct OffloadSolution {
    std::vector<double> p_tx_w;   // per offloader
    std::vector<double> alpha;    // per offloader
    GaussSeidelTrace trace;
};

/// Alternating power / bandwidth minimization on a prepared problem.
OffloadSolution solve_offload(const OffloadProblem& problem, const SolverOptions& opts = {});

struct Sp2Solution {
    std::vector<double> p_tx_w;   // all N devices
    std::vector<double> alpha;    // all N devices
    GaussSeidelTrace trace;
};

Sp2Solution solve_sp2(const QueueState& state, const SlotEnvironment& env, const SystemConfig& cfg,
                      const SolverOptions& opts = {});

/// Device with the largest T_i / L_i; smallest index wins ties.
std::size_t most_backlogged_device(std::span<const double> t_bits, const SystemConfig& cfg);

struct ServerSchedule {
    std::vector<double> f_c_hz;
    std::vector<double> d_s_bits;
    std::optional<std::size_t> scheduled;
};

/// Closed-form core frequencies with all server cycles given to one device.
ServerSchedule solve_sp3(std::span<const double> t_bits, const SystemConfig& cfg);

struct PerSlotSolution {
    SlotDecision decision;
    GaussSeidelTrace trace;
};

PerSlotSolution solve_per_slot(const QueueState& state, const SlotEnvironment& env, const SystemConfig& cfg,
                               const SolverOptions& opts = {});

/// Same decomposition with alpha_i = 1/N fixed; only the powers are optimized.
PerSlotSolution solve_per_slot_equal_bandwidth(const QueueState& state, const SlotEnvironment& env,
                                               const SystemConfig& cfg);

double sp1_objective(std::span<const double> q_bits, std::span<const double> f_hz, const SystemConfig& cfg);
double sp2_objective(const QueueState& state, const SlotEnvironment& env, std::span<const double> p_tx_w,
                     std::span<const double> alpha, const SystemConfig& cfg);
double sp3_objective(std::span<const double> t_bits, std::span<const double> f_c_hz, std::span<const double> d_s_bits,
                     const SystemConfig& cfg);

/// -sum Q_i D_sigma,i - sum T_i (D_s,i - D_r,i) + V P_sigma.
double per_slot_objective(const QueueState& state, const SlotEnvironment& env, const SlotDecision& decision,
                          const SystemConfig& cfg);

/// Checks every box, simplex and server-cycle constraint of the relaxed problem.
/// `cycle_rel_tol` absorbs rounding in sum(d_s L) <= sum(f_c) tau.
bool decision_feasible(const SlotDecision& decision, const SystemConfig& cfg, double cycle_rel_tol = 1e-12);

}  // namespace mec
