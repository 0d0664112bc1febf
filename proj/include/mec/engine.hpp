#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mec/config.hpp"
#include "mec/environment.hpp"
#include "mec/metrics.hpp"
#include "mec/solver.hpp"
#include "mec/types.hpp"

namespace mec {

enum class Mode {
    baseline,          // decisions on the actual buffers
    delay_improved,    // decisions on virtual buffers, surplus server cycles re-allocated
    equal_bandwidth,   // alpha_i = 1/N, no bandwidth optimization
};

std::string_view to_string(Mode mode);

/// Accepts the short names and the `_alg1` / `_alg3` aliases.
Mode parse_mode(std::string_view name);

/// max{q - d_sigma, 0} + a
double update_local_queue(double q, double d_sigma, double a);

/// max{t - d_s, 0} + min{max{q - d_l, 0}, d_r}; the second term drops dummy bits.
double update_server_queue(double t, double d_s, double q, double d_l, double d_r);

/// Spreads server cycles the scheduled device cannot use over the next
/// devices in descending virtual T_i / L_i order (ties by ascending index).
/// Returns the schedule applied to the actual buffers.
std::vector<double> delay_improved_schedule(std::span<const double> d_s_star, std::span<const double> f_c_star,
                                            std::span<const double> actual_t, std::span<const double> virtual_t,
                                            const SystemConfig& cfg);

struct EngineState {
    std::uint64_t slot_index = 0;
    QueueState actual;
    std::vector<double> virtual_t;   // server buffers seen by the solver in delay-improved mode
    RngState rng;
    Mode mode = Mode::baseline;

    static EngineState initial(const SystemConfig& cfg, Mode mode);

    /// Buffers the per-slot problem is solved on.
    QueueState decision_queues() const;
};

struct StepResult {
    EngineState next;
    SlotEnvironment env;
    SlotDecision decision;
    SlotOutcome outcome;
    std::vector<double> d_s_applied;   // equals decision.d_s_bits outside delay-improved mode
    int gs_iterations = 0;
    bool gs_converged = true;
};

StepResult step(const EngineState& engine, const SystemConfig& cfg, const SolverOptions& opts = {});

/// One row per (slot, device) of the optional trace.
struct TraceRow {
    std::uint64_t slot;
    std::size_t device;
    double q_bits, t_act_bits, t_vir_bits;
    double f_hz, p_tx_w, alpha;
    double d_l, d_r_nominal, d_r_effective, d_s;
    double f_c_sum_hz;
    double weighted_power_w;
    int gs_iterations;
    bool gs_converged;
};

/// Per-slot aggregate, always recorded.
struct SlotSummary {
    double sum_q_bits;
    double sum_t_act_bits;
    double sum_t_vir_bits;
    double weighted_power_w;
};

struct RunOptions {
    Mode mode = Mode::baseline;
    std::uint64_t n_slots = 10000;
    std::uint64_t warmup_slots = 0;
    bool keep_trace = false;
    SolverOptions solver{};
};

struct RunResult {
    RunMetrics metrics;               // all slots
    RunMetrics metrics_post_warmup;   // slots >= warmup_slots
    std::vector<SlotSummary> summaries;
    std::vector<TraceRow> trace;
    QueueState final_state;
};

RunResult run(const SystemConfig& cfg, const RunOptions& opts);

}  // namespace mec
