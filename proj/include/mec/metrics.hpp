#pragma once

#include <cstdint>
#include <vector>

#include "mec/config.hpp"
#include "mec/types.hpp"

namespace mec {

/// Time averages of one run.
struct RunMetrics {
    std::uint64_t n_slots = 0;
    double avg_weighted_power_w = 0.0;
    double avg_mobile_power_w = 0.0;            // summed over devices
    double avg_server_power_w = 0.0;
    std::vector<double> avg_device_power_w;     // kappa f^3 + p_tx per device
    double avg_sum_queue_bits = 0.0;            // sum_i of the per-device averages below
    std::vector<double> avg_queue_bits;         // time average of Q_i + T_i
    double avg_exec_delay_slots = 0.0;          // Little's law
    double final_queue_over_t = 0.0;            // sum_i (Q_i + T_i) at the end / slots
    std::uint64_t gs_nonconverged_slots = 0;
};

/// Streaming sums; `finish` turns them into means.
class MetricsAccumulator {
public:
    explicit MetricsAccumulator(std::size_t n_devices);

    /// `state` is the buffer content at the beginning of the slot.
    void add(const QueueState& state, const SlotOutcome& outcome, bool gs_converged);

    RunMetrics finish(const QueueState& final_state, const SystemConfig& cfg) const;

    std::uint64_t slots() const { return slots_; }

private:
    std::uint64_t slots_ = 0;
    std::uint64_t nonconverged_ = 0;
    double weighted_ = 0.0;
    double server_ = 0.0;
    std::vector<double> device_power_;
    std::vector<double> queue_;
};

/// Average execution delay in slots: sum_i qbar_i / sum_i lambda_i.
double littles_law_delay(const RunMetrics& metrics, const SystemConfig& cfg);

/// Constant C of the drift-plus-penalty bound, in bits^2 (unit-mean fading).
double drift_constant_c(const SystemConfig& cfg);

/// p_opt + C / V.
double power_bound(double p_opt_estimate, const SystemConfig& cfg);

/// (C + V (psi - p_opt)) / eps, a reference bound on the average sum queue.
double queue_bound(double psi_eps, double eps, double p_opt_estimate, const SystemConfig& cfg);

}  // namespace mec
