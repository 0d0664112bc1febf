#include "mec/metrics.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace mec {

MetricsAccumulator::MetricsAccumulator(std::size_t n_devices) : device_power_(n_devices, 0.0), queue_(n_devices, 0.0) {}

void MetricsAccumulator::add(const QueueState& state, const SlotOutcome& outcome, bool gs_converged) {
    ++slots_;
    if (!gs_converged) ++nonconverged_;
    weighted_ += outcome.weighted_power_w;
    server_ += outcome.power_server_w;
    for (std::size_t i = 0; i < queue_.size(); ++i) {
        device_power_[i] += outcome.power_mobile_w[i];
        queue_[i] += state.q_bits[i] + state.t_bits[i];
    }
}

RunMetrics MetricsAccumulator::finish(const QueueState& final_state, const SystemConfig& cfg) const {
    RunMetrics m;
    m.n_slots = slots_;
    m.gs_nonconverged_slots = nonconverged_;
    const std::size_t n = queue_.size();
    m.avg_device_power_w.assign(n, 0.0);
    m.avg_queue_bits.assign(n, 0.0);
    if (slots_ == 0) return m;
    const double inv = 1.0 / static_cast<double>(slots_);
    m.avg_weighted_power_w = weighted_ * inv;
    m.avg_server_power_w = server_ * inv;
    double final_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m.avg_device_power_w[i] = device_power_[i] * inv;
        m.avg_queue_bits[i] = queue_[i] * inv;
        m.avg_mobile_power_w += m.avg_device_power_w[i];
        m.avg_sum_queue_bits += m.avg_queue_bits[i];
        final_sum += final_state.q_bits[i] + final_state.t_bits[i];
    }
    m.final_queue_over_t = final_sum * inv;
    m.avg_exec_delay_slots = littles_law_delay(m, cfg);
    return m;
}

double littles_law_delay(const RunMetrics& metrics, const SystemConfig& cfg) {
    const double rate = cfg.total_arrival_mean_bits();
    if (!(rate > 0.0)) throw std::domain_error("littles_law_delay: total arrival rate must be positive");
    return metrics.avg_sum_queue_bits / rate;
}

double drift_constant_c(const SystemConfig& cfg) {
    const double tau = cfg.slot_seconds;
    double server_cycles = 0.0;
    for (const auto& core : cfg.cores) server_cycles += core.fc_max_hz * tau;

    constexpr double mean_fading = 1.0;
    double sum = 0.0;
    for (const auto& d : cfg.devices) {
        const double eta = 2.0 * cfg.pathloss_const * mean_fading * d.p_max_w * std::pow(cfg.ref_distance_m, cfg.pathloss_exp) *
                           tau * tau /
                           (std::numbers::ln2 * cfg.noise_psd_w_per_hz * std::pow(d.distance_m, cfg.pathloss_exp));
        const double server_bits = server_cycles / d.cycles_per_bit;
        const double local_bits = d.f_max_hz * tau / d.cycles_per_bit;
        sum += d.arrival_max_bits * d.arrival_max_bits + server_bits * server_bits + local_bits * local_bits +
               eta * (d.f_max_hz / d.cycles_per_bit + 2.0 * cfg.bandwidth_hz / std::numbers::ln2);
    }
    return 0.5 * sum;
}

double power_bound(double p_opt_estimate, const SystemConfig& cfg) {
    if (p_opt_estimate < 0.0) throw std::domain_error("power_bound: p_opt_estimate must be non-negative");
    return p_opt_estimate + drift_constant_c(cfg) / cfg.control_v;
}

double queue_bound(double psi_eps, double eps, double p_opt_estimate, const SystemConfig& cfg) {
    if (!(eps > 0.0)) throw std::domain_error("queue_bound: eps must be positive");
    if (psi_eps < p_opt_estimate) throw std::domain_error("queue_bound: psi must be at least p_opt");
    return (drift_constant_c(cfg) + cfg.control_v * (psi_eps - p_opt_estimate)) / eps;
}

}  // namespace mec
