#include "mec/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mec {

bool QueueState::valid() const {
    if (q_bits.size() != t_bits.size()) return false;
    for (std::size_t i = 0; i < q_bits.size(); ++i) {
        if (!std::isfinite(q_bits[i]) || !std::isfinite(t_bits[i]) || q_bits[i] < 0.0 || t_bits[i] < 0.0) return false;
    }
    return true;
}

double local_departure(double f_hz, const SystemConfig& cfg, std::size_t device) {
    const auto& d = cfg.devices.at(device);
    if (!(f_hz >= 0.0) || f_hz > d.f_max_hz)
        throw std::domain_error("local_departure: frequency " + std::to_string(f_hz) + " outside [0, f_max]");
    return cfg.slot_seconds * f_hz / d.cycles_per_bit;
}

double RadioParams::rate(double alpha, double p_tx_w, double gamma) const {
    if (alpha <= 0.0) return 0.0;
    const double snr = gamma * p_tx_w / (alpha * noise_psd_w_per_hz * bandwidth_hz);
    return alpha * bandwidth_hz * slot_seconds * std::log1p(snr) / std::numbers::ln2;
}

double RadioParams::rate_dalpha(double alpha, double p_tx_w, double gamma) const {
    const double gp = gamma * p_tx_w;
    if (gp <= 0.0) return 0.0;
    const double x = gp / (alpha * noise_psd_w_per_hz * bandwidth_hz);
    return bandwidth_hz * slot_seconds * (std::log1p(x) - x / (1.0 + x)) / std::numbers::ln2;
}

double RadioParams::rate_dp(double alpha, double p_tx_w, double gamma) const {
    if (alpha <= 0.0) return 0.0;
    const double denom = noise_psd_w_per_hz + gamma * p_tx_w / (alpha * bandwidth_hz);
    return slot_seconds * gamma / (denom * std::numbers::ln2);
}

double offload_rate(double alpha, double p_tx_w, double gamma, const SystemConfig& cfg) {
    return RadioParams::from(cfg).rate(alpha, p_tx_w, gamma);
}

double offload_rate_dalpha(double alpha, double p_tx_w, double gamma, const SystemConfig& cfg) {
    return RadioParams::from(cfg).rate_dalpha(alpha, p_tx_w, gamma);
}

double offload_rate_dp(double alpha, double p_tx_w, double gamma, const SystemConfig& cfg) {
    return RadioParams::from(cfg).rate_dp(alpha, p_tx_w, gamma);
}

double mobile_power(double f_hz, const SystemConfig& cfg, std::size_t device) {
    return cfg.devices.at(device).kappa_mob * f_hz * f_hz * f_hz;
}

double server_power(std::span<const double> f_c_hz, const SystemConfig& cfg) {
    if (f_c_hz.size() != cfg.n_cores()) throw std::invalid_argument("server_power: core count mismatch");
    double sum = 0.0;
    for (std::size_t m = 0; m < f_c_hz.size(); ++m) {
        const double f = f_c_hz[m];
        sum += cfg.cores[m].kappa_ser * f * f * f;
    }
    return sum;
}

double weighted_power(const SlotDecision& decision, const SystemConfig& cfg) {
    double sum = 0.0;
    for (std::size_t i = 0; i < cfg.n_devices(); ++i)
        sum += cfg.devices[i].weight * (decision.p_tx_w[i] + mobile_power(decision.f_hz[i], cfg, i));
    return sum + cfg.server_weight * server_power(decision.f_c_hz, cfg);
}

SlotOutcome evaluate_outcome(const QueueState& state, const SlotEnvironment& env, const SlotDecision& decision,
                             const SystemConfig& cfg) {
    const std::size_t n = cfg.n_devices();
    SlotOutcome out;
    out.d_local_bits.resize(n);
    out.d_remote_bits.resize(n);
    out.d_effective_remote_bits.resize(n);
    out.power_mobile_w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.d_local_bits[i] = local_departure(decision.f_hz[i], cfg, i);
        out.d_remote_bits[i] = offload_rate(decision.alpha[i], decision.p_tx_w[i], env.gamma[i], cfg);
        out.d_effective_remote_bits[i] =
            std::min(std::max(state.q_bits[i] - out.d_local_bits[i], 0.0), out.d_remote_bits[i]);
        out.power_mobile_w[i] = mobile_power(decision.f_hz[i], cfg, i) + decision.p_tx_w[i];
    }
    out.power_server_w = server_power(decision.f_c_hz, cfg);
    out.weighted_power_w = weighted_power(decision, cfg);
    return out;
}

}  // namespace mec
