#pragma once

#include <cstddef>
#include <span>

#include "mec/config.hpp"
#include "mec/types.hpp"

namespace mec {

/// Radio constants needed to evaluate FDMA link rates.
struct RadioParams {
    double bandwidth_hz;
    double slot_seconds;
    double noise_psd_w_per_hz;

    static RadioParams from(const SystemConfig& cfg) {
        return {cfg.bandwidth_hz, cfg.slot_seconds, cfg.noise_psd_w_per_hz};
    }

    double rate(double alpha, double p_tx_w, double gamma) const;
    double rate_dalpha(double alpha, double p_tx_w, double gamma) const;
    double rate_dp(double alpha, double p_tx_w, double gamma) const;
};

/// Bits executed locally in one slot, tau * f / L. Rejects f outside [0, f_max].
double local_departure(double f_hz, const SystemConfig& cfg, std::size_t device);

/// Shannon rate of an FDMA sub-band, in bits per slot:
/// alpha * omega * tau * log2(1 + gamma * p / (alpha * N0 * omega)); 0 for alpha == 0.
double offload_rate(double alpha, double p_tx_w, double gamma, const SystemConfig& cfg);

/// d(offload_rate)/d(alpha) in closed form. Positive and decreasing in alpha
/// when gamma * p > 0, identically zero otherwise.
double offload_rate_dalpha(double alpha, double p_tx_w, double gamma, const SystemConfig& cfg);

/// d(offload_rate)/d(p).
double offload_rate_dp(double alpha, double p_tx_w, double gamma, const SystemConfig& cfg);

/// kappa_mob * f^3.
double mobile_power(double f_hz, const SystemConfig& cfg, std::size_t device);

/// Sum over cores of kappa_ser * f_c^3.
double server_power(std::span<const double> f_c_hz, const SystemConfig& cfg);

/// Weighted sum power P_sigma of a decision.
double weighted_power(const SlotDecision& decision, const SystemConfig& cfg);

/// Departures and power of a decision applied to the given buffers.
SlotOutcome evaluate_outcome(const QueueState& state, const SlotEnvironment& env, const SlotDecision& decision,
                             const SystemConfig& cfg);

}  // namespace mec
