#pragma once

#include <cstddef>
#include <vector>

namespace mec {

/// Local buffers Q and server-side buffers T, in bits.
struct QueueState {
    std::vector<double> q_bits;
    std::vector<double> t_bits;

    static QueueState zeros(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }
    std::size_t size() const { return q_bits.size(); }
    bool valid() const;
};

/// Per-slot random realizations.
struct SlotEnvironment {
    std::vector<double> gamma;          // linear channel power gain incl. path loss
    std::vector<double> arrivals_bits;
};

/// Control vector for one slot.
struct SlotDecision {
    std::vector<double> f_hz;
    std::vector<double> p_tx_w;
    std::vector<double> alpha;
    std::vector<double> f_c_hz;
    std::vector<double> d_s_bits;
};

struct SlotOutcome {
    std::vector<double> d_local_bits;
    std::vector<double> d_remote_bits;
    std::vector<double> d_effective_remote_bits;
    std::vector<double> power_mobile_w;
    double power_server_w = 0.0;
    double weighted_power_w = 0.0;
};

}  // namespace mec
