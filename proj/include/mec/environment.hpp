#pragma once

#include <cstdint>

#include "mec/config.hpp"
#include "mec/types.hpp"

namespace mec {

/// Counter-based random stream. Every draw is a pure function of
/// (seed, slot, device, channel), so device i sees the same samples no
/// matter how many other devices exist, and no state is shared.
class CounterRng {
public:
    enum class Channel : std::uint32_t { fading = 1, arrival = 2 };

    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// 64 random bits.
    std::uint64_t bits(std::uint64_t slot, std::uint64_t device, Channel channel) const;

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform(std::uint64_t slot, std::uint64_t device, Channel channel) const;

    /// Exp(1) by inverse CDF, -ln(1 - u).
    double exponential(std::uint64_t slot, std::uint64_t device, Channel channel) const;

private:
    std::uint64_t seed_;
};

/// Position of a run inside its random stream.
struct RngState {
    std::uint64_t seed = 0;
    std::uint64_t slot = 0;
};

/// Gamma_i = gamma_i * g0 (d0/d_i)^theta with gamma_i ~ Exp(1);
/// A_i ~ Uniform[0, A_i,max].
SlotEnvironment draw_environment(const RngState& rng, const SystemConfig& cfg);

}  // namespace mec
