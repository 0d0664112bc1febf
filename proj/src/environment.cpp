#include "mec/environment.hpp"

#include <cmath>

namespace mec {

namespace {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t slot, std::uint64_t device, Channel channel) const {
    std::uint64_t h = mix64(seed_);
    h = mix64(h ^ slot);
    h = mix64(h ^ (device << 8 | static_cast<std::uint64_t>(channel)));
    return h;
}

double CounterRng::uniform(std::uint64_t slot, std::uint64_t device, Channel channel) const {
    return static_cast<double>(bits(slot, device, channel) >> 11) * 0x1.0p-53;
}

double CounterRng::exponential(std::uint64_t slot, std::uint64_t device, Channel channel) const {
    return -std::log1p(-uniform(slot, device, channel));
}

SlotEnvironment draw_environment(const RngState& rng, const SystemConfig& cfg) {
    const CounterRng gen(rng.seed);
    const std::size_t n = cfg.n_devices();
    SlotEnvironment env;
    env.gamma.resize(n);
    env.arrivals_bits.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        env.gamma[i] = gen.exponential(rng.slot, i, CounterRng::Channel::fading) * cfg.large_scale_gain(i);
        env.arrivals_bits[i] = gen.uniform(rng.slot, i, CounterRng::Channel::arrival) * cfg.devices[i].arrival_max_bits;
    }
    return env;
}

}  // namespace mec
