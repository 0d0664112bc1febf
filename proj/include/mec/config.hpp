#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mec {

/// Thrown for malformed or physically invalid configuration. `field()` names
/// the offending key so the CLI can report it.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct DeviceParams {
    double distance_m = 150.0;
    double cycles_per_bit = 737.5;
    double kappa_mob = 1e-27;
    double f_max_hz = 1e9;
    double p_max_w = 0.5;
    double weight = 1.0;
    double arrival_max_bits = 8000.0;

    // Uniform arrivals on [0, A_max].
    double arrival_mean_bits() const { return 0.5 * arrival_max_bits; }
};

struct CoreParams {
    double kappa_ser = 1e-27;
    double fc_max_hz = 2.5e9;
};

/// Static system parameters, all in SI units (bits, Hz, W, s).
struct SystemConfig {
    double bandwidth_hz = 1e7;
    double slot_seconds = 1e-3;
    double noise_psd_w_per_hz = 3.9810717055349725e-21;  // -174 dBm/Hz
    double pathloss_const = 1e-4;                         // -40 dB
    double pathloss_exp = 4.0;
    double ref_distance_m = 1.0;

    std::vector<DeviceParams> devices;
    std::vector<CoreParams> cores;

    double server_weight = 0.0;
    double control_v = 1e9;
    double eps_a = 1e-4;
    std::uint64_t rng_seed = 1;

    std::size_t n_devices() const { return devices.size(); }
    std::size_t n_cores() const { return cores.size(); }

    /// g0 (d0 / d_i)^theta, the deterministic part of the channel gain.
    double large_scale_gain(std::size_t device) const;

    double total_arrival_mean_bits() const;

    /// Throws ConfigError on the first violated invariant.
    void validate() const;
};

/// Homogeneous simulation setup: N = 5 devices at 150 m, M = 8 cores.
SystemConfig default_config(std::size_t n_devices = 5, std::size_t n_cores = 8);

double dbm_per_hz_to_w_per_hz(double dbm);
double db_to_linear(double db);

/// Parses a config document. Unspecified fields keep their defaults;
/// `device` / `core` objects set homogeneous values and the `devices` /
/// `cores` arrays override individual entries.
SystemConfig config_from_json(const nlohmann::json& doc);

/// Canonical SI representation, suitable for hashing and echoing.
nlohmann::json config_to_json(const SystemConfig& cfg);

/// Applies a dotted-key assignment such as `control_v=3e9` or
/// `devices.2.weight=0.5` to a config document in place.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Stable 64-bit FNV-1a hash of the canonical JSON dump.
std::uint64_t config_hash(const SystemConfig& cfg);

}  // namespace mec
