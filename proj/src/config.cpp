#include "mec/config.hpp"

#include <charconv>
#include <cmath>
#include <set>

namespace mec {

using nlohmann::json;

double SystemConfig::large_scale_gain(std::size_t device) const {
    return pathloss_const * std::pow(ref_distance_m / devices.at(device).distance_m, pathloss_exp);
}

double SystemConfig::total_arrival_mean_bits() const {
    double sum = 0.0;
    for (const auto& d : devices) sum += d.arrival_mean_bits();
    return sum;
}

namespace {

void require_positive(double value, const std::string& field) {
    if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError(field, "must be a finite positive number");
}

void require_nonnegative(double value, const std::string& field) {
    if (!(value >= 0.0) || !std::isfinite(value)) throw ConfigError(field, "must be a finite non-negative number");
}

}  // namespace

void SystemConfig::validate() const {
    if (devices.empty()) throw ConfigError("n_devices", "must be at least 1");
    if (cores.empty()) throw ConfigError("n_cores", "must be at least 1");
    require_positive(bandwidth_hz, "bandwidth_hz");
    require_positive(slot_seconds, "slot_seconds");
    require_positive(noise_psd_w_per_hz, "noise_psd_w_per_hz");
    require_positive(pathloss_const, "pathloss_const");
    require_positive(pathloss_exp, "pathloss_exp");
    require_positive(ref_distance_m, "ref_distance_m");
    for (std::size_t i = 0; i < devices.size(); ++i) {
        const auto& d = devices[i];
        const std::string p = "devices." + std::to_string(i) + ".";
        require_positive(d.distance_m, p + "distance_m");
        require_positive(d.cycles_per_bit, p + "cycles_per_bit");
        require_positive(d.kappa_mob, p + "kappa_mob");
        require_positive(d.f_max_hz, p + "f_max_hz");
        require_positive(d.p_max_w, p + "p_max_w");
        require_nonnegative(d.weight, p + "weight");
        require_positive(d.arrival_max_bits, p + "arrival_max_bits");
    }
    for (std::size_t m = 0; m < cores.size(); ++m) {
        const std::string p = "cores." + std::to_string(m) + ".";
        require_positive(cores[m].kappa_ser, p + "kappa_ser");
        require_positive(cores[m].fc_max_hz, p + "fc_max_hz");
    }
    require_nonnegative(server_weight, "server_weight");
    require_positive(control_v, "control_v");
    require_positive(eps_a, "eps_a");
    if (!(static_cast<double>(devices.size()) * eps_a < 1.0))
        throw ConfigError("eps_a", "n_devices * eps_a must be below 1");
}

SystemConfig default_config(std::size_t n_devices, std::size_t n_cores) {
    SystemConfig cfg;
    cfg.devices.assign(n_devices, DeviceParams{});
    cfg.cores.assign(n_cores, CoreParams{});
    return cfg;
}

double dbm_per_hz_to_w_per_hz(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

namespace {

double get_number(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
    if (!obj.is_object()) throw ConfigError(prefix.empty() ? "<root>" : prefix, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw ConfigError(prefix + key, "unknown field");
    }
}

void read_device(const json& obj, DeviceParams& d, const std::string& prefix) {
    check_keys(obj,
               {"distance_m", "cycles_per_bit", "kappa_mob", "f_max_hz", "p_max_w", "weight", "arrival_max_bits"},
               prefix);
    auto opt = [&](const char* key, double& out) {
        if (obj.contains(key)) out = get_number(obj, key, prefix + key);
    };
    opt("distance_m", d.distance_m);
    opt("cycles_per_bit", d.cycles_per_bit);
    opt("kappa_mob", d.kappa_mob);
    opt("f_max_hz", d.f_max_hz);
    opt("p_max_w", d.p_max_w);
    opt("weight", d.weight);
    opt("arrival_max_bits", d.arrival_max_bits);
}

void read_core(const json& obj, CoreParams& c, const std::string& prefix) {
    check_keys(obj, {"kappa_ser", "fc_max_hz"}, prefix);
    if (obj.contains("kappa_ser")) c.kappa_ser = get_number(obj, "kappa_ser", prefix + "kappa_ser");
    if (obj.contains("fc_max_hz")) c.fc_max_hz = get_number(obj, "fc_max_hz", prefix + "fc_max_hz");
}

std::size_t read_count(const json& doc, const char* key, std::size_t fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1) throw ConfigError(key, "expected a positive integer");
    return static_cast<std::size_t>(v.get<long long>());
}

}  // namespace

SystemConfig config_from_json(const json& doc) {
    check_keys(doc,
               {"n_devices", "n_cores", "bandwidth_hz", "slot_seconds", "noise_psd_w_per_hz", "noise_psd_dbm_per_hz",
                "pathloss_const", "pathloss_const_db", "pathloss_exp", "ref_distance_m", "device", "devices", "core",
                "cores", "server_weight", "control_v", "eps_a", "rng_seed"},
               "");

    const std::size_t listed_devices = doc.contains("devices") && doc["devices"].is_array() ? doc["devices"].size() : 0;
    const std::size_t listed_cores = doc.contains("cores") && doc["cores"].is_array() ? doc["cores"].size() : 0;
    const std::size_t n = read_count(doc, "n_devices", listed_devices ? listed_devices : 5);
    const std::size_t m = read_count(doc, "n_cores", listed_cores ? listed_cores : 8);

    SystemConfig cfg;
    auto opt = [&](const char* key, double& out) {
        if (doc.contains(key)) out = get_number(doc, key, key);
    };
    opt("bandwidth_hz", cfg.bandwidth_hz);
    opt("slot_seconds", cfg.slot_seconds);
    if (doc.contains("noise_psd_w_per_hz") && doc.contains("noise_psd_dbm_per_hz"))
        throw ConfigError("noise_psd_dbm_per_hz", "conflicts with noise_psd_w_per_hz");
    opt("noise_psd_w_per_hz", cfg.noise_psd_w_per_hz);
    if (doc.contains("noise_psd_dbm_per_hz"))
        cfg.noise_psd_w_per_hz = dbm_per_hz_to_w_per_hz(get_number(doc, "noise_psd_dbm_per_hz", "noise_psd_dbm_per_hz"));
    if (doc.contains("pathloss_const") && doc.contains("pathloss_const_db"))
        throw ConfigError("pathloss_const_db", "conflicts with pathloss_const");
    opt("pathloss_const", cfg.pathloss_const);
    if (doc.contains("pathloss_const_db"))
        cfg.pathloss_const = db_to_linear(get_number(doc, "pathloss_const_db", "pathloss_const_db"));
    opt("pathloss_exp", cfg.pathloss_exp);
    opt("ref_distance_m", cfg.ref_distance_m);
    opt("server_weight", cfg.server_weight);
    opt("control_v", cfg.control_v);
    opt("eps_a", cfg.eps_a);
    if (doc.contains("rng_seed")) {
        const auto& s = doc["rng_seed"];
        if (!s.is_number_integer()) throw ConfigError("rng_seed", "expected an integer");
        cfg.rng_seed = s.is_number_unsigned() ? s.get<std::uint64_t>() : static_cast<std::uint64_t>(s.get<long long>());
    }

    DeviceParams base_device;
    if (doc.contains("device")) read_device(doc["device"], base_device, "device.");
    cfg.devices.assign(n, base_device);
    if (doc.contains("devices")) {
        const auto& arr = doc["devices"];
        if (!arr.is_array()) throw ConfigError("devices", "expected an array");
        if (arr.size() > n) throw ConfigError("devices", "has more entries than n_devices");
        for (std::size_t i = 0; i < arr.size(); ++i)
            read_device(arr[i], cfg.devices[i], "devices." + std::to_string(i) + ".");
    }

    CoreParams base_core;
    if (doc.contains("core")) read_core(doc["core"], base_core, "core.");
    cfg.cores.assign(m, base_core);
    if (doc.contains("cores")) {
        const auto& arr = doc["cores"];
        if (!arr.is_array()) throw ConfigError("cores", "expected an array");
        if (arr.size() > m) throw ConfigError("cores", "has more entries than n_cores");
        for (std::size_t j = 0; j < arr.size(); ++j)
            read_core(arr[j], cfg.cores[j], "cores." + std::to_string(j) + ".");
    }

    cfg.validate();
    return cfg;
}

json config_to_json(const SystemConfig& cfg) {
    json devices = json::array();
    for (const auto& d : cfg.devices) {
        devices.push_back({{"distance_m", d.distance_m},
                           {"cycles_per_bit", d.cycles_per_bit},
                           {"kappa_mob", d.kappa_mob},
                           {"f_max_hz", d.f_max_hz},
                           {"p_max_w", d.p_max_w},
                           {"weight", d.weight},
                           {"arrival_max_bits", d.arrival_max_bits}});
    }
    json cores = json::array();
    for (const auto& c : cfg.cores) cores.push_back({{"kappa_ser", c.kappa_ser}, {"fc_max_hz", c.fc_max_hz}});
    return {{"n_devices", cfg.n_devices()},
            {"n_cores", cfg.n_cores()},
            {"bandwidth_hz", cfg.bandwidth_hz},
            {"slot_seconds", cfg.slot_seconds},
            {"noise_psd_w_per_hz", cfg.noise_psd_w_per_hz},
            {"pathloss_const", cfg.pathloss_const},
            {"pathloss_exp", cfg.pathloss_exp},
            {"ref_distance_m", cfg.ref_distance_m},
            {"devices", devices},
            {"cores", cores},
            {"server_weight", cfg.server_weight},
            {"control_v", cfg.control_v},
            {"eps_a", cfg.eps_a},
            {"rng_seed", cfg.rng_seed}};
}

namespace {

bool parse_index(std::string_view s, std::size_t& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

void apply_override(json& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError(std::string(assignment), "override must look like key=value");
    const std::string key(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));

    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;

    json* node = &doc;
    std::string_view rest = key;
    while (true) {
        const auto dot = rest.find('.');
        const std::string_view seg = rest.substr(0, dot);
        if (seg.empty()) throw ConfigError(key, "empty path segment");
        std::size_t index = 0;
        json* next = nullptr;
        if (parse_index(seg, index)) {
            if (node->is_null()) *node = json::array();
            if (!node->is_array()) throw ConfigError(key, "numeric segment applied to a non-array");
            while (node->size() <= index) node->push_back(json::object());
            next = &(*node)[index];
        } else {
            if (node->is_null()) *node = json::object();
            if (!node->is_object()) throw ConfigError(key, "field segment applied to a non-object");
            next = &(*node)[std::string(seg)];
        }
        if (dot == std::string_view::npos) {
            *next = value;
            return;
        }
        node = next;
        rest = rest.substr(dot + 1);
    }
}

std::uint64_t config_hash(const SystemConfig& cfg) {
    const std::string text = config_to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace mec
