#include "mec/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>

namespace mec {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

nlohmann::json metrics_to_json(const RunMetrics& m) {
    return {{"n_slots", m.n_slots},
            {"avg_weighted_power_w", m.avg_weighted_power_w},
            {"avg_mobile_power_w", m.avg_mobile_power_w},
            {"avg_server_power_w", m.avg_server_power_w},
            {"avg_device_power_w", m.avg_device_power_w},
            {"avg_sum_queue_bits", m.avg_sum_queue_bits},
            {"avg_queue_bits", m.avg_queue_bits},
            {"avg_exec_delay_slots", m.avg_exec_delay_slots},
            {"final_queue_over_T", m.final_queue_over_t},
            {"gs_nonconverged_slots", m.gs_nonconverged_slots}};
}

nlohmann::json run_report_json(const SystemConfig& cfg, const RunOptions& opts, const RunResult& result,
                               const RunProvenance& provenance) {
    const double c = drift_constant_c(cfg);
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["mode"] = std::string(to_string(opts.mode));
    doc["seed"] = cfg.rng_seed;
    doc["control_v"] = cfg.control_v;
    doc["n_slots"] = opts.n_slots;
    doc["warmup_slots"] = opts.warmup_slots;
    doc["config_hash"] = [&] {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
        return std::string(buf);
    }();
    doc["config"] = config_to_json(cfg);
    doc["overrides"] = provenance.overrides;
    doc["metrics"] = metrics_to_json(result.metrics);
    doc["metrics_post_warmup"] = metrics_to_json(result.metrics_post_warmup);
    doc["exec_delay_ms"] = result.metrics.avg_exec_delay_slots * cfg.slot_seconds * 1e3;

    nlohmann::json bounds;
    bounds["C_bits2"] = c;
    bounds["C_over_V"] = c / cfg.control_v;
    if (provenance.p_opt_proxy) {
        bounds["p_opt_proxy"] = *provenance.p_opt_proxy;
        bounds["power_bound_w"] = power_bound(*provenance.p_opt_proxy, cfg);
        bounds["note"] = "p_opt_proxy is a caller-supplied proxy, not the true optimum";
    }
    doc["bounds"] = bounds;
    if (!provenance.timestamp.empty()) doc["timestamp"] = provenance.timestamp;
    return doc;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
    out << "#schema_version=" << kSchemaVersion << '\n';
    out << "slot,device,Q_bits,T_act_bits,T_vir_bits,f_hz,p_tx_w,alpha,d_l,d_r_nominal,d_r_effective,d_s,"
           "f_c_sum_hz,weighted_power_w,gs_iterations,gs_converged\n";
    for (const auto& r : rows) {
        out << r.slot << ',' << r.device;
        for (double v : {r.q_bits, r.t_act_bits, r.t_vir_bits, r.f_hz, r.p_tx_w, r.alpha, r.d_l, r.d_r_nominal,
                         r.d_r_effective, r.d_s, r.f_c_sum_hz, r.weighted_power_w})
            out << ',' << format_double(v);
        out << ',' << r.gs_iterations << ',' << (r.gs_converged ? 1 : 0) << '\n';
    }
}

const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols{"V",
                                               "mode",
                                               "w_server",
                                               "seed",
                                               "n_slots",
                                               "avg_weighted_power_w",
                                               "avg_mobile_power_w",
                                               "avg_server_power_w",
                                               "avg_sum_queue_bits_per_device",
                                               "exec_delay_ms",
                                               "final_queue_over_T",
                                               "C_bits2",
                                               "gs_nonconverged_slots"};
    return cols;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "#schema_version=" << kSchemaVersion << '\n';
    const auto& cols = sweep_columns();
    for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
    out << '\n';
    for (const auto& r : rows) {
        out << format_double(r.control_v) << ',' << to_string(r.mode) << ',' << format_double(r.server_weight) << ','
            << r.seed << ',' << r.n_slots;
        for (double v : {r.avg_weighted_power_w, r.avg_mobile_power_w, r.avg_server_power_w,
                         r.avg_sum_queue_bits_per_device, r.exec_delay_ms, r.final_queue_over_t, r.c_bits2})
            out << ',' << format_double(v);
        out << ',' << r.gs_nonconverged_slots << '\n';
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace mec
