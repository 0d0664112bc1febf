#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mec/config.hpp"
#include "mec/engine.hpp"
#include "mec/metrics.hpp"

namespace mec {

inline constexpr int kSchemaVersion = 1;

/// Shortest round-trip decimal form; identical inputs give identical text.
std::string format_double(double v);

nlohmann::json metrics_to_json(const RunMetrics& m);

/// Provenance attached to a metrics document.
struct RunProvenance {
    std::vector<std::string> overrides;
    std::optional<double> p_opt_proxy;   // enables the power bound field
    std::string timestamp;               // empty: omitted
};

/// Metrics of both averaging windows, config echo and hash, seed, mode,
/// drift constant and bound values.
nlohmann::json run_report_json(const SystemConfig& cfg, const RunOptions& opts, const RunResult& result,
                               const RunProvenance& provenance);

/// "#schema_version=1" row, header, one row per (slot, device).
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);

struct SweepRow {
    double control_v = 0.0;
    Mode mode = Mode::baseline;
    double server_weight = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t n_slots = 0;
    double avg_weighted_power_w = 0.0;
    double avg_mobile_power_w = 0.0;
    double avg_server_power_w = 0.0;
    double avg_sum_queue_bits_per_device = 0.0;
    double exec_delay_ms = 0.0;
    double final_queue_over_t = 0.0;
    double c_bits2 = 0.0;
    std::uint64_t gs_nonconverged_slots = 0;
};

/// Column names of the sweep CSV, in order.
const std::vector<std::string>& sweep_columns();

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Current UTC time as ISO 8601.
std::string utc_timestamp();

}  // namespace mec
