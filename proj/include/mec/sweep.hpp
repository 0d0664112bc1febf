#pragma once

#include <cstdint>
#include <vector>

#include "mec/config.hpp"
#include "mec/engine.hpp"
#include "mec/io.hpp"

namespace mec {

struct SweepSpec {
    std::vector<double> v_values;
    std::vector<Mode> modes;
    std::vector<std::uint64_t> seeds;
    std::uint64_t n_slots = 10000;
    std::vector<double> server_weights{0.0};

    /// Throws std::invalid_argument on an empty list or n_slots < 1.
    void validate() const;
};

/// Runs every (V, mode, w_server, seed) combination on a worker pool. Rows are
/// ordered by V, then mode, then w_server, then seed, in the order given by
/// the spec, independent of completion order. A failing run aborts the sweep
/// with its parameters in the message.
std::vector<SweepRow> run_sweep(const SystemConfig& base, const SweepSpec& spec, unsigned threads = 1,
                                const SolverOptions& solver = {});

/// Single-run row for the sweep CSV.
SweepRow make_sweep_row(const SystemConfig& cfg, Mode mode, std::uint64_t n_slots, const RunMetrics& metrics);

}  // namespace mec
