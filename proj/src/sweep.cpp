#include "mec/sweep.hpp"

#include <atomic>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

namespace mec {

void SweepSpec::validate() const {
    if (v_values.empty()) throw std::invalid_argument("sweep: v_values is empty");
    if (modes.empty()) throw std::invalid_argument("sweep: modes is empty");
    if (seeds.empty()) throw std::invalid_argument("sweep: seeds is empty");
    if (server_weights.empty()) throw std::invalid_argument("sweep: server_weights is empty");
    if (n_slots < 1) throw std::invalid_argument("sweep: n_slots must be at least 1");
}

SweepRow make_sweep_row(const SystemConfig& cfg, Mode mode, std::uint64_t n_slots, const RunMetrics& m) {
    SweepRow row;
    row.control_v = cfg.control_v;
    row.mode = mode;
    row.server_weight = cfg.server_weight;
    row.seed = cfg.rng_seed;
    row.n_slots = n_slots;
    row.avg_weighted_power_w = m.avg_weighted_power_w;
    row.avg_mobile_power_w = m.avg_mobile_power_w;
    row.avg_server_power_w = m.avg_server_power_w;
    row.avg_sum_queue_bits_per_device = m.avg_sum_queue_bits / static_cast<double>(cfg.n_devices());
    row.exec_delay_ms = m.avg_exec_delay_slots * cfg.slot_seconds * 1e3;
    row.final_queue_over_t = m.final_queue_over_t;
    row.c_bits2 = drift_constant_c(cfg);
    row.gs_nonconverged_slots = m.gs_nonconverged_slots;
    return row;
}

std::vector<SweepRow> run_sweep(const SystemConfig& base, const SweepSpec& spec, unsigned threads,
                                const SolverOptions& solver) {
    spec.validate();
    struct Job {
        SystemConfig cfg;
        Mode mode;
    };
    std::vector<Job> jobs;
    for (double v : spec.v_values)
        for (Mode mode : spec.modes)
            for (double w : spec.server_weights)
                for (std::uint64_t seed : spec.seeds) {
                    Job job{base, mode};
                    job.cfg.control_v = v;
                    job.cfg.server_weight = w;
                    job.cfg.rng_seed = seed;
                    job.cfg.validate();
                    jobs.push_back(std::move(job));
                }

    std::vector<SweepRow> rows(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t k; !failed && (k = next++) < jobs.size();) {
            try {
                RunOptions opts;
                opts.mode = jobs[k].mode;
                opts.n_slots = spec.n_slots;
                opts.solver = solver;
                const auto result = run(jobs[k].cfg, opts);
                rows[k] = make_sweep_row(jobs[k].cfg, jobs[k].mode, spec.n_slots, result.metrics);
            } catch (...) {
                errors[k] = std::current_exception();
                failed = true;
            }
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    for (std::size_t k = 0; k < jobs.size(); ++k) {
        if (!errors[k]) continue;
        const std::string where = "run V=" + format_double(jobs[k].cfg.control_v) + " mode=" +
                                  std::string(to_string(jobs[k].mode)) +
                                  " w_server=" + format_double(jobs[k].cfg.server_weight) +
                                  " seed=" + std::to_string(jobs[k].cfg.rng_seed);
        try {
            std::rethrow_exception(errors[k]);
        } catch (const std::exception& e) {
            throw std::runtime_error(where + ": " + e.what());
        }
    }
    return rows;
}

}  // namespace mec
