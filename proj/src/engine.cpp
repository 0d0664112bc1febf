#include "mec/engine.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mec {

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::baseline: return "baseline";
        case Mode::delay_improved: return "delay_improved";
        case Mode::equal_bandwidth: return "equal_bandwidth";
    }
    return "unknown";
}

Mode parse_mode(std::string_view name) {
    if (name == "baseline" || name == "baseline_alg1") return Mode::baseline;
    if (name == "delay_improved" || name == "delay_improved_alg3") return Mode::delay_improved;
    if (name == "equal_bandwidth") return Mode::equal_bandwidth;
    throw std::invalid_argument("unknown mode: " + std::string(name));
}

double update_local_queue(double q, double d_sigma, double a) { return std::max(q - d_sigma, 0.0) + a; }

double update_server_queue(double t, double d_s, double q, double d_l, double d_r) {
    return std::max(t - d_s, 0.0) + std::min(std::max(q - d_l, 0.0), d_r);
}

std::vector<double> delay_improved_schedule(std::span<const double> d_s_star, std::span<const double> f_c_star,
                                            std::span<const double> actual_t, std::span<const double> virtual_t,
                                            const SystemConfig& cfg) {
    const std::size_t n = cfg.n_devices();
    double budget = 0.0;
    for (double f : f_c_star) budget += f * cfg.slot_seconds;

    const std::size_t top = most_backlogged_device(virtual_t, cfg);
    if (budget <= actual_t[top] * cfg.devices[top].cycles_per_bit)
        return {d_s_star.begin(), d_s_star.end()};

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return virtual_t[a] / cfg.devices[a].cycles_per_bit > virtual_t[b] / cfg.devices[b].cycles_per_bit;
    });

    double total_demand = 0.0;
    for (std::size_t i = 0; i < n; ++i) total_demand += actual_t[i] * cfg.devices[i].cycles_per_bit;

    // Position (0-based) in `order` of the last device that receives cycles.
    std::size_t last = n - 1;
    if (total_demand > budget) {
        double cumulative = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            cumulative += actual_t[order[k]] * cfg.devices[order[k]].cycles_per_bit;
            if (cumulative > budget) {
                last = k;
                break;
            }
        }
    }

    std::vector<double> out(n, 0.0);
    double used = 0.0;
    for (std::size_t k = 0; k < last; ++k) {
        const std::size_t i = order[k];
        out[i] = actual_t[i];
        used += actual_t[i] * cfg.devices[i].cycles_per_bit;
    }
    const std::size_t i_last = order[last];
    out[i_last] = std::max(budget - used, 0.0) / cfg.devices[i_last].cycles_per_bit;
    return out;
}

EngineState EngineState::initial(const SystemConfig& cfg, Mode mode) {
    EngineState s;
    s.actual = QueueState::zeros(cfg.n_devices());
    s.virtual_t.assign(cfg.n_devices(), 0.0);
    s.rng = RngState{cfg.rng_seed, 0};
    s.mode = mode;
    return s;
}

QueueState EngineState::decision_queues() const {
    if (mode == Mode::delay_improved) return QueueState{actual.q_bits, virtual_t};
    return actual;
}

StepResult step(const EngineState& engine, const SystemConfig& cfg, const SolverOptions& opts) {
    StepResult r;
    r.env = draw_environment(engine.rng, cfg);
    const QueueState decision_state = engine.decision_queues();

    PerSlotSolution sol = engine.mode == Mode::equal_bandwidth ? solve_per_slot_equal_bandwidth(decision_state, r.env, cfg)
                                                               : solve_per_slot(decision_state, r.env, cfg, opts);
    r.decision = std::move(sol.decision);
    r.gs_iterations = sol.trace.iterations;
    r.gs_converged = sol.trace.converged && sol.trace.bandwidth_nonconverged == 0;
    r.outcome = evaluate_outcome(engine.actual, r.env, r.decision, cfg);

    r.d_s_applied = engine.mode == Mode::delay_improved
                        ? delay_improved_schedule(r.decision.d_s_bits, r.decision.f_c_hz, engine.actual.t_bits,
                                                  engine.virtual_t, cfg)
                        : r.decision.d_s_bits;

    const std::size_t n = cfg.n_devices();
    EngineState next = engine;
    for (std::size_t i = 0; i < n; ++i) {
        const double q = engine.actual.q_bits[i];
        const double d_l = r.outcome.d_local_bits[i];
        const double d_r = r.outcome.d_remote_bits[i];
        next.actual.q_bits[i] = update_local_queue(q, d_l + d_r, r.env.arrivals_bits[i]);
        next.actual.t_bits[i] = update_server_queue(engine.actual.t_bits[i], r.d_s_applied[i], q, d_l, d_r);
        next.virtual_t[i] = engine.mode == Mode::delay_improved
                                ? update_server_queue(engine.virtual_t[i], r.decision.d_s_bits[i], q, d_l, d_r)
                                : next.actual.t_bits[i];
    }
    next.slot_index = engine.slot_index + 1;
    next.rng.slot = engine.rng.slot + 1;
    r.next = std::move(next);
    return r;
}

RunResult run(const SystemConfig& cfg, const RunOptions& opts) {
    if (opts.n_slots < 1) throw std::invalid_argument("run: n_slots must be at least 1");
    cfg.validate();

    const std::size_t n = cfg.n_devices();
    RunResult result;
    result.summaries.reserve(opts.n_slots);
    if (opts.keep_trace) result.trace.reserve(opts.n_slots * n);
    MetricsAccumulator all(n);
    MetricsAccumulator post(n);

    EngineState engine = EngineState::initial(cfg, opts.mode);
    for (std::uint64_t t = 0; t < opts.n_slots; ++t) {
        StepResult r = step(engine, cfg, opts.solver);
        all.add(engine.actual, r.outcome, r.gs_converged);
        if (t >= opts.warmup_slots) post.add(engine.actual, r.outcome, r.gs_converged);

        SlotSummary s{};
        for (std::size_t i = 0; i < n; ++i) {
            s.sum_q_bits += engine.actual.q_bits[i];
            s.sum_t_act_bits += engine.actual.t_bits[i];
            s.sum_t_vir_bits += engine.virtual_t[i];
        }
        s.weighted_power_w = r.outcome.weighted_power_w;
        result.summaries.push_back(s);

        if (opts.keep_trace) {
            double f_c_sum = 0.0;
            for (double f : r.decision.f_c_hz) f_c_sum += f;
            for (std::size_t i = 0; i < n; ++i) {
                result.trace.push_back(TraceRow{t,
                                                i,
                                                engine.actual.q_bits[i],
                                                engine.actual.t_bits[i],
                                                engine.virtual_t[i],
                                                r.decision.f_hz[i],
                                                r.decision.p_tx_w[i],
                                                r.decision.alpha[i],
                                                r.outcome.d_local_bits[i],
                                                r.outcome.d_remote_bits[i],
                                                r.outcome.d_effective_remote_bits[i],
                                                r.d_s_applied[i],
                                                f_c_sum,
                                                r.outcome.weighted_power_w,
                                                r.gs_iterations,
                                                r.gs_converged});
            }
        }
        engine = std::move(r.next);
    }
    result.final_state = engine.actual;
    result.metrics = all.finish(engine.actual, cfg);
    result.metrics_post_warmup = post.finish(engine.actual, cfg);
    return result;
}

}  // namespace mec
