#include "mec/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace mec {

OffloaderPartition partition_offloaders(const QueueState& state) {
    OffloaderPartition part;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state.q_bits[i] > state.t_bits[i])
            part.offloaders.push_back(i);
        else
            part.non_offloaders.push_back(i);
    }
    return part;
}

double OffloadProblem::device_objective(std::size_t k, double alpha, double p) const {
    return -backlog_gap[k] * radio.rate(alpha, p, gamma[k]) + control_v * weight[k] * p;
}

double OffloadProblem::objective(std::span<const double> p, std::span<const double> alpha) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < size(); ++k) sum += device_objective(k, alpha[k], p[k]);
    return sum;
}

OffloadProblem make_offload_problem(const QueueState& state, const SlotEnvironment& env, const SystemConfig& cfg,
                                    const OffloaderPartition& partition) {
    OffloadProblem prob;
    prob.radio = RadioParams::from(cfg);
    prob.control_v = cfg.control_v;
    prob.eps_a = cfg.eps_a;
    prob.alpha_budget = 1.0 - static_cast<double>(partition.non_offloaders.size()) * cfg.eps_a;
    for (std::size_t i : partition.offloaders) {
        prob.devices.push_back(i);
        prob.backlog_gap.push_back(state.q_bits[i] - state.t_bits[i]);
        prob.gamma.push_back(env.gamma[i]);
        prob.weight.push_back(cfg.devices[i].weight);
        prob.p_max_w.push_back(cfg.devices[i].p_max_w);
    }
    return prob;
}

std::vector<double> solve_sp1(std::span<const double> q_bits, const SystemConfig& cfg) {
    std::vector<double> f(cfg.n_devices());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto& d = cfg.devices[i];
        if (d.weight > 0.0) {
            const double stationary =
                std::sqrt(q_bits[i] * cfg.slot_seconds / (3.0 * d.kappa_mob * d.weight * cfg.control_v * d.cycles_per_bit));
            f[i] = std::min(d.f_max_hz, stationary);
        } else {
            f[i] = d.f_max_hz;
        }
    }
    return f;
}

std::vector<double> solve_power_given_bandwidth(const OffloadProblem& problem, std::span<const double> alpha) {
    std::vector<double> p(problem.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (problem.weight[k] > 0.0) {
            if (problem.gamma[k] <= 0.0) {
                p[k] = 0.0;
                continue;
            }
            const double water_level = problem.backlog_gap[k] * problem.radio.slot_seconds /
                                       (std::numbers::ln2 * problem.control_v * problem.weight[k]);
            const double excess = std::max(water_level - problem.radio.noise_psd_w_per_hz / problem.gamma[k], 0.0);
            p[k] = std::min(alpha[k] * problem.radio.bandwidth_hz * excess, problem.p_max_w[k]);
        } else {
            p[k] = problem.p_max_w[k];
        }
    }
    return p;
}

namespace {

// c * dD_r/dalpha, the marginal value of bandwidth for one offloader.
double marginal_value(const OffloadProblem& prob, std::size_t k, double alpha, double p) {
    return prob.backlog_gap[k] * prob.radio.rate_dalpha(alpha, p, prob.gamma[k]);
}

// Root of c * dD_r/dalpha = lambda on (0, upper]; upper itself when the
// marginal value there still exceeds lambda.
//
// With x = gamma p / (alpha N0 omega) the condition reads g(x) = target where
// g(x) = ln(1+x) - x/(1+x) is increasing, so alpha = K / x. The root is
// searched in u = ln x inside the bracket t <= ln(1+x) <= t+1, using Newton
// steps that fall back to bisection when they leave the bracket, until the
// bracket (or the Newton step) is narrower than rel_width in u, i.e. relative
// width in alpha. `hint` carries the previous root in u between calls.
double bandwidth_root(const OffloadProblem& prob, std::size_t k, double p, double lambda, double upper,
                      double rel_width, double& hint) {
    if (marginal_value(prob, k, upper, p) >= lambda) return upper;

    const auto& radio = prob.radio;
    const double snr_scale = prob.gamma[k] * p / (radio.noise_psd_w_per_hz * radio.bandwidth_hz);
    const double target = lambda * std::numbers::ln2 / (prob.backlog_gap[k] * radio.bandwidth_hz * radio.slot_seconds);

    // The clamp above guarantees x(upper) lies below the root.
    double lo = std::max(std::log(std::expm1(target)), std::log(snr_scale / upper));
    double hi = std::log(std::expm1(target + 1.0));
    if (!(lo < hi)) return snr_scale / std::exp(hi);

    double u = (hint > lo && hint < hi) ? hint : 0.5 * (lo + hi);
    for (int it = 0; it < 200 && hi - lo > rel_width; ++it) {
        const double x = std::exp(u);
        const double r = x / (1.0 + x);
        const double f = std::log1p(x) - r - target;
        if (f == 0.0) break;
        (f < 0.0 ? lo : hi) = u;
        const double step = f / (r * r);
        const double newton = u - step;
        if (newton > lo && newton < hi) {
            u = newton;
            if (std::abs(step) < 0.5 * rel_width) break;
        } else {
            u = 0.5 * (lo + hi);
        }
    }
    hint = u;
    return snr_scale / std::exp(u);
}

}  // namespace

BandwidthSolution solve_bandwidth_given_power(const OffloadProblem& problem, std::span<const double> p,
                                              const SolverOptions& opts) {
    const std::size_t n = problem.size();
    const double eps = problem.eps_a;
    const double budget = problem.alpha_budget;
    BandwidthSolution sol;
    sol.alpha.assign(n, eps);
    if (n == 0) return sol;

    std::vector<char> active(n, 0);
    bool any_active = false;
    for (std::size_t k = 0; k < n; ++k) {
        active[k] = p[k] * problem.gamma[k] > 0.0;
        any_active = any_active || active[k];
    }
    if (!any_active) return sol;

    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (!active[k]) continue;
        lambda_lo = std::max(lambda_lo, marginal_value(problem, k, budget, p[k]));
        lambda_hi = std::max(lambda_hi, marginal_value(problem, k, eps, p[k]));
    }

    auto total = [&] { return std::accumulate(sol.alpha.begin(), sol.alpha.end(), 0.0); };
    double sum = total();
    std::vector<double> hints(n, std::numeric_limits<double>::quiet_NaN());
    int iter = 0;
    while (std::abs(sum - budget) >= opts.outer_tol && iter <= opts.outer_max_iter) {
        const double lambda = 0.5 * (lambda_lo + lambda_hi);
        ++iter;
        for (std::size_t k = 0; k < n; ++k) {
            sol.alpha[k] = active[k]
                               ? std::max(eps, bandwidth_root(problem, k, p[k], lambda, budget, opts.inner_rel_width, hints[k]))
                               : eps;
        }
        sum = total();
        if (sum > budget)
            lambda_lo = lambda;
        else
            lambda_hi = lambda;
    }
    sol.iterations = iter;
    sol.converged = std::abs(sum - budget) < opts.outer_tol;

    if (sum > budget) {
        // Pull the above-eps excess back proportionally so the split stays feasible.
        const double excess = sum - static_cast<double>(n) * eps;
        const double room = budget - static_cast<double>(n) * eps;
        const double scale = excess > 0.0 ? room / excess : 0.0;
        for (auto& a : sol.alpha) a = eps + (a - eps) * scale;
    }
    return sol;
}

OffloadSolution solve_offload(const OffloadProblem& problem, const SolverOptions& opts) {
    const std::size_t n = problem.size();
    OffloadSolution sol;
    if (n == 0) return sol;

    std::vector<double> alpha(n, problem.alpha_budget / static_cast<double>(n));
    std::vector<double> p;
    double prev = 0.0;
    auto& trace = sol.trace;
    trace.converged = false;

    for (int k = 1; k <= opts.gs_max_iter; ++k) {
        p = solve_power_given_bandwidth(problem, alpha);
        trace.iterations = k;

        bool any_link = false;
        for (std::size_t j = 0; j < n; ++j) any_link = any_link || p[j] * problem.gamma[j] > 0.0;
        if (!any_link) {
            // p no longer depends on alpha, so this is a fixed point.
            alpha.assign(n, problem.eps_a);
            trace.objective_history.push_back(problem.objective(p, alpha));
            trace.converged = true;
            break;
        }

        auto bw = solve_bandwidth_given_power(problem, p, opts);
        if (!bw.converged) ++trace.bandwidth_nonconverged;
        double obj = problem.objective(p, bw.alpha);
        const double obj_kept = problem.objective(p, alpha);
        if (obj > obj_kept) {
            // Inexact bandwidth step lost ground; the previous split is the
            // better point and the next power step would reproduce p.
            trace.objective_history.push_back(obj_kept);
            trace.converged = true;
            break;
        }
        alpha = std::move(bw.alpha);
        trace.objective_history.push_back(obj);
        if (k >= 2 && std::abs(prev - obj) <= opts.gs_tol * std::max(std::abs(prev), std::abs(obj))) {
            trace.converged = true;
            break;
        }
        prev = obj;
    }
    sol.p_tx_w = std::move(p);
    sol.alpha = std::move(alpha);
    return sol;
}

Sp2Solution solve_sp2(const QueueState& state, const SlotEnvironment& env, const SystemConfig& cfg,
                      const SolverOptions& opts) {
    const auto part = partition_offloaders(state);
    const auto prob = make_offload_problem(state, env, cfg, part);
    auto off = solve_offload(prob, opts);

    Sp2Solution sol;
    sol.p_tx_w.assign(cfg.n_devices(), 0.0);
    sol.alpha.assign(cfg.n_devices(), cfg.eps_a);
    for (std::size_t k = 0; k < prob.size(); ++k) {
        sol.p_tx_w[prob.devices[k]] = off.p_tx_w[k];
        sol.alpha[prob.devices[k]] = off.alpha[k];
    }
    sol.trace = std::move(off.trace);
    return sol;
}

std::size_t most_backlogged_device(std::span<const double> t_bits, const SystemConfig& cfg) {
    std::size_t best = 0;
    double best_value = t_bits[0] / cfg.devices[0].cycles_per_bit;
    for (std::size_t i = 1; i < t_bits.size(); ++i) {
        const double v = t_bits[i] / cfg.devices[i].cycles_per_bit;
        if (v > best_value) {
            best = i;
            best_value = v;
        }
    }
    return best;
}

ServerSchedule solve_sp3(std::span<const double> t_bits, const SystemConfig& cfg) {
    const std::size_t target = most_backlogged_device(t_bits, cfg);
    const double cycles_per_bit = cfg.devices[target].cycles_per_bit;
    ServerSchedule out;
    out.f_c_hz.resize(cfg.n_cores());
    double cycle_sum = 0.0;
    for (std::size_t m = 0; m < cfg.n_cores(); ++m) {
        const auto& core = cfg.cores[m];
        if (cfg.server_weight > 0.0) {
            const double stationary = std::sqrt(t_bits[target] * cfg.slot_seconds /
                                                (3.0 * cfg.control_v * cfg.server_weight * cycles_per_bit * core.kappa_ser));
            out.f_c_hz[m] = std::min(core.fc_max_hz, stationary);
        } else {
            out.f_c_hz[m] = core.fc_max_hz;
        }
        cycle_sum += out.f_c_hz[m] * cfg.slot_seconds;
    }
    out.d_s_bits.assign(cfg.n_devices(), 0.0);
    out.d_s_bits[target] = cycle_sum / cycles_per_bit;
    if (out.d_s_bits[target] > 0.0) out.scheduled = target;
    return out;
}

PerSlotSolution solve_per_slot(const QueueState& state, const SlotEnvironment& env, const SystemConfig& cfg,
                               const SolverOptions& opts) {
    PerSlotSolution out;
    out.decision.f_hz = solve_sp1(state.q_bits, cfg);
    auto sp2 = solve_sp2(state, env, cfg, opts);
    out.decision.p_tx_w = std::move(sp2.p_tx_w);
    out.decision.alpha = std::move(sp2.alpha);
    out.trace = std::move(sp2.trace);
    auto sp3 = solve_sp3(state.t_bits, cfg);
    out.decision.f_c_hz = std::move(sp3.f_c_hz);
    out.decision.d_s_bits = std::move(sp3.d_s_bits);
    return out;
}

PerSlotSolution solve_per_slot_equal_bandwidth(const QueueState& state, const SlotEnvironment& env,
                                               const SystemConfig& cfg) {
    const std::size_t n = cfg.n_devices();
    const double share = 1.0 / static_cast<double>(n);
    PerSlotSolution out;
    out.decision.f_hz = solve_sp1(state.q_bits, cfg);
    out.decision.alpha.assign(n, share);
    out.decision.p_tx_w.assign(n, 0.0);

    const auto part = partition_offloaders(state);
    const auto prob = make_offload_problem(state, env, cfg, part);
    const std::vector<double> alpha(prob.size(), share);
    const auto p = solve_power_given_bandwidth(prob, alpha);
    for (std::size_t k = 0; k < prob.size(); ++k) out.decision.p_tx_w[prob.devices[k]] = p[k];
    out.trace.iterations = prob.size() > 0 ? 1 : 0;
    if (prob.size() > 0) out.trace.objective_history.push_back(prob.objective(p, alpha));

    auto sp3 = solve_sp3(state.t_bits, cfg);
    out.decision.f_c_hz = std::move(sp3.f_c_hz);
    out.decision.d_s_bits = std::move(sp3.d_s_bits);
    return out;
}

double sp1_objective(std::span<const double> q_bits, std::span<const double> f_hz, const SystemConfig& cfg) {
    double sum = 0.0;
    for (std::size_t i = 0; i < f_hz.size(); ++i) {
        const auto& d = cfg.devices[i];
        sum += -q_bits[i] * cfg.slot_seconds * f_hz[i] / d.cycles_per_bit +
               cfg.control_v * d.weight * d.kappa_mob * f_hz[i] * f_hz[i] * f_hz[i];
    }
    return sum;
}

double sp2_objective(const QueueState& state, const SlotEnvironment& env, std::span<const double> p_tx_w,
                     std::span<const double> alpha, const SystemConfig& cfg) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p_tx_w.size(); ++i) {
        sum += -(state.q_bits[i] - state.t_bits[i]) * offload_rate(alpha[i], p_tx_w[i], env.gamma[i], cfg) +
               cfg.control_v * cfg.devices[i].weight * p_tx_w[i];
    }
    return sum;
}

double sp3_objective(std::span<const double> t_bits, std::span<const double> f_c_hz, std::span<const double> d_s_bits,
                     const SystemConfig& cfg) {
    double sum = 0.0;
    for (std::size_t i = 0; i < d_s_bits.size(); ++i) sum -= t_bits[i] * d_s_bits[i];
    return sum + cfg.control_v * cfg.server_weight * server_power(f_c_hz, cfg);
}

double per_slot_objective(const QueueState& state, const SlotEnvironment& env, const SlotDecision& decision,
                          const SystemConfig& cfg) {
    double sum = 0.0;
    for (std::size_t i = 0; i < cfg.n_devices(); ++i) {
        const double d_l = local_departure(decision.f_hz[i], cfg, i);
        const double d_r = offload_rate(decision.alpha[i], decision.p_tx_w[i], env.gamma[i], cfg);
        sum += -state.q_bits[i] * (d_l + d_r) - state.t_bits[i] * (decision.d_s_bits[i] - d_r);
    }
    return sum + cfg.control_v * weighted_power(decision, cfg);
}

bool decision_feasible(const SlotDecision& d, const SystemConfig& cfg, double cycle_rel_tol) {
    const std::size_t n = cfg.n_devices();
    if (d.f_hz.size() != n || d.p_tx_w.size() != n || d.alpha.size() != n || d.d_s_bits.size() != n ||
        d.f_c_hz.size() != cfg.n_cores())
        return false;
    double alpha_sum = 0.0;
    double cycles_used = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& dev = cfg.devices[i];
        if (!(d.f_hz[i] >= 0.0 && d.f_hz[i] <= dev.f_max_hz)) return false;
        if (!(d.p_tx_w[i] >= 0.0 && d.p_tx_w[i] <= dev.p_max_w)) return false;
        if (!(d.alpha[i] >= cfg.eps_a)) return false;
        if (!(d.d_s_bits[i] >= 0.0)) return false;
        alpha_sum += d.alpha[i];
        cycles_used += d.d_s_bits[i] * dev.cycles_per_bit;
    }
    if (alpha_sum > 1.0 + 1e-12) return false;
    double cycles_offered = 0.0;
    for (std::size_t m = 0; m < cfg.n_cores(); ++m) {
        if (!(d.f_c_hz[m] >= 0.0 && d.f_c_hz[m] <= cfg.cores[m].fc_max_hz)) return false;
        cycles_offered += d.f_c_hz[m] * cfg.slot_seconds;
    }
    return cycles_used <= cycles_offered * (1.0 + cycle_rel_tol);
}

}  // namespace mec
