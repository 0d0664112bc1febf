#include "mec/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "mec/environment.hpp"
#include "mec/model.hpp"

namespace mec {

nlohmann::json to_json(const OracleReport& r) {
    nlohmann::json j;
    j["suite"] = r.suite;
    j["case_id"] = r.case_id;
    j["closed_form_objective"] = r.closed_form_objective;
    j["oracle_objective"] = r.oracle_objective;
    j["abs_gap"] = r.abs_gap;
    j["rel_gap"] = r.rel_gap;
    j["tolerance"] = r.tolerance;
    j["resolution"] = r.resolution;
    j["pass"] = r.pass;
    if (!r.extra.empty()) j["extra"] = r.extra;
    return j;
}

GridMin grid_oracle_scalar(const std::function<double(double)>& fn, double lo, double hi, std::size_t n_points) {
    if (!(lo < hi)) throw std::invalid_argument("grid_oracle_scalar: need lo < hi");
    if (n_points < 2) throw std::invalid_argument("grid_oracle_scalar: need at least 2 points");
    const double step = (hi - lo) / static_cast<double>(n_points - 1);
    GridMin best{lo, fn(lo)};
    for (std::size_t k = 1; k < n_points; ++k) {
        const double x = k + 1 == n_points ? hi : lo + step * static_cast<double>(k);
        const double v = fn(x);
        if (v < best.min) best = {x, v};
    }
    return best;
}

std::vector<double> project_capped_simplex(std::span<const double> v, double cap) {
    std::vector<double> out(v.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::max(v[i], 0.0);
        sum += out[i];
    }
    if (sum <= cap) return out;

    // Projection onto {x >= 0, sum x = cap}: x = max(v - theta, 0).
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        cumulative += sorted[k];
        const double candidate = (cumulative - cap) / static_cast<double>(k + 1);
        if (k + 1 == sorted.size() || sorted[k + 1] <= candidate) {
            theta = candidate;
            break;
        }
    }
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
    return out;
}

namespace {

// Scaled variables: x_k = p_k / p_max,k in [0, 1], b_k = alpha_k - eps_A >= 0.
struct PgPoint {
    std::vector<double> x;
    std::vector<double> b;
};

double pg_objective(const OffloadProblem& prob, const PgPoint& z) {
    double sum = 0.0;
    for (std::size_t k = 0; k < prob.size(); ++k)
        sum += prob.device_objective(k, prob.eps_a + z.b[k], z.x[k] * prob.p_max_w[k]);
    return sum;
}

PgPoint pg_gradient(const OffloadProblem& prob, const PgPoint& z) {
    PgPoint g{std::vector<double>(prob.size()), std::vector<double>(prob.size())};
    for (std::size_t k = 0; k < prob.size(); ++k) {
        const double alpha = prob.eps_a + z.b[k];
        const double p = z.x[k] * prob.p_max_w[k];
        g.x[k] = prob.p_max_w[k] *
                 (-prob.backlog_gap[k] * prob.radio.rate_dp(alpha, p, prob.gamma[k]) + prob.control_v * prob.weight[k]);
        g.b[k] = -prob.backlog_gap[k] * prob.radio.rate_dalpha(alpha, p, prob.gamma[k]);
    }
    return g;
}

PgPoint pg_project(const OffloadProblem& prob, const PgPoint& z) {
    PgPoint out;
    out.x.resize(z.x.size());
    for (std::size_t k = 0; k < z.x.size(); ++k) out.x[k] = std::clamp(z.x[k], 0.0, 1.0);
    const double cap = prob.alpha_budget - static_cast<double>(prob.size()) * prob.eps_a;
    out.b = project_capped_simplex(z.b, std::max(cap, 0.0));
    return out;
}

}  // namespace

PgResult projected_gradient_sp2(const OffloadProblem& prob, const PgOptions& opts) {
    const std::size_t n = prob.size();
    PgResult res;
    if (n == 0) return res;

    const double cap = prob.alpha_budget - static_cast<double>(n) * prob.eps_a;
    PgPoint x{std::vector<double>(n, 0.5), std::vector<double>(n, cap / static_cast<double>(n))};
    double fx = pg_objective(prob, x);
    PgPoint y = x;
    double t = 1.0;
    double step = 1.0;
    // Start the step at a scale matched to the gradient.
    {
        const PgPoint g = pg_gradient(prob, x);
        double norm = 0.0;
        for (std::size_t k = 0; k < n; ++k) norm = std::max({norm, std::abs(g.x[k]), std::abs(g.b[k])});
        if (norm > 0.0) step = 1.0 / norm;
    }

    int it = 0;
    for (; it < opts.max_iter; ++it) {
        const PgPoint g = pg_gradient(prob, y);
        const double fy = pg_objective(prob, y);
        step *= 1.25;
        PgPoint z;
        double fz = 0.0;
        double move2 = 0.0;
        bool accepted = false;
        for (int bt = 0; bt < 80; ++bt) {
            PgPoint trial{std::vector<double>(n), std::vector<double>(n)};
            for (std::size_t k = 0; k < n; ++k) {
                trial.x[k] = y.x[k] - step * g.x[k];
                trial.b[k] = y.b[k] - step * g.b[k];
            }
            z = pg_project(prob, trial);
            double lin = 0.0;
            move2 = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double dx = z.x[k] - y.x[k];
                const double db = z.b[k] - y.b[k];
                lin += g.x[k] * dx + g.b[k] * db;
                move2 += dx * dx + db * db;
            }
            fz = pg_objective(prob, z);
            if (fz <= fy + lin + move2 / (2.0 * step)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        if (fz > fx) {
            // Momentum overshot: restart from the last iterate.
            y = x;
            t = 1.0;
            if (std::sqrt(move2) < opts.step_tol) break;
            continue;
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double beta = (t - 1.0) / t_next;
        PgPoint extrapolated{std::vector<double>(n), std::vector<double>(n)};
        for (std::size_t k = 0; k < n; ++k) {
            extrapolated.x[k] = z.x[k] + beta * (z.x[k] - x.x[k]);
            extrapolated.b[k] = z.b[k] + beta * (z.b[k] - x.b[k]);
        }
        const bool small = std::sqrt(move2) < opts.step_tol;
        x = std::move(z);
        fx = fz;
        y = pg_project(prob, extrapolated);
        t = t_next;
        if (small) break;
    }

    res.iterations = it;
    res.objective = fx;
    res.p_tx_w.resize(n);
    res.alpha.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        res.p_tx_w[k] = x.x[k] * prob.p_max_w[k];
        res.alpha[k] = prob.eps_a + x.b[k];
    }
    return res;
}

namespace {

void check_sp3_size(const SystemConfig& cfg) {
    if (cfg.n_cores() > 3 || cfg.n_devices() > 4)
        throw std::invalid_argument("exhaustive_sp3: limited to M <= 3 cores and N <= 4 devices");
}

// Visits every point of the per-core frequency grid.
template <typename Fn>
void for_each_frequency(const SystemConfig& cfg, std::size_t points, Fn&& fn) {
    if (points < 2) throw std::invalid_argument("exhaustive_sp3: need at least 2 grid points");
    const std::size_t m = cfg.n_cores();
    std::vector<std::size_t> idx(m, 0);
    std::vector<double> f(m, 0.0);
    auto value = [&](std::size_t core, std::size_t k) {
        const double hi = cfg.cores[core].fc_max_hz;
        return k + 1 == points ? hi : hi * static_cast<double>(k) / static_cast<double>(points - 1);
    };
    while (true) {
        for (std::size_t c = 0; c < m; ++c) f[c] = value(c, idx[c]);
        fn(f);
        std::size_t c = 0;
        while (c < m && ++idx[c] == points) idx[c++] = 0;
        if (c == m) break;
    }
}

double core_cost(const SystemConfig& cfg, std::span<const double> f) {
    double p = 0.0;
    for (std::size_t c = 0; c < f.size(); ++c) p += cfg.cores[c].kappa_ser * f[c] * f[c] * f[c];
    return cfg.control_v * cfg.server_weight * p;
}

// All compositions of `total` into `parts` non-negative integers.
void compositions(std::size_t total, std::size_t parts, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() + 1 == parts) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (std::size_t k = 0; k <= total; ++k) {
        cur.push_back(k);
        compositions(total - k, parts, cur, out);
        cur.pop_back();
    }
}

}  // namespace

Sp3OracleResult exhaustive_sp3(std::span<const double> t_bits, const SystemConfig& cfg, std::size_t grid_points) {
    check_sp3_size(cfg);
    const std::size_t n = cfg.n_devices();
    Sp3OracleResult best;
    best.objective = std::numeric_limits<double>::infinity();
    for_each_frequency(cfg, grid_points, [&](const std::vector<double>& f) {
        double cycles = 0.0;
        for (double v : f) cycles += v * cfg.slot_seconds;
        const double cost = core_cost(cfg, f);
        for (std::size_t i = 0; i < n; ++i) {
            const double bits = cycles / cfg.devices[i].cycles_per_bit;
            const double obj = cost - t_bits[i] * bits;
            if (obj < best.objective) {
                best.objective = obj;
                best.f_c_hz = f;
                best.d_s_bits.assign(n, 0.0);
                best.d_s_bits[i] = bits;
            }
        }
    });
    return best;
}

Sp3OracleResult exhaustive_sp3_shares(std::span<const double> t_bits, const SystemConfig& cfg, std::size_t freq_points,
                                      std::size_t share_points) {
    check_sp3_size(cfg);
    if (share_points < 1) throw std::invalid_argument("exhaustive_sp3_shares: need at least 1 share step");
    const std::size_t n = cfg.n_devices();
    // One extra part holds idle cycles.
    std::vector<std::vector<std::size_t>> splits;
    std::vector<std::size_t> cur;
    compositions(share_points, n + 1, cur, splits);

    Sp3OracleResult best;
    best.objective = std::numeric_limits<double>::infinity();
    for_each_frequency(cfg, freq_points, [&](const std::vector<double>& f) {
        double cycles = 0.0;
        for (double v : f) cycles += v * cfg.slot_seconds;
        const double cost = core_cost(cfg, f);
        for (const auto& split : splits) {
            double obj = cost;
            for (std::size_t i = 0; i < n; ++i) {
                const double share = static_cast<double>(split[i]) / static_cast<double>(share_points);
                obj -= t_bits[i] * share * cycles / cfg.devices[i].cycles_per_bit;
            }
            if (obj < best.objective) {
                best.objective = obj;
                best.f_c_hz = f;
                best.d_s_bits.assign(n, 0.0);
                for (std::size_t i = 0; i < n; ++i)
                    best.d_s_bits[i] = static_cast<double>(split[i]) / static_cast<double>(share_points) * cycles /
                                       cfg.devices[i].cycles_per_bit;
            }
        }
    });
    return best;
}

std::string_view to_string(OracleSuite suite) {
    switch (suite) {
        case OracleSuite::sp1: return "sp1";
        case OracleSuite::pwr: return "pwr";
        case OracleSuite::sp2: return "sp2";
        case OracleSuite::sp3: return "sp3";
        case OracleSuite::zero_power: return "zero_power";
    }
    return "unknown";
}

std::vector<OracleSuite> parse_suites(std::string_view name) {
    if (name == "all")
        return {OracleSuite::sp1, OracleSuite::pwr, OracleSuite::sp2, OracleSuite::sp3, OracleSuite::zero_power};
    for (auto s : {OracleSuite::sp1, OracleSuite::pwr, OracleSuite::sp2, OracleSuite::sp3, OracleSuite::zero_power})
        if (name == to_string(s)) return {s};
    throw std::invalid_argument("unknown oracle suite: " + std::string(name));
}

std::size_t default_case_count(OracleSuite suite) {
    switch (suite) {
        case OracleSuite::sp2: return 200;
        case OracleSuite::zero_power: return 10000;
        default: return 1000;
    }
}

namespace {

// Oracle instances live in their own stream so solver changes never move them.
constexpr std::uint64_t kOracleNamespace = 0x6f7261636c65ULL;

class CaseDraws {
public:
    CaseDraws(std::uint64_t seed, OracleSuite suite, std::uint64_t case_id)
        : rng_(seed ^ kOracleNamespace),
          channel_(static_cast<CounterRng::Channel>(0x100 + static_cast<std::uint32_t>(suite))),
          case_(case_id) {}

    double uniform() { return rng_.uniform(case_, next_++, channel_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    double exponential() { return rng_.exponential(case_, next_++, channel_); }
    bool chance(double prob) { return uniform() < prob; }

private:
    CounterRng rng_;
    CounterRng::Channel channel_;
    std::uint64_t case_;
    std::uint64_t next_ = 0;
};

double rounding_tolerance(double oracle) { return 1e-9 + 1e-12 * std::abs(oracle); }

OracleReport finish_report(OracleReport r) {
    r.abs_gap = r.closed_form_objective - r.oracle_objective;
    r.rel_gap = r.abs_gap / std::max(std::abs(r.oracle_objective), 1.0);
    r.pass = r.pass && r.abs_gap <= r.tolerance;
    return r;
}

double draw_weight(CaseDraws& d, double zero_prob, double lo, double hi) {
    return d.chance(zero_prob) ? 0.0 : d.log_uniform(lo, hi);
}

OracleReport case_sp1(std::uint64_t id, const VerifyOptions& opts) {
    CaseDraws d(opts.seed, OracleSuite::sp1, id);
    SystemConfig cfg = default_config(1, 1);
    auto& dev = cfg.devices[0];
    dev.cycles_per_bit = d.log_uniform(100.0, 2000.0);
    dev.kappa_mob = d.log_uniform(1e-28, 1e-26);
    dev.f_max_hz = d.log_uniform(1e8, 3e9);
    dev.weight = draw_weight(d, 0.1, 0.1, 10.0);
    cfg.control_v = d.log_uniform(1e6, 1e10);
    const std::vector<double> q{d.chance(0.05) ? 0.0 : d.log_uniform(1e2, 1e7)};

    double f = solve_sp1(q, cfg)[0] * (1.0 - opts.perturb);
    constexpr std::size_t points = 2001;
    const auto grid = grid_oracle_scalar(
        [&](double x) { return sp1_objective(q, std::span<const double>(&x, 1), cfg); }, 0.0, dev.f_max_hz, points);

    OracleReport r;
    r.suite = "sp1";
    r.case_id = id;
    r.closed_form_objective = sp1_objective(q, std::span<const double>(&f, 1), cfg);
    r.oracle_objective = grid.min;
    r.tolerance = rounding_tolerance(grid.min);
    r.resolution = dev.f_max_hz / static_cast<double>(points - 1);
    r.pass = true;
    r.extra = {{"closed_form_argmin", f}, {"oracle_argmin", grid.argmin}};
    return finish_report(r);
}

OracleReport case_pwr(std::uint64_t id, const VerifyOptions& opts) {
    CaseDraws d(opts.seed, OracleSuite::pwr, id);
    const SystemConfig base = default_config(1, 1);
    OffloadProblem prob;
    prob.radio = RadioParams::from(base);
    prob.eps_a = base.eps_a;
    prob.alpha_budget = 1.0;
    prob.control_v = d.log_uniform(1e6, 1e10);
    prob.devices = {0};
    prob.backlog_gap = {d.log_uniform(1e2, 1e7)};
    const double distance = d.uniform(50.0, 300.0);
    prob.gamma = {d.exponential() * base.pathloss_const * std::pow(base.ref_distance_m / distance, base.pathloss_exp)};
    prob.weight = {draw_weight(d, 0.1, 0.1, 10.0)};
    prob.p_max_w = {d.log_uniform(0.05, 2.0)};
    const double alpha = d.uniform(base.eps_a, 1.0);

    const std::vector<double> alphas{alpha};
    const double p = solve_power_given_bandwidth(prob, alphas)[0] * (1.0 - opts.perturb);
    constexpr std::size_t points = 2001;
    const auto grid = grid_oracle_scalar([&](double x) { return prob.device_objective(0, alpha, x); }, 0.0,
                                         prob.p_max_w[0], points);

    OracleReport r;
    r.suite = "pwr";
    r.case_id = id;
    r.closed_form_objective = prob.device_objective(0, alpha, p);
    r.oracle_objective = grid.min;
    r.tolerance = rounding_tolerance(grid.min);
    r.resolution = prob.p_max_w[0] / static_cast<double>(points - 1);
    r.pass = true;
    r.extra = {{"closed_form_argmin", p}, {"oracle_argmin", grid.argmin}, {"alpha", alpha}};
    return finish_report(r);
}

// Random per-slot state; `force_non_offloader` makes device 0 satisfy Q <= T.
struct Sp2Instance {
    SystemConfig cfg;
    QueueState state;
    SlotEnvironment env;
};

Sp2Instance draw_sp2_instance(CaseDraws& d, std::size_t n, bool force_non_offloader) {
    Sp2Instance inst{default_config(n, 1), QueueState::zeros(n), {}};
    inst.cfg.control_v = d.log_uniform(1e6, 1e10);
    inst.env.gamma.resize(n);
    inst.env.arrivals_bits.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto& dev = inst.cfg.devices[i];
        dev.distance_m = d.uniform(50.0, 250.0);
        dev.p_max_w = d.log_uniform(0.1, 1.0);
        dev.weight = draw_weight(d, 0.1, 0.2, 5.0);
        inst.env.gamma[i] = d.exponential() * inst.cfg.large_scale_gain(i);
        const double q = d.log_uniform(1e3, 1e6);
        inst.state.q_bits[i] = q;
        const bool hold = (force_non_offloader && i == 0) || d.chance(0.3);
        if (hold)
            inst.state.t_bits[i] = d.chance(0.2) ? q : q * d.uniform(1.0, 3.0);
        else
            inst.state.t_bits[i] = q * d.uniform(0.0, 1.0);
    }
    return inst;
}

OracleReport case_sp2(std::uint64_t id, const VerifyOptions& opts) {
    CaseDraws d(opts.seed, OracleSuite::sp2, id);
    static constexpr std::size_t sizes[] = {2, 3, 5};
    const std::size_t n = sizes[id % 3];
    const auto inst = draw_sp2_instance(d, n, false);

    auto gs = solve_sp2(inst.state, inst.env, inst.cfg);
    for (auto& p : gs.p_tx_w) p *= 1.0 - opts.perturb;
    const auto prob = make_offload_problem(inst.state, inst.env, inst.cfg, partition_offloaders(inst.state));
    const auto pg = projected_gradient_sp2(prob);

    OracleReport r;
    r.suite = "sp2";
    r.case_id = id;
    r.closed_form_objective = sp2_objective(inst.state, inst.env, gs.p_tx_w, gs.alpha, inst.cfg);
    r.oracle_objective = pg.objective;
    r.tolerance = 1e-4 * std::max(std::abs(pg.objective), 1.0);
    r.pass = true;
    r.extra = {{"n_devices", n},
               {"n_offloaders", prob.size()},
               {"gs_iterations", gs.trace.iterations},
               {"pg_iterations", pg.iterations}};
    return finish_report(r);
}

OracleReport case_sp3(std::uint64_t id, const VerifyOptions& opts) {
    CaseDraws d(opts.seed, OracleSuite::sp3, id);
    const std::size_t n = 1 + id % 4;
    const std::size_t m = 1 + (id / 4) % 3;
    SystemConfig cfg = default_config(n, m);
    cfg.control_v = d.log_uniform(1e6, 1e10);
    cfg.server_weight = draw_weight(d, 0.15, 1e-3, 1.0);
    for (auto& dev : cfg.devices) dev.cycles_per_bit = d.log_uniform(100.0, 2000.0);
    for (auto& core : cfg.cores) {
        core.kappa_ser = d.log_uniform(1e-28, 1e-26);
        core.fc_max_hz = d.log_uniform(5e8, 3e9);
    }
    std::vector<double> t(n, 0.0);
    if (!d.chance(0.1))
        for (auto& v : t) v = d.chance(0.2) ? 0.0 : d.log_uniform(1e2, 1e6);

    auto sched = solve_sp3(t, cfg);
    for (auto& f : sched.f_c_hz) f *= 1.0 - opts.perturb;
    for (auto& b : sched.d_s_bits) b *= 1.0 - opts.perturb;

    constexpr std::size_t single_points = 41;
    const auto single = exhaustive_sp3(t, cfg, single_points);
    const auto shares = exhaustive_sp3_shares(t, cfg, 9, 8);

    double max_fc = 0.0;
    for (const auto& core : cfg.cores) max_fc = std::max(max_fc, core.fc_max_hz);

    OracleReport r;
    r.suite = "sp3";
    r.case_id = id;
    r.closed_form_objective = sp3_objective(t, sched.f_c_hz, sched.d_s_bits, cfg);
    r.oracle_objective = std::min(single.objective, shares.objective);
    r.tolerance = rounding_tolerance(r.oracle_objective);
    r.resolution = max_fc / static_cast<double>(single_points - 1);
    r.pass = true;
    r.extra = {{"n_devices", n},
               {"n_cores", m},
               {"single_device_objective", single.objective},
               {"share_grid_objective", shares.objective}};
    return finish_report(r);
}

OracleReport case_zero_power(std::uint64_t id, const VerifyOptions& opts) {
    CaseDraws d(opts.seed, OracleSuite::zero_power, id);
    const std::size_t n = 2 + id % 4;
    const auto inst = draw_sp2_instance(d, n, true);
    auto sol = solve_sp2(inst.state, inst.env, inst.cfg);
    const auto& cfg = inst.cfg;

    // Test hook: a perturbed solver lets holding devices transmit.
    if (opts.perturb > 0.0)
        for (std::size_t i = 0; i < n; ++i)
            if (inst.state.q_bits[i] <= inst.state.t_bits[i]) sol.p_tx_w[i] = opts.perturb * cfg.devices[i].p_max_w;

    bool structural = true;
    for (std::size_t i = 0; i < n; ++i)
        if (inst.state.q_bits[i] <= inst.state.t_bits[i])
            structural = structural && sol.p_tx_w[i] == 0.0 && sol.alpha[i] == cfg.eps_a;

    const double base = sp2_objective(inst.state, inst.env, sol.p_tx_w, sol.alpha, cfg);
    std::size_t donor = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (sol.alpha[i] > sol.alpha[donor]) donor = i;

    double probe_min = std::numeric_limits<double>::infinity();
    int probes = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (inst.state.q_bits[i] > inst.state.t_bits[i]) continue;
        for (double frac : {1e-3, 0.5, 1.0}) {
            auto p = sol.p_tx_w;
            p[i] = frac * cfg.devices[i].p_max_w;
            probe_min = std::min(probe_min, sp2_objective(inst.state, inst.env, p, sol.alpha, cfg));
            ++probes;
            if (donor != i && sol.alpha[donor] > cfg.eps_a) {
                auto alpha = sol.alpha;
                const double moved = 0.5 * (alpha[donor] - cfg.eps_a);
                alpha[donor] -= moved;
                alpha[i] += moved;
                probe_min = std::min(probe_min, sp2_objective(inst.state, inst.env, p, alpha, cfg));
                ++probes;
            }
        }
    }

    OracleReport r;
    r.suite = "zero_power";
    r.case_id = id;
    r.closed_form_objective = base;
    r.oracle_objective = probe_min;
    r.tolerance = rounding_tolerance(probe_min);
    r.pass = structural;
    r.extra = {{"n_devices", n}, {"probes", probes}, {"structural", structural}};
    return finish_report(r);
}

}  // namespace

OracleReport verify_case(OracleSuite suite, std::uint64_t case_id, const VerifyOptions& opts) {
    switch (suite) {
        case OracleSuite::sp1: return case_sp1(case_id, opts);
        case OracleSuite::pwr: return case_pwr(case_id, opts);
        case OracleSuite::sp2: return case_sp2(case_id, opts);
        case OracleSuite::sp3: return case_sp3(case_id, opts);
        case OracleSuite::zero_power: return case_zero_power(case_id, opts);
    }
    throw std::invalid_argument("verify_case: unknown suite");
}

std::vector<OracleReport> verify_suite(OracleSuite suite, std::size_t n_cases, const VerifyOptions& opts) {
    std::vector<OracleReport> reports(n_cases);
    const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(n_cases)));
    if (workers <= 1) {
        for (std::size_t k = 0; k < n_cases; ++k) reports[k] = verify_case(suite, k, opts);
        return reports;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t k = w; k < n_cases; k += workers) reports[k] = verify_case(suite, k, opts);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return reports;
}

}  // namespace mec
