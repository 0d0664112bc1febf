#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "mec/solver.hpp"

using namespace mec;

namespace {

const double kGain150 = 1.975308641975308642e-13;

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

struct RandomSlot {
    SystemConfig cfg;
    QueueState state;
    SlotEnvironment env;
};

RandomSlot random_slot(std::mt19937_64& gen, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RandomSlot s{default_config(n, 2), QueueState::zeros(n), {}};
    s.cfg.control_v = std::pow(10.0, 6.0 + 4.0 * u(gen));
    s.cfg.server_weight = u(gen) < 0.5 ? 0.0 : 0.02;
    s.env.arrivals_bits.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        s.state.q_bits[i] = std::pow(10.0, 3.0 + 3.0 * u(gen));
        s.state.t_bits[i] = s.state.q_bits[i] * 2.0 * u(gen);
        s.env.gamma.push_back(-std::log1p(-u(gen)) * kGain150);
    }
    return s;
}

}  // namespace

TEST_CASE("sp1 closed form") {
    auto cfg = default_config(3, 1);
    const std::vector<double> q{0.0, 1e5, 1e9};
    const auto f = solve_sp1(q, cfg);
    CHECK(f[0] == 0.0);
    // sqrt(Q tau / (3 kappa V w L)) at Q = 1e5, V = 1e9
    CHECK(f[1] == doctest::Approx(212597601.38109355039).epsilon(1e-14));
    CHECK(f[2] == 1e9);
    CHECK(solve_sp1(std::vector<double>{1e4}, default_config(1, 1))[0] ==
          doctest::Approx(67229264.545281432286).epsilon(1e-14));
    cfg.devices[1].weight = 0.0;
    CHECK(solve_sp1(q, cfg)[1] == 1e9);
}

TEST_CASE("partition follows the Q > T rule") {
    const auto part = partition_offloaders(QueueState{{5.0, 3.0, 3.0, 0.0}, {1.0, 3.0, 4.0, 0.0}});
    CHECK(part.offloaders == std::vector<std::size_t>{0});
    CHECK(part.non_offloaders == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("power closed form for a fixed split") {
    const auto cfg = default_config(2, 1);
    const QueueState s{{5e5, 2e4}, {0.0, 0.0}};
    const SlotEnvironment env{{1.3 * kGain150, 1.3 * kGain150}, {0.0, 0.0}};
    auto prob = make_offload_problem(s, env, cfg, partition_offloaders(s));
    const std::vector<double> alpha{0.25, 0.25};
    const auto p = solve_power_given_bandwidth(prob, alpha);
    // alpha omega (c tau / (ln2 V w) - N0 / Gamma) = 1.7646 W, clipped to p_max
    CHECK(p[0] == 0.5);
    CHECK(p[1] == doctest::Approx(0.033376722218927404368).epsilon(1e-12));

    prob.weight[1] = 0.0;
    CHECK(solve_power_given_bandwidth(prob, alpha)[1] == 0.5);
    prob.weight[1] = 1.0;
    prob.gamma[1] = 0.0;
    CHECK(solve_power_given_bandwidth(prob, alpha)[1] == 0.0);
    // c = 1e4, alpha = 0.2, Gamma = 2e-13: the unclipped value is negative
    prob.gamma[1] = 2e-13;
    prob.backlog_gap[1] = 1e4;
    CHECK(solve_power_given_bandwidth(prob, std::vector<double>{0.25, 0.2})[1] == 0.0);
    prob.backlog_gap[1] = 1e5;
    CHECK(solve_power_given_bandwidth(prob, std::vector<double>{0.25, 0.2})[1] ==
          doctest::Approx(0.24872829112244295639).epsilon(1e-12));
    prob.control_v = 1e12;
    prob.gamma[1] = kGain150;
    CHECK(solve_power_given_bandwidth(prob, alpha)[1] == 0.0);
}

TEST_CASE("bandwidth step meets the budget and the KKT conditions") {
    const auto cfg = default_config(3, 1);
    const QueueState s{{4e5, 2e5, 9e4}, {0.0, 1e4, 0.0}};
    const SlotEnvironment env{{kGain150, 0.4 * kGain150, 2.0 * kGain150}, {0.0, 0.0, 0.0}};
    const auto prob = make_offload_problem(s, env, cfg, partition_offloaders(s));
    const std::vector<double> p{0.3, 0.5, 0.1};
    const auto bw = solve_bandwidth_given_power(prob, p);
    CHECK(bw.converged);
    CHECK(std::abs(sum(bw.alpha) - prob.alpha_budget) < 1e-7);
    for (double a : bw.alpha) CHECK(a >= cfg.eps_a);
    // Interior allocations share one marginal value.
    std::vector<double> marginal;
    for (std::size_t k = 0; k < 3; ++k)
        if (bw.alpha[k] > cfg.eps_a)
            marginal.push_back(prob.backlog_gap[k] * prob.radio.rate_dalpha(bw.alpha[k], p[k], prob.gamma[k]));
    REQUIRE(marginal.size() >= 2);
    for (double m : marginal) CHECK(m == doctest::Approx(marginal[0]).epsilon(1e-6));
}

TEST_CASE("bandwidth step for two offloaders matches the stationarity root") {
    const auto cfg = default_config(2, 1);
    const QueueState s{{4e5, 2e5}, {0.0, 0.0}};
    const SlotEnvironment env{{kGain150, 0.4 * kGain150}, {0.0, 0.0}};
    const auto prob = make_offload_problem(s, env, cfg, partition_offloaders(s));
    const auto bw = solve_bandwidth_given_power(prob, std::vector<double>{0.3, 0.5});
    CHECK(bw.converged);
    CHECK(bw.alpha[0] == doctest::Approx(0.76377107385192323512).epsilon(1e-6));
    CHECK(bw.alpha[1] == doctest::Approx(0.23622892614807676488).epsilon(1e-6));
}

TEST_CASE("bandwidth step with silent links keeps eps_A") {
    const auto cfg = default_config(2, 1);
    const QueueState s{{4e5, 2e5}, {0.0, 0.0}};
    const SlotEnvironment env{{kGain150, kGain150}, {0.0, 0.0}};
    const auto prob = make_offload_problem(s, env, cfg, partition_offloaders(s));
    const std::vector<double> p{0.0, 0.0};
    const auto bw = solve_bandwidth_given_power(prob, p);
    CHECK(bw.alpha == std::vector<double>{cfg.eps_a, cfg.eps_a});
    CHECK(bw.iterations == 0);
}

TEST_CASE("outer iteration cap flags non-convergence and stays feasible") {
    const auto cfg = default_config(3, 1);
    const QueueState s{{4e5, 2e5, 9e4}, {0.0, 0.0, 0.0}};
    const SlotEnvironment env{{kGain150, 0.4 * kGain150, 2.0 * kGain150}, {0.0, 0.0, 0.0}};
    const auto prob = make_offload_problem(s, env, cfg, partition_offloaders(s));
    SolverOptions opts;
    opts.outer_max_iter = 2;
    const std::vector<double> p{0.3, 0.5, 0.1};
    const auto bw = solve_bandwidth_given_power(prob, p, opts);
    CHECK_FALSE(bw.converged);
    CHECK(sum(bw.alpha) <= prob.alpha_budget + 1e-15);
    for (double a : bw.alpha) CHECK(a >= cfg.eps_a);
}

TEST_CASE("sp2 edge cases") {
    const auto cfg = default_config(3, 1);
    SUBCASE("empty offloader set") {
        const QueueState s{{1.0, 2.0, 0.0}, {1.0, 5.0, 0.0}};
        const auto sol = solve_sp2(s, {{kGain150, kGain150, kGain150}, {0, 0, 0}}, cfg);
        CHECK(sol.trace.iterations == 0);
        CHECK(sol.p_tx_w == std::vector<double>{0.0, 0.0, 0.0});
        CHECK(sol.alpha == std::vector<double>(3, cfg.eps_a));
    }
    SUBCASE("zero channel gains") {
        const QueueState s{{1e5, 2e5, 3e5}, {0.0, 0.0, 0.0}};
        const auto sol = solve_sp2(s, {{0.0, 0.0, 0.0}, {0, 0, 0}}, cfg);
        CHECK(sol.trace.iterations == 1);
        CHECK(sol.trace.converged);
        CHECK(sol.p_tx_w == std::vector<double>{0.0, 0.0, 0.0});
        CHECK(sol.alpha == std::vector<double>(3, cfg.eps_a));
    }
}

TEST_CASE("symmetric devices get symmetric allocations") {
    auto cfg = default_config(2, 1);
    cfg.control_v = 1e8;
    const QueueState s{{3e5, 3e5}, {1e4, 1e4}};
    const auto sol = solve_sp2(s, {{kGain150, kGain150}, {0, 0}}, cfg);
    CHECK(sol.alpha[0] == doctest::Approx(sol.alpha[1]).epsilon(1e-5));
    CHECK(sol.p_tx_w[0] == doctest::Approx(sol.p_tx_w[1]).epsilon(1e-5));
}

TEST_CASE("random slots: feasibility, zero power for holders, monotone history, exact decomposition") {
    std::mt19937_64 gen(2024);
    for (int k = 0; k < 300; ++k) {
        const auto s = random_slot(gen, 2 + k % 4);
        const auto sol = solve_per_slot(s.state, s.env, s.cfg);
        CHECK(decision_feasible(sol.decision, s.cfg));
        for (std::size_t i = 0; i < s.cfg.n_devices(); ++i) {
            if (s.state.q_bits[i] <= s.state.t_bits[i]) {
                CHECK(sol.decision.p_tx_w[i] == 0.0);
                CHECK(sol.decision.alpha[i] == s.cfg.eps_a);
            }
        }
        const auto& h = sol.trace.objective_history;
        for (std::size_t j = 1; j < h.size(); ++j) CHECK(h[j] <= h[j - 1] + 1e-9 * std::abs(h[j - 1]));

        const double split = sp1_objective(s.state.q_bits, sol.decision.f_hz, s.cfg) +
                             sp2_objective(s.state, s.env, sol.decision.p_tx_w, sol.decision.alpha, s.cfg) +
                             sp3_objective(s.state.t_bits, sol.decision.f_c_hz, sol.decision.d_s_bits, s.cfg);
        const double whole = per_slot_objective(s.state, s.env, sol.decision, s.cfg);
        CHECK(whole == doctest::Approx(split).epsilon(1e-12));
    }
}

TEST_CASE("sp3 closed form") {
    auto cfg = default_config(2, 8);
    SUBCASE("zero server weight runs every core at full speed") {
        const std::vector<double> t{100.0, 5000.0};
        const auto sched = solve_sp3(t, cfg);
        for (double f : sched.f_c_hz) CHECK(f == 2.5e9);
        // 8 * 2.5e9 * 1e-3 / 737.5
        CHECK(sched.d_s_bits[1] == doctest::Approx(27118.64406779661).epsilon(1e-15));
        CHECK(sched.d_s_bits[0] == 0.0);
        CHECK(sched.scheduled == 1u);
    }
    SUBCASE("weighted server power") {
        cfg.server_weight = 0.02;
        const std::vector<double> t{2e5, 5e4};
        const auto sched = solve_sp3(t, cfg);
        // sqrt(T tau / (3 V w L kappa)) = 2.126e9 at T = 2e5, V = 1e9
        CHECK(sched.f_c_hz[0] == doctest::Approx(2125976013.8109355039).epsilon(1e-14));
        CHECK(sched.d_s_bits[0] == doctest::Approx(23061.43472608472411).epsilon(1e-14));
        CHECK(sched.d_s_bits[1] == 0.0);
    }
    SUBCASE("larger server backlog is scheduled") {
        cfg.server_weight = 0.02;
        const auto sched = solve_sp3(std::vector<double>{1e5, 2e5}, cfg);
        CHECK(sched.scheduled == 1u);
        CHECK(sched.d_s_bits[0] == 0.0);
        CHECK(sched.f_c_hz[0] == doctest::Approx(2125976013.8109355039).epsilon(1e-14));
    }
    SUBCASE("empty server buffers with positive weight idle the cores") {
        cfg.server_weight = 0.02;
        const auto sched = solve_sp3(std::vector<double>{0.0, 0.0}, cfg);
        for (double f : sched.f_c_hz) CHECK(f == 0.0);
        CHECK_FALSE(sched.scheduled.has_value());
    }
    SUBCASE("ties go to the smallest index") {
        cfg.devices[1].cycles_per_bit = 2 * 737.5;
        CHECK(most_backlogged_device(std::vector<double>{1000.0, 2000.0}, cfg) == 0);
        CHECK(most_backlogged_device(std::vector<double>{1000.0, 2001.0}, cfg) == 1);
    }
}

TEST_CASE("equal-bandwidth variant") {
    const auto cfg = default_config(4, 2);
    const QueueState s{{3e5, 1e3, 2e5, 0.0}, {0.0, 5e3, 1e3, 0.0}};
    const SlotEnvironment env{{kGain150, kGain150, 0.5 * kGain150, kGain150}, {0, 0, 0, 0}};
    const auto sol = solve_per_slot_equal_bandwidth(s, env, cfg);
    CHECK(sol.decision.alpha == std::vector<double>(4, 0.25));
    CHECK(sol.decision.p_tx_w[1] == 0.0);
    CHECK(sol.decision.p_tx_w[3] == 0.0);
    CHECK(sol.decision.p_tx_w[0] > 0.0);
    CHECK(decision_feasible(sol.decision, cfg));
}

TEST_CASE("feasibility checker rejects violations") {
    const auto cfg = default_config(2, 1);
    const SlotDecision ok{{1e9, 0.0}, {0.5, 0.0}, {0.5, 0.5}, {2.5e9}, {2.5e9 * 1e-3 / 737.5, 0.0}};
    CHECK(decision_feasible(ok, cfg));
    auto bad = ok;
    bad.alpha = {0.6, 0.5};
    CHECK_FALSE(decision_feasible(bad, cfg));
    bad = ok;
    bad.p_tx_w[0] = 0.6;
    CHECK_FALSE(decision_feasible(bad, cfg));
    bad = ok;
    bad.d_s_bits[1] = 1.0;
    CHECK_FALSE(decision_feasible(bad, cfg));
    bad = ok;
    bad.alpha[1] = 0.0;
    CHECK_FALSE(decision_feasible(bad, cfg));
}
