#include <doctest.h>

#include <cmath>

#include "mec/engine.hpp"
#include "mec/metrics.hpp"

using namespace mec;

TEST_CASE("little's law") {
    const auto cfg = default_config();
    RunMetrics m;
    m.avg_sum_queue_bits = 1e5;
    CHECK(littles_law_delay(m, cfg) == doctest::Approx(5.0));
    m.avg_sum_queue_bits = 0.0;
    CHECK(littles_law_delay(m, cfg) == 0.0);
    auto idle = cfg;
    for (auto& d : idle.devices) d.arrival_max_bits = 0.0;
    CHECK_THROWS_AS(littles_law_delay(m, idle), std::domain_error);
}

TEST_CASE("drift constant") {
    const auto cfg = default_config();
    // 50-digit evaluation of the bound constant for the reference setup
    CHECK(drift_constant_c(cfg) == doctest::Approx(7409419824.6770424079).epsilon(1e-13));

    auto zero = default_config(1, 1);
    zero.devices[0].arrival_max_bits = 0.0;
    zero.devices[0].f_max_hz = 0.0;
    zero.devices[0].p_max_w = 0.0;
    zero.cores[0].fc_max_hz = 0.0;
    CHECK(drift_constant_c(zero) == 0.0);

    // Only the first summand grows when A_max doubles.
    auto doubled = cfg;
    for (auto& d : doubled.devices) d.arrival_max_bits *= 2.0;
    CHECK(drift_constant_c(doubled) - drift_constant_c(cfg) == doctest::Approx(0.5 * 5 * 3 * 8000.0 * 8000.0));

    auto more = cfg;
    more.devices[0].p_max_w = 1.0;
    more.cores[0].fc_max_hz = 3e9;
    more.devices[1].f_max_hz = 2e9;
    CHECK(drift_constant_c(more) > drift_constant_c(cfg));
}

TEST_CASE("performance bounds") {
    auto cfg = default_config();
    const double c = drift_constant_c(cfg);
    CHECK(power_bound(0.2, cfg) == doctest::Approx(0.2 + c / cfg.control_v));
    cfg.control_v = 1e30;
    CHECK(power_bound(0.2, cfg) == doctest::Approx(0.2));
    CHECK_THROWS_AS(power_bound(-1.0, cfg), std::domain_error);

    cfg.control_v = 1e9;
    CHECK(queue_bound(0.3, 100.0, 0.3, cfg) == doctest::Approx(c / 100.0));
    const double b1 = queue_bound(0.5, 100.0, 0.3, cfg);
    cfg.control_v = 2e9;
    const double b2 = queue_bound(0.5, 100.0, 0.3, cfg);
    CHECK(b2 - b1 == doctest::Approx(1e9 * 0.2 / 100.0));
    CHECK_THROWS_AS(queue_bound(0.5, 0.0, 0.3, cfg), std::domain_error);
    CHECK_THROWS_AS(queue_bound(0.1, 1.0, 0.3, cfg), std::domain_error);
}

TEST_CASE("streaming means equal batch means of the trace") {
    auto cfg = default_config(3, 2);
    cfg.control_v = 5e8;
    cfg.server_weight = 0.02;
    cfg.devices[2].weight = 0.5;
    RunOptions opts;
    opts.n_slots = 300;
    opts.keep_trace = true;
    const auto r = run(cfg, opts);
    const std::size_t n = cfg.n_devices();
    double power = 0.0, queue = 0.0;
    std::vector<double> per(n, 0.0);
    for (const auto& row : r.trace) {
        if (row.device == 0) power += row.weighted_power_w;
        queue += row.q_bits + row.t_act_bits;
        per[row.device] += row.q_bits + row.t_act_bits;
    }
    CHECK(r.metrics.avg_weighted_power_w == doctest::Approx(power / 300).epsilon(1e-9));
    CHECK(r.metrics.avg_sum_queue_bits == doctest::Approx(queue / 300).epsilon(1e-9));
    for (std::size_t i = 0; i < n; ++i) CHECK(r.metrics.avg_queue_bits[i] == doctest::Approx(per[i] / 300).epsilon(1e-9));

    // Weighted power decomposes into device and server means.
    double weighted = cfg.server_weight * r.metrics.avg_server_power_w;
    for (std::size_t i = 0; i < n; ++i) weighted += cfg.devices[i].weight * r.metrics.avg_device_power_w[i];
    CHECK(r.metrics.avg_weighted_power_w == doctest::Approx(weighted).epsilon(1e-9));
    CHECK(r.metrics.avg_exec_delay_slots == doctest::Approx(r.metrics.avg_sum_queue_bits / 12000.0));
}

TEST_CASE("reference operating point at V = 3e9") {
    auto cfg = default_config();
    cfg.control_v = 3e9;
    RunOptions opts;
    opts.n_slots = 10000;
    const auto m = run(cfg, opts).metrics;
    const double delay_ms = m.avg_exec_delay_slots * cfg.slot_seconds * 1e3;
    CHECK(delay_ms == doctest::Approx(20.0).epsilon(0.3));
    CHECK(m.avg_mobile_power_w == doctest::Approx(0.3).epsilon(0.3));
}
