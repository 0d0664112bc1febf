#include <doctest.h>

#include <cmath>

#include "mec/config.hpp"

using namespace mec;
using nlohmann::json;

TEST_CASE("default config matches the reference setup") {
    const auto cfg = default_config();
    CHECK(cfg.n_devices() == 5);
    CHECK(cfg.n_cores() == 8);
    CHECK(cfg.bandwidth_hz == 1e7);
    CHECK(cfg.slot_seconds == 1e-3);
    CHECK(cfg.pathloss_const == 1e-4);
    CHECK(cfg.pathloss_exp == 4.0);
    CHECK(cfg.eps_a == 1e-4);
    for (const auto& d : cfg.devices) {
        CHECK(d.distance_m == 150.0);
        CHECK(d.cycles_per_bit == 737.5);
        CHECK(d.f_max_hz == 1e9);
        CHECK(d.p_max_w == 0.5);
        CHECK(d.arrival_max_bits == 8000.0);
    }
    for (const auto& c : cfg.cores) CHECK(c.fc_max_hz == 2.5e9);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("unit conversions") {
    // 10^-20.4 to 50 digits: 3.98107170553497250770e-21
    CHECK(default_config().noise_psd_w_per_hz == 3.9810717055349725e-21);
    CHECK(dbm_per_hz_to_w_per_hz(-174.0) == doctest::Approx(3.9810717055349725e-21).epsilon(1e-13));
    CHECK(db_to_linear(-40.0) == doctest::Approx(1e-4).epsilon(1e-14));
    CHECK(dbm_per_hz_to_w_per_hz(30.0) == doctest::Approx(1.0));
}

TEST_CASE("large-scale gain at 150 m") {
    const auto cfg = default_config();
    // 1e-4 / 150^4
    CHECK(cfg.large_scale_gain(0) == doctest::Approx(1.975308641975308642e-13).epsilon(1e-14));
    CHECK(cfg.total_arrival_mean_bits() == 20000.0);
}

TEST_CASE("json parsing fills defaults and per-entry overrides") {
    const json doc = {{"n_devices", 3},
                      {"n_cores", 2},
                      {"noise_psd_dbm_per_hz", -174.0},
                      {"pathloss_const_db", -40.0},
                      {"device", {{"weight", 2.0}}},
                      {"devices", json::array({json::object(), {{"distance_m", 80.0}}})},
                      {"cores", json::array({{{"fc_max_hz", 1e9}}})},
                      {"control_v", 3e9},
                      {"rng_seed", 9}};
    const auto cfg = config_from_json(doc);
    REQUIRE(cfg.n_devices() == 3);
    REQUIRE(cfg.n_cores() == 2);
    CHECK(cfg.devices[0].weight == 2.0);
    CHECK(cfg.devices[1].distance_m == 80.0);
    CHECK(cfg.devices[1].weight == 2.0);
    CHECK(cfg.devices[2].distance_m == 150.0);
    CHECK(cfg.cores[0].fc_max_hz == 1e9);
    CHECK(cfg.cores[1].fc_max_hz == 2.5e9);
    CHECK(cfg.control_v == 3e9);
    CHECK(cfg.rng_seed == 9);
    CHECK(cfg.pathloss_const == doctest::Approx(1e-4));
}

TEST_CASE("empty document gives the default config") {
    const auto cfg = config_from_json(json::object());
    CHECK(config_hash(cfg) == config_hash(default_config()));
}

TEST_CASE("canonical json round trip preserves the hash") {
    auto cfg = default_config(4, 3);
    cfg.devices[2].weight = 0.25;
    cfg.server_weight = 0.02;
    const auto back = config_from_json(config_to_json(cfg));
    CHECK(config_hash(back) == config_hash(cfg));
    cfg.control_v *= 2.0;
    CHECK(config_hash(back) != config_hash(cfg));
}

TEST_CASE("malformed configs name the offending field") {
    auto field_of = [](const json& doc) {
        try {
            config_from_json(doc);
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field_of({{"bogus", 1}}) == "bogus");
    CHECK(field_of({{"control_v", -1.0}}) == "control_v");
    CHECK(field_of({{"control_v", "big"}}) == "control_v");
    CHECK(field_of({{"device", {{"p_max_w", 0.0}}}}) == "devices.0.p_max_w");
    CHECK(field_of({{"devices", json::array({{{"colour", 1}}})}}) == "devices.0.colour");
    CHECK(field_of({{"n_devices", 0}}) == "n_devices");
    CHECK(field_of({{"n_devices", 2}, {"devices", json::array({json::object(), json::object(), json::object()})}}) ==
          "devices");
    CHECK(field_of({{"eps_a", 0.25}, {"n_devices", 4}}) == "eps_a");
    CHECK(field_of({{"noise_psd_w_per_hz", 1e-21}, {"noise_psd_dbm_per_hz", -174}}) == "noise_psd_dbm_per_hz");
    CHECK(field_of({{"rng_seed", 1.5}}) == "rng_seed");
}

TEST_CASE("dotted overrides") {
    json doc = json::object();
    apply_override(doc, "n_devices=5");
    apply_override(doc, "control_v=3e9");
    apply_override(doc, "devices.1.weight=0.5");
    apply_override(doc, "device.distance_m=100");
    const auto cfg = config_from_json(doc);
    CHECK(cfg.control_v == 3e9);
    CHECK(cfg.devices[1].weight == 0.5);
    CHECK(cfg.devices[0].weight == 1.0);
    REQUIRE(cfg.n_devices() == 5);
    CHECK(cfg.devices[4].distance_m == 100.0);

    // Without n_devices the listed entries set the count.
    json listed = json::object();
    apply_override(listed, "devices.1.weight=0.5");
    CHECK(config_from_json(listed).n_devices() == 2);

    CHECK_THROWS_AS(apply_override(doc, "control_v"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "=3"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "control_v.x=3"), ConfigError);
    json s = json::object();
    apply_override(s, "control_v=fast");
    CHECK(s["control_v"] == "fast");
    CHECK_THROWS_AS(config_from_json(s), ConfigError);
}
