#include <doctest.h>

#include <cmath>

#include "mec/environment.hpp"

using namespace mec;
using Ch = CounterRng::Channel;

TEST_CASE("counter rng reference outputs") {
    // Independent splitmix64 re-implementation in arbitrary precision.
    CHECK(CounterRng(1).bits(0, 0, Ch::fading) == 7806873273932414515ULL);
    CHECK(CounterRng(42).bits(7, 3, Ch::arrival) == 4954188744620953937ULL);
    CHECK(CounterRng(1).uniform(0, 0, Ch::arrival) == doctest::Approx(0.1130911301953658743).epsilon(1e-15));
    CHECK(CounterRng(1).exponential(0, 0, Ch::fading) == doctest::Approx(0.55027954098199297518).epsilon(1e-14));
}

TEST_CASE("counter rng is a pure function of its key") {
    const CounterRng a(5), b(5), c(6);
    CHECK(a.bits(10, 2, Ch::fading) == b.bits(10, 2, Ch::fading));
    CHECK(a.bits(10, 2, Ch::fading) != c.bits(10, 2, Ch::fading));
    CHECK(a.bits(10, 2, Ch::fading) != a.bits(10, 2, Ch::arrival));
    CHECK(a.bits(10, 2, Ch::fading) != a.bits(11, 2, Ch::fading));
    CHECK(a.bits(10, 2, Ch::fading) != a.bits(10, 3, Ch::fading));
}

TEST_CASE("sample moments") {
    const CounterRng rng(3);
    const int n = 200000;
    double su = 0.0, se = 0.0, se2 = 0.0, umin = 1.0, umax = 0.0;
    for (int k = 0; k < n; ++k) {
        const double u = rng.uniform(k, 0, Ch::arrival);
        const double e = rng.exponential(k, 0, Ch::fading);
        su += u;
        se += e;
        se2 += e * e;
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        REQUIRE(e >= 0.0);
    }
    CHECK(umin >= 0.0);
    CHECK(umax < 1.0);
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(se / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(se2 / n == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("environment draws scale and do not depend on the device count") {
    auto small = default_config(2, 1);
    auto large = default_config(5, 1);
    large.devices[4].distance_m = 75.0;
    large.devices[4].arrival_max_bits = 4000.0;
    const RngState st{11, 123};
    const auto e2 = draw_environment(st, small);
    const auto e5 = draw_environment(st, large);
    CHECK(e2.gamma[0] == e5.gamma[0]);
    CHECK(e2.arrivals_bits[1] == e5.arrivals_bits[1]);
    const CounterRng gen(11);
    CHECK(e5.gamma[4] == gen.exponential(123, 4, Ch::fading) * large.large_scale_gain(4));
    CHECK(e5.arrivals_bits[4] == gen.uniform(123, 4, Ch::arrival) * 4000.0);
    for (double a : e5.arrivals_bits) CHECK((a >= 0.0 && a < 8000.0));
}
