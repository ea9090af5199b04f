#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "leoaoi/analysis.hpp"
#include "leoaoi/rng.hpp"
#include "leoaoi/safety.hpp"

using namespace leoaoi;

TEST_CASE("safety queue update law") {
    CHECK(safety::update_safety_queue(0.0, true, 0.01) == 0.99);
    CHECK(safety::update_safety_queue(0.0, false, 0.01) == 0.0);
    CHECK_THROWS_AS(safety::update_safety_queue(-0.1, false, 0.01), ContractViolation);
}

TEST_CASE("queue drains to zero after ceil(0.99/0.01) clean ticks") {
    double z = safety::update_safety_queue(0.0, true, 0.01);
    int steps = 0;
    while (z > 0.0) {
        z = safety::update_safety_queue(z, false, 0.01);
        ++steps;
        REQUIRE(steps <= 200);
    }
    CHECK(steps == 99);
}

TEST_CASE("power and handover queues") {
    CHECK(safety::update_power_queue(0.0, 10.0, 10.0) == 0.0);
    CHECK(safety::update_power_queue(5.0, 12.0, 10.0) == 7.0);
    CHECK(safety::update_ho_queue(1.0, 0, 0.5) == 0.5);
    CHECK(safety::update_ho_queue(0.0, 0, 0.5) == 0.0);
}

TEST_CASE("slot violation count agrees with the tick oracle") {
    // Handover slot from age 1, no reconnection: ages 2..51, of which 46 exceed 5.
    std::vector<std::uint8_t> fail(50, 0);
    const auto ages = analysis::brute_force_tick_oracle(1, fail);
    CHECK(safety::slot_violation_count(ages, 5, 50) == 46);

    std::vector<std::int64_t> fresh(50, 5);
    CHECK(safety::slot_violation_count(fresh, 5, 50) == 0);
    std::vector<std::int64_t> over(50, 6);
    CHECK(safety::slot_violation_count(over, 5, 50) == 50);
    CHECK_THROWS_AS(safety::slot_violation_count(std::vector<std::int64_t>(49, 1), 5, 50), ContractViolation);

    Rng rng = make_stream(11, 1);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::uint8_t> s(50);
        for (auto& x : s) x = uniform01(rng) < 0.3;
        const auto a = analysis::brute_force_tick_oracle(1 + trial % 7, s);
        int manual = 0;
        for (auto v : a) manual += v > 5;
        CHECK(safety::slot_violation_count(a, 5, 50) == manual);
    }
}

TEST_CASE("queues stay non-negative and move at most one per tick") {
    Rng rng = make_stream(5, 2);
    double z = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double before = z;
        z = safety::update_safety_queue(z, uniform01(rng) < 0.02, 0.01);
        REQUIRE(z >= 0.0);
        REQUIRE(std::abs(z - before) <= 1.0);
    }
}

TEST_CASE("deficit identity on random traces") {
    // Over any window that starts and ends with Z = 0, violations <= ε·L.
    Rng rng = make_stream(99, 3);
    int windows = 0;
    for (int trace = 0; trace < 1000; ++trace) {
        const double eps = 0.01 + 0.19 * uniform01(rng);
        const double pv = eps * (0.2 + 1.6 * uniform01(rng));
        double z = 0.0;
        long v = 0, len = 0;
        for (int i = 0; i < 10000; ++i) {
            const bool viol = uniform01(rng) < pv;
            z = safety::update_safety_queue(z, viol, eps);
            v += viol;
            ++len;
            if (z == 0.0) {
                REQUIRE(v <= eps * len + 1e-9);
                v = 0;
                len = 0;
                ++windows;
            }
        }
    }
    CHECK(windows > 1000);
}

TEST_CASE("compliance report") {
    aoi::SafetyThresholds th;
    SUBCASE("no violations") {
        aoi::TickLog log(2);
        std::vector<std::int64_t> ages(6, 1);
        std::vector<std::uint8_t> ho(2, 0);
        std::vector<double> z(6, 0.0);
        for (int t = 0; t < 1000; ++t) log.push_tick(ages, ho, z);
        const auto r = safety::compliance_report(log, th);
        for (const auto& c : r.classes) {
            CHECK(c.rate == 0.0);
            CHECK(c.compliant);
        }
    }
    SUBCASE("exactly one percent of class-1 ticks violate") {
        aoi::TickLog log(1);
        std::vector<std::uint8_t> ho(1, 0);
        std::vector<double> z(3, 0.0);
        for (int t = 0; t < 10000; ++t) {
            std::vector<std::int64_t> ages{t % 100 == 0 ? 6 : 1, 1, 1};
            log.push_tick(ages, ho, z);
        }
        const auto r = safety::compliance_report(log, th);
        CHECK(r.classes[0].rate == doctest::Approx(0.0100).epsilon(1e-12));
        CHECK(r.classes[0].compliant);
        CHECK(r.per_vehicle[0][0] == doctest::Approx(0.01));
    }
    SUBCASE("rates recomputed by hand") {
        Rng rng = make_stream(3, 3);
        aoi::TickLog log(3);
        long counts[3][3] = {};
        for (int t = 0; t < 2000; ++t) {
            std::vector<std::int64_t> ages(9);
            for (int i = 0; i < 9; ++i) {
                ages[i] = 1 + static_cast<int>(uniform01(rng) * 60);
                counts[i / 3][i % 3] += ages[i] > th.n_safe[i % 3];
            }
            log.push_tick(ages, std::vector<std::uint8_t>(3, 0), std::vector<double>(9, 0.0));
        }
        const auto r = safety::compliance_report(log, th);
        for (int m = 0; m < 3; ++m) {
            const double manual = (counts[0][m] + counts[1][m] + counts[2][m]) / 6000.0;
            CHECK(r.classes[m].rate == doctest::Approx(manual).epsilon(1e-12));
            CHECK(r.classes[m].compliant == (r.classes[m].rate <= th.epsilon[m]));
        }
    }
}

TEST_CASE("least-squares slope") {
    std::vector<double> y;
    for (int i = 0; i < 50; ++i) y.push_back(3.0 + 0.25 * i);
    CHECK(safety::ls_slope(y) == doctest::Approx(0.25));
    CHECK(safety::ls_slope(std::vector<double>(10, 4.0)) == 0.0);
}

TEST_CASE("Slater check") {
    // Threshold (0.01 − 0.005)·50/2.5 = 0.1 forced handovers per slot.
    CHECK(safety::slater_check(1.0 / 60.0, 2.5, 50, 0.01, 0.005));
    CHECK(safety::slater_check(0.0, 2.5, 50, 0.01, 0.005));
    CHECK_FALSE(safety::slater_check(0.2, 2.5, 50, 0.01, 0.005));
    CHECK_THROWS_AS(safety::slater_check(0.0, 2.5, 50, 0.01, 0.02), ContractViolation);
}
