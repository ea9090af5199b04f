#include "leoaoi/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace leoaoi {

SweepAxis parse_axis(const std::string& name) {
    if (name == "ticks_per_slot") return SweepAxis::ticks_per_slot;
    if (name == "ho_mean_ms") return SweepAxis::ho_mean_ms;
    if (name == "ho_period_s") return SweepAxis::ho_period_s;
    if (name == "dpp_V") return SweepAxis::dpp_V;
    throw ContractViolation("unknown sweep axis '" + name +
                            "' (expected ticks_per_slot|ho_mean_ms|ho_period_s|dpp_V)");
}

std::string axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::ticks_per_slot: return "ticks_per_slot";
        case SweepAxis::ho_mean_ms: return "ho_mean_ms";
        case SweepAxis::ho_period_s: return "ho_period_s";
        case SweepAxis::dpp_V: return "dpp_V";
    }
    return "?";
}

ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value) {
    ScenarioConfig c = base;
    switch (axis) {
        case SweepAxis::ticks_per_slot: {
            const int n = static_cast<int>(std::lround(value));
            require(n >= 1 && std::abs(value - n) < 1e-9, "sweep: ticks_per_slot must be a positive integer");
            const double old_tick = base.timescale.tick_seconds;
            c.timescale = aoi::TimescaleConfig::from_ticks(base.timescale.slot_seconds, n);
            for (int m = 0; m < kClasses; ++m)
                c.safety.n_safe[m] = std::max(
                    1, static_cast<int>(std::lround(base.safety.n_safe[m] * old_tick / c.timescale.tick_seconds)));
            break;
        }
        case SweepAxis::ho_mean_ms: {
            auto& o = c.handover.outage;
            o.mean_ms = value;
            const double lo = 2.0 * c.timescale.tick_seconds * 1e3;
            o.min_ms = std::clamp(value - 3.0 * o.std_ms, lo, std::max(lo, base.handover.outage.min_ms));
            break;
        }
        case SweepAxis::ho_period_s:
            c.handover.period_s = value;
            break;
        case SweepAxis::dpp_V:
            c.policy.V = value;
            break;
    }
    return c;
}

std::vector<SweepPoint> run_sweep(const SweepSpec& spec, unsigned threads) {
    require(!spec.values.empty(), "run_sweep: no axis values");
    require(!spec.seeds.empty(), "run_sweep: no seeds");
    std::vector<SweepPoint> points;
    for (double v : spec.values)
        for (auto s : spec.seeds) points.push_back({v, s, std::nullopt, {}});

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            auto& p = points[i];
            try {
                p.result = run_episode(apply_axis(spec.base, spec.axis, p.axis_value), p.seed);
            } catch (const std::exception& e) {
                p.error = e.what();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(points.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    return points;
}

}  // namespace leoaoi
