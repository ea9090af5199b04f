#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "leoaoi/analysis.hpp"
#include "leoaoi/config.hpp"
#include "leoaoi/safety.hpp"

namespace leoaoi {

struct ClassMetrics {
    double mean_aoi = 0.0;  // ticks
    double violation_rate = 0.0;
    double epsilon = 0.0;
    bool compliant = false;
    double z_slope = 0.0;
    bool stability_consistent = true;
};

struct GapAoi {
    double gap_m = 0.0;
    int followers = 0;
    double pl_aoi = 0.0;      // class-1 leader age, ticks
    double mean_delay = 0.0;  // ticks
    double e2e_aoi = 0.0;     // ticks
};

struct QueueTracePoint {
    int slot = 0;
    double q_power = 0.0;
    double q_handover = 0.0;
    std::array<double, kClasses> mean_z{};
};

struct RunResult {
    std::string policy;
    std::uint64_t seed = 0;
    int slots = 0;
    int ticks_per_slot = 0;
    int vehicles = 0;
    std::array<ClassMetrics, kClasses> classes;
    double weighted_aoi = 0.0;
    double mean_power_w = 0.0;  // mean fleet P_tot per slot
    int forced_ho = 0;
    int disc_ho = 0;
    int blackout_slots = 0;  // vehicle-slots with no visible satellite
    int rate_shortfalls = 0;  // transmitting vehicle-slots below R_min
    double mean_outage_ticks = 0.0;
    std::vector<analysis::PingPongEvent> pingpong;
    std::array<aoi::PhaseDecomposition, kClasses> phases;
    std::vector<GapAoi> e2e;
    std::vector<QueueTracePoint> queue_trace;
    std::shared_ptr<const aoi::TickLog> log;  // kept only on request
};

struct RunOptions {
    bool keep_log = false;
    int trace_points = 100;
};

/// One deterministic episode for (cfg, seed). cfg.seed is ignored.
RunResult run_episode(const ScenarioConfig& cfg, std::uint64_t seed, const RunOptions& opt = {});

struct InjectionResult {
    std::int64_t end_age = 0;
    std::int64_t cumulative = 0;  // Σ slot-end ages over the k handover slots
    std::vector<std::int64_t> slot_end_ages;
    std::vector<std::int64_t> tick_ages;
    std::vector<analysis::PingPongEvent> events;
};

/// k consecutive handovers oscillating between two satellites with
/// reconnection disabled, starting from age a0.
InjectionResult inject_pingpong(const ScenarioConfig& cfg, int k, std::int64_t a0);

}  // namespace leoaoi
