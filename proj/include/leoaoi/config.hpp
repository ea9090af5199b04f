#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "leoaoi/aoi_engine.hpp"
#include "leoaoi/channel.hpp"
#include "leoaoi/constellation.hpp"
#include "leoaoi/schedulers.hpp"

namespace leoaoi {

struct PlatoonConfig {
    int platoons = 5;
    int vehicles_per_platoon = 6;
    double speed_min_kmh = 36.0;
    double speed_max_kmh = 54.0;
    std::vector<double> gaps_m{5.0, 15.0, 25.0, 35.0};  // platoon j uses gaps[j mod size]
    double spacing_m = 1000.0;  // between platoon leaders
    double latitude_deg = 40.0;
    double longitude_deg = 0.0;
    double azimuth_deg = 90.0;

    double gap_of(int platoon) const { return gaps_m[static_cast<std::size_t>(platoon) % gaps_m.size()]; }
    void validate() const;
};

struct HandoverConfig {
    aoi::OutageModel outage;
    double p_ho_w = 1.0;
    double period_s = 15.0;        // serving-assignment epoch
    double disc_budget = 0.2;      // discretionary handovers per slot, fleet-wide
    void validate() const;
};

struct PolicySettings {
    sched::PolicyKind kind = sched::PolicyKind::dpp;
    double V = 50.0;
    std::vector<double> power_grid;  // empty ⇒ 8 log-spaced levels
    bool proactive = true;
    double kappa_safe = 5.0;
    double z_scale = 10.0;
    int horizon_cap = 10;
    int predictor_draws = 200;
};

struct ScenarioConfig {
    constellation::ConstellationConfig constellation;
    channel::ChannelParams channel;
    double p_max_w = 10.0;
    int subchannels = 3;  // carried for completeness; no equation uses it
    std::array<double, kClasses> r_min{0.5, 0.2, 0.1};
    bool ideal_channel = false;  // every scheduled tick succeeds, no interference
    aoi::TimescaleConfig timescale;
    aoi::SafetyThresholds safety;
    HandoverConfig handover;
    PlatoonConfig platoon;
    PolicySettings policy;
    int episode_slots = 500;
    std::uint64_t seed = 1;

    int ticks_per_slot() const { return timescale.ticks_per_slot; }
    int ho_period_slots() const;
    /// Throws ContractViolation, including when the tick design rule fails.
    void validate() const;
    /// Policy parameters derived from the scenario.
    sched::PolicyConfig policy_config() const;
};

/// Applies one `key = value` assignment. Unknown keys are rejected.
void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Flat text format: one `section.key = value` per line, `#` starts a comment,
/// lists are comma separated.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string to_config_text(const ScenarioConfig& cfg);

std::vector<double> parse_number_list(const std::string& text);

}  // namespace leoaoi
