#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leoaoi/engine.hpp"

namespace leoaoi {

enum class SweepAxis { ticks_per_slot, ho_mean_ms, ho_period_s, dpp_V };

SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis axis);

/// Scenario with one axis moved. Tick-resolution changes keep the safety
/// thresholds fixed in seconds; outage-mean changes move the outage floor to
/// clamp(μ − 3σ, 2τ_ac, base floor).
ScenarioConfig apply_axis(const ScenarioConfig& base, SweepAxis axis, double value);

struct SweepSpec {
    std::string experiment = "sweep";
    SweepAxis axis = SweepAxis::dpp_V;
    std::vector<double> values;
    std::vector<std::uint64_t> seeds;
    ScenarioConfig base;
};

struct SweepPoint {
    double axis_value = 0.0;
    std::uint64_t seed = 0;
    std::optional<RunResult> result;
    std::string error;  // set when the point failed
};

/// Full grid, ordered by (value index, seed index). Each replicate seed is used
/// unchanged at every axis value, so points differ only in the swept parameter.
/// Points run concurrently on up to `threads` workers (0 ⇒ hardware).
std::vector<SweepPoint> run_sweep(const SweepSpec& spec, unsigned threads = 0);

}  // namespace leoaoi
