#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "leoaoi/common.hpp"

namespace leoaoi::aoi {

struct TimescaleConfig {
    double slot_seconds = 1.0;
    double tick_seconds = 0.020;
    int ticks_per_slot = 50;

    static TimescaleConfig from_ticks(double slot_seconds, int ticks_per_slot);
    /// Throws unless ticks_per_slot · tick_seconds == slot_seconds (to 1e-9 relative).
    void validate() const;
};

struct TickRuleReport {
    bool pass = false;
    double bound_seconds = 0.0;  // min(Δ_safe,min, τ_ho,min) / 2
    int n_safe_min = 0;          // Δ_safe,min / τ_ac, rounded to the nearest tick
    int n_ho = 0;                // ⌊τ_ho,min / τ_ac⌋
};

/// τ_ac <= min(Δ_safe,min, τ_ho,min)/2 together with n_safe,min >= 2 and n_ho >= 1.
TickRuleReport validate_tick_rule(const TimescaleConfig& cfg, double delta_safe_min,
                                  double tau_ho_min);

struct AoiState {
    std::int64_t age_ticks = 1;
    std::int64_t last_reset_tick = 0;
};

inline AoiState tick_update(AoiState s, bool success, std::int64_t tick = 0) {
    if (success) return {1, tick};
    ++s.age_ticks;
    return s;
}

struct SafetyThresholds {
    std::array<int, kClasses> n_safe{5, 10, 50};
    std::array<double, kClasses> epsilon{0.01, 0.05, 0.20};
    std::array<double, kClasses> weights{5.0, 2.0, 0.5};

    void validate() const;
};

/// Outage duration ~ Normal(mean, std) truncated below at min (all in ms).
struct OutageModel {
    double mean_ms = 225.0;
    double std_ms = 25.0;
    double min_ms = 150.0;

    void validate() const;
    double sample_seconds(Rng& rng) const;
    /// Mean outage length in ticks, μ_τ / τ_ac.
    double mean_ticks(double tick_seconds) const { return mean_ms * 1e-3 / tick_seconds; }
};

struct OutageTicks {
    int n_ho = 0;
    double floor_error = 0.0;
};

OutageTicks outage_ticks(double tau_ho, double tick_seconds);

std::int64_t slot_summary(std::int64_t age_start, bool connected, bool any_tick_success,
                          int ticks_per_slot);

double expected_slot_increment(double age, double p_succ, int ticks_per_slot);

inline std::int64_t follower_aoi(std::int64_t pl_age, int v2v_delay_ticks) {
    require(v2v_delay_ticks >= 0, "follower_aoi: delay must be non-negative");
    return pl_age + v2v_delay_ticks;
}

/// One-hop-per-position V2V delay: round(hop · gap / 60 m) ticks.
int v2v_delay_ticks(int hop_index, double gap_m);

double slot_power(std::span<const std::uint8_t> transmit, std::span<const double> powers,
                  std::span<const std::uint8_t> handover, double p_ho);

struct PhaseSample {
    bool handover_phase = false;
    double age = 0.0;
};

struct PhaseDecomposition {
    double conn_fraction = 0.0;
    double conn_mean = 0.0;
    double ho_fraction = 0.0;
    double ho_mean = 0.0;
    double total_mean = 0.0;
};

PhaseDecomposition phase_decomposition(std::span<const PhaseSample> log);

/// Exact per-slot forecast of a single (vehicle, class) age process: the first
/// `outage` ticks always fail, then each tick succeeds independently with
/// probability p (p = 0 models "not scheduled").
struct SlotForecast {
    double mean_age = 0.0;        // E[(1/N) Σ_n A_n]
    double end_age = 0.0;         // E[A_N]
    double violations = 0.0;      // E[#{n : A_n > n_safe}]
};

SlotForecast forecast_slot(double a0, int outage, double p, int n_safe, int ticks_per_slot);

/// Dense tick log, indexed [tick][vehicle][class].
class TickLog {
public:
    TickLog() = default;
    TickLog(int vehicles, std::int64_t reserve_ticks = 0);

    void push_tick(std::span<const std::int64_t> ages,  // vehicles × classes
                   std::span<const std::uint8_t> handover_phase,  // vehicles
                   std::span<const double> z);  // vehicles × classes

    int vehicles() const { return vehicles_; }
    std::int64_t ticks() const { return ticks_; }
    std::int64_t age(std::int64_t tick, int vehicle, int cls) const {
        return ages_[index(tick, vehicle, cls)];
    }
    double z(std::int64_t tick, int vehicle, int cls) const { return z_[index(tick, vehicle, cls)]; }
    bool handover_phase(std::int64_t tick, int vehicle) const {
        return ho_[static_cast<std::size_t>(tick * vehicles_ + vehicle)] != 0;
    }

    /// Per-tick samples of one class, pooled over vehicles in tick order.
    std::vector<PhaseSample> phase_samples(int cls) const;

private:
    std::size_t index(std::int64_t tick, int vehicle, int cls) const {
        return static_cast<std::size_t>((tick * vehicles_ + vehicle) * kClasses + cls);
    }

    int vehicles_ = 0;
    std::int64_t ticks_ = 0;
    std::vector<std::int64_t> ages_;
    std::vector<std::uint8_t> ho_;
    std::vector<double> z_;
};

}  // namespace leoaoi::aoi
