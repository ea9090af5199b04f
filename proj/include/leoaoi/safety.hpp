#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "leoaoi/aoi_engine.hpp"

namespace leoaoi::safety {

inline double update_safety_queue(double z, bool violated, double epsilon) {
    require(z >= 0.0, "update_safety_queue: queue must be non-negative");
    return std::max(z + (violated ? 1.0 : 0.0) - epsilon, 0.0);
}

inline double update_power_queue(double q, double p_tot, double p_max) {
    require(q >= 0.0, "update_power_queue: queue must be non-negative");
    return std::max(q + p_tot - p_max, 0.0);
}

inline double update_ho_queue(double q, double disc_count, double budget) {
    require(q >= 0.0, "update_ho_queue: queue must be non-negative");
    return std::max(q + disc_count - budget, 0.0);
}

/// Z per (vehicle, class) on the tick clock; Q_P and Q_H on the slot clock.
struct VirtualQueueSet {
    std::vector<std::array<double, kClasses>> z;
    double q_power = 0.0;
    double q_handover = 0.0;

    explicit VirtualQueueSet(int vehicles = 0) : z(static_cast<std::size_t>(vehicles)) {
        for (auto& row : z) row.fill(0.0);
    }
};

/// Ticks whose age exceeds n_safe. `tick_ages` must hold exactly N_ac entries.
int slot_violation_count(std::span<const std::int64_t> tick_ages, int n_safe, int ticks_per_slot);

struct ClassCompliance {
    int cls = 0;  // 1-based
    double rate = 0.0;
    double epsilon = 0.0;
    bool compliant = false;
    double z_slope = 0.0;        // per tick, trailing half of the log
    bool stability_consistent = true;  // slope < 1e-4 implies rate <= ε + 0.005
};

struct ComplianceReport {
    std::array<ClassCompliance, kClasses> classes;
    /// Violation rate per (vehicle, class).
    std::vector<std::array<double, kClasses>> per_vehicle;
};

inline constexpr double kStableSlope = 1e-4;

ComplianceReport compliance_report(const aoi::TickLog& log, const aoi::SafetyThresholds& th);

/// f_forced <= (ε − δ)·N_ac / μ_n.
bool slater_check(double forced_rate, double mu_n, int ticks_per_slot, double epsilon,
                  double delta);

/// Least-squares slope of y against its index.
double ls_slope(std::span<const double> y);

}  // namespace leoaoi::safety
