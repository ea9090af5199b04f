#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leoaoi/config.hpp"

namespace leoaoi {

struct TheoryCheck {
    std::string name;
    std::string expected;
    std::string observed;
    bool pass = false;
};

struct TheoryOptions {
    int mc_slots = 100000;  // handover slots per Monte-Carlo point
    std::uint64_t seed = 7;
};

/// Closed-form identities, the spike/injection grid against the tick oracle,
/// the increment bound against Monte Carlo, and the queue mechanics.
std::vector<TheoryCheck> run_theory_checks(const ScenarioConfig& cfg, const TheoryOptions& opt = {});

/// Monte-Carlo estimate of the slot-summary increment of a handover slot.
struct IncrementSample {
    double mean_slot_summary = 0.0;
    double se_slot_summary = 0.0;
    double mean_tick_exact = 0.0;
    double se_tick_exact = 0.0;
};

IncrementSample simulate_handover_increments(std::int64_t a0, int n_ho, int ticks_per_slot, double p_s,
                                             int slots, std::uint64_t seed);

std::string theory_table_csv(const std::vector<TheoryCheck>& checks);

}  // namespace leoaoi
