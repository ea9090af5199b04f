#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "leoaoi/common.hpp"

/// Closed-form references and a literal tick-by-tick simulator used to check
/// everything else.
namespace leoaoi::analysis {

struct SpikeEnvelope {
    std::int64_t end_age = 0;
    std::int64_t cumulative = 0;  // Σ of slot-end ages over the k slots
    int k = 0;
    std::int64_t a0 = 0;
    double variance = 0.0;
};

SpikeEnvelope spike_envelope(std::int64_t a0, int k, int ticks_per_slot);

/// The two readings of "k back-to-back handovers versus k isolated ones".
struct EscalationRatios {
    double cumulative_ratio = 0.0;  // cumulative(k) / (k · cumulative(1))
    double quadratic_ratio = 0.0;   // (k(k+1)/2 · N_ac) / (k · N_ac) = (k+1)/2
};

EscalationRatios escalation_ratios(int k, int ticks_per_slot);

/// n_ho + (N_ac − n_ho)·(1 − p_s)^(N_ac − n_ho).
double refined_increment_bound(int n_ho, int ticks_per_slot, double p_s);
/// n_ho + (N_ac − n_ho)·Π(1 − p_s(n)) over the N_ac − n_ho post-outage ticks.
double refined_increment_bound(int n_ho, int ticks_per_slot, std::span<const double> p_s);

/// Exact expectations of a handover-slot increment, by enumerating the
/// position of the first post-outage success.
struct IncrementExpectation {
    double slot_summary = 0.0;  // age_end from the slot-summary law minus a0
    double slot_summary_var = 0.0;  // its variance: two outcomes, N_ac w.p. q or 1 − a0
    double tick_exact = 0.0;    // true tick-level A_N minus a0
    double p_no_success = 0.0;
};

IncrementExpectation exact_increment(std::int64_t a0, int n_ho, int ticks_per_slot,
                                     std::span<const double> p_s);

double drift_constant_B(double dp_max, double dh_max, int ticks_per_slot,
                        std::span<const double> epsilons, int vehicles);

struct SlotHandover {
    bool handover = false;
    int serving = -1;
};

struct PingPongEvent {
    int vehicle = 0;
    std::vector<int> slots;
    int length = 0;
    std::array<int, 2> satellites{-1, -1};
};

/// Maximal, non-overlapping runs of consecutive handover slots with
/// k(t_i) = k(t_{i−2}), t_0 being the slot before the run (a run cannot
/// start at slot 0, whose predecessor is unknown). Only runs of length >= 2 are reported.
std::vector<PingPongEvent> detect_pingpong(std::span<const SlotHandover> log, int vehicle = 0);

inline bool reactive_infeasibility_check(int n_ho, int n_safe_1) { return n_ho >= n_safe_1; }

/// Ages after each tick, applying "success → 1, else +1" literally.
std::vector<std::int64_t> brute_force_tick_oracle(std::int64_t a0,
                                                  std::span<const std::uint8_t> success);

}  // namespace leoaoi::analysis
