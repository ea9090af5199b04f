#include "leoaoi/analysis.hpp"

#include <cmath>

namespace leoaoi::analysis {

SpikeEnvelope spike_envelope(std::int64_t a0, int k, int ticks_per_slot) {
    require(a0 >= 1 && k >= 1, "spike_envelope: need a0 >= 1 and k >= 1");
    require(ticks_per_slot >= 1, "spike_envelope: N_ac must be positive");
    SpikeEnvelope e;
    e.a0 = a0;
    e.k = k;
    e.end_age = a0 + static_cast<std::int64_t>(k) * ticks_per_slot;
    e.cumulative = k * a0 + static_cast<std::int64_t>(k) * (k + 1) / 2 * ticks_per_slot;
    e.variance = 0.0;
    return e;
}

EscalationRatios escalation_ratios(int k, int ticks_per_slot) {
    const auto one = spike_envelope(1, 1, ticks_per_slot);
    const auto many = spike_envelope(1, k, ticks_per_slot);
    EscalationRatios r;
    r.cumulative_ratio = static_cast<double>(many.cumulative) / (k * static_cast<double>(one.cumulative));
    r.quadratic_ratio = (k * (k + 1) / 2.0) / k;
    return r;
}

double refined_increment_bound(int n_ho, int ticks_per_slot, double p_s) {
    require(n_ho >= 1 && n_ho <= ticks_per_slot, "refined_increment_bound: need 1 <= n_ho <= N_ac");
    require(p_s >= 0.0 && p_s <= 1.0, "refined_increment_bound: p_s outside [0,1]");
    const int rest = ticks_per_slot - n_ho;
    return n_ho + rest * std::pow(1.0 - p_s, rest);
}

double refined_increment_bound(int n_ho, int ticks_per_slot, std::span<const double> p_s) {
    require(n_ho >= 1 && n_ho <= ticks_per_slot, "refined_increment_bound: need 1 <= n_ho <= N_ac");
    const int rest = ticks_per_slot - n_ho;
    require(p_s.size() == static_cast<std::size_t>(rest),
            "refined_increment_bound: need one probability per post-outage tick");
    double none = 1.0;
    for (double p : p_s) {
        require(p >= 0.0 && p <= 1.0, "refined_increment_bound: p_s outside [0,1]");
        none *= 1.0 - p;
    }
    return n_ho + rest * none;
}

IncrementExpectation exact_increment(std::int64_t a0, int n_ho, int ticks_per_slot,
                                     std::span<const double> p_s) {
    const int rest = ticks_per_slot - n_ho;
    require(n_ho >= 0 && rest >= 0, "exact_increment: bad outage length");
    require(p_s.size() == static_cast<std::size_t>(rest),
            "exact_increment: need one probability per post-outage tick");
    IncrementExpectation e;
    // Tick-exact: A_N = N − j + 1 where j is the last success tick. Enumerate
    // the last success position backwards: P(last = j) = p_j Π_{i>j}(1 − p_i).
    double tail_fail = 1.0;
    double tick_sum = 0.0;
    for (int idx = rest - 1; idx >= 0; --idx) {
        const int j = n_ho + idx + 1;  // 1-based tick of this attempt
        tick_sum += p_s[static_cast<std::size_t>(idx)] * tail_fail * (ticks_per_slot - j + 1);
        tail_fail *= 1.0 - p_s[static_cast<std::size_t>(idx)];
    }
    e.p_no_success = tail_fail;
    const double a0d = static_cast<double>(a0);
    tick_sum += tail_fail * (a0d + ticks_per_slot);
    e.tick_exact = tick_sum - a0d;
    // Slot-summary law: any success → 1, otherwise a0 + N_ac.
    e.slot_summary = tail_fail * ticks_per_slot + (1.0 - tail_fail) * (1.0 - a0d);
    const double spread = ticks_per_slot - (1.0 - a0d);
    e.slot_summary_var = tail_fail * (1.0 - tail_fail) * spread * spread;
    return e;
}

double drift_constant_B(double dp_max, double dh_max, int ticks_per_slot,
                        std::span<const double> epsilons, int vehicles) {
    require(dp_max >= 0.0 && dh_max >= 0.0 && vehicles >= 0, "drift_constant_B: negative input");
    double safety = 0.0;
    for (double eps : epsilons) {
        const double d = ticks_per_slot * (1.0 - eps);
        safety += d * d;
    }
    return 0.5 * (dp_max * dp_max + dh_max * dh_max + vehicles * safety);
}

std::vector<PingPongEvent> detect_pingpong(std::span<const SlotHandover> log, int vehicle) {
    std::vector<PingPongEvent> out;
    const int n = static_cast<int>(log.size());
    auto holds = [&](int start, int i) {
        // Condition for the i-th slot of a run (i >= 2, 1-based).
        const int t = start + i - 1;
        if (t >= n || !log[t].handover) return false;
        const int back = t - 2;
        if (back < 0) return false;
        return log[t].serving == log[back].serving;
    };
    int s = 0;
    while (s < n) {
        if (!log[s].handover) {
            ++s;
            continue;
        }
        int k = 1;
        while (holds(s, k + 1)) ++k;
        if (k >= 2) {
            PingPongEvent ev;
            ev.vehicle = vehicle;
            ev.length = k;
            for (int i = 0; i < k; ++i) ev.slots.push_back(s + i);
            ev.satellites = {log[s].serving, log[s + 1].serving};
            out.push_back(std::move(ev));
            s += k;
        } else {
            ++s;
        }
    }
    return out;
}

std::vector<std::int64_t> brute_force_tick_oracle(std::int64_t a0,
                                                  std::span<const std::uint8_t> success) {
    std::vector<std::int64_t> traj;
    traj.reserve(success.size());
    std::int64_t age = a0;
    for (auto s : success) {
        age = s ? 1 : age + 1;
        traj.push_back(age);
    }
    return traj;
}

}  // namespace leoaoi::analysis
