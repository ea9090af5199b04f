#include "leoaoi/aoi_engine.hpp"

#include <algorithm>
#include <cmath>

#include "leoaoi/rng.hpp"

namespace leoaoi::aoi {

TimescaleConfig TimescaleConfig::from_ticks(double slot_seconds, int ticks_per_slot) {
    require(ticks_per_slot > 0, "timescale: ticks_per_slot must be positive");
    return {slot_seconds, slot_seconds / ticks_per_slot, ticks_per_slot};
}

void TimescaleConfig::validate() const {
    require(slot_seconds > 0.0 && tick_seconds > 0.0, "timescale: durations must be positive");
    require(ticks_per_slot > 0, "timescale: ticks_per_slot must be positive");
    require(std::abs(ticks_per_slot * tick_seconds - slot_seconds) <= 1e-9 * slot_seconds,
            "timescale: slot must hold an integer number of ticks");
}

TickRuleReport validate_tick_rule(const TimescaleConfig& cfg, double delta_safe_min,
                                  double tau_ho_min) {
    TickRuleReport r;
    r.bound_seconds = std::min(delta_safe_min, tau_ho_min) / 2.0;
    // Tolerate representation error so the closed boundary passes.
    const double eps = 1e-12 * std::max(1.0, r.bound_seconds);
    r.n_safe_min = static_cast<int>(std::floor(delta_safe_min / cfg.tick_seconds + 1e-9));
    r.n_ho = static_cast<int>(std::floor(tau_ho_min / cfg.tick_seconds + 1e-9));
    r.pass = cfg.tick_seconds <= r.bound_seconds + eps && r.n_safe_min >= 2 && r.n_ho >= 1;
    return r;
}

void SafetyThresholds::validate() const {
    for (int m = 0; m < kClasses; ++m) {
        require(n_safe[m] >= 1, "safety: n_safe must be >= 1");
        require(epsilon[m] > 0.0 && epsilon[m] < 1.0, "safety: epsilon must be in (0,1)");
        require(weights[m] > 0.0, "safety: weights must be positive");
    }
    for (int m = 1; m < kClasses; ++m) {
        require(n_safe[m - 1] < n_safe[m], "safety: n_safe must increase with class index");
        require(epsilon[m - 1] < epsilon[m], "safety: epsilon must increase with class index");
        require(weights[m - 1] > weights[m], "safety: weights must decrease with class index");
    }
}

void OutageModel::validate() const {
    require(min_ms > 0.0, "outage: min_ms must be positive");
    require(std_ms >= 0.0, "outage: std_ms must be non-negative");
    require(mean_ms >= min_ms || std_ms > 0.0,
            "outage: degenerate distribution below its floor");
}

double OutageModel::sample_seconds(Rng& rng) const {
    if (std_ms == 0.0) return std::max(mean_ms, min_ms) * 1e-3;
    // Rejection is cheap unless the floor sits far above the mean.
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const double x = mean_ms + std_ms * standard_normal(rng);
        if (x >= min_ms) return x * 1e-3;
    }
    return min_ms * 1e-3;
}

OutageTicks outage_ticks(double tau_ho, double tick_seconds) {
    require(tick_seconds > 0.0, "outage_ticks: tick must be positive");
    const double ratio = tau_ho / tick_seconds;
    // A hair of slack so that exact multiples (0.04/0.02) do not floor down.
    const double r = ratio + 1e-9;
    require(r >= 1.0, "outage_ticks: outage shorter than one tick");
    OutageTicks o;
    o.n_ho = static_cast<int>(std::floor(r));
    o.floor_error = std::max(0.0, ratio - o.n_ho);
    return o;
}

std::int64_t slot_summary(std::int64_t age_start, bool connected, bool any_tick_success,
                          int ticks_per_slot) {
    if (connected && any_tick_success) return 1;
    return age_start + ticks_per_slot;
}

double expected_slot_increment(double age, double p_succ, int ticks_per_slot) {
    require(p_succ >= 0.0 && p_succ <= 1.0, "expected_slot_increment: p outside [0,1]");
    return ticks_per_slot - p_succ * (ticks_per_slot + age - 1.0);
}

int v2v_delay_ticks(int hop_index, double gap_m) {
    require(hop_index >= 0 && gap_m >= 0.0, "v2v_delay_ticks: negative hop or gap");
    return static_cast<int>(std::lround(hop_index * gap_m / 60.0));
}

double slot_power(std::span<const std::uint8_t> transmit, std::span<const double> powers,
                  std::span<const std::uint8_t> handover, double p_ho) {
    require(transmit.size() == powers.size() && transmit.size() == handover.size(),
            "slot_power: per-vehicle vectors differ in length");
    double total = 0.0;
    for (std::size_t v = 0; v < transmit.size(); ++v) {
        require(powers[v] >= 0.0, "slot_power: negative power");
        if (transmit[v]) total += powers[v];
        if (handover[v]) total += p_ho;
    }
    return total;
}

PhaseDecomposition phase_decomposition(std::span<const PhaseSample> log) {
    require(!log.empty(), "phase_decomposition: empty log");
    double sum_c = 0.0, sum_h = 0.0;
    std::size_t n_c = 0, n_h = 0;
    for (const auto& s : log) {
        if (s.handover_phase) {
            sum_h += s.age;
            ++n_h;
        } else {
            sum_c += s.age;
            ++n_c;
        }
    }
    const double n = static_cast<double>(log.size());
    PhaseDecomposition d;
    d.conn_fraction = n_c / n;
    d.ho_fraction = n_h / n;
    d.conn_mean = n_c ? sum_c / n_c : 0.0;
    d.ho_mean = n_h ? sum_h / n_h : 0.0;
    d.total_mean = (sum_c + sum_h) / n;
    return d;
}

SlotForecast forecast_slot(double a0, int outage, double p, int n_safe, int ticks_per_slot) {
    require(p >= 0.0 && p <= 1.0, "forecast_slot: p outside [0,1]");
    require(outage >= 0, "forecast_slot: negative outage");
    const double q = 1.0 - p;
    SlotForecast f;
    double sum = 0.0;
    double q_f = 1.0;   // q^f, f = post-outage ticks elapsed
    double q_s = std::pow(q, n_safe);
    int post = 0;
    for (int n = 1; n <= ticks_per_slot; ++n) {
        if (n > outage) {
            ++post;
            q_f *= q;
        }
        const double stale = a0 + n;
        double mean = q_f * stale;
        if (p > 0.0) mean += (1.0 - q_f * (1.0 + post * p)) / p;
        double viol = stale > n_safe ? q_f : 0.0;
        if (post > n_safe) viol += q_s - q_f;
        sum += mean;
        f.violations += viol;
        if (n == ticks_per_slot) f.end_age = mean;
    }
    f.mean_age = sum / ticks_per_slot;
    return f;
}

TickLog::TickLog(int vehicles, std::int64_t reserve_ticks) : vehicles_(vehicles) {
    require(vehicles > 0, "TickLog: need at least one vehicle");
    const auto n = static_cast<std::size_t>(reserve_ticks * vehicles);
    ages_.reserve(n * kClasses);
    z_.reserve(n * kClasses);
    ho_.reserve(n);
}

void TickLog::push_tick(std::span<const std::int64_t> ages,
                        std::span<const std::uint8_t> handover_phase,
                        std::span<const double> z) {
    const auto vm = static_cast<std::size_t>(vehicles_ * kClasses);
    require(ages.size() == vm && z.size() == vm &&
                handover_phase.size() == static_cast<std::size_t>(vehicles_),
            "TickLog: row size mismatch");
    ages_.insert(ages_.end(), ages.begin(), ages.end());
    z_.insert(z_.end(), z.begin(), z.end());
    ho_.insert(ho_.end(), handover_phase.begin(), handover_phase.end());
    ++ticks_;
}

std::vector<PhaseSample> TickLog::phase_samples(int cls) const {
    std::vector<PhaseSample> out;
    out.reserve(static_cast<std::size_t>(ticks_ * vehicles_));
    for (std::int64_t t = 0; t < ticks_; ++t)
        for (int v = 0; v < vehicles_; ++v)
            out.push_back({handover_phase(t, v), static_cast<double>(age(t, v, cls))});
    return out;
}

}  // namespace leoaoi::aoi
