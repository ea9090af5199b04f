#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leoaoi/aoi_engine.hpp"
#include "leoaoi/channel.hpp"

namespace leoaoi::sched {

enum class HandoverKind { none, discretionary, forced };
enum class PolicyKind { dpp, round_robin, mvt, mrss };

PolicyKind parse_policy(const std::string& name);
std::string policy_name(PolicyKind kind);
const char* handover_kind_name(HandoverKind kind);

struct Action {
    int serving = -1;
    std::array<bool, kClasses> flags{};
    double power = 0.0;  // W
    int horizon = 0;     // proactive wait count H
    HandoverKind kind = HandoverKind::none;

    bool transmits() const { return power > 0.0 && (flags[0] || flags[1] || flags[2]); }
};

struct ObservedState {
    std::array<std::int64_t, kClasses> ages{1, 1, 1};
    std::array<double, kClasses> z{};
    double q_power = 0.0;
    double q_handover = 0.0;
    int serving = -1;
    bool forced = false;
    double channel_gain = 0.0;        // serving link, linear, per watt
    int visibility_window = 0;        // serving link
    double best_candidate_gain = 0.0;
    double interference_prev = 0.0;   // W
};

struct PolicyConfig {
    double V = 50.0;
    std::vector<double> power_grid;  // W
    double p_max = 10.0;
    double p_ho = 1.0;
    double ho_budget = 0.2;
    int horizon_cap = 10;
    double kappa_safe = 5.0;
    double z_scale = 10.0;
    double mu_n = 11.25;  // mean outage ticks
    double t_pre = 0.0;
    std::array<double, kClasses> r_min{0.5, 0.2, 0.1};
    aoi::SafetyThresholds thresholds;
    int ticks_per_slot = 50;
    double snr_threshold = 1.0;       // γ_th, linear
    double mean_fading_power = 1.542;

    /// 8 log-spaced levels from P_max/100 to P_max.
    static std::vector<double> default_power_grid(double p_max, int levels = 8);
    int outage_ticks_hat() const;
    void validate() const;
};

/// One satellite the vehicle may be associated with during the coming slot.
struct CandidateLink {
    int satellite = -1;
    HandoverKind kind = HandoverKind::none;  // what choosing it implies this slot
    int window_slots = 0;
    double snr_per_watt = 0.0;  // pre-fading SINR per watt, (G·L)/(σ² + I_prev)
    const channel::FadingBank* bank = nullptr;

    double success_prob(double power, double threshold) const;
    double mean_snr(double power, double mean_fading) const {
        return power * snr_per_watt * mean_fading;
    }
};

struct DecisionContext {
    ObservedState state;
    std::vector<CandidateLink> links;
    double other_power = 0.0;  // the rest of the fleet's P_tot from the previous slot
};

struct Candidate {
    int link = 0;              // index into DecisionContext::links
    std::uint8_t flags = 0;    // bit m set ⇒ class m+1 carried
    int power_index = -1;      // -1 ⇒ idle
};

struct ScoredAction {
    Action action;
    Candidate candidate;
    double score = 0.0;
};

double candidate_power(const PolicyConfig& cfg, const Candidate& c);

/// Rate-feasible candidates: every link × {idle, 7 flag patterns × grid}.
std::vector<Candidate> enumerate_candidates(const PolicyConfig& cfg, const DecisionContext& ctx);

/// Drift-plus-penalty right-hand side of one candidate:
/// Q_P(P_tot − P_max) + Q_H(H_disc − budget) + Σ_m Z_m(V̂_m − N_ac ε_m) + V·Θ̂.
double score_candidate(const PolicyConfig& cfg, const DecisionContext& ctx, const Candidate& c);

/// Strict "a is preferred over b": lower score, then no handover, lower
/// power, lower satellite index, fewer flags.
bool candidate_before(const PolicyConfig& cfg, const DecisionContext& ctx, const Candidate& a,
                      double score_a, const Candidate& b, double score_b);

Action to_action(const PolicyConfig& cfg, const DecisionContext& ctx, const Candidate& c);

ScoredAction dpp_decide(const PolicyConfig& cfg, const DecisionContext& ctx);

struct MrtResult {
    std::vector<std::complex<double>> beam;  // unit norm
    double rate = 0.0;                       // bits/s/Hz
};

/// log2(1 + P·gain/σ²).
double mrt_rate(double channel_gain, double power, double noise);
MrtResult mrt_beam(std::span<const std::complex<double>> h, double power, double noise);
/// Rate achieved by an arbitrary unit-norm beam w.
double beam_rate(std::span<const std::complex<double>> h, std::span<const std::complex<double>> w,
                 double power, double noise);

struct ProactiveCandidate {
    int satellite = -1;
    int window_slots = 0;
    double p_hat = 0.0;  // predicted per-tick success after the outage
};

struct ProactiveResult {
    int horizon = 0;
    int satellite = -1;
    double cost = 0.0;
    HandoverKind kind = HandoverKind::none;
};

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Â(H, k') + κ_safe·σ((Z_1 + μ_n − H·N_ac·ε_1)/Z_scale).
double proactive_cost(const PolicyConfig& cfg, std::int64_t age1, double z1, int horizon,
                      double p_serving, const ProactiveCandidate& cand);

/// Exhaustive search over candidates and H ∈ [0, min(F, W)].
ProactiveResult proactive_ho_search(const PolicyConfig& cfg, std::int64_t age1, double z1,
                                    int serving, bool serving_visible, double p_serving,
                                    std::span<const ProactiveCandidate> candidates);

/// (vehicle, class) granted in slot t; cycles vehicle-major with period V·3.
std::pair<int, int> round_robin_grant(std::int64_t slot, int vehicles);

/// Index of the largest window, ties to the lower satellite id. -1 when empty.
int mvt_select(std::span<const int> satellites, std::span<const int> windows);
/// Index of the largest received strength, ties to the lower satellite id.
int mrss_select(std::span<const int> satellites, std::span<const double> strengths);

}  // namespace leoaoi::sched
