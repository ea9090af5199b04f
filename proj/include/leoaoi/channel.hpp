#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "leoaoi/common.hpp"

namespace leoaoi::channel {

struct ChannelParams {
    double carrier_frequency = 1.67e9;  // Hz
    double noise_power = db2lin(-97.0 - 30.0);  // W (10 MHz, 7 dB noise figure)
    double sr_m = 10.0;       // Nakagami shadowing severity
    double sr_b = 0.126;      // half scatter power
    double sr_omega = 1.29;   // mean LOS power
    double zenith_loss_db = 0.5;
    double shadow_fading_sigma_db = 2.0;
    double snr_threshold = db2lin(6.74);  // γ_th: p = 0.3 per tick at 45°, P_max/100, no shadowing
    double bandwidth = 10e6;  // Hz
    double beam_gain = 16.0;  // 4x4 UPA, served link
    double sidelobe_factor = 0.05;  // interference links
    double sat_gain_db = 30.0;

    /// E|ρ|² = Ω + 2b.
    double mean_fading_power() const { return sr_omega + 2.0 * sr_b; }
    void validate() const;
};

struct DopplerReport {
    double f_sat = 0.0;
    double f_veh = 0.0;
    double f_total = 0.0;
    double coherence_time = 0.0;       // +inf when f_total == 0
    bool coherence_infinite = false;
    std::optional<double> doppler_ratio;  // empty when sin θ <= 0 (below mask)
    double nsi_tick = 0.0;
    double nsi_slot = 0.0;
};

/// (f_c/c)·[v_sat·sinθ − v_veh·cosψ].
double compound_doppler(double v_sat, double v_veh, double theta_sat, double psi_veh,
                        double carrier_frequency);

DopplerReport coherence_report(double v_sat, double v_veh, double theta_sat, double psi_veh,
                               double carrier_frequency, double tick_seconds,
                               double slot_seconds);

double free_space_path_loss_db(double distance, double carrier_frequency);

/// Large-scale gain 1/P_loss with P_loss = FSPL + SF + L_zenith/sinθ (all dB).
/// Throws std::domain_error for θ <= 0 or d <= 0.
double path_gain(double distance, double elevation, double carrier_frequency,
                 const ChannelParams& params, double shadow_db);

/// One Shadowed-Rician power draw |ρ|²: Gamma(m, Ω/m) line-of-sight power with
/// a uniform phase plus a complex Gaussian scatter of per-dimension variance b.
double sample_shadowed_rician(const ChannelParams& params, Rng& rng);

double tick_sinr(double tx_power, double path_gain, double fading_power, double beam_gain,
                 double interference, double noise_power);

/// 1 − Π(1 − δ(n)·p(n)).
double slot_success_prob(std::span<const double> per_tick_probs,
                         std::span<const std::uint8_t> schedule);

/// Sorted Monte-Carlo sample of |ρ|² used to predict per-tick success
/// probabilities for arbitrary link budgets.
class FadingBank {
public:
    FadingBank() = default;
    FadingBank(const ChannelParams& params, Rng& rng, int draws);

    /// Fraction of draws with |ρ|² >= required.
    double exceed_fraction(double required) const;
    /// P(snr_without_fading · |ρ|² >= γ_th).
    double success_probability(double snr_without_fading, double threshold) const;
    std::size_t size() const { return sorted_.size(); }
    bool empty() const { return sorted_.empty(); }

private:
    std::vector<double> sorted_;
};

/// γ_th (linear) such that a link with the given pre-fading SNR succeeds with
/// per-tick probability `target`.
double calibrate_snr_threshold(const ChannelParams& params, double snr_without_fading,
                               double target, Rng& rng, int draws = 200000);

}  // namespace leoaoi::channel
