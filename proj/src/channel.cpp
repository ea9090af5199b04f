#include "leoaoi/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "leoaoi/rng.hpp"

namespace leoaoi::channel {

void ChannelParams::validate() const {
    require(carrier_frequency > 0.0, "channel: carrier frequency must be positive");
    require(noise_power > 0.0, "channel: noise power must be positive");
    require(sr_m > 0.0 && sr_b >= 0.0 && sr_omega > 0.0,
            "channel: Shadowed-Rician parameters must be positive");
    require(snr_threshold > 0.0, "channel: SNR threshold must be positive");
    require(bandwidth > 0.0, "channel: bandwidth must be positive");
    require(beam_gain > 0.0 && sidelobe_factor >= 0.0, "channel: bad antenna gains");
    require(shadow_fading_sigma_db >= 0.0, "channel: shadow fading sigma must be >= 0");
}

double compound_doppler(double v_sat, double v_veh, double theta_sat, double psi_veh,
                        double carrier_frequency) {
    require(v_sat >= 0.0 && v_veh >= 0.0, "compound_doppler: speeds must be non-negative");
    return carrier_frequency / kSpeedOfLight *
           (v_sat * std::sin(theta_sat) - v_veh * std::cos(psi_veh));
}

DopplerReport coherence_report(double v_sat, double v_veh, double theta_sat, double psi_veh,
                               double carrier_frequency, double tick_seconds,
                               double slot_seconds) {
    require(v_sat >= 0.0 && v_veh >= 0.0, "coherence_report: speeds must be non-negative");
    DopplerReport r;
    const double scale = carrier_frequency / kSpeedOfLight;
    r.f_sat = scale * v_sat * std::sin(theta_sat);
    r.f_veh = scale * v_veh * std::cos(psi_veh);
    r.f_total = r.f_sat - r.f_veh;
    if (r.f_total == 0.0) {
        r.coherence_infinite = true;
        r.coherence_time = std::numeric_limits<double>::infinity();
        r.nsi_tick = 0.0;
        r.nsi_slot = 0.0;
    } else {
        r.coherence_time = 0.423 / std::abs(r.f_total);
        r.nsi_tick = tick_seconds / r.coherence_time;
        r.nsi_slot = slot_seconds / r.coherence_time;
    }
    const double s = std::sin(theta_sat);
    if (s > 0.0 && v_sat > 0.0) r.doppler_ratio = v_veh / (v_sat * s);
    return r;
}

double free_space_path_loss_db(double distance, double carrier_frequency) {
    return 20.0 * std::log10(4.0 * kPi * distance * carrier_frequency / kSpeedOfLight);
}

double path_gain(double distance, double elevation, double carrier_frequency,
                 const ChannelParams& params, double shadow_db) {
    if (!(elevation > 0.0)) throw std::domain_error("path_gain: elevation must be positive");
    if (!(distance > 0.0)) throw std::domain_error("path_gain: distance must be positive");
    const double loss_db = free_space_path_loss_db(distance, carrier_frequency) + shadow_db +
                           params.zenith_loss_db / std::sin(elevation);
    return db2lin(-loss_db);
}

double sample_shadowed_rician(const ChannelParams& params, Rng& rng) {
    const double los_power = gamma_draw(rng, params.sr_m, params.sr_omega / params.sr_m);
    const double phase = kTwoPi * uniform01(rng);
    const double amp = std::sqrt(los_power);
    double re = amp * std::cos(phase);
    double im = amp * std::sin(phase);
    if (params.sr_b > 0.0) {
        const double sd = std::sqrt(params.sr_b);
        re += sd * standard_normal(rng);
        im += sd * standard_normal(rng);
    }
    return re * re + im * im;
}

double tick_sinr(double tx_power, double path_gain, double fading_power, double beam_gain,
                 double interference, double noise_power) {
    require(noise_power > 0.0, "tick_sinr: noise power must be positive");
    require(tx_power >= 0.0 && path_gain >= 0.0 && fading_power >= 0.0 && beam_gain >= 0.0 &&
                interference >= 0.0,
            "tick_sinr: inputs must be non-negative");
    return tx_power * path_gain * fading_power * beam_gain / (noise_power + interference);
}

double slot_success_prob(std::span<const double> per_tick_probs,
                         std::span<const std::uint8_t> schedule) {
    require(per_tick_probs.size() == schedule.size(),
            "slot_success_prob: probability and schedule lengths differ");
    double all_fail = 1.0;
    for (std::size_t n = 0; n < per_tick_probs.size(); ++n) {
        const double p = per_tick_probs[n];
        require(p >= 0.0 && p <= 1.0, "slot_success_prob: probability outside [0,1]");
        if (schedule[n]) all_fail *= 1.0 - p;
    }
    return 1.0 - all_fail;
}

FadingBank::FadingBank(const ChannelParams& params, Rng& rng, int draws) {
    require(draws > 0, "FadingBank: need at least one draw");
    sorted_.reserve(static_cast<std::size_t>(draws));
    for (int i = 0; i < draws; ++i) sorted_.push_back(sample_shadowed_rician(params, rng));
    std::sort(sorted_.begin(), sorted_.end());
}

double FadingBank::exceed_fraction(double required) const {
    if (sorted_.empty()) return 0.0;
    const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), required);
    return static_cast<double>(sorted_.end() - it) / static_cast<double>(sorted_.size());
}

double FadingBank::success_probability(double snr_without_fading, double threshold) const {
    if (!(snr_without_fading > 0.0)) return 0.0;
    return exceed_fraction(threshold / snr_without_fading);
}

double calibrate_snr_threshold(const ChannelParams& params, double snr_without_fading,
                               double target, Rng& rng, int draws) {
    require(target > 0.0 && target < 1.0, "calibrate_snr_threshold: target must be in (0,1)");
    require(snr_without_fading > 0.0, "calibrate_snr_threshold: SNR must be positive");
    std::vector<double> sample(static_cast<std::size_t>(draws));
    for (auto& s : sample) s = sample_shadowed_rician(params, rng);
    // P(|ρ|² >= q) = target  <=>  q is the (1 − target) quantile.
    const auto k = static_cast<std::size_t>((1.0 - target) * static_cast<double>(draws));
    std::nth_element(sample.begin(), sample.begin() + static_cast<std::ptrdiff_t>(k),
                     sample.end());
    return snr_without_fading * sample[k];
}

}  // namespace leoaoi::channel
