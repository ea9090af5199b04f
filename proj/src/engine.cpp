#include "leoaoi/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "leoaoi/rng.hpp"

namespace leoaoi {

namespace {

using constellation::GeometrySample;
using sched::HandoverKind;
using sched::PolicyKind;

enum Stream : std::uint64_t { kChannel = 1, kOutage, kShadow, kPredictor, kMeasure, kSpeeds };

struct VisibleSat {
    int sat = -1;
    double elevation = 0.0;
    double range = 0.0;
    double gain = 0.0;  // path gain × satellite antenna gain, linear
};

struct VehicleSlot {
    constellation::VehicleState veh;
    std::vector<VisibleSat> visible;  // ascending satellite id
    const VisibleSat* find(int sat) const {
        auto it = std::lower_bound(visible.begin(), visible.end(), sat,
                                   [](const VisibleSat& v, int s) { return v.sat < s; });
        return it != visible.end() && it->sat == sat ? &*it : nullptr;
    }
};

double class_weighted(const std::array<double, kClasses>& w, const std::array<ClassMetrics, kClasses>& c) {
    double s = 0.0;
    for (int m = 0; m < kClasses; ++m) s += w[m] * c[m].mean_aoi;
    return s;
}

}  // namespace

RunResult run_episode(const ScenarioConfig& cfg, std::uint64_t seed, const RunOptions& opt) {
    cfg.validate();
    const auto pc = cfg.policy_config();
    const auto& con = cfg.constellation;
    const auto& ch = cfg.channel;
    const int N = cfg.ticks_per_slot();
    const int nv = cfg.platoon.platoons;
    const int T = cfg.episode_slots;
    const double slot_s = cfg.timescale.slot_seconds;
    const double g_sat = db2lin(ch.sat_gain_db);
    const double noise = ch.noise_power;
    const double mean_fading = ch.mean_fading_power();
    const int period = cfg.ho_period_slots();
    const PolicyKind policy = cfg.policy.kind;

    const auto ephs = constellation::walker_delta(con);
    const constellation::Highway road(deg2rad(cfg.platoon.latitude_deg), deg2rad(cfg.platoon.longitude_deg),
                                      deg2rad(cfg.platoon.azimuth_deg), con.earth_radius);

    Rng rng_channel = make_stream(seed, kChannel);
    Rng rng_outage = make_stream(seed, kOutage);
    Rng rng_shadow = make_stream(seed, kShadow);
    Rng rng_predict = make_stream(seed, kPredictor);
    Rng rng_measure = make_stream(seed, kMeasure);
    Rng rng_speeds = make_stream(seed, kSpeeds);

    std::vector<double> speed(static_cast<std::size_t>(nv));
    for (auto& s : speed)
        s = (cfg.platoon.speed_min_kmh + (cfg.platoon.speed_max_kmh - cfg.platoon.speed_min_kmh) * uniform01(rng_speeds)) / 3.6;

    RunResult res;
    res.policy = sched::policy_name(policy);
    res.seed = seed;
    res.slots = T;
    res.ticks_per_slot = N;
    res.vehicles = nv;

    auto log = std::make_shared<aoi::TickLog>(nv, static_cast<std::int64_t>(T) * N);
    safety::VirtualQueueSet q(nv);
    std::vector<std::array<std::int64_t, kClasses>> age(static_cast<std::size_t>(nv), {1, 1, 1});
    std::vector<int> serving(static_cast<std::size_t>(nv), -1);
    std::vector<bool> attached_once(static_cast<std::size_t>(nv), false);
    std::vector<int> epoch_end(static_cast<std::size_t>(nv), 0);
    std::vector<double> i_prev(static_cast<std::size_t>(nv), 0.0);
    std::vector<double> own_prev(static_cast<std::size_t>(nv), 0.0);
    std::vector<std::map<int, double>> shadow(static_cast<std::size_t>(nv));
    std::vector<std::vector<analysis::SlotHandover>> ho_log(static_cast<std::size_t>(nv));
    double ptot_prev = 0.0;
    double power_sum = 0.0;
    double outage_tick_sum = 0.0;
    int outage_events = 0;

    const int trace_stride = std::max(1, T / std::max(1, opt.trace_points));
    std::vector<Vec3> sat_pos(ephs.size());
    std::vector<VehicleSlot> vs(static_cast<std::size_t>(nv));
    std::vector<sched::Action> act(static_cast<std::size_t>(nv));
    std::vector<int> n_ho(static_cast<std::size_t>(nv));
    std::vector<bool> blackout(static_cast<std::size_t>(nv));
    std::vector<bool> handover(static_cast<std::size_t>(nv));
    std::vector<double> link_gain(static_cast<std::size_t>(nv));
    std::vector<double> cross(static_cast<std::size_t>(nv * nv));  // [u][v]: u towards v's satellite
    std::vector<std::int64_t> row_age(static_cast<std::size_t>(nv * kClasses));
    std::vector<double> row_z(static_cast<std::size_t>(nv * kClasses));
    std::vector<std::uint8_t> row_ho(static_cast<std::size_t>(nv));
    std::vector<double> rho(static_cast<std::size_t>(nv));
    std::vector<bool> active(static_cast<std::size_t>(nv));
    std::vector<int> active_ticks(static_cast<std::size_t>(nv));

    for (int t = 0; t < T; ++t) {
        for (std::size_t s = 0; s < ephs.size(); ++s)
            sat_pos[s] = constellation::satellite_position(ephs[s], con, t, slot_s);

        // Geometry, visibility and per-pass shadowing.
        for (int v = 0; v < nv; ++v) {
            auto& slot = vs[static_cast<std::size_t>(v)];
            const double arc = v * cfg.platoon.spacing_m + speed[static_cast<std::size_t>(v)] * t * slot_s;
            slot.veh = road.at(arc, speed[static_cast<std::size_t>(v)], v);
            slot.visible.clear();
            std::map<int, double> next_shadow;
            for (std::size_t s = 0; s < ephs.size(); ++s) {
                const auto g = constellation::elevation_and_range(sat_pos[s], slot.veh, con.min_elevation);
                if (!g.visible) continue;
                const int id = ephs[s].satellite_id;
                auto& old = shadow[static_cast<std::size_t>(v)];
                const auto it = old.find(id);
                const double sf = it != old.end() ? it->second
                                                  : ch.shadow_fading_sigma_db * standard_normal(rng_shadow);
                next_shadow[id] = sf;
                const double gain = channel::path_gain(g.slant_range, g.elevation, ch.carrier_frequency, ch, sf) * g_sat;
                slot.visible.push_back({id, g.elevation, g.slant_range, gain});
            }
            shadow[static_cast<std::size_t>(v)] = std::move(next_shadow);
        }

        std::map<int, channel::FadingBank> banks;
        auto bank_for = [&](int sat) -> const channel::FadingBank* {
            auto it = banks.find(sat);
            if (it == banks.end())
                it = banks.emplace(sat, channel::FadingBank(ch, rng_predict, cfg.policy.predictor_draws)).first;
            return &it->second;
        };
        auto window_of = [&](int v, int sat) {
            return constellation::visibility_window(con, ephs[static_cast<std::size_t>(sat)],
                                                    vs[static_cast<std::size_t>(v)].veh, t, slot_s)
                .slots;
        };

        // Decisions.
        for (int v = 0; v < nv; ++v) {
            const auto uv = static_cast<std::size_t>(v);
            const auto& slot = vs[uv];
            auto& a = act[uv];
            a = sched::Action{};
            blackout[uv] = slot.visible.empty();
            if (blackout[uv]) continue;

            const bool initial = serving[uv] < 0 && !attached_once[uv];
            const VisibleSat* cur = serving[uv] >= 0 ? slot.find(serving[uv]) : nullptr;
            bool forced = !initial && (cur == nullptr || t >= epoch_end[uv]);
            if (forced && cur != nullptr && slot.visible.size() == 1) forced = false;  // nowhere to go
            const bool stay_only = !initial && !forced;
            const double denom = noise + (cfg.ideal_channel ? 0.0 : i_prev[uv]);

            std::vector<const VisibleSat*> allowed;
            for (const auto& s : slot.visible) {
                if (stay_only && s.sat != serving[uv]) continue;
                if (forced && s.sat == serving[uv]) continue;
                allowed.push_back(&s);
            }
            const HandoverKind move_kind = initial ? HandoverKind::none : HandoverKind::forced;

            if (policy == PolicyKind::dpp) {
                sched::DecisionContext ctx;
                auto& st = ctx.state;
                st.ages = age[uv];
                st.z = q.z[uv];
                st.q_power = q.q_power;
                st.q_handover = q.q_handover;
                st.serving = serving[uv];
                st.forced = forced;
                st.interference_prev = i_prev[uv];
                if (cur) st.channel_gain = cur->gain * ch.beam_gain / denom;
                for (const auto* s : allowed) {
                    sched::CandidateLink link;
                    link.satellite = s->sat;
                    link.kind = stay_only ? HandoverKind::none : move_kind;
                    link.snr_per_watt = s->gain * ch.beam_gain / denom;
                    link.bank = bank_for(s->sat);
                    st.best_candidate_gain = std::max(st.best_candidate_gain, link.snr_per_watt);
                    ctx.links.push_back(link);
                }
                if (stay_only && cfg.policy.proactive && slot.visible.size() > 1) {
                    st.visibility_window = window_of(v, serving[uv]);
                    std::vector<sched::ProactiveCandidate> pcs;
                    for (const auto& s : slot.visible) {
                        if (s.sat == serving[uv]) continue;
                        const double spw = s.gain * ch.beam_gain / denom;
                        pcs.push_back({s.sat, window_of(v, s.sat),
                                       bank_for(s.sat)->success_probability(pc.p_max * spw, pc.snr_threshold)});
                    }
                    const double p_serv = ctx.links.front().success_prob(pc.p_max, pc.snr_threshold);
                    const auto pro = sched::proactive_ho_search(pc, age[uv][0], q.z[uv][0], serving[uv], true,
                                                                p_serv, pcs);
                    if (pro.horizon == 0 && pro.satellite != serving[uv]) {
                        const auto* s = slot.find(pro.satellite);
                        sched::CandidateLink link;
                        link.satellite = s->sat;
                        link.kind = HandoverKind::discretionary;
                        link.window_slots = window_of(v, s->sat);
                        link.snr_per_watt = s->gain * ch.beam_gain / denom;
                        link.bank = bank_for(s->sat);
                        ctx.links.push_back(link);
                    }
                }
                ctx.other_power = ptot_prev - own_prev[uv];
                a = sched::dpp_decide(pc, ctx).action;
                if (a.serving < 0) a.serving = allowed.front()->sat;
            } else {
                // Association.
                int target = serving[uv];
                if (policy == PolicyKind::mrss) {
                    std::vector<int> ids;
                    std::vector<double> strength;
                    for (const auto& s : slot.visible) {
                        if (forced && s.sat == serving[uv]) continue;
                        ids.push_back(s.sat);
                        strength.push_back(pc.p_max * s.gain * channel::sample_shadowed_rician(ch, rng_measure));
                    }
                    target = ids[static_cast<std::size_t>(sched::mrss_select(ids, strength))];
                } else if (!stay_only) {
                    std::vector<int> ids;
                    for (const auto* s : allowed) ids.push_back(s->sat);
                    if (policy == PolicyKind::mvt) {
                        std::vector<int> windows;
                        for (int id : ids) windows.push_back(window_of(v, id));
                        target = ids[static_cast<std::size_t>(sched::mvt_select(ids, windows))];
                    } else {
                        std::vector<double> gains;
                        for (const auto* s : allowed) gains.push_back(s->gain);
                        target = ids[static_cast<std::size_t>(sched::mrss_select(ids, gains))];
                    }
                }
                a.serving = target;
                const bool moving = !initial && target != serving[uv];
                a.kind = moving ? (forced ? HandoverKind::forced : HandoverKind::discretionary) : HandoverKind::none;
                if (!moving) {
                    if (policy == PolicyKind::round_robin) {
                        const auto [gv, gm] = sched::round_robin_grant(t, nv);
                        if (gv == v) {
                            a.flags[gm] = true;
                            a.power = pc.p_max;
                        }
                    } else {
                        a.flags = {true, true, true};
                        a.power = pc.p_max;
                    }
                }
            }
        }

        // Execution and bookkeeping of the slot-level decision.
        double p_tot = 0.0;
        int disc_this_slot = 0;
        for (int v = 0; v < nv; ++v) {
            const auto uv = static_cast<std::size_t>(v);
            auto& a = act[uv];
            n_ho[uv] = 0;
            handover[uv] = false;
            own_prev[uv] = 0.0;
            if (blackout[uv]) {
                ++res.blackout_slots;
                serving[uv] = -1;
                ho_log[uv].push_back({false, -1});
                link_gain[uv] = 0.0;
                continue;
            }
            const auto* target = vs[uv].find(a.serving);
            require(target != nullptr, "engine: policy chose a satellite outside the visible set");
            require(a.power >= 0.0 && a.power <= pc.p_max * (1.0 + 1e-12), "engine: power outside [0, P_max]");
            const bool initial = serving[uv] < 0 && !attached_once[uv];
            const bool moved = !initial && a.serving != serving[uv];
            if (moved) {
                const bool forced_now = serving[uv] < 0 || vs[uv].find(serving[uv]) == nullptr || t >= epoch_end[uv];
                a.kind = forced_now ? HandoverKind::forced : HandoverKind::discretionary;
                handover[uv] = true;
                const double tau = cfg.handover.outage.sample_seconds(rng_outage);
                n_ho[uv] = std::min(aoi::outage_ticks(tau, cfg.timescale.tick_seconds).n_ho, N);
                outage_tick_sum += n_ho[uv];
                ++outage_events;
                if (forced_now) ++res.forced_ho;
                else {
                    ++res.disc_ho;
                    ++disc_this_slot;
                }
            } else {
                a.kind = HandoverKind::none;
            }
            if (initial || moved) epoch_end[uv] = t + period;
            attached_once[uv] = true;
            serving[uv] = a.serving;
            link_gain[uv] = target->gain;
            const double own = (a.transmits() ? a.power : 0.0) + (moved ? pc.p_ho : 0.0);
            own_prev[uv] = own;
            p_tot += own;
            ho_log[uv].push_back({moved, a.serving});
            if (a.transmits()) {
                double need = 0.0;
                for (int m = 0; m < kClasses; ++m)
                    if (a.flags[m]) need = std::max(need, pc.r_min[m]);
                const double snr = a.power * target->gain * ch.beam_gain * mean_fading / (noise + i_prev[uv]);
                if (std::log2(1.0 + snr) < need) ++res.rate_shortfalls;
            }
        }

        // Gains from every leader towards every other leader's satellite.
        for (int u = 0; u < nv; ++u)
            for (int v = 0; v < nv; ++v) {
                double g = 0.0;
                if (u != v && serving[static_cast<std::size_t>(v)] >= 0 && !blackout[static_cast<std::size_t>(v)]) {
                    const auto geo = constellation::elevation_and_range(
                        sat_pos[static_cast<std::size_t>(serving[static_cast<std::size_t>(v)])],
                        vs[static_cast<std::size_t>(u)].veh, con.min_elevation);
                    if (geo.elevation > 0.0)
                        g = channel::path_gain(geo.slant_range, geo.elevation, ch.carrier_frequency, ch, 0.0) * g_sat;
                }
                cross[static_cast<std::size_t>(u * nv + v)] = g;
            }

        // Tick loop: ground-truth AoI, safety queues.
        std::fill(active_ticks.begin(), active_ticks.end(), 0);
        for (int n = 1; n <= N; ++n) {
            for (int v = 0; v < nv; ++v) {
                const auto uv = static_cast<std::size_t>(v);
                active[uv] = !blackout[uv] && act[uv].transmits() && n > n_ho[uv];
                if (active[uv]) ++active_ticks[uv];
            }
            for (int v = 0; v < nv; ++v) {
                const auto uv = static_cast<std::size_t>(v);
                bool success = false;
                if (active[uv]) {
                    if (cfg.ideal_channel) {
                        success = true;
                    } else {
                        const double fade = channel::sample_shadowed_rician(ch, rng_channel);
                        double interference = 0.0;
                        for (int u = 0; u < nv; ++u) {
                            if (u == v || !active[static_cast<std::size_t>(u)]) continue;
                            const double cg = cross[static_cast<std::size_t>(u * nv + v)];
                            if (cg <= 0.0) continue;
                            interference += act[static_cast<std::size_t>(u)].power * cg * ch.sidelobe_factor *
                                            channel::sample_shadowed_rician(ch, rng_channel);
                        }
                        const double sinr = channel::tick_sinr(act[uv].power, link_gain[uv], fade, ch.beam_gain,
                                                               interference, noise);
                        success = sinr >= ch.snr_threshold;
                    }
                }
                for (int m = 0; m < kClasses; ++m) {
                    auto& a = age[uv][m];
                    a = (success && act[uv].flags[m]) ? 1 : a + 1;
                    auto& z = q.z[uv][m];
                    z = safety::update_safety_queue(z, a > cfg.safety.n_safe[m], cfg.safety.epsilon[m]);
                    row_age[uv * kClasses + m] = a;
                    row_z[uv * kClasses + m] = z;
                }
                row_ho[uv] = handover[uv] || blackout[uv];
            }
            log->push_tick(row_age, row_ho, row_z);
        }

        // Measured mean interference at each leader's satellite, for the next slot.
        for (int v = 0; v < nv; ++v) {
            double i_mean = 0.0;
            for (int u = 0; u < nv; ++u) {
                if (u == v) continue;
                i_mean += act[static_cast<std::size_t>(u)].power * cross[static_cast<std::size_t>(u * nv + v)] *
                          ch.sidelobe_factor * mean_fading * active_ticks[static_cast<std::size_t>(u)] / N;
            }
            i_prev[static_cast<std::size_t>(v)] = i_mean;
        }

        q.q_power = safety::update_power_queue(q.q_power, p_tot, pc.p_max);
        q.q_handover = safety::update_ho_queue(q.q_handover, disc_this_slot, pc.ho_budget);
        ptot_prev = p_tot;
        power_sum += p_tot;

        if (t % trace_stride == 0 || t == T - 1) {
            QueueTracePoint tp;
            tp.slot = t;
            tp.q_power = q.q_power;
            tp.q_handover = q.q_handover;
            for (int m = 0; m < kClasses; ++m) {
                double s = 0.0;
                for (int v = 0; v < nv; ++v) s += q.z[static_cast<std::size_t>(v)][m];
                tp.mean_z[m] = s / nv;
            }
            res.queue_trace.push_back(tp);
        }
    }

    // Aggregation.
    const auto rep = safety::compliance_report(*log, cfg.safety);
    for (int m = 0; m < kClasses; ++m) {
        auto& c = res.classes[m];
        c.violation_rate = rep.classes[m].rate;
        c.epsilon = rep.classes[m].epsilon;
        c.compliant = rep.classes[m].compliant;
        c.z_slope = rep.classes[m].z_slope;
        c.stability_consistent = rep.classes[m].stability_consistent;
        const auto samples = log->phase_samples(m);
        res.phases[m] = aoi::phase_decomposition(samples);
        c.mean_aoi = res.phases[m].total_mean;
    }
    res.weighted_aoi = class_weighted(cfg.safety.weights, res.classes);
    res.mean_power_w = power_sum / T;
    res.mean_outage_ticks = outage_events ? outage_tick_sum / outage_events : 0.0;
    for (int v = 0; v < nv; ++v) {
        auto ev = analysis::detect_pingpong(ho_log[static_cast<std::size_t>(v)], v);
        res.pingpong.insert(res.pingpong.end(), ev.begin(), ev.end());
    }

    // Follower end-to-end AoI, grouped by intra-platoon gap.
    std::map<double, GapAoi> by_gap;
    const std::int64_t ticks = log->ticks();
    for (int v = 0; v < nv; ++v) {
        const double gap = cfg.platoon.gap_of(v);
        auto& g = by_gap[gap];
        g.gap_m = gap;
        double pl = 0.0;
        for (std::int64_t l = 0; l < ticks; ++l) pl += static_cast<double>(log->age(l, v, 0));
        for (int h = 1; h < cfg.platoon.vehicles_per_platoon; ++h) {
            const int d = aoi::v2v_delay_ticks(h, gap);
            double e2e = 0.0;
            std::int64_t count = 0;
            for (std::int64_t l = d; l < ticks; ++l, ++count)
                e2e += static_cast<double>(aoi::follower_aoi(log->age(l - d, v, 0), d));
            if (count == 0) continue;
            g.e2e_aoi += e2e / count;
            g.mean_delay += d;
            g.pl_aoi += pl / static_cast<double>(ticks);
            ++g.followers;
        }
    }
    for (auto& [gap, g] : by_gap) {
        if (g.followers > 0) {
            g.e2e_aoi /= g.followers;
            g.mean_delay /= g.followers;
            g.pl_aoi /= g.followers;
        }
        res.e2e.push_back(g);
    }
    if (opt.keep_log) res.log = log;
    return res;
}

InjectionResult inject_pingpong(const ScenarioConfig& cfg, int k, std::int64_t a0) {
    require(k >= 1 && k <= 7, "inject_pingpong: k must lie in 1..7");
    require(a0 >= 1, "inject_pingpong: a0 must be >= 1");
    const int N = cfg.ticks_per_slot();
    constexpr int kSatA = 0, kSatB = 1;
    InjectionResult r;
    std::vector<analysis::SlotHandover> hl;
    hl.push_back({false, kSatB});  // attached to B before the run
    aoi::AoiState st{a0, 0};
    std::int64_t tick = 0;
    for (int i = 1; i <= k; ++i) {
        hl.push_back({true, i % 2 == 1 ? kSatA : kSatB});
        // Reconnection disabled: the outage covers the whole slot.
        for (int n = 0; n < N; ++n) {
            st = aoi::tick_update(st, false, ++tick);
            r.tick_ages.push_back(st.age_ticks);
        }
        r.slot_end_ages.push_back(st.age_ticks);
        r.cumulative += st.age_ticks;
    }
    r.end_age = st.age_ticks;
    r.events = analysis::detect_pingpong(hl);
    return r;
}

}  // namespace leoaoi
