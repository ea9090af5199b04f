#include "leoaoi/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace leoaoi::sched {

PolicyKind parse_policy(const std::string& name) {
    if (name == "dpp") return PolicyKind::dpp;
    if (name == "rr" || name == "round_robin") return PolicyKind::round_robin;
    if (name == "mvt") return PolicyKind::mvt;
    if (name == "mrss") return PolicyKind::mrss;
    throw ContractViolation("unknown policy '" + name + "' (expected dpp|rr|mvt|mrss)");
}

std::string policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::dpp: return "dpp";
        case PolicyKind::round_robin: return "rr";
        case PolicyKind::mvt: return "mvt";
        case PolicyKind::mrss: return "mrss";
    }
    return "?";
}

const char* handover_kind_name(HandoverKind kind) {
    switch (kind) {
        case HandoverKind::none: return "none";
        case HandoverKind::discretionary: return "discretionary";
        case HandoverKind::forced: return "forced";
    }
    return "?";
}

std::vector<double> PolicyConfig::default_power_grid(double p_max, int levels) {
    require(p_max > 0.0 && levels >= 1, "power grid: need p_max > 0 and at least one level");
    std::vector<double> grid;
    if (levels == 1) return {p_max};
    const double lo = std::log10(p_max / 100.0), hi = std::log10(p_max);
    for (int i = 0; i < levels; ++i) grid.push_back(std::pow(10.0, lo + (hi - lo) * i / (levels - 1)));
    grid.back() = p_max;
    return grid;
}

int PolicyConfig::outage_ticks_hat() const {
    return std::clamp(static_cast<int>(std::floor(mu_n)), 0, ticks_per_slot);
}

void PolicyConfig::validate() const {
    require(V > 0.0, "policy: V must be positive");
    require(!power_grid.empty(), "policy: power grid is empty");
    for (double p : power_grid)
        require(p > 0.0 && p <= p_max * (1.0 + 1e-12), "policy: power grid outside (0, P_max]");
    require(std::is_sorted(power_grid.begin(), power_grid.end()), "policy: power grid must be ascending");
    require(horizon_cap >= 0, "policy: horizon cap must be non-negative");
    require(kappa_safe >= 0.0 && z_scale > 0.0, "policy: bad proactive weights");
    require(mu_n >= 0.0, "policy: mu_n must be non-negative");
    require(p_ho >= 0.0 && ho_budget >= 0.0, "policy: bad handover parameters");
    require(ticks_per_slot > 0, "policy: ticks_per_slot must be positive");
    thresholds.validate();
}

double CandidateLink::success_prob(double power, double threshold) const {
    if (bank == nullptr || power <= 0.0) return 0.0;
    return bank->success_probability(power * snr_per_watt, threshold);
}

double candidate_power(const PolicyConfig& cfg, const Candidate& c) {
    return c.power_index < 0 ? 0.0 : cfg.power_grid[static_cast<std::size_t>(c.power_index)];
}

namespace {

using Forecasts = std::array<aoi::SlotForecast, kClasses>;

int outage_for(const PolicyConfig& cfg, const CandidateLink& link) {
    return link.kind == HandoverKind::none ? 0 : cfg.outage_ticks_hat();
}

Forecasts class_forecasts(const PolicyConfig& cfg, const ObservedState& s, int outage, double p) {
    Forecasts f;
    for (int m = 0; m < kClasses; ++m)
        f[m] = aoi::forecast_slot(static_cast<double>(s.ages[m]), outage, p,
                                  cfg.thresholds.n_safe[m], cfg.ticks_per_slot);
    return f;
}

double combine(const PolicyConfig& cfg, const DecisionContext& ctx, const CandidateLink& link,
               double power, const Forecasts& f) {
    const auto& s = ctx.state;
    const bool ho = link.kind != HandoverKind::none;
    const double p_tot = ctx.other_power + power + (ho ? cfg.p_ho : 0.0);
    const double disc = link.kind == HandoverKind::discretionary ? 1.0 : 0.0;
    double score = s.q_power * (p_tot - cfg.p_max) + s.q_handover * (disc - cfg.ho_budget);
    double theta = 0.0;
    for (int m = 0; m < kClasses; ++m) {
        score += s.z[m] * (f[m].violations - cfg.ticks_per_slot * cfg.thresholds.epsilon[m]);
        theta += cfg.thresholds.weights[m] * f[m].mean_age;
    }
    return score + cfg.V * theta;
}

bool rate_ok(const PolicyConfig& cfg, const CandidateLink& link, std::uint8_t flags, double power) {
    if (power <= 0.0 || flags == 0) return true;
    double need = 0.0;
    for (int m = 0; m < kClasses; ++m)
        if (flags & (1u << m)) need = std::max(need, cfg.r_min[m]);
    return std::log2(1.0 + link.mean_snr(power, cfg.mean_fading_power)) >= need;
}

}  // namespace

std::vector<Candidate> enumerate_candidates(const PolicyConfig& cfg, const DecisionContext& ctx) {
    std::vector<Candidate> out;
    for (int l = 0; l < static_cast<int>(ctx.links.size()); ++l) {
        const auto& link = ctx.links[static_cast<std::size_t>(l)];
        out.push_back({l, 0, -1});
        for (int pi = 0; pi < static_cast<int>(cfg.power_grid.size()); ++pi)
            for (std::uint8_t flags = 1; flags < (1u << kClasses); ++flags)
                if (rate_ok(cfg, link, flags, cfg.power_grid[static_cast<std::size_t>(pi)]))
                    out.push_back({l, flags, pi});
    }
    return out;
}

double score_candidate(const PolicyConfig& cfg, const DecisionContext& ctx, const Candidate& c) {
    const auto& link = ctx.links.at(static_cast<std::size_t>(c.link));
    const double power = candidate_power(cfg, c);
    const double p = c.flags ? link.success_prob(power, cfg.snr_threshold) : 0.0;
    const int outage = outage_for(cfg, link);
    Forecasts f;
    for (int m = 0; m < kClasses; ++m) {
        const double pm = (c.flags & (1u << m)) ? p : 0.0;
        f[m] = aoi::forecast_slot(static_cast<double>(ctx.state.ages[m]), outage, pm,
                                  cfg.thresholds.n_safe[m], cfg.ticks_per_slot);
    }
    return combine(cfg, ctx, link, power, f);
}

bool candidate_before(const PolicyConfig& cfg, const DecisionContext& ctx, const Candidate& a,
                      double score_a, const Candidate& b, double score_b) {
    if (score_a != score_b) return score_a < score_b;
    const auto& la = ctx.links[static_cast<std::size_t>(a.link)];
    const auto& lb = ctx.links[static_cast<std::size_t>(b.link)];
    const bool ha = la.kind != HandoverKind::none, hb = lb.kind != HandoverKind::none;
    if (ha != hb) return !ha;
    const double pa = candidate_power(cfg, a), pb = candidate_power(cfg, b);
    if (pa != pb) return pa < pb;
    if (la.satellite != lb.satellite) return la.satellite < lb.satellite;
    return a.flags < b.flags;
}

Action to_action(const PolicyConfig& cfg, const DecisionContext& ctx, const Candidate& c) {
    const auto& link = ctx.links.at(static_cast<std::size_t>(c.link));
    Action a;
    a.serving = link.satellite;
    a.kind = link.kind;
    a.power = candidate_power(cfg, c);
    for (int m = 0; m < kClasses; ++m) a.flags[m] = (c.flags & (1u << m)) != 0;
    return a;
}

ScoredAction dpp_decide(const PolicyConfig& cfg, const DecisionContext& ctx) {
    ScoredAction best;
    if (ctx.links.empty()) {
        best.action.serving = ctx.state.serving;
        best.score = std::numeric_limits<double>::infinity();
        return best;
    }
    bool have = false;
    auto consider = [&](const Candidate& c, double score) {
        if (!have || candidate_before(cfg, ctx, c, score, best.candidate, best.score)) {
            best.candidate = c;
            best.score = score;
            have = true;
        }
    };
    for (int l = 0; l < static_cast<int>(ctx.links.size()); ++l) {
        const auto& link = ctx.links[static_cast<std::size_t>(l)];
        const int outage = outage_for(cfg, link);
        const Forecasts off = class_forecasts(cfg, ctx.state, outage, 0.0);
        consider({l, 0, -1}, combine(cfg, ctx, link, 0.0, off));
        for (int pi = 0; pi < static_cast<int>(cfg.power_grid.size()); ++pi) {
            const double power = cfg.power_grid[static_cast<std::size_t>(pi)];
            const Forecasts on =
                class_forecasts(cfg, ctx.state, outage, link.success_prob(power, cfg.snr_threshold));
            for (std::uint8_t flags = 1; flags < (1u << kClasses); ++flags) {
                if (!rate_ok(cfg, link, flags, power)) continue;
                Forecasts f;
                for (int m = 0; m < kClasses; ++m) f[m] = (flags & (1u << m)) ? on[m] : off[m];
                consider({l, flags, pi}, combine(cfg, ctx, link, power, f));
            }
        }
    }
    best.action = to_action(cfg, ctx, best.candidate);
    return best;
}

double mrt_rate(double channel_gain, double power, double noise) {
    require(channel_gain >= 0.0 && power >= 0.0 && noise > 0.0, "mrt_rate: bad inputs");
    return std::log2(1.0 + power * channel_gain / noise);
}

MrtResult mrt_beam(std::span<const std::complex<double>> h, double power, double noise) {
    double g = 0.0;
    for (const auto& x : h) g += std::norm(x);
    MrtResult r;
    r.beam.resize(h.size());
    if (g > 0.0) {
        const double inv = 1.0 / std::sqrt(g);
        for (std::size_t i = 0; i < h.size(); ++i) r.beam[i] = h[i] * inv;
    }
    r.rate = mrt_rate(g, power, noise);
    return r;
}

double beam_rate(std::span<const std::complex<double>> h, std::span<const std::complex<double>> w,
                 double power, double noise) {
    require(h.size() == w.size(), "beam_rate: dimension mismatch");
    std::complex<double> acc{};
    for (std::size_t i = 0; i < h.size(); ++i) acc += std::conj(h[i]) * w[i];
    return std::log2(1.0 + power * std::norm(acc) / noise);
}

double proactive_cost(const PolicyConfig& cfg, std::int64_t age1, double z1, int horizon,
                      double p_serving, const ProactiveCandidate& cand) {
    const int n1 = cfg.thresholds.n_safe[0];
    const int N = cfg.ticks_per_slot;
    double a = static_cast<double>(age1);
    for (int h = 0; h < horizon; ++h) a = aoi::forecast_slot(a, 0, p_serving, n1, N).end_age;
    const double a_hat = aoi::forecast_slot(a, cfg.outage_ticks_hat(), cand.p_hat, n1, N).mean_age;
    const double arg = (z1 + cfg.mu_n - horizon * N * cfg.thresholds.epsilon[0]) / cfg.z_scale;
    return a_hat + cfg.kappa_safe * logistic(arg);
}

ProactiveResult proactive_ho_search(const PolicyConfig& cfg, std::int64_t age1, double z1,
                                    int serving, bool serving_visible, double p_serving,
                                    std::span<const ProactiveCandidate> candidates) {
    require(!candidates.empty(), "proactive_ho_search: no candidates");
    ProactiveResult best;
    bool have = false;
    for (const auto& c : candidates) {
        const int h_max = serving_visible ? std::min(cfg.horizon_cap, std::max(c.window_slots, 0)) : 0;
        for (int h = 0; h <= h_max; ++h) {
            const double cost = proactive_cost(cfg, age1, z1, h, p_serving, c);
            const bool better = !have || cost < best.cost ||
                                (cost == best.cost && (h < best.horizon ||
                                                       (h == best.horizon && c.satellite < best.satellite)));
            if (better) {
                best = {h, c.satellite, cost, HandoverKind::none};
                have = true;
            }
        }
    }
    if (best.satellite != serving)
        best.kind = serving_visible ? HandoverKind::discretionary : HandoverKind::forced;
    return best;
}

std::pair<int, int> round_robin_grant(std::int64_t slot, int vehicles) {
    require(vehicles > 0 && slot >= 0, "round_robin_grant: bad inputs");
    const auto idx = static_cast<int>(slot % (static_cast<std::int64_t>(vehicles) * kClasses));
    return {idx / kClasses, idx % kClasses};
}

int mvt_select(std::span<const int> satellites, std::span<const int> windows) {
    require(satellites.size() == windows.size(), "mvt_select: size mismatch");
    int best = -1;
    for (int i = 0; i < static_cast<int>(satellites.size()); ++i) {
        if (best < 0 || windows[i] > windows[best] ||
            (windows[i] == windows[best] && satellites[i] < satellites[best]))
            best = i;
    }
    return best;
}

int mrss_select(std::span<const int> satellites, std::span<const double> strengths) {
    require(satellites.size() == strengths.size(), "mrss_select: size mismatch");
    int best = -1;
    for (int i = 0; i < static_cast<int>(satellites.size()); ++i) {
        if (best < 0 || strengths[i] > strengths[best] ||
            (strengths[i] == strengths[best] && satellites[i] < satellites[best]))
            best = i;
    }
    return best;
}

}  // namespace leoaoi::sched
