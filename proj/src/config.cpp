#include "leoaoi/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace leoaoi {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ContractViolation("config: '" + key + "' expects a number, got '" + v + "'");
    }
    if (trim(v.substr(used)).size() != 0)
        throw ContractViolation("config: '" + key + "' expects a number, got '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    if (x != std::floor(x)) throw ContractViolation("config: '" + key + "' expects an integer");
    return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ContractViolation("config: '" + key + "' expects a boolean, got '" + v + "'");
}

template <typename T, std::size_t N>
std::array<T, N> to_array(const std::string& key, const std::string& v) {
    const auto xs = parse_number_list(v);
    if (xs.size() != N)
        throw ContractViolation("config: '" + key + "' expects " + std::to_string(N) + " values");
    std::array<T, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = static_cast<T>(xs[i]);
    return out;
}

std::string join(const std::vector<double>& xs) {
    std::ostringstream os;
    os.precision(10);
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i];
    return os.str();
}

template <typename T, std::size_t N>
std::string join(const std::array<T, N>& xs) {
    return join(std::vector<double>(xs.begin(), xs.end()));
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(to_double("list", item));
    }
    return out;
}

void PlatoonConfig::validate() const {
    require(platoons >= 1, "platoon: need at least one platoon");
    require(vehicles_per_platoon >= 1, "platoon: need at least one vehicle per platoon");
    require(speed_min_kmh >= 0.0 && speed_max_kmh >= speed_min_kmh, "platoon: bad speed range");
    require(!gaps_m.empty(), "platoon: gap list is empty");
    for (double g : gaps_m) require(g >= 0.0, "platoon: negative gap");
    require(spacing_m >= 0.0, "platoon: negative spacing");
}

void HandoverConfig::validate() const {
    outage.validate();
    require(p_ho_w >= 0.0, "handover: p_ho must be non-negative");
    require(period_s > 0.0, "handover: period must be positive");
    require(disc_budget >= 0.0, "handover: discretionary budget must be non-negative");
}

int ScenarioConfig::ho_period_slots() const {
    return std::max(1, static_cast<int>(std::lround(handover.period_s / timescale.slot_seconds)));
}

void ScenarioConfig::validate() const {
    constellation.validate();
    channel.validate();
    timescale.validate();
    safety.validate();
    handover.validate();
    platoon.validate();
    require(p_max_w > 0.0, "config: P_max must be positive");
    require(episode_slots >= 1, "config: episode must have at least one slot");
    require(policy.V > 0.0, "config: V must be positive");
    require(policy.predictor_draws >= 1, "config: predictor needs at least one draw");
    const auto rule = aoi::validate_tick_rule(timescale, safety.n_safe[0] * timescale.tick_seconds,
                                              handover.outage.min_ms * 1e-3);
    require(rule.pass, "config: tick resolution violates the design rule tau_ac <= min(safe, ho)/2");
    policy_config().validate();
}

sched::PolicyConfig ScenarioConfig::policy_config() const {
    sched::PolicyConfig pc;
    pc.V = policy.V;
    pc.power_grid = policy.power_grid.empty() ? sched::PolicyConfig::default_power_grid(p_max_w)
                                              : policy.power_grid;
    pc.p_max = p_max_w;
    pc.p_ho = handover.p_ho_w;
    pc.ho_budget = handover.disc_budget;
    pc.horizon_cap = policy.horizon_cap;
    pc.kappa_safe = policy.kappa_safe;
    pc.z_scale = policy.z_scale;
    pc.mu_n = handover.outage.mean_ticks(timescale.tick_seconds);
    pc.r_min = r_min;
    pc.thresholds = safety;
    pc.ticks_per_slot = timescale.ticks_per_slot;
    pc.snr_threshold = channel.snr_threshold;
    pc.mean_fading_power = channel.mean_fading_power();
    return pc;
}

void apply_setting(ScenarioConfig& c, const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    auto& con = c.constellation;
    auto& ch = c.channel;
    auto& ho = c.handover;
    auto& pl = c.platoon;
    if (key == "constellation.planes") con.planes = to_int(key, v);
    else if (key == "constellation.sats_per_plane") con.sats_per_plane = to_int(key, v);
    else if (key == "constellation.phasing") con.phasing_factor = to_int(key, v);
    else if (key == "constellation.altitude_km") con.altitude = to_double(key, v) * 1e3;
    else if (key == "constellation.inclination_deg") con.inclination = deg2rad(to_double(key, v));
    else if (key == "constellation.min_elevation_deg") con.min_elevation = deg2rad(to_double(key, v));
    else if (key == "constellation.window_cap_slots") con.window_cap_slots = to_int(key, v);
    else if (key == "channel.carrier_ghz") ch.carrier_frequency = to_double(key, v) * 1e9;
    else if (key == "channel.noise_dbm") ch.noise_power = db2lin(to_double(key, v) - 30.0);
    else if (key == "channel.sr_m") ch.sr_m = to_double(key, v);
    else if (key == "channel.sr_b") ch.sr_b = to_double(key, v);
    else if (key == "channel.sr_omega") ch.sr_omega = to_double(key, v);
    else if (key == "channel.zenith_loss_db") ch.zenith_loss_db = to_double(key, v);
    else if (key == "channel.sf_sigma_db") ch.shadow_fading_sigma_db = to_double(key, v);
    else if (key == "channel.gamma_th_db") ch.snr_threshold = db2lin(to_double(key, v));
    else if (key == "channel.bandwidth_mhz") ch.bandwidth = to_double(key, v) * 1e6;
    else if (key == "channel.beam_gain") ch.beam_gain = to_double(key, v);
    else if (key == "channel.sidelobe") ch.sidelobe_factor = to_double(key, v);
    else if (key == "channel.sat_gain_db") ch.sat_gain_db = to_double(key, v);
    else if (key == "channel.p_max_w") c.p_max_w = to_double(key, v);
    else if (key == "channel.subchannels") c.subchannels = to_int(key, v);
    else if (key == "channel.r_min") c.r_min = to_array<double, kClasses>(key, v);
    else if (key == "channel.ideal") c.ideal_channel = to_bool(key, v);
    else if (key == "timescale.slot_s") {
        const int n = c.timescale.ticks_per_slot;
        c.timescale.slot_seconds = to_double(key, v);
        c.timescale.tick_seconds = c.timescale.slot_seconds / n;
    } else if (key == "timescale.tick_ms") {
        const double tick = to_double(key, v) * 1e-3;
        require(tick > 0.0, "config: tick must be positive");
        const double n = c.timescale.slot_seconds / tick;
        require(std::abs(n - std::round(n)) < 1e-9 * n,
                "config: timescale.tick_ms must divide the slot exactly");
        c.timescale.tick_seconds = tick;
        c.timescale.ticks_per_slot = static_cast<int>(std::lround(n));
    } else if (key == "safety.n_safe") c.safety.n_safe = to_array<int, kClasses>(key, v);
    else if (key == "safety.epsilon") c.safety.epsilon = to_array<double, kClasses>(key, v);
    else if (key == "safety.weights") c.safety.weights = to_array<double, kClasses>(key, v);
    else if (key == "handover.ho_mean_ms") ho.outage.mean_ms = to_double(key, v);
    else if (key == "handover.ho_std_ms") ho.outage.std_ms = to_double(key, v);
    else if (key == "handover.ho_min_ms") ho.outage.min_ms = to_double(key, v);
    else if (key == "handover.p_ho_w") ho.p_ho_w = to_double(key, v);
    else if (key == "handover.ho_period_s") ho.period_s = to_double(key, v);
    else if (key == "handover.disc_budget") ho.disc_budget = to_double(key, v);
    else if (key == "platoon.count") pl.platoons = to_int(key, v);
    else if (key == "platoon.vehicles") pl.vehicles_per_platoon = to_int(key, v);
    else if (key == "platoon.speed_min_kmh") pl.speed_min_kmh = to_double(key, v);
    else if (key == "platoon.speed_max_kmh") pl.speed_max_kmh = to_double(key, v);
    else if (key == "platoon.gaps_m") pl.gaps_m = parse_number_list(v);
    else if (key == "platoon.spacing_m") pl.spacing_m = to_double(key, v);
    else if (key == "platoon.latitude_deg") pl.latitude_deg = to_double(key, v);
    else if (key == "platoon.longitude_deg") pl.longitude_deg = to_double(key, v);
    else if (key == "platoon.azimuth_deg") pl.azimuth_deg = to_double(key, v);
    else if (key == "policy") c.policy.kind = sched::parse_policy(v);
    else if (key == "dpp.V") c.policy.V = to_double(key, v);
    else if (key == "dpp.power_grid") c.policy.power_grid = v == "auto" ? std::vector<double>{} : parse_number_list(v);
    else if (key == "proactive.enabled") c.policy.proactive = to_bool(key, v);
    else if (key == "proactive.kappa_safe") c.policy.kappa_safe = to_double(key, v);
    else if (key == "proactive.z_scale") c.policy.z_scale = to_double(key, v);
    else if (key == "proactive.horizon_cap") c.policy.horizon_cap = to_int(key, v);
    else if (key == "proactive.predictor_draws") c.policy.predictor_draws = to_int(key, v);
    else if (key == "episode.slots") c.episode_slots = to_int(key, v);
    else if (key == "episode.seed") c.seed = static_cast<std::uint64_t>(std::stoull(v));
    else throw ContractViolation("config: unknown key '" + key + "'");
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ContractViolation("config line " + std::to_string(lineno) + ": expected key = value");
        try {
            apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ContractViolation& e) {
            throw ContractViolation("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string to_config_text(const ScenarioConfig& c) {
    std::ostringstream os;
    os.precision(10);
    const auto& con = c.constellation;
    const auto& ch = c.channel;
    os << "constellation.planes = " << con.planes << "\n"
       << "constellation.sats_per_plane = " << con.sats_per_plane << "\n"
       << "constellation.phasing = " << con.phasing_factor << "\n"
       << "constellation.altitude_km = " << con.altitude / 1e3 << "\n"
       << "constellation.inclination_deg = " << rad2deg(con.inclination) << "\n"
       << "constellation.min_elevation_deg = " << rad2deg(con.min_elevation) << "\n"
       << "constellation.window_cap_slots = " << con.window_cap_slots << "\n"
       << "channel.carrier_ghz = " << ch.carrier_frequency / 1e9 << "\n"
       << "channel.noise_dbm = " << lin2db(ch.noise_power) + 30.0 << "\n"
       << "channel.sr_m = " << ch.sr_m << "\n"
       << "channel.sr_b = " << ch.sr_b << "\n"
       << "channel.sr_omega = " << ch.sr_omega << "\n"
       << "channel.zenith_loss_db = " << ch.zenith_loss_db << "\n"
       << "channel.sf_sigma_db = " << ch.shadow_fading_sigma_db << "\n"
       << "channel.gamma_th_db = " << lin2db(ch.snr_threshold) << "\n"
       << "channel.bandwidth_mhz = " << ch.bandwidth / 1e6 << "\n"
       << "channel.beam_gain = " << ch.beam_gain << "\n"
       << "channel.sidelobe = " << ch.sidelobe_factor << "\n"
       << "channel.sat_gain_db = " << ch.sat_gain_db << "\n"
       << "channel.p_max_w = " << c.p_max_w << "\n"
       << "channel.subchannels = " << c.subchannels << "\n"
       << "channel.r_min = " << join(c.r_min) << "\n"
       << "channel.ideal = " << (c.ideal_channel ? "true" : "false") << "\n"
       << "timescale.slot_s = " << c.timescale.slot_seconds << "\n"
       << "timescale.tick_ms = " << c.timescale.tick_seconds * 1e3 << "\n"
       << "safety.n_safe = " << join(c.safety.n_safe) << "\n"
       << "safety.epsilon = " << join(c.safety.epsilon) << "\n"
       << "safety.weights = " << join(c.safety.weights) << "\n"
       << "handover.ho_mean_ms = " << c.handover.outage.mean_ms << "\n"
       << "handover.ho_std_ms = " << c.handover.outage.std_ms << "\n"
       << "handover.ho_min_ms = " << c.handover.outage.min_ms << "\n"
       << "handover.p_ho_w = " << c.handover.p_ho_w << "\n"
       << "handover.ho_period_s = " << c.handover.period_s << "\n"
       << "handover.disc_budget = " << c.handover.disc_budget << "\n"
       << "platoon.count = " << c.platoon.platoons << "\n"
       << "platoon.vehicles = " << c.platoon.vehicles_per_platoon << "\n"
       << "platoon.speed_min_kmh = " << c.platoon.speed_min_kmh << "\n"
       << "platoon.speed_max_kmh = " << c.platoon.speed_max_kmh << "\n"
       << "platoon.gaps_m = " << join(c.platoon.gaps_m) << "\n"
       << "platoon.spacing_m = " << c.platoon.spacing_m << "\n"
       << "platoon.latitude_deg = " << c.platoon.latitude_deg << "\n"
       << "platoon.longitude_deg = " << c.platoon.longitude_deg << "\n"
       << "platoon.azimuth_deg = " << c.platoon.azimuth_deg << "\n"
       << "policy = " << sched::policy_name(c.policy.kind) << "\n"
       << "dpp.V = " << c.policy.V << "\n"
       << "dpp.power_grid = " << (c.policy.power_grid.empty() ? std::string("auto") : join(c.policy.power_grid)) << "\n"
       << "proactive.enabled = " << (c.policy.proactive ? "true" : "false") << "\n"
       << "proactive.kappa_safe = " << c.policy.kappa_safe << "\n"
       << "proactive.z_scale = " << c.policy.z_scale << "\n"
       << "proactive.horizon_cap = " << c.policy.horizon_cap << "\n"
       << "proactive.predictor_draws = " << c.policy.predictor_draws << "\n"
       << "episode.slots = " << c.episode_slots << "\n"
       << "episode.seed = " << c.seed << "\n";
    return os.str();
}

}  // namespace leoaoi
