#include "leoaoi/constellation.hpp"

#include <algorithm>
#include <cmath>

namespace leoaoi::constellation {

double ConstellationConfig::angular_rate() const {
    const double a = semi_major_axis();
    return std::sqrt(earth_gm / (a * a * a));
}

double ConstellationConfig::orbital_speed() const {
    return std::sqrt(earth_gm / semi_major_axis());
}

void ConstellationConfig::validate() const {
    require(planes > 0, "constellation: planes must be positive");
    require(sats_per_plane > 0, "constellation: sats_per_plane must be positive");
    require(phasing_factor >= 0 && phasing_factor < planes,
            "constellation: phasing_factor must lie in [0, planes)");
    require(altitude > 0.0, "constellation: altitude must be positive");
    require(earth_radius > 0.0 && earth_gm > 0.0, "constellation: bad Earth constants");
    require(inclination >= 0.0 && inclination <= kPi, "constellation: inclination out of range");
    require(min_elevation >= -kPi / 2 && min_elevation <= kPi / 2,
            "constellation: min_elevation out of range");
    require(window_cap_slots > 0, "constellation: window cap must be positive");
}

std::vector<SatelliteEphemeris> walker_delta(const ConstellationConfig& cfg) {
    cfg.validate();
    std::vector<SatelliteEphemeris> out;
    out.reserve(static_cast<std::size_t>(cfg.total_satellites()));
    const double planes = cfg.planes;
    const double per_plane = cfg.sats_per_plane;
    for (int p = 0; p < cfg.planes; ++p) {
        for (int s = 0; s < cfg.sats_per_plane; ++s) {
            SatelliteEphemeris eph;
            eph.satellite_id = p * cfg.sats_per_plane + s;
            eph.raan = wrap_two_pi(kTwoPi * p / planes);
            eph.phase_offset =
                wrap_two_pi(kTwoPi * (s + p * cfg.phasing_factor / planes) / per_plane);
            eph.initial_anomaly = 0.0;
            out.push_back(eph);
        }
    }
    return out;
}

Highway::Highway(double latitude, double longitude, double azimuth, double earth_radius)
    : radius_(earth_radius) {
    const double cl = std::cos(latitude), sl = std::sin(latitude);
    const double co = std::cos(longitude), so = std::sin(longitude);
    origin_ = {cl * co, cl * so, sl};
    const Vec3 east{-so, co, 0.0};
    const Vec3 north{-sl * co, -sl * so, cl};
    tangent_ = (north * std::cos(azimuth) + east * std::sin(azimuth)).normalized();
}

VehicleState Highway::at(double arc_length, double speed, int vehicle_id) const {
    const double angle = arc_length / radius_;
    const double c = std::cos(angle), s = std::sin(angle);
    VehicleState v;
    v.vehicle_id = vehicle_id;
    v.position = (origin_ * c + tangent_ * s) * radius_;
    v.heading = (origin_ * (-s) + tangent_ * c).normalized();
    v.speed = speed;
    return v;
}

Vec3 satellite_position(const SatelliteEphemeris& eph, const ConstellationConfig& cfg,
                        double t, double slot_seconds) {
    const double a = cfg.semi_major_axis();
    const double psi = eph.phase_offset + cfg.angular_rate() * t * slot_seconds +
                       eph.initial_anomaly;
    const double cp = std::cos(psi), sp = std::sin(psi);
    const double co = std::cos(eph.raan), so = std::sin(eph.raan);
    const double ci = std::cos(cfg.inclination), si = std::sin(cfg.inclination);
    return {a * (cp * co - sp * so * ci), a * (cp * so + sp * co * ci), a * (sp * si)};
}

GeometrySample elevation_and_range(const Vec3& sat_pos, const VehicleState& veh,
                                   double min_elevation) {
    require(sat_pos.norm() > veh.position.norm(),
            "elevation_and_range: satellite must be farther from the centre than the vehicle");
    const Vec3 up = veh.position.normalized();
    const Vec3 d = sat_pos - veh.position;
    GeometrySample g;
    g.slant_range = d.norm();
    g.link_direction = d * (1.0 / g.slant_range);
    double s = g.link_direction.dot(up);
    s = std::clamp(s, -1.0, 1.0);
    g.elevation = std::asin(s);
    g.visible = g.elevation >= min_elevation;
    return g;
}

std::vector<int> visible_set(const ConstellationConfig& cfg,
                             const std::vector<SatelliteEphemeris>& ephemerides,
                             const VehicleState& veh, double t, double slot_seconds) {
    std::vector<int> out;
    for (const auto& eph : ephemerides) {
        const auto g = elevation_and_range(satellite_position(eph, cfg, t, slot_seconds), veh,
                                           cfg.min_elevation);
        if (g.visible) out.push_back(eph.satellite_id);
    }
    return out;
}

VisibilityWindow visibility_window(const ConstellationConfig& cfg,
                                   const SatelliteEphemeris& eph,
                                   const VehicleState& veh, double t, double slot_seconds) {
    auto visible_at = [&](double slot) {
        return elevation_and_range(satellite_position(eph, cfg, slot, slot_seconds), veh,
                                   cfg.min_elevation)
            .visible;
    };
    VisibilityWindow w;
    if (!visible_at(t)) return w;
    for (int step = 1; step <= cfg.window_cap_slots; ++step) {
        if (!visible_at(t + step)) {
            w.slots = step - 1;
            return w;
        }
    }
    w.slots = cfg.window_cap_slots;
    w.censored = true;
    return w;
}

}  // namespace leoaoi::constellation
