#pragma once

#include <vector>

#include "leoaoi/common.hpp"

/// Walker-Delta constellation geometry over a non-rotating spherical Earth.
/// This is the deterministic orbit predictor for the rest of the library:
/// visibility sets, windows and link geometry all come from here.
namespace leoaoi::constellation {

inline constexpr double kEarthRadius = 6.371e6;           // m
inline constexpr double kEarthGM = 3.986004418e14;        // m^3/s^2

struct ConstellationConfig {
    int planes = 60;
    int sats_per_plane = 22;
    int phasing_factor = 1;
    double altitude = 550e3;                 // m
    double inclination = deg2rad(53.0);      // rad
    double min_elevation = deg2rad(25.0);    // rad
    double earth_radius = kEarthRadius;
    double earth_gm = kEarthGM;
    int window_cap_slots = 120;

    int total_satellites() const { return planes * sats_per_plane; }
    double semi_major_axis() const { return earth_radius + altitude; }
    /// Mean motion ω = sqrt(GM / a³).
    double angular_rate() const;
    double period_seconds() const { return kTwoPi / angular_rate(); }
    /// Circular orbital speed sqrt(GM / a).
    double orbital_speed() const;

    /// Throws ContractViolation on an inconsistent configuration.
    void validate() const;
};

struct SatelliteEphemeris {
    int satellite_id = 0;
    double raan = 0.0;             // Ω_m
    double phase_offset = 0.0;     // Φ_m
    double initial_anomaly = 0.0;  // f_0
};

/// Standard Walker-Delta T/P/F phasing: satellite s of plane p gets
/// Ω = 2πp/P and Φ = 2π(s + pF/P)/S. Ids run plane-major.
std::vector<SatelliteEphemeris> walker_delta(const ConstellationConfig& cfg);

struct VehicleState {
    int vehicle_id = 0;
    Vec3 position;      // m, Earth-centred frame
    double speed = 0.0; // m/s
    Vec3 heading;       // unit vector, tangent to the surface
};

/// Straight highway following a great circle from (lat, lon) along an azimuth
/// measured clockwise from north.
class Highway {
public:
    Highway(double latitude, double longitude, double azimuth,
            double earth_radius = kEarthRadius);

    /// Vehicle on the highway at `arc_length` metres from the origin.
    VehicleState at(double arc_length, double speed, int vehicle_id = 0) const;

private:
    Vec3 origin_;   // unit
    Vec3 tangent_;  // unit
    double radius_;
};

struct GeometrySample {
    double elevation = 0.0;    // rad
    double slant_range = 0.0;  // m
    Vec3 link_direction;       // unit, vehicle -> satellite
    bool visible = false;
};

/// Satellite position at slot t (slot length slot_seconds).
Vec3 satellite_position(const SatelliteEphemeris& eph, const ConstellationConfig& cfg,
                        double t, double slot_seconds);

/// Elevation above the local horizontal plane and slant range.
GeometrySample elevation_and_range(const Vec3& sat_pos, const VehicleState& veh,
                                   double min_elevation);

std::vector<int> visible_set(const ConstellationConfig& cfg,
                             const std::vector<SatelliteEphemeris>& ephemerides,
                             const VehicleState& veh, double t, double slot_seconds);

struct VisibilityWindow {
    int slots = 0;
    bool censored = false;  // still visible at the scan cap
};

/// Whole slots the satellite stays at or above the mask, scanning forward
/// from slot t up to cfg.window_cap_slots. Zero when not visible at t.
VisibilityWindow visibility_window(const ConstellationConfig& cfg,
                                   const SatelliteEphemeris& eph,
                                   const VehicleState& veh, double t, double slot_seconds);

}  // namespace leoaoi::constellation
