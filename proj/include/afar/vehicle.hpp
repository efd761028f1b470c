// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "afar/geodesy.hpp"

namespace afar {

inline constexpr double kMaxSpeedMps = 10.0;
inline constexpr double kMaxTiltDeg = 5.0;
inline constexpr double kMinCmdSpeedMps = 0.1;
inline constexpr double kDefaultWaypointTolM = 2.0;

struct VehicleState {
    GeoPoint pos;
    double heading_deg = 0.0;  // CW from north
    double speed_mps = 0.0;
    double tilt_deg = 0.0;     // motion tilt, 0..5
    double t = 0.0;
};

struct WaypointCommand {
    GeoPoint target;
    double speed_mps = kMaxSpeedMps;
};

/// Clamp a raw command into the fence: lat, lon and altitude independently,
/// speed into [kMinCmdSpeedMps, kMaxSpeedMps]. Throws std::invalid_argument
/// on non-finite targets or speeds.
WaypointCommand clamp_command(const WaypointCommand& cmd, const GeoRect& fence);

/// First-order waypoint-tracking UAV. Flies straight at the active target at
/// the commanded speed (capped at 10 m/s) with instantaneous heading changes,
/// snaps to the target once within one stride, and never leaves the fence.
/// Motion tilt scales linearly with speed up to 5 degrees.
///
/// A rover is the degenerate case: construct it and never command it.
class Uav {
public:
    Uav(const GeoPoint& start, const GeoRect& fence, double dt);

    void set_waypoint(const WaypointCommand& cmd);
    void step();
    bool at_waypoint(double tol_m = kDefaultWaypointTolM) const;

    const VehicleState& state() const { return state_; }
    const GeoRect& fence() const { return fence_; }
    const GeoPoint& target() const { return target_; }
    bool has_target() const { return has_target_; }
    double dt() const { return dt_; }

private:
    VehicleState state_;
    GeoRect fence_;
    double dt_;
    GeoPoint target_;
    double cmd_speed_ = 0.0;
    bool has_target_ = false;
};

} // namespace afar
