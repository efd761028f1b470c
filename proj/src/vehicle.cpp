// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "afar/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace afar {

namespace {
double heading_of(const EnuPoint& dir) {
    const double h = rad2deg(std::atan2(dir.x, dir.y));
    return h < 0.0 ? h + 360.0 : h;
}
} // namespace

WaypointCommand clamp_command(const WaypointCommand& cmd, const GeoRect& fence) {
    if (!std::isfinite(cmd.target.lat) || !std::isfinite(cmd.target.lon) ||
        !std::isfinite(cmd.target.alt) || !std::isfinite(cmd.speed_mps)) {
        throw std::invalid_argument("waypoint command has non-finite fields");
    }
    WaypointCommand out;
    out.target = clamp_to_rect(fence, cmd.target);
    out.speed_mps = std::clamp(cmd.speed_mps, kMinCmdSpeedMps, kMaxSpeedMps);
    return out;
}

Uav::Uav(const GeoPoint& start, const GeoRect& fence, double dt)
    : fence_(fence), dt_(dt) {
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
    state_.pos = clamp_to_rect(fence, start);
}

void Uav::set_waypoint(const WaypointCommand& cmd) {
    const WaypointCommand accepted = clamp_command(cmd, fence_);
    target_ = accepted.target;
    cmd_speed_ = accepted.speed_mps;
    has_target_ = true;
}

void Uav::step() {
    state_.t += dt_;
    const EnuPoint rel = has_target_ ? to_enu(target_, state_.pos) : EnuPoint{};
    const double dist = rel.norm();
    if (!has_target_ || dist < 1e-9) {
        state_.speed_mps = 0.0;
        state_.tilt_deg = 0.0;
        return;
    }
    const double speed = std::min(cmd_speed_, kMaxSpeedMps);
    const double stride = speed * dt_;
    GeoPoint next = dist <= stride ? target_ : to_geo(rel * (stride / dist), state_.pos);
    state_.pos = clamp_to_rect(fence_, next);
    state_.heading_deg = heading_of(rel);
    state_.speed_mps = speed;
    state_.tilt_deg = kMaxTiltDeg * (speed / kMaxSpeedMps);
}

bool Uav::at_waypoint(double tol_m) const {
    if (!has_target_) return false;
    return distance_3d(state_.pos, target_) <= tol_m;
}

} // namespace afar
