// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "afar/rng.hpp"
#include "afar/vehicle.hpp"

using namespace afar;

namespace {

const GeoPoint kOrigin{35.7, -78.7, 0.0};

GeoRect fence_300m() {
    const GeoPoint ne = to_geo({300.0, 300.0, 0.0}, kOrigin);
    return {kOrigin.lat, kOrigin.lon, ne.lat, ne.lon, 20.0, 110.0};
}

GeoPoint enu_pt(double x, double y, double z) { return to_geo({x, y, z}, kOrigin); }

} // namespace

TEST_SUITE("vehicle") {

TEST_CASE("clamp_command clamps target and speed") {
    const GeoRect fence = fence_300m();
    // inside stays put
    const WaypointCommand in = clamp_command({enu_pt(100, 100, 50), 5.0}, fence);
    CHECK(horizontal_distance(in.target, enu_pt(100, 100, 50)) < 1e-6);
    CHECK(in.speed_mps == 5.0);
    // 50 m past the east edge lands on the edge at the same latitude
    const WaypointCommand east = clamp_command({enu_pt(350, 150, 50), 8.0}, fence);
    const EnuPoint e = to_enu(east.target, kOrigin);
    CHECK(e.x == doctest::Approx(300.0).epsilon(1e-6));
    CHECK(e.y == doctest::Approx(150.0).epsilon(1e-6));
    // altitude below the band comes up to the floor
    const WaypointCommand low = clamp_command({enu_pt(100, 100, 5), 8.0}, fence);
    CHECK(low.target.alt == 20.0);
    // speed above the cap comes down
    CHECK(clamp_command({enu_pt(10, 10, 50), 25.0}, fence).speed_mps == kMaxSpeedMps);
    CHECK_THROWS_AS(
        clamp_command({{std::nan(""), -78.7, 50.0}, 5.0}, fence), std::invalid_argument);
}

TEST_CASE("step kinematics") {
    const GeoRect fence = fence_300m();
    Uav uav(enu_pt(0, 0, 50), fence, 0.1);

    SUBCASE("holds with no target") {
        uav.step();
        CHECK(uav.state().speed_mps == 0.0);
        CHECK(uav.state().tilt_deg == 0.0);
    }

    SUBCASE("moves 1 m per 0.1 s at full speed along the bearing") {
        uav.set_waypoint({enu_pt(0, 100, 50), 10.0});
        uav.step();
        const EnuPoint p = to_enu(uav.state().pos, kOrigin);
        CHECK(std::abs(p.y - 1.0) < 1e-3);
        CHECK(std::abs(p.x) < 1e-6);
        CHECK(uav.state().heading_deg == doctest::Approx(0.0));
        CHECK(uav.state().tilt_deg == doctest::Approx(5.0));
    }

    SUBCASE("snaps to a target closer than one stride") {
        uav.set_waypoint({enu_pt(0, 0.5, 50), 10.0});
        uav.step();
        const EnuPoint p = to_enu(uav.state().pos, kOrigin);
        CHECK(std::abs(p.y - 0.5) < 1e-9);
        CHECK(uav.at_waypoint());
        uav.step();  // at target now: holding
        CHECK(uav.state().speed_mps == 0.0);
        CHECK(uav.state().tilt_deg == 0.0);
    }
}

TEST_CASE("at_waypoint tolerance") {
    const GeoRect fence = fence_300m();
    Uav uav(enu_pt(0, 0, 50), fence, 0.1);
    uav.set_waypoint({enu_pt(0, 0, 50), 5.0});
    CHECK(uav.at_waypoint(2.0));
    uav.set_waypoint({enu_pt(0, 2.1, 50), 5.0});
    CHECK_FALSE(uav.at_waypoint(2.0));
    uav.set_waypoint({enu_pt(0, 1.9, 50), 5.0});
    CHECK(uav.at_waypoint(2.0));
}

TEST_CASE("travel time is within one step of distance over speed") {
    const GeoRect fence = fence_300m();
    Uav uav(enu_pt(0, 0, 50), fence, 0.1);
    uav.set_waypoint({enu_pt(120, 90, 50), 6.0});  // 150 m at 6 m/s -> 25 s
    int steps = 0;
    while (!uav.at_waypoint(0.01) && steps < 10000) {
        uav.step();
        ++steps;
    }
    CHECK(std::abs(steps * 0.1 - 150.0 / 6.0) <= 0.1 + 1e-9);
}

TEST_CASE("random command sequences never escape the fence") {
    const GeoRect fence = fence_300m();
    Uav uav(enu_pt(0, 0, 50), fence, 0.1);
    RngStream rng(21, "vehicle/fence");
    GeoPoint prev = uav.state().pos;
    for (int i = 0; i < 4000; ++i) {
        if (i % 40 == 0) {
            // raw targets may lie far outside; the vehicle must clamp
            uav.set_waypoint({enu_pt(rng.uniform(-200, 500), rng.uniform(-200, 500),
                                     rng.uniform(-30, 200)),
                              rng.uniform(0.5, 15.0)});
        }
        uav.step();
        const VehicleState& s = uav.state();
        CHECK(contains(fence, s.pos, true));
        // 1e-6 covers the mismatch between the stepping projection (cosine at
        // the step origin) and the midpoint-cosine distance metric
        CHECK(distance_3d(prev, s.pos) <= kMaxSpeedMps * 0.1 + 1e-6);
        CHECK(s.tilt_deg >= 0.0);
        CHECK(s.tilt_deg <= kMaxTiltDeg);
        if (s.speed_mps == 0.0) CHECK(s.tilt_deg == 0.0);
        if (s.speed_mps == kMaxSpeedMps) CHECK(s.tilt_deg == kMaxTiltDeg);
        prev = s.pos;
    }
}

}
