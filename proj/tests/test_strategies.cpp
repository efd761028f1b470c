// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "afar/harness.hpp"
#include "afar/strategies.hpp"

using namespace afar;

namespace {

EpisodeConfig clean_config(const std::string& strategy) {
    EpisodeConfig cfg = default_config();
    cfg.strategy = strategy;
    cfg.channel.noise_sigma_db = 0.0;
    cfg.channel.fades_enabled = false;
    cfg.seed = 1;
    return cfg;
}

GeoPoint enu_pt(const EpisodeConfig& cfg, double x, double y, double z = 0.0) {
    return to_geo({x, y, z}, cfg.enu_origin());
}

Measurement meas_at(const GeoPoint& pos, double rssi, double t) {
    Measurement m;
    m.t = t;
    m.rx_pos = pos;
    m.rssi_dbm = rssi;
    m.confidence = 0.9;
    return m;
}

VehicleState state_at(const GeoPoint& pos) {
    VehicleState v;
    v.pos = pos;
    return v;
}

// Reports `rssi` with the vehicle sitting exactly on the strategy's last
// commanded target, which completes the active leg.
StrategyDecision complete_leg(Strategy& s, const GeoPoint& target, double rssi, double& t) {
    const StrategyDecision dec = s.on_measurement(meas_at(target, rssi, t), state_at(target), t);
    t += 0.2;
    return dec;
}

} // namespace

TEST_SUITE("strategies") {

TEST_CASE("baseline keeps heading on improvement and turns clockwise on decrease") {
    EpisodeConfig cfg = clean_config("baseline");
    BaselineStrategy s(cfg);
    double t = 0.2;

    const GeoPoint start = enu_pt(cfg, 100, 100, 30);
    auto dec = s.on_measurement(meas_at(start, -70, t), state_at(start), t);
    REQUIRE(dec.command.has_value());
    CHECK(s.heading() == 0);  // starts north

    GeoPoint target = dec.command->target;
    dec = complete_leg(s, target, -70.0, t);  // first leg seeds the comparison
    CHECK(s.heading() == 0);

    target = dec.command->target;
    dec = complete_leg(s, target, -65.0, t);  // improvement: keep heading
    CHECK(s.heading() == 0);

    target = dec.command->target;
    dec = complete_leg(s, target, -65.0, t);  // equal: treated as non-decrease
    CHECK(s.heading() == 0);

    target = dec.command->target;
    dec = complete_leg(s, target, -72.0, t);  // decrease: N -> E
    CHECK(s.heading() == 1);

    target = dec.command->target;
    dec = complete_leg(s, target, -80.0, t);  // decrease: E -> S
    CHECK(s.heading() == 2);

    target = dec.command->target;
    dec = complete_leg(s, target, -85.0, t);  // decrease: S -> W
    CHECK(s.heading() == 3);

    target = dec.command->target;
    complete_leg(s, target, -90.0, t);  // decrease: W -> N, full cycle
    CHECK(s.heading() == 0);
}

TEST_CASE("baseline estimate tracks the best leg so far") {
    EpisodeConfig cfg = clean_config("baseline");
    BaselineStrategy s(cfg);
    double t = 0.2;
    const GeoPoint start = enu_pt(cfg, 100, 100, 30);
    auto dec = s.on_measurement(meas_at(start, -70, t), state_at(start), t);
    dec = complete_leg(s, dec.command->target, -70.0, t);
    CHECK(dec.estimate.has_value());  // best so far
    dec = complete_leg(s, dec.command->target, -75.0, t);
    CHECK_FALSE(dec.estimate.has_value());  // worse leg, estimate unchanged
    dec = complete_leg(s, dec.command->target, -60.0, t);
    CHECK(dec.estimate.has_value());
}

TEST_CASE("gradient momentum grows legs by the additive step") {
    EpisodeConfig cfg = clean_config("gradient");
    GradientStrategy s(cfg);
    double t = 0.2;
    const GeoPoint start = enu_pt(cfg, 100, 100, 30);
    auto dec = s.on_measurement(meas_at(start, -70, t), state_at(start), t);
    CHECK(s.interval_m() == 40.0);

    dec = complete_leg(s, dec.command->target, -70.0, t);  // seed
    CHECK(s.interval_m() == 40.0);
    dec = complete_leg(s, dec.command->target, -68.0, t);  // improvement 1: leg was 40
    CHECK(s.interval_m() == 45.0);
    dec = complete_leg(s, dec.command->target, -66.0, t);  // improvement 2: leg was 45
    CHECK(s.interval_m() == 50.0);
    dec = complete_leg(s, dec.command->target, -64.0, t);  // improvement 3: leg was 50
    CHECK(s.interval_m() == 55.0);
}

TEST_CASE("gradient anneals on a decrease and records the boundary") {
    EpisodeConfig cfg = clean_config("gradient");
    cfg.gradient.momentum_step_m = 0.0;  // hold the interval at 40 for the arithmetic
    GradientStrategy s(cfg);
    double t = 0.2;
    const GeoPoint start = enu_pt(cfg, 150, 100, 30);
    auto dec = s.on_measurement(meas_at(start, -70, t), state_at(start), t);
    dec = complete_leg(s, dec.command->target, -70.0, t);  // seed at (150, 140)
    CHECK(s.interval_m() == 40.0);
    const GeoPoint where = dec.command->target;  // (150, 180)
    dec = complete_leg(s, where, -75.0, t);      // decrease at interval 40
    CHECK(s.interval_m() == doctest::Approx(36.0));
    CHECK(s.heading() == 1);  // turned east
    REQUIRE(s.boundaries()[0].has_value());
    CHECK(*s.boundaries()[0] ==
          doctest::Approx(to_enu(where, cfg.enu_origin()).y).epsilon(1e-6));
}

TEST_CASE("gradient legs stop short of a recorded boundary") {
    EpisodeConfig cfg = clean_config("gradient");
    cfg.gradient.interval_start_m = 80.0;
    cfg.gradient.decay = 1.0;  // keep the interval at 80 throughout
    cfg.gradient.momentum_step_m = 0.0;
    GradientStrategy s(cfg);
    double t = 0.2;

    // Script a tour that records an east boundary at x = 200, then plans an
    // eastward leg from x = 120: it must stop at 190, ten meters short.
    const GeoPoint start = enu_pt(cfg, 120, 100, 30);
    auto dec = s.on_measurement(meas_at(start, -70, t), state_at(start), t);
    dec = complete_leg(s, dec.command->target, -70.0, t);  // north leg seeds: at (120, 180)
    dec = complete_leg(s, dec.command->target, -75.0, t);  // decrease at (120, 260): turn E
    CHECK(s.heading() == 1);
    // east leg to (200, 260); decrease there records boundary east = 200
    dec = complete_leg(s, dec.command->target, -80.0, t);
    CHECK(s.heading() == 2);
    REQUIRE(s.boundaries()[1].has_value());
    CHECK(*s.boundaries()[1] == doctest::Approx(200.0).epsilon(1e-6));
    // south leg to (200, 180); decrease: turn west
    dec = complete_leg(s, dec.command->target, -85.0, t);
    CHECK(s.heading() == 3);
    // west leg to (120, 180); decrease: turn north, boundary north = 260 so the
    // north leg is also shortened (to 250); decrease again turns east
    dec = complete_leg(s, dec.command->target, -90.0, t);
    CHECK(s.heading() == 0);
    dec = complete_leg(s, dec.command->target, -95.0, t);
    CHECK(s.heading() == 1);
    // the eastward leg from x = 120 stops 10 m short of the x = 200 boundary
    REQUIRE(dec.command.has_value());
    const EnuPoint tgt = to_enu(dec.command->target, cfg.enu_origin());
    CHECK(tgt.x == doctest::Approx(190.0).epsilon(1e-6));
}

TEST_CASE("unt quadrant selection from the strongest reading") {
    // Max power at ENU (40, 260) inside (0,0)-(300,300): the nearest corner
    // is NW, so the next rectangle is (0,150)-(150,300).
    const GeoPoint origin{35.7, -78.7, 0.0};
    const GeoPoint ne = to_geo({300, 300, 0}, origin);
    const GeoRect rect{origin.lat, origin.lon, ne.lat, ne.lon, 20.0, 110.0};
    const EnuPoint hot{40, 260, 0};
    int nearest = 0;
    double best = 1e18;
    for (int c = 0; c < 4; ++c) {
        const double d = (to_enu(rect_corner(rect, c), origin) - hot).norm2d();
        if (d < best) {
            best = d;
            nearest = c;
        }
    }
    CHECK(nearest == 3);
    const GeoRect q = rect_quadrant(rect, nearest);
    const EnuPoint sw = to_enu(rect_corner(q, 0), origin);
    const EnuPoint qne = to_enu(rect_corner(q, 2), origin);
    CHECK(sw.x == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(sw.y == doctest::Approx(150.0).epsilon(1e-6));
    CHECK(qne.x == doctest::Approx(150.0).epsilon(1e-6));
    CHECK(qne.y == doctest::Approx(300.0).epsilon(1e-6));
}

TEST_CASE("unt first sweep pins a centered rover") {
    EpisodeConfig cfg = clean_config("unt_recursive");
    // rover at the center of the fence overlap (x in [60,360] clipped to 300)
    cfg.rover_pos = enu_pt(cfg, 180, 150);
    cfg.duration_s = 200.0;
    cfg.fast_deadline_s = 180.0;
    const EpisodeResult res = run_episode(cfg);
    CHECK(res.report.final_error_m < 10.0);
}

TEST_CASE("unt missing-edge sweep falls back to the overall argmax") {
    EpisodeConfig cfg = clean_config("unt_recursive");
    cfg.unt_recursive.max_depth = 0;  // single sweep, then hold
    UntRecursiveStrategy s(cfg);
    double t = 0.2;

    const GeoPoint start = enu_pt(cfg, 60, 0, 20);
    auto dec = s.on_measurement(meas_at(start, -70, t), state_at(start), t);
    t += 0.2;
    // arrive at the start corner (SW of the overlap): sweep begins
    dec = complete_leg(s, dec.command->target, -70.0, t);

    const GeoPoint hot = enu_pt(cfg, 200, 0, 20);
    auto feed_edge = [&](const GeoPoint& sample_pos, double rssi, const GeoPoint& corner) {
        // one full buffer on this edge, then the corner arrival
        for (int i = 0; i < 8; ++i) {
            s.on_measurement(meas_at(sample_pos, rssi, t), state_at(sample_pos), t);
            t += 0.2;
        }
        return complete_leg(s, corner, rssi, t);
    };

    // south edge carries the global maximum; east and north get weak windows;
    // the west leg emits no complete window at all
    dec = feed_edge(hot, -50.0, enu_pt(cfg, 300, 0, 20));
    dec = feed_edge(enu_pt(cfg, 300, 150, 20), -80.0, enu_pt(cfg, 300, 300, 20));
    dec = feed_edge(enu_pt(cfg, 180, 300, 20), -82.0, enu_pt(cfg, 60, 300, 20));
    dec = complete_leg(s, enu_pt(cfg, 60, 0, 20), -84.0, t);  // west edge: no window

    REQUIRE(dec.estimate.has_value());
    CHECK(horizontal_distance(*dec.estimate, hot) < 1e-6);
}

TEST_CASE("nyu fast estimate lands within 50 m for a rover near the start corner") {
    EpisodeConfig cfg = clean_config("nyu_bo");
    cfg.rover_pos = enu_pt(cfg, 90, 60);
    cfg.duration_s = 200.0;
    const EpisodeResult res = run_episode(cfg);
    CHECK(res.report.fast_error_m < 50.0);
}

TEST_CASE("nyu converges within one grid cell in a clean channel") {
    EpisodeConfig cfg = clean_config("nyu_bo");
    cfg.rover_pos = cfg.locations[0];
    const EpisodeResult res = run_episode(cfg);
    CHECK(res.report.final_error_m <= 10.0);
}

TEST_CASE("nyu probes past the boundary for an out-of-fence rover") {
    EpisodeConfig cfg = clean_config("nyu_bo");
    cfg.rover_pos = cfg.locations[2];  // beyond the east fence edge
    const EpisodeResult res = run_episode(cfg);
    bool probed = false;
    for (const auto& r : res.log.records) probed = probed || r.phase == "boundary_probe";
    CHECK(probed);
    CHECK(res.report.final_error_m <= 15.0);
    // the estimate really sits outside the UAV fence
    CHECK_FALSE(contains(cfg.uav_fence, res.report.final_estimate, false));
}

TEST_CASE("nyu phases stay monotone") {
    EpisodeConfig cfg = clean_config("nyu_bo");
    cfg.rover_pos = cfg.locations[2];
    const EpisodeResult res = run_episode(cfg);
    int rank = 0;
    auto rank_of = [](const std::string& p) {
        if (p == "edge_traverse") return 0;
        if (p == "optimize") return 1;
        return 2;
    };
    for (const auto& r : res.log.records) {
        const int cur = rank_of(r.phase);
        CHECK(cur >= rank);
        rank = cur;
    }
}

TEST_CASE("uga converges and rings the estimate in a clean channel") {
    EpisodeConfig cfg = clean_config("uga_gp");
    cfg.rover_pos = cfg.locations[0];
    const EpisodeResult res = run_episode(cfg);
    CHECK(res.report.final_error_m <= 15.0);
    bool circled = false;
    for (const auto& r : res.log.records) circled = circled || r.phase == "circle";
    CHECK(circled);  // stable estimates trigger the refinement circle
    CHECK(res.report.samples_accepted > 0);
}

TEST_CASE("uga radio map export covers the rover fence") {
    EpisodeConfig cfg = clean_config("uga_gp");
    cfg.rover_pos = cfg.locations[0];
    cfg.duration_s = 200.0;
    const EpisodeResult res = run_episode(cfg);
    REQUIRE(res.radio_map_csv.has_value());
    CHECK(res.radio_map_csv->rfind("lon,lat,mean_dbm,var_db2\n", 0) == 0);
    const long rows = std::count(res.radio_map_csv->begin(), res.radio_map_csv->end(), '\n');
    CHECK(rows == cfg.gp.grid_nx * cfg.gp.grid_ny + 1);
}

TEST_CASE("all strategies emit fence-safe commands under noise") {
    for (const auto& name : all_strategy_names()) {
        EpisodeConfig cfg = default_config();
        cfg.strategy = name;
        cfg.channel = testbed_profile();
        cfg.rover_pos = cfg.locations[1];
        cfg.seed = 31;
        cfg.duration_s = 240.0;
        cfg.fast_deadline_s = 120.0;
        const EpisodeResult res = run_episode(cfg);
        for (const auto& r : res.log.records) {
            CHECK(contains(cfg.uav_fence, {r.lat, r.lon, r.alt}, true));
        }
    }
}

}
