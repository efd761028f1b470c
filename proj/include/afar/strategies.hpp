// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "afar/sampling.hpp"
#include "afar/strategy.hpp"

namespace afar {

/// Organizer sample policy: fly fixed-length cardinal legs, turn 90 degrees
/// clockwise whenever the leg-average signal strength drops below the
/// previous leg's (equal readings keep the heading). The estimate is the
/// position of the strongest raw reading seen so far.
class BaselineStrategy final : public Strategy {
public:
    explicit BaselineStrategy(const EpisodeConfig& cfg);
    std::string_view name() const override { return "baseline"; }
    std::string_view phase() const override { return "search"; }
    StrategyDecision on_measurement(const Measurement& m, const VehicleState& uav,
                                    double t) override;

    int heading() const { return heading_; }

private:
    struct Best {
        double rssi_dbm;
        GeoPoint pos;
    };

    WaypointCommand leg_command(const GeoPoint& from);

    BaselineParams params_;
    GeoRect fence_;
    GeoPoint origin_;
    int heading_ = 0;  // 0=N 1=E 2=S 3=W
    bool started_ = false;
    GeoPoint target_;
    GeoPoint leg_start_;
    double leg_sum_ = 0.0;
    long leg_count_ = 0;
    std::optional<double> prev_leg_avg_;
    std::optional<Best> best_;
};

/// Baseline plus three refinements borrowed from gradient descent: the leg
/// length anneals multiplicatively on every decrease, grows additively while
/// the signal keeps improving (momentum), and soft boundaries are recorded
/// where the signal dropped in each cardinal direction so later legs stop
/// short of them.
class GradientStrategy final : public Strategy {
public:
    explicit GradientStrategy(const EpisodeConfig& cfg);
    std::string_view name() const override { return "gradient"; }
    std::string_view phase() const override { return "search"; }
    StrategyDecision on_measurement(const Measurement& m, const VehicleState& uav,
                                    double t) override;

    double interval_m() const { return interval_m_; }
    int heading() const { return heading_; }
    const std::array<std::optional<double>, 4>& boundaries() const { return boundary_; }

private:
    struct Best {
        double rssi_dbm;
        GeoPoint pos;
    };

    WaypointCommand plan_leg(const GeoPoint& from);

    GradientParams params_;
    GeoRect fence_;
    GeoPoint origin_;
    int heading_ = 0;
    double interval_m_;
    std::array<std::optional<double>, 4> boundary_;  // per heading: y, x, y, x coordinate
    bool started_ = false;
    GeoPoint target_;
    GeoPoint leg_start_;
    double leg_sum_ = 0.0;
    long leg_count_ = 0;
    std::optional<double> prev_leg_avg_;
    std::optional<Best> best_;
};

/// Edge traverse of the south and west fence edges for the fast estimate,
/// then Bayesian optimization over a GP radio map (UCB acquisition on a
/// UAV-fence grid, posterior-mean argmax on a rover-fence grid). When the
/// estimate pins to a fence edge that the rover fence extends past, flies
/// perpendicular probe legs and extrapolates the distance past the boundary
/// from a linear fit of signal strength versus inward distance.
class NyuBoStrategy final : public Strategy {
public:
    enum class Phase { EdgeTraverse, Optimize, BoundaryProbe };

    explicit NyuBoStrategy(const EpisodeConfig& cfg);
    std::string_view name() const override { return "nyu_bo"; }
    std::string_view phase() const override;
    StrategyDecision on_measurement(const Measurement& m, const VehicleState& uav,
                                    double t) override;
    void finalize_radio_map() override;
    const RadioMapGrid* radio_map() const override { return &estimate_grid_; }

    Phase current_phase() const { return phase_; }
    int fit_count() const { return fits_; }

private:
    struct Best {
        double rssi_dbm;
        GeoPoint pos;
    };

    void command_to(StrategyDecision& dec, const GeoPoint& target, double speed);
    bool at_target(const VehicleState& uav) const;
    void add_training_point(const EnuPoint& x, double y);
    void refit(StrategyDecision& dec, double t);
    int pinned_edge(const EnuPoint& est) const;  // -1 when interior
    void enter_probe(int edge, const EnuPoint& est, StrategyDecision& dec);
    void rebuild_probe_queue();
    void fit_probe(StrategyDecision& dec);

    NyuBoParams params_;
    GpConfig gpc_;
    GeoRect fence_, rover_fence_;
    GeoPoint origin_;
    double sample_period_s_;
    double duration_s_;
    double last_t_ = 0.0;
    Phase phase_ = Phase::EdgeTraverse;

    // fence and rover-fence footprints in the shared ENU frame
    double fence_e_x_, fence_n_y_;                  // west_x = south_y = 0
    double rover_w_x_, rover_e_x_, rover_s_y_, rover_n_y_;

    std::vector<GeoPoint> traverse_targets_;
    size_t traverse_idx_ = 0;
    std::optional<Best> south_best_, west_best_, any_best_;

    int bin_n_;
    int bin_count_ = 0;
    double bin_sum_ = 0.0;
    GeoPoint bin_center_;
    int bins_at_target_ = 0;  // dwell depth at the current waypoint

    std::vector<EnuPoint> train_x_;
    std::vector<double> train_y_;
    std::vector<int> train_n_;  // bin count merged into each point
    int pending_ = 0;
    GpModel gp_;
    RadioMapGrid guidance_grid_, estimate_grid_;
    int fits_ = 0;
    std::optional<GeoPoint> estimate_geo_;

    int last_pin_edge_ = -1;
    int pin_count_ = 0;

    // Probe geometry in ENU: the pinned fence edge runs from probe_origin_
    // along probe_dir_ for probe_edge_len_ meters; probe_inward_ points into
    // the fence; the foot is the along-edge coordinate the legs center on.
    struct ProbeSample {
        double s_in;     // perpendicular coordinate, positive into the fence
        double lat_abs;  // absolute along-edge coordinate
        double rssi_dbm;
    };
    int probe_edge_ = -1;
    EnuPoint probe_origin_{}, probe_dir_{}, probe_inward_{};
    double probe_edge_len_ = 0.0;
    double probe_foot_lat_ = 0.0;
    double probe_cap_m_ = 0.0;  // rover-fence extent past the boundary
    double probe_s0_ = 0.0;     // fitted perpendicular peak offset (negative = beyond)
    bool probe_collecting_ = false;
    std::vector<GeoPoint> probe_queue_;  // cycle waypoints, flown front to back
    size_t probe_queue_idx_ = 0;
    std::vector<ProbeSample> probe_pts_;

    GeoPoint current_target_;
    bool has_target_ = false;
};

/// Recursive perimeter sweep of the fence overlap: buffer-averaged samples
/// along each edge, chords connecting opposite-edge maxima, their
/// intersection as the guess, then recursion into the quadrant whose corner
/// lies nearest the strongest reading.
class UntRecursiveStrategy final : public Strategy {
public:
    explicit UntRecursiveStrategy(const EpisodeConfig& cfg);
    std::string_view name() const override { return "unt_recursive"; }
    std::string_view phase() const override;
    StrategyDecision on_measurement(const Measurement& m, const VehicleState& uav,
                                    double t) override;

    const GeoRect& current_rect() const { return rect_; }
    int depth() const { return depth_; }

private:
    enum class Phase { Approach, Sweep, Descend, Hold };

    struct EdgeBest {
        double rssi_dbm;
        GeoPoint pos;
    };

    void command_corner(StrategyDecision& dec, int corner_idx, bool transit);
    void complete_sweep(const VehicleState& uav, StrategyDecision& dec);

    UntParams params_;
    GeoRect fence_;
    GeoPoint origin_;
    GeoRect rect_;
    int depth_ = 0;
    Phase phase_ = Phase::Approach;
    bool started_ = false;
    SampleBuffer buffer_;
    double buffer_window_s_;
    int start_corner_ = 0;
    int leg_ = 0;  // leg i sweeps edge (start_corner_ + i) % 4; edges 0=S 1=E 2=N 3=W
    GeoPoint target_;
    std::array<std::optional<EdgeBest>, 4> edge_best_;
    std::optional<EdgeBest> sweep_best_;
    std::optional<GeoPoint> estimate_;
};

/// Dual-radio-map GP seeker: a quality-variance filter gates measurements, a
/// guidance map over the UAV fence picks UCB waypoints, an estimate map over
/// the rover fence provides the reported position, and a circle of waypoints
/// refines the map once consecutive estimates agree.
class UgaGpStrategy final : public Strategy {
public:
    enum class Phase { Startup, Optimize, Circle };

    explicit UgaGpStrategy(const EpisodeConfig& cfg);
    std::string_view name() const override { return "uga_gp"; }
    std::string_view phase() const override;
    StrategyDecision on_measurement(const Measurement& m, const VehicleState& uav,
                                    double t) override;
    void finalize_radio_map() override;
    const RadioMapGrid* radio_map() const override { return &estimate_grid_; }

    Phase current_phase() const { return phase_; }
    const QvFilter& qv() const { return qv_; }
    int train_size() const { return static_cast<int>(train_x_.size()); }

private:
    void command_to(StrategyDecision& dec, const GeoPoint& target);
    bool at_target(const VehicleState& uav) const;
    void refit(StrategyDecision& dec);
    void maybe_enter_circle(StrategyDecision& dec);

    UgaParams params_;
    GpConfig gpc_;
    GeoRect fence_, rover_fence_;
    GeoPoint origin_;
    Phase phase_ = Phase::Startup;

    QvFilter qv_;
    int qv_window_;
    std::vector<Measurement> window_;
    int since_batch_ = 0;

    std::vector<EnuPoint> train_x_;
    std::vector<double> train_y_;
    int pending_ = 0;
    GpModel gp_;
    RadioMapGrid guidance_grid_, estimate_grid_;

    std::vector<GeoPoint> startup_targets_;
    size_t startup_idx_ = 0;
    bool first_sample_done_ = false;
    bool dwelling_ = false;
    double dwell_start_t_ = 0.0;
    bool accepted_since_arrival_ = false;

    std::optional<GeoPoint> estimate_geo_;
    std::deque<GeoPoint> recent_estimates_;

    std::vector<GeoPoint> circle_targets_;
    size_t circle_idx_ = 0;

    GeoPoint current_target_;
    bool has_target_ = false;
};

} // namespace afar
