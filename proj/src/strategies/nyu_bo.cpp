// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "afar/strategies.hpp"

#include <algorithm>
#include <cmath>

namespace afar {

namespace {
constexpr double kEdgeBandM = 5.0;        // how close to an edge a sample must be to count for it
constexpr double kProbeCorridorM = 10.0;  // tolerance band around the probe legs
constexpr double kProbeLateralSpanM = 40.0;  // half-length of the along-boundary pass
constexpr double kTrainMergeM = 5.0;      // bins closer than this merge into one training point
constexpr size_t kProbeMinPts = 10;
} // namespace

NyuBoStrategy::NyuBoStrategy(const EpisodeConfig& cfg)
    : params_(cfg.nyu_bo),
      gpc_(cfg.gp),
      fence_(cfg.uav_fence),
      rover_fence_(cfg.rover_fence),
      origin_(cfg.enu_origin()),
      sample_period_s_(cfg.sample_period_s),
      duration_s_(cfg.duration_s),
      gp_(cfg.gp.kernel),
      guidance_grid_(cfg.uav_fence, cfg.gp.grid_nx, cfg.gp.grid_ny, origin_),
      estimate_grid_(cfg.rover_fence, cfg.gp.grid_nx, cfg.gp.grid_ny, origin_) {
    fence_e_x_ = to_enu(rect_corner(fence_, 2), origin_).x;
    fence_n_y_ = to_enu(rect_corner(fence_, 2), origin_).y;
    rover_w_x_ = to_enu(rect_corner(rover_fence_, 0), origin_).x;
    rover_s_y_ = to_enu(rect_corner(rover_fence_, 0), origin_).y;
    rover_e_x_ = to_enu(rect_corner(rover_fence_, 2), origin_).x;
    rover_n_y_ = to_enu(rect_corner(rover_fence_, 2), origin_).y;

    bin_n_ = std::max(1, static_cast<int>(std::lround(params_.train_bin_s / cfg.sample_period_s)));

    // South edge west->east, back, then west edge south->north.
    auto corner = [&](int i) {
        GeoPoint c = rect_corner(fence_, i);
        c.alt = params_.cruise_alt_m;
        return c;
    };
    traverse_targets_ = {corner(1), corner(0), corner(3)};
}

std::string_view NyuBoStrategy::phase() const {
    switch (phase_) {
        case Phase::EdgeTraverse: return "edge_traverse";
        case Phase::Optimize: return "optimize";
        case Phase::BoundaryProbe: return "boundary_probe";
    }
    return "optimize";
}

void NyuBoStrategy::command_to(StrategyDecision& dec, const GeoPoint& target, double speed) {
    WaypointCommand cmd = clamp_command({target, speed}, fence_);
    current_target_ = cmd.target;
    has_target_ = true;
    bins_at_target_ = 0;
    dec.command = cmd;
}

bool NyuBoStrategy::at_target(const VehicleState& uav) const {
    return has_target_ && distance_3d(uav.pos, current_target_) <= kDefaultWaypointTolM;
}

int NyuBoStrategy::pinned_edge(const EnuPoint& est) const {
    // Only edges with rover-fence territory beyond them can pin the estimate.
    const double tol = params_.boundary_pin_tol_m;
    if (rover_e_x_ > fence_e_x_ + 1.0 && std::abs(est.x - fence_e_x_) <= tol) return 1;
    if (rover_n_y_ > fence_n_y_ + 1.0 && std::abs(est.y - fence_n_y_) <= tol) return 2;
    if (rover_s_y_ < -1.0 && std::abs(est.y - 0.0) <= tol) return 0;
    if (rover_w_x_ < -1.0 && std::abs(est.x - 0.0) <= tol) return 3;
    return -1;
}

void NyuBoStrategy::enter_probe(int edge, const EnuPoint& est, StrategyDecision& dec) {
    phase_ = Phase::BoundaryProbe;
    probe_edge_ = edge;
    switch (edge) {
        case 0:  // south
            probe_origin_ = {0.0, 0.0, 0.0};
            probe_dir_ = {1.0, 0.0, 0.0};
            probe_inward_ = {0.0, 1.0, 0.0};
            probe_edge_len_ = fence_e_x_;
            probe_foot_lat_ = std::clamp(est.x, 0.0, fence_e_x_);
            probe_cap_m_ = -rover_s_y_;
            break;
        case 1:  // east
            probe_origin_ = {fence_e_x_, 0.0, 0.0};
            probe_dir_ = {0.0, 1.0, 0.0};
            probe_inward_ = {-1.0, 0.0, 0.0};
            probe_edge_len_ = fence_n_y_;
            probe_foot_lat_ = std::clamp(est.y, 0.0, fence_n_y_);
            probe_cap_m_ = rover_e_x_ - fence_e_x_;
            break;
        case 2:  // north
            probe_origin_ = {0.0, fence_n_y_, 0.0};
            probe_dir_ = {1.0, 0.0, 0.0};
            probe_inward_ = {0.0, -1.0, 0.0};
            probe_edge_len_ = fence_e_x_;
            probe_foot_lat_ = std::clamp(est.x, 0.0, fence_e_x_);
            probe_cap_m_ = rover_n_y_ - fence_n_y_;
            break;
        default:  // west
            probe_origin_ = {0.0, 0.0, 0.0};
            probe_dir_ = {0.0, 1.0, 0.0};
            probe_inward_ = {1.0, 0.0, 0.0};
            probe_edge_len_ = fence_n_y_;
            probe_foot_lat_ = std::clamp(est.y, 0.0, fence_n_y_);
            probe_cap_m_ = -rover_w_x_;
            break;
    }
    probe_s0_ = 0.0;
    probe_collecting_ = false;
    probe_pts_.clear();
    rebuild_probe_queue();
    command_to(dec, probe_queue_[0], params_.edge_speed_mps);
}

void NyuBoStrategy::rebuild_probe_queue() {
    // One cycle: out and back along the perpendicular, then a pass along the
    // boundary to fix the lateral coordinate, then back to the foot.
    const EnuPoint foot = probe_origin_ + probe_dir_ * probe_foot_lat_;
    auto wp = [&](const EnuPoint& p) {
        GeoPoint g = to_geo(p, origin_);
        g.alt = params_.cruise_alt_m;
        return clamp_to_rect(fence_, g);
    };
    const double lat_lo = std::max(0.0, probe_foot_lat_ - kProbeLateralSpanM);
    const double lat_hi = std::min(probe_edge_len_, probe_foot_lat_ + kProbeLateralSpanM);
    probe_queue_ = {wp(foot),
                    wp(foot + probe_inward_ * params_.probe_leg_m),
                    wp(foot),
                    wp(probe_origin_ + probe_dir_ * lat_hi),
                    wp(probe_origin_ + probe_dir_ * lat_lo),
                    wp(foot)};
    probe_queue_idx_ = 0;
}

void NyuBoStrategy::fit_probe(StrategyDecision& dec) {
    const double h2 = params_.cruise_alt_m * params_.cruise_alt_m;
    auto fit_axis = [](auto&& pts, double lo, double hi, double h2_axis) {
        auto sse = [&](double p0) {
            double sum = 0.0, sum2 = 0.0;
            for (const auto& [p, r] : pts) {
                const double g = p - p0;
                const double c = r + 10.0 * std::log10(g * g + h2_axis);
                sum += c;
                sum2 += c * c;
            }
            return sum2 - sum * sum / static_cast<double>(pts.size());
        };
        double best_p = lo;
        double best = std::numeric_limits<double>::infinity();
        for (double p = lo; p <= hi; p += 1.0) {
            const double v = sse(p);
            if (v < best) {
                best = v;
                best_p = p;
            }
        }
        for (double p = std::max(lo, best_p - 1.0); p <= std::min(hi, best_p + 1.0); p += 0.1) {
            const double v = sse(p);
            if (v < best) {
                best = v;
                best_p = p;
            }
        }
        return best_p;
    };

    // Perpendicular fit on samples near the current line; allowing the peak
    // inside the fence keeps a falsely pinned estimate from being dragged
    // past the boundary.
    std::vector<std::pair<double, double>> perp;
    for (const auto& s : probe_pts_) {
        if (std::abs(s.lat_abs - probe_foot_lat_) <= kProbeCorridorM) {
            perp.emplace_back(s.s_in, s.rssi_dbm);
        }
    }
    if (perp.size() >= kProbeMinPts) {
        probe_s0_ = fit_axis(perp, -probe_cap_m_, params_.probe_leg_m, h2);
    }

    // Lateral fit on samples hugging the boundary; the transverse offset now
    // includes the perpendicular standoff.
    std::vector<std::pair<double, double>> lat;
    for (const auto& s : probe_pts_) {
        if (s.s_in >= -1.0 && s.s_in <= kProbeCorridorM) {
            lat.emplace_back(s.lat_abs, s.rssi_dbm);
        }
    }
    if (lat.size() >= kProbeMinPts) {
        const double lo = std::max(0.0, probe_foot_lat_ - kProbeLateralSpanM);
        const double hi = std::min(probe_edge_len_, probe_foot_lat_ + kProbeLateralSpanM);
        probe_foot_lat_ = fit_axis(lat, lo, hi, h2 + probe_s0_ * probe_s0_);
    }

    GeoPoint est =
        to_geo(probe_origin_ + probe_dir_ * probe_foot_lat_ + probe_inward_ * probe_s0_, origin_);
    est.alt = 0.0;
    est = clamp_to_rect(rover_fence_, est);
    est.alt = 0.0;
    estimate_geo_ = est;
    dec.estimate = est;
}

void NyuBoStrategy::add_training_point(const EnuPoint& x, double y) {
    // Hover bins land on top of each other; merge them into a running mean
    // instead of letting duplicates pile weight onto one spot.
    for (size_t i = 0; i < train_x_.size(); ++i) {
        if ((train_x_[i] - x).norm2d() < kTrainMergeM) {
            train_n_[i] += 1;
            train_y_[i] += (y - train_y_[i]) / train_n_[i];
            pending_ += 1;
            return;
        }
    }
    train_x_.push_back(x);
    train_y_.push_back(y);
    train_n_.push_back(1);
    pending_ += 1;
}

namespace {
// Acquisition argmax restricted to grid nodes within a radius of a center;
// same row-major tie-break as the global version.
GeoPoint acquire_ucb_near(const RadioMapGrid& grid, double kappa, const GeoPoint& center,
                          double radius_m) {
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.size(); ++i) {
        const GeoPoint node = grid.node_geo(i);
        if (horizontal_distance(node, center) > radius_m) continue;
        const size_t u = static_cast<size_t>(i);
        const double score = grid.mean()[u] + kappa * std::sqrt(std::max(grid.var()[u], 0.0));
        if (score > best_score) {
            best_score = score;
            best = i;
        }
    }
    return best >= 0 ? grid.node_geo(best) : acquire_ucb(grid, kappa);
}
} // namespace

void NyuBoStrategy::refit(StrategyDecision& dec, double t) {
    if (train_x_.empty()) return;
    gp_.fit(train_x_, train_y_);
    guidance_grid_.update(gp_, true);
    estimate_grid_.update(gp_, false);  // the peak needs means only
    fits_ += 1;
    pending_ = 0;

    const GeoPoint est = estimate_peak(estimate_grid_);
    estimate_geo_ = est;
    dec.estimate = est;

    const int edge = pinned_edge(to_enu(est, origin_));
    if (edge >= 0 && edge == last_pin_edge_) {
        pin_count_ += 1;
    } else {
        last_pin_edge_ = edge;
        pin_count_ = edge >= 0 ? 1 : 0;
    }
    if (pin_count_ >= params_.boundary_pin_count && t >= params_.probe_min_time_s) {
        enter_probe(edge, to_enu(est, origin_), dec);
        return;
    }

    // Wide UCB early; once the map has had time to firm up, the acquisition
    // zooms in around the current estimate to consolidate the peak.
    GeoPoint next = t >= params_.zoom_after_s
                        ? acquire_ucb_near(guidance_grid_, gpc_.ucb_kappa, est,
                                           params_.zoom_radius_m)
                        : acquire_ucb(guidance_grid_, gpc_.ucb_kappa);
    next.alt = params_.cruise_alt_m;
    command_to(dec, next, params_.edge_speed_mps);
}

StrategyDecision NyuBoStrategy::on_measurement(const Measurement& m, const VehicleState& uav,
                                               double t) {
    StrategyDecision dec;
    last_t_ = t;

    // Raw samples are averaged into fixed-duration bins; the bin mean at the
    // middle sample's position is one GP training point.
    bin_count_ += 1;
    bin_sum_ += m.rssi_dbm;
    if (bin_count_ == (bin_n_ + 1) / 2) bin_center_ = m.rx_pos;
    if (bin_count_ == bin_n_) {
        EnuPoint x = to_enu(bin_center_, origin_);
        x.z = 0.0;
        add_training_point(x, bin_sum_ / bin_n_);
        bin_count_ = 0;
        bin_sum_ = 0.0;
        dec.sample_accepted = true;
        if (at_target(uav)) bins_at_target_ += 1;
    }

    switch (phase_) {
        case Phase::EdgeTraverse: {
            const EnuPoint here = to_enu(m.rx_pos, origin_);
            if (here.y <= kEdgeBandM && (!south_best_ || m.rssi_dbm > south_best_->rssi_dbm)) {
                south_best_ = Best{m.rssi_dbm, m.rx_pos};
            }
            if (here.x <= kEdgeBandM && (!west_best_ || m.rssi_dbm > west_best_->rssi_dbm)) {
                west_best_ = Best{m.rssi_dbm, m.rx_pos};
            }
            if (!any_best_ || m.rssi_dbm > any_best_->rssi_dbm) {
                any_best_ = Best{m.rssi_dbm, m.rx_pos};
            }
            // The fast estimate pairs the west-edge argmax latitude with the
            // south-edge argmax longitude.
            if (south_best_ && west_best_) {
                GeoPoint est{west_best_->pos.lat, south_best_->pos.lon, 0.0};
                estimate_geo_ = est;
                dec.estimate = est;
            } else if (any_best_) {
                GeoPoint est{any_best_->pos.lat, any_best_->pos.lon, 0.0};
                estimate_geo_ = est;
                dec.estimate = est;
            }

            if (!has_target_) {
                command_to(dec, traverse_targets_[traverse_idx_], params_.edge_speed_mps);
            } else if (at_target(uav)) {
                traverse_idx_ += 1;
                if (traverse_idx_ < traverse_targets_.size()) {
                    command_to(dec, traverse_targets_[traverse_idx_], params_.edge_speed_mps);
                }
            }
            if (traverse_idx_ >= traverse_targets_.size() || t > params_.edge_deadline_s) {
                phase_ = Phase::Optimize;
                refit(dec, t);
            }
            break;
        }
        case Phase::Optimize: {
            // Dwell two bins at each waypoint so its merged training value is
            // averaged down before retargeting.
            if (pending_ >= params_.refit_every || bins_at_target_ >= 2) {
                refit(dec, t);
            }
            break;
        }
        case Phase::BoundaryProbe: {
            if (probe_collecting_) {
                const EnuPoint rel = to_enu(m.rx_pos, origin_) - probe_origin_;
                const double s_in = rel.x * probe_inward_.x + rel.y * probe_inward_.y;
                const double lat_abs = rel.x * probe_dir_.x + rel.y * probe_dir_.y;
                if (s_in >= -1.0 && s_in <= params_.probe_leg_m + 1.0) {
                    probe_pts_.push_back({s_in, lat_abs, m.rssi_dbm});
                }
            }
            if (at_target(uav)) {
                probe_collecting_ = true;  // reached the pattern, samples count now
                probe_queue_idx_ += 1;
                if (probe_queue_idx_ >= probe_queue_.size()) {
                    fit_probe(dec);
                    rebuild_probe_queue();
                }
                command_to(dec, probe_queue_[probe_queue_idx_], params_.probe_speed_mps);
            }
            break;
        }
    }
    return dec;
}

void NyuBoStrategy::finalize_radio_map() {
    if (train_x_.empty()) return;
    gp_.fit(train_x_, train_y_);
    estimate_grid_.update(gp_, true);
}

} // namespace afar
