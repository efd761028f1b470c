// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "afar/channel.hpp"
#include "afar/config.hpp"
#include "afar/gp.hpp"
#include "afar/vehicle.hpp"

namespace afar {

/// What a policy hands back after each measurement. Commands are clamped to
/// the UAV fence by the episode loop; estimates may lie anywhere inside the
/// rover fence. The accepted/rejected flags say whether this measurement
/// completed a conditioned sample (a leg average, a full buffer, a quality
/// window) and whether that sample was kept or discarded.
struct StrategyDecision {
    std::optional<WaypointCommand> command;
    std::optional<GeoPoint> estimate;
    bool sample_accepted = false;
    bool sample_rejected = false;
};

/// Event-driven search policy: one measurement in, one decision out. A
/// strategy instance serves exactly one episode and is strictly
/// single-threaded; all per-episode state lives inside it.
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual std::string_view name() const = 0;
    virtual std::string_view phase() const = 0;
    virtual StrategyDecision on_measurement(const Measurement& m, const VehicleState& uav,
                                            double t) = 0;

    /// Radio-map export hook for GP-backed policies. finalize_radio_map()
    /// fills in posterior variance before the grid is written out.
    virtual void finalize_radio_map() {}
    virtual const RadioMapGrid* radio_map() const { return nullptr; }
};

/// Builds the policy named by cfg.strategy. Throws ConfigError for unknown
/// names.
std::unique_ptr<Strategy> make_strategy(const EpisodeConfig& cfg);

const std::vector<std::string>& all_strategy_names();
bool strategy_uses_radio_map(std::string_view name);

} // namespace afar
