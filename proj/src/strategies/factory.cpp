// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "afar/strategies.hpp"

namespace afar {

const std::vector<std::string>& all_strategy_names() {
    static const std::vector<std::string> names = {"baseline", "gradient", "nyu_bo",
                                                   "unt_recursive", "uga_gp"};
    return names;
}

bool strategy_uses_radio_map(std::string_view name) {
    return name == "nyu_bo" || name == "uga_gp";
}

std::unique_ptr<Strategy> make_strategy(const EpisodeConfig& cfg) {
    if (cfg.strategy == "baseline") return std::make_unique<BaselineStrategy>(cfg);
    if (cfg.strategy == "gradient") return std::make_unique<GradientStrategy>(cfg);
    if (cfg.strategy == "nyu_bo") return std::make_unique<NyuBoStrategy>(cfg);
    if (cfg.strategy == "unt_recursive") return std::make_unique<UntRecursiveStrategy>(cfg);
    if (cfg.strategy == "uga_gp") return std::make_unique<UgaGpStrategy>(cfg);
    throw ConfigError("strategy", "unknown strategy \"" + cfg.strategy + "\"");
}

} // namespace afar
