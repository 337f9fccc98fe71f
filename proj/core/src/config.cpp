#include "oran/config.hpp"

#include <cmath>
#include <string>

namespace oran {

namespace {

int grid_columns(int count) {
    int cols = 1;
    while (cols * cols < count) ++cols;
    return cols;
}

void require(bool ok, const char* field, const std::string& message) {
    if (!ok) throw ConfigError(field, message);
}

}  // namespace

std::string to_string(Layout l) {
    switch (l) {
        case Layout::single_500: return "single_500";
        case Layout::single_1000: return "single_1000";
        case Layout::composite_1000: return "composite_1000";
        case Layout::multi_region: return "multi_region";
        case Layout::custom: return "custom";
    }
    return "custom";
}

std::string to_string(AgentKind k) {
    switch (k) {
        case AgentKind::td3: return "td3";
        case AgentKind::dqn_single: return "dqn_single";
        case AgentKind::dqn_multi: return "dqn_multi";
    }
    return "td3";
}

std::string to_string(AggregationGranularity g) {
    return g == AggregationGranularity::episodes ? "episodes" : "steps";
}

std::string to_string(AggregationWeighting w) {
    switch (w) {
        case AggregationWeighting::uniform: return "uniform";
        case AggregationWeighting::ue_count: return "ue_count";
        case AggregationWeighting::explicit_weights: return "explicit";
    }
    return "uniform";
}

Layout layout_from_string(const std::string& s) {
    if (s == "single_500") return Layout::single_500;
    if (s == "single_1000") return Layout::single_1000;
    if (s == "composite_1000") return Layout::composite_1000;
    if (s == "multi_region") return Layout::multi_region;
    if (s == "custom") return Layout::custom;
    throw ConfigError("layout", "unknown layout '" + s + "'");
}

AgentKind agent_kind_from_string(const std::string& s) {
    if (s == "td3") return AgentKind::td3;
    if (s == "dqn_single" || s == "dqnsa") return AgentKind::dqn_single;
    if (s == "dqn_multi" || s == "dqnma") return AgentKind::dqn_multi;
    throw ConfigError("agent.kind", "unknown agent kind '" + s + "'");
}

AggregationGranularity granularity_from_string(const std::string& s) {
    if (s == "episodes") return AggregationGranularity::episodes;
    if (s == "steps") return AggregationGranularity::steps;
    throw ConfigError("federated.granularity", "expected 'episodes' or 'steps', got '" + s + "'");
}

AggregationWeighting weighting_from_string(const std::string& s) {
    if (s == "uniform") return AggregationWeighting::uniform;
    if (s == "ue_count") return AggregationWeighting::ue_count;
    if (s == "explicit") return AggregationWeighting::explicit_weights;
    throw ConfigError("federated.weighting", "unknown weighting '" + s + "'");
}

double ScenarioConfig::p_max_w() const {
    return static_cast<double>(num_rus) * (power.p_active_w + power.p_tx_w);
}

double ScenarioConfig::subregion_side() const {
    return subregion_side_m > 0.0 ? subregion_side_m : area_side_m;
}

Rect ScenarioConfig::subregion_rect(int j) const {
    if (subregion_count <= 1) return Rect{0.0, 0.0, area_side_m};
    const int cols = grid_columns(subregion_count);
    const double side = subregion_side();
    return Rect{(j % cols) * side, (j / cols) * side, side};
}

ScenarioConfig ScenarioConfig::region_config(int j) const {
    if (j < 0 || j >= subregion_count) throw std::out_of_range("region index out of range");
    ScenarioConfig r = *this;
    r.name = name + "/region_" + std::to_string(j);
    r.layout = Layout::custom;
    r.num_rus = rus_per_subregion();
    r.num_ues = ues_per_subregion();
    r.area_side_m = subregion_side();
    r.subregion_count = 1;
    r.subregion_side_m = 0.0;
    r.ru_positions.clear();
    if (!ru_positions.empty()) {
        const Rect rect = subregion_rect(j);
        for (const Point& p : ru_positions) {
            int owner = 0;
            while (owner < subregion_count && !subregion_rect(owner).contains(p)) ++owner;
            if (owner == j) r.ru_positions.push_back({p.x - rect.x0, p.y - rect.y0});
        }
    }
    return r;
}

void ScenarioConfig::validate() const {
    require(num_rus >= 1, "num_rus", "must be >= 1");
    require(num_ues >= 1, "num_ues", "must be >= 1");
    require(area_side_m > 0.0, "area_side_m", "must be > 0");
    require(episode_length >= 1, "episode_length", "must be >= 1");
    require(episodes >= 1, "episodes", "must be >= 1");
    require(eval_episodes >= 1, "eval_episodes", "must be >= 1");
    require(subregion_count >= 1, "subregions.count", "must be >= 1");

    try {
        channel.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("channel", e.what());
    }

    require(power.p_active_w >= 0.0, "power.p_active_w", "must be >= 0");
    require(power.p_sleep_w >= 0.0, "power.p_sleep_w", "must be >= 0");
    require(power.p_tx_w > 0.0, "power.p_tx_w", "must be > 0");
    require(power.pa_efficiency > 0.0 && power.pa_efficiency <= 1.0, "power.pa_efficiency",
            "must be in (0, 1]");
    require(power.v_trans_w >= 0.0, "power.v_trans_w", "must be >= 0");
    require(power.prbs_per_ru >= 1, "power.prbs_per_ru", "must be >= 1");
    require(traffic.rate_min_bps > 0.0, "traffic.rate_min_bps", "must be > 0");
    require(traffic.rate_norm_factor > 0.0, "traffic.rate_norm_factor", "must be > 0");
    require(mobility.speed_mean_mps >= 0.0, "mobility.speed_mean_mps", "must be >= 0");
    require(mobility.speed_std_mps >= 0.0, "mobility.speed_std_mps", "must be >= 0");
    require(mobility.dt_s > 0.0, "mobility.dt_s", "must be > 0");
    require(mobility.heading_jitter_rad >= 0.0 && mobility.heading_jitter_rad <= 1.0,
            "mobility.heading_jitter_rad", "must be in [0, 1] rad");
    require(reward.w1 >= 0.0, "reward.w1", "must be >= 0");
    require(reward.w2 >= 0.0, "reward.w2", "must be >= 0");

    require(agent.gamma >= 0.0 && agent.gamma <= 1.0, "agent.gamma", "must be in [0, 1]");
    require(agent.tau >= 0.0 && agent.tau <= 1.0, "agent.tau", "must be in [0, 1]");
    require(agent.batch_size >= 1, "agent.batch_size", "must be >= 1");
    require(agent.replay_capacity >= agent.batch_size, "agent.replay_capacity",
            "must be >= batch_size");
    require(agent.td3.policy_delay >= 1, "agent.td3.policy_delay", "must be >= 1");
    require(agent.td3.noise_clip >= 0.0, "agent.td3.noise_clip", "must be >= 0");
    require(agent.td3.sigma_explore >= 0.0, "agent.td3.sigma_explore", "must be >= 0");
    require(agent.td3.sigma_target >= 0.0, "agent.td3.sigma_target", "must be >= 0");
    for (int h : agent.td3.actor_hidden) require(h >= 1, "agent.td3.actor_hidden", "sizes must be >= 1");
    for (int h : agent.td3.critic_hidden) require(h >= 1, "agent.td3.critic_hidden", "sizes must be >= 1");
    for (int h : agent.dqn.hidden) require(h >= 1, "agent.dqn.hidden", "sizes must be >= 1");
    require(agent.dqn.epsilon_start >= 0.0 && agent.dqn.epsilon_start <= 1.0,
            "agent.dqn.epsilon_start", "must be in [0, 1]");
    require(agent.dqn.epsilon_end >= 0.0 && agent.dqn.epsilon_end <= 1.0, "agent.dqn.epsilon_end",
            "must be in [0, 1]");
    require(agent.dqn.epsilon_decay_fraction > 0.0 && agent.dqn.epsilon_decay_fraction <= 1.0,
            "agent.dqn.epsilon_decay_fraction", "must be in (0, 1]");
    require(agent.kind != AgentKind::dqn_multi || rus_per_subregion() <= 16, "agent.kind",
            "dqn_multi needs 2^M outputs and is limited to M <= 16 RUs per agent");

    require(federated.frequency >= 1, "federated.frequency", "must be >= 1");
    if (federated.weighting == AggregationWeighting::explicit_weights) {
        require(static_cast<int>(federated.weights.size()) == subregion_count, "federated.weights",
                "needs one weight per region");
        for (double w : federated.weights) require(w > 0.0, "federated.weights", "must be > 0");
    }

    switch (layout) {
        case Layout::single_500:
            require(subregion_count == 1, "subregions.count", "single_500 has one region");
            require(area_side_m == 500.0, "area_side_m", "single_500 requires L = 500");
            break;
        case Layout::single_1000:
            require(subregion_count == 1, "subregions.count", "single_1000 has one region");
            require(area_side_m == 1000.0, "area_side_m", "single_1000 requires L = 1000");
            break;
        case Layout::composite_1000:
            require(subregion_count == 4, "subregions.count",
                    "composite_1000 is made of exactly four 500 m subregions");
            require(area_side_m == 1000.0, "area_side_m", "composite_1000 requires L = 1000");
            require(subregion_side() == 500.0, "subregions.side_m", "composite_1000 subregions are 500 m");
            require(num_rus == 24, "num_rus", "composite_1000 has 6 RUs in each of 4 subregions");
            break;
        case Layout::multi_region:
            require(subregion_count >= 2, "subregions.count", "multi_region needs >= 2 subregions");
            break;
        case Layout::custom:
            require(subregion_count == 1, "subregions.count", "custom layout is single-region");
            break;
    }

    if (subregion_count > 1) {
        require(num_rus % subregion_count == 0, "num_rus", "must divide evenly among subregions");
        require(num_ues % subregion_count == 0, "num_ues", "must divide evenly among subregions");
        require(subregion_side() > 0.0, "subregions.side_m", "must be > 0");
        const int cols = grid_columns(subregion_count);
        const int rows = (subregion_count + cols - 1) / cols;
        require(cols * subregion_side() <= area_side_m + 1e-9 &&
                    rows * subregion_side() <= area_side_m + 1e-9,
                "subregions.side_m", "subregion grid does not fit inside the area");
    }

    if (!ru_positions.empty()) {
        require(static_cast<int>(ru_positions.size()) == num_rus, "ru_positions",
                "must list exactly num_rus coordinates");
        const Rect area{0.0, 0.0, area_side_m};
        for (const Point& p : ru_positions) require(area.contains(p), "ru_positions", "outside the area");
        if (subregion_count > 1) {
            for (int j = 0; j < subregion_count; ++j) {
                require(region_config(j).ru_positions.size() ==
                            static_cast<std::size_t>(rus_per_subregion()),
                        "ru_positions", "each subregion must hold the same number of RUs");
            }
        }
    }
}

}  // namespace oran
