#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oran/channel.hpp"

namespace oran {

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned square [x0, x0 + side] x [y0, y0 + side].
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double side = 0.0;

    Point center() const { return {x0 + side / 2.0, y0 + side / 2.0}; }
    bool contains(Point p) const {
        return p.x >= x0 && p.x <= x0 + side && p.y >= y0 && p.y <= y0 + side;
    }
    friend bool operator==(const Rect&, const Rect&) = default;
};

/// Raised for any invalid scenario; `field` names the offending JSON path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class Layout { single_500, single_1000, composite_1000, multi_region, custom };
enum class AgentKind { td3, dqn_single, dqn_multi };
enum class AggregationGranularity { episodes, steps };
enum class AggregationWeighting { uniform, ue_count, explicit_weights };

std::string to_string(Layout);
std::string to_string(AgentKind);
std::string to_string(AggregationGranularity);
std::string to_string(AggregationWeighting);
Layout layout_from_string(const std::string&);
AgentKind agent_kind_from_string(const std::string&);
AggregationGranularity granularity_from_string(const std::string&);
AggregationWeighting weighting_from_string(const std::string&);

struct PowerParams {
    double p_active_w = 20.0;
    double p_sleep_w = 5.0;
    double p_tx_w = 1.0;
    double pa_efficiency = 0.5;
    double v_trans_w = 3.0;
    int prbs_per_ru = 100;
    /// Charge V_trans on both switching directions (|a_t - a_{t-1}|) instead of
    /// sleep-to-active only.
    bool charge_deactivation = false;
};

struct TrafficParams {
    double rate_min_bps = 3e6;
    /// Observation rates are divided by rate_norm_factor * rate_min_bps.
    double rate_norm_factor = 2.0;
};

struct MobilityParams {
    double speed_mean_mps = 2.0;
    double speed_std_mps = 0.5;
    double dt_s = 1.0;
    /// Per-UE fixed deviation from the radial direction, drawn in [-j, j].
    double heading_jitter_rad = 0.5;
};

struct RewardWeights {
    double w1 = 1.0;
    double w2 = 5.0;
};

struct Td3Params {
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;
    double sigma_explore = 0.1;
    double sigma_target = 0.2;
    double noise_clip = 0.5;
    int policy_delay = 2;
    bool store_continuous = false;
    bool actor_batch_norm = true;
    std::vector<int> actor_hidden{512, 256, 128};
    std::vector<int> critic_hidden{512, 256, 128};
};

struct DqnParams {
    double lr = 1e-4;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    double epsilon_decay_fraction = 0.6;
    std::vector<int> hidden{512, 384, 256, 128};
};

struct AgentConfig {
    AgentKind kind = AgentKind::td3;
    double gamma = 0.99;
    double tau = 0.01;
    int batch_size = 128;
    int replay_capacity = 50000;
    Td3Params td3;
    DqnParams dqn;
};

struct FederatedConfig {
    int frequency = 10;
    AggregationGranularity granularity = AggregationGranularity::episodes;
    AggregationWeighting weighting = AggregationWeighting::uniform;
    std::vector<double> weights;  // used with explicit_weights
    bool include_bn_stats = true;
    bool reset_optimizer = false;
    bool parallel = false;
    /// Every region uses the same seed (identical trajectories); test aid.
    bool shared_region_seed = false;
    std::string exchange_dir;  // empty: in-process exchange
};

/// Complete description of one experiment.
struct ScenarioConfig {
    std::string name = "custom";
    Layout layout = Layout::custom;
    int num_rus = 6;
    int num_ues = 20;
    double area_side_m = 500.0;
    std::vector<Point> ru_positions;  // empty: grid placement
    int subregion_count = 1;
    double subregion_side_m = 0.0;  // 0: same as area_side_m

    int episode_length = 200;
    int episodes = 2000;
    int eval_episodes = 20;
    std::uint64_t seed = 42;

    channel::ChannelParams channel;
    PowerParams power;
    TrafficParams traffic;
    MobilityParams mobility;
    RewardWeights reward;
    AgentConfig agent;
    FederatedConfig federated;

    /// M (P_active + P_TX): the reward normalizer.
    double p_max_w() const;
    double subregion_side() const;
    int rus_per_subregion() const { return num_rus / subregion_count; }
    int ues_per_subregion() const { return num_ues / subregion_count; }
    Rect subregion_rect(int j) const;
    bool is_multi_region() const { return subregion_count > 1; }

    /// Standalone single-region scenario for subregion j (local coordinates).
    ScenarioConfig region_config(int j) const;

    /// Throws ConfigError naming the first violated field.
    void validate() const;
};

}  // namespace oran
