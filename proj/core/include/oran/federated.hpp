#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "oran/agent.hpp"
#include "oran/metrics.hpp"
#include "oran/trainer.hpp"

namespace oran::fed {

/// Elementwise sum_j w_j p_j / sum_j w_j. Evaluated as p_0 + sum_j (w_j / W)(p_j - p_0)
/// so that identical inputs come back bit-for-bit.
nn::ParamVector fedavg(std::span<const nn::ParamVector> params, std::span<const double> weights);

struct GlobalModel {
    rl::ModelPayload networks;
    long version = 0;
};

struct AggregationConfig {
    int frequency = 10;
    AggregationGranularity granularity = AggregationGranularity::episodes;
    std::vector<double> weights;  // one per region, all > 0
    bool include_bn_stats = true;
    bool reset_optimizer = false;
};

/// One regional worker: a disjoint slice of the scenario with its own
/// environment, agent and random streams.
struct RegionHandle {
    int region_id = 0;
    ScenarioConfig scenario;
    std::unique_ptr<RadioEnv> env;
    std::unique_ptr<rl::Agent> agent;
    rl::RunStreams streams;
    int episode = 0;            // episodes completed
    long steps = 0;             // steps completed
    bool in_episode = false;
    std::unique_ptr<rl::EpisodeRunner> runner;
    std::vector<EpisodeMetrics> history;
};

/// Averages regional reports network by network. Throws when a report is
/// missing (std::nullopt) or payloads disagree in shape.
GlobalModel average_reports(std::span<const std::optional<rl::ModelPayload>> reports,
                            std::span<const double> weights, bool include_bn_stats, long version);

/// Installs the global model as every region's online and target networks.
/// Without BN statistics in the payload each region keeps its own.
void distribute(const GlobalModel& global, std::span<RegionHandle> regions, bool reset_optimizer);

/// Collect, average, distribute. Both variants check the agent kind.
GlobalModel aggregate_round_td3(std::span<RegionHandle> regions, const AggregationConfig& cfg,
                                const GlobalModel& previous);
GlobalModel aggregate_round_dqn(std::span<RegionHandle> regions, const AggregationConfig& cfg,
                                const GlobalModel& previous);

/// Aggregation weights resolved from the scenario's federated block.
std::vector<double> region_weights(const ScenarioConfig& cfg);

struct FederatedOptions {
    std::function<void(const GlobalModel&, std::span<const RegionHandle>)> on_round;
    std::function<void(const EpisodeMetrics&)> on_episode;  // global series
};

struct FederatedResult {
    std::vector<EpisodeMetrics> global;               // combine_regions per episode
    std::vector<std::vector<EpisodeMetrics>> regions;
    int rounds = 0;                                   // distributed aggregations
    bool final_average = false;                       // trailing partial interval averaged
    GlobalModel final_model;
    std::unique_ptr<rl::Agent> global_agent;          // holds final_model
};

/// Every region trains locally; every F episodes (or steps) all regions meet
/// at a barrier, are averaged and resume from the global model. A trailing
/// interval shorter than F is averaged once more into final_model but not
/// redistributed or counted as a round.
FederatedResult run_federated(const ScenarioConfig& cfg, std::uint64_t seed, const FederatedOptions& opts = {});

// ---- file exchange ------------------------------------------------------------

std::filesystem::path region_params_path(const std::filesystem::path& dir, long round, int region);
std::filesystem::path global_params_path(const std::filesystem::path& dir, long round);
void write_payload(const std::filesystem::path& path, const rl::ModelPayload& payload, const rl::Agent& like);
rl::ModelPayload read_payload(const std::filesystem::path& path);

}  // namespace oran::fed
