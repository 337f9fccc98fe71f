#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "oran/agent.hpp"
#include "oran/metrics.hpp"
#include "oran/radio_env.hpp"

namespace oran::rl {

/// Independent streams for one learner so that changing, say, the number of
/// exploration draws never shifts the channel realizations.
struct RunStreams {
    Rng env;
    Rng explore;
    Rng learner;

    static RunStreams make(std::uint64_t seed, std::uint64_t index = 0);
};

/// Drives one agent through episodes slot by slot. Federated step-level
/// aggregation interleaves several runners between calls to step().
class EpisodeRunner {
public:
    EpisodeRunner(RadioEnv& env, Agent& agent, RunStreams& streams, bool train);

    void begin(int episode, int total_episodes);
    /// One slot: observe, act, store, learn. Returns true once the episode ends.
    bool step();
    bool done() const { return env_.done(); }
    EpisodeMetrics finish() const { return acc_.finish(episode_); }
    void set_step_log(std::vector<StepRecord>* log) { log_ = log; }

private:
    RadioEnv& env_;
    Agent& agent_;
    RunStreams& streams_;
    bool train_;
    int episode_ = 0;
    Observation obs_;
    EpisodeAccumulator acc_;
    std::vector<StepRecord>* log_ = nullptr;
};

EpisodeMetrics run_episode(RadioEnv& env, Agent& agent, RunStreams& streams, bool train, int episode,
                           int total_episodes, std::vector<StepRecord>* log = nullptr);

struct TrainingOptions {
    bool record_steps = false;
    std::function<void(const EpisodeMetrics&)> on_episode;
};

struct TrainingResult {
    std::vector<EpisodeMetrics> episodes;
    std::vector<StepRecord> steps;
    std::unique_ptr<Agent> agent;
};

/// One agent controlling every RU of the scenario.
TrainingResult train_centralized(const ScenarioConfig& cfg, std::uint64_t seed, const TrainingOptions& opts = {});

/// Decides the mode vector for the current slot. Called after the channel of
/// the slot has been drawn; `obs` is what a learning agent would see.
using PolicyFn = std::function<ModeVector(const RadioEnv& env, const Observation& obs)>;

/// Runs `episodes` fresh evaluation episodes; episode i draws its environment
/// from the evaluation stream with index stream_offset + i, so every policy
/// sees the same channel sequence for a given seed.
std::vector<EpisodeMetrics> evaluate_policy(const ScenarioConfig& cfg, const PolicyFn& policy, std::uint64_t seed,
                                            int episodes, std::uint64_t stream_offset = 0);

/// Greedy (exploration-free) policy of a trained agent.
PolicyFn greedy_policy(Agent& agent);

}  // namespace oran::rl
