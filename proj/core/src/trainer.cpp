#include "oran/trainer.hpp"

#include <algorithm>
#include <numeric>

namespace oran::rl {

RunStreams RunStreams::make(std::uint64_t seed, std::uint64_t index) {
    return {make_rng(seed, Stream::environment, index), make_rng(seed, Stream::exploration, index),
            make_rng(seed, Stream::learner, index)};
}

EpisodeRunner::EpisodeRunner(RadioEnv& env, Agent& agent, RunStreams& streams, bool train)
    : env_(env),
      agent_(agent),
      streams_(streams),
      train_(train),
      acc_(env.num_rus(), env.num_ues(), env.config().mobility.dt_s) {}

void EpisodeRunner::begin(int episode, int total_episodes) {
    episode_ = episode;
    acc_ = EpisodeAccumulator(env_.num_rus(), env_.num_ues(), env_.config().mobility.dt_s);
    if (train_) agent_.begin_episode(episode, total_episodes);
    obs_ = env_.reset(streams_.env);
}

bool EpisodeRunner::step() {
    const ModeVector current = env_.modes();
    const ActionDecision decision = agent_.select_action(obs_, current, train_, streams_.explore);
    const StepOutcome out = env_.step(decision.modes, streams_.env);
    acc_.add(out, decision.modes);
    if (log_ != nullptr) {
        log_->push_back({episode_, acc_.steps() - 1, out.reward, out.power_total_w, out.unsatisfied_count,
                         std::accumulate(decision.modes.begin(), decision.modes.end(), 0), out.switches});
    }
    if (train_) {
        agent_.remember(obs_, decision, out.reward, out.observation, out.done);
        if (agent_.ready()) agent_.learn(streams_.learner);
    }
    obs_ = out.observation;
    return out.done;
}

EpisodeMetrics run_episode(RadioEnv& env, Agent& agent, RunStreams& streams, bool train, int episode,
                           int total_episodes, std::vector<StepRecord>* log) {
    EpisodeRunner runner(env, agent, streams, train);
    runner.set_step_log(log);
    runner.begin(episode, total_episodes);
    while (!runner.step()) {
    }
    return runner.finish();
}

TrainingResult train_centralized(const ScenarioConfig& cfg, std::uint64_t seed, const TrainingOptions& opts) {
    cfg.validate();
    TrainingResult result;
    Rng init = make_rng(seed, Stream::init);
    result.agent = make_agent(cfg.agent, cfg.num_rus, cfg.num_ues, init);
    RadioEnv env(cfg);
    RunStreams streams = RunStreams::make(seed);
    result.episodes.reserve(static_cast<std::size_t>(cfg.episodes));
    for (int ep = 0; ep < cfg.episodes; ++ep) {
        const EpisodeMetrics m = run_episode(env, *result.agent, streams, true, ep, cfg.episodes,
                                             opts.record_steps ? &result.steps : nullptr);
        result.episodes.push_back(m);
        if (opts.on_episode) opts.on_episode(m);
    }
    return result;
}

std::vector<EpisodeMetrics> evaluate_policy(const ScenarioConfig& cfg, const PolicyFn& policy, std::uint64_t seed,
                                            int episodes, std::uint64_t stream_offset) {
    RadioEnv env(cfg);
    std::vector<EpisodeMetrics> out;
    out.reserve(static_cast<std::size_t>(std::max(episodes, 0)));
    for (int ep = 0; ep < episodes; ++ep) {
        Rng rng = make_rng(seed, Stream::evaluation, stream_offset + static_cast<std::uint64_t>(ep));
        EpisodeAccumulator acc(env.num_rus(), env.num_ues(), cfg.mobility.dt_s);
        Observation obs = env.reset(rng);
        bool done = false;
        while (!done) {
            env.advance(rng);
            const ModeVector action = policy(env, obs);
            const StepOutcome out = env.apply(action);
            acc.add(out, action);
            obs = out.observation;
            done = out.done;
        }
        out.push_back(acc.finish(ep));
    }
    return out;
}

PolicyFn greedy_policy(Agent& agent) {
    return [&agent](const RadioEnv& env, const Observation& obs) {
        Rng unused(0);
        return agent.select_action(obs, env.modes(), false, unused).modes;
    };
}

}  // namespace oran::rl
