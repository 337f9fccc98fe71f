#include "oran/baselines.hpp"

#include <stdexcept>
#include <string>

#include "oran/dqn.hpp"

namespace oran {

ModeVector myopic_oracle_action(const NetworkState& state, const SlotChannel& links, const ScenarioConfig& cfg) {
    const int m = static_cast<int>(state.rus.size());
    if (m > kOracleMaxRus) {
        throw std::invalid_argument("myopic oracle enumerates 2^M actions and is limited to M <= " +
                                    std::to_string(kOracleMaxRus) + " (got " + std::to_string(m) + ")");
    }
    int best = -1;
    SlotEvaluation best_eval;
    for (int idx = 0; idx < (1 << m); ++idx) {
        const ModeVector action = rl::decode_multi_action(idx, m);
        const SlotEvaluation ev = evaluate_action(state, links, cfg, action);
        // Ascending enumeration: equal reward and equal count keeps the lower index.
        if (best < 0 || ev.reward > best_eval.reward ||
            (ev.reward == best_eval.reward && ev.active_rus < best_eval.active_rus)) {
            best = idx;
            best_eval = ev;
        }
    }
    return rl::decode_multi_action(best, m);
}

rl::PolicyFn all_on_policy() {
    return [](const RadioEnv& env, const Observation&) { return ModeVector(static_cast<std::size_t>(env.num_rus()), 1); };
}

rl::PolicyFn myopic_oracle_policy() {
    return [](const RadioEnv& env, const Observation&) {
        return myopic_oracle_action(env.state(), env.slot_channel(), env.config());
    };
}

std::vector<EpisodeMetrics> baseline_all_on(const ScenarioConfig& cfg, std::uint64_t seed, int episodes) {
    return rl::evaluate_policy(cfg, all_on_policy(), seed, episodes);
}

std::vector<EpisodeMetrics> baseline_myopic_oracle(const ScenarioConfig& cfg, std::uint64_t seed, int episodes) {
    if (cfg.num_rus > kOracleMaxRus) {
        throw std::invalid_argument("myopic oracle is limited to M <= " + std::to_string(kOracleMaxRus));
    }
    return rl::evaluate_policy(cfg, myopic_oracle_policy(), seed, episodes);
}

}  // namespace oran
