#pragma once

#include <span>

#include "oran/agent.hpp"

namespace oran::rl {

enum class DqnVariant {
    single,  // 2M outputs: switch one RU on (a < M) or off (a >= M)
    multi,   // 2^M outputs: one per joint activation vector
};

int dqn_action_count(DqnVariant v, int num_rus);

/// Joint action index to mode vector; RU 0 is the most significant bit.
ModeVector decode_multi_action(int index, int num_rus);
int encode_multi_action(std::span<const int> modes);

/// a < M switches RU a on, a >= M switches RU a - M off; other RUs keep their mode.
ModeVector apply_single_action(std::span<const int> current, int index);

/// First maximal entry.
int argmax_lowest(std::span<const double> values);

class DqnAgent final : public Agent {
public:
    DqnAgent(DqnVariant variant, int num_rus, int obs_dim, const AgentConfig& cfg, Rng& init_rng);

    AgentKind kind() const override;
    ActionDecision select_action(const Observation& obs, std::span<const int> current_modes,
                                 bool explore, Rng& rng) override;
    void remember(const Observation& s, const ActionDecision& a, double reward,
                  const Observation& next, bool done) override;
    LearnStats learn(Rng& rng) override;
    void begin_episode(int episode, int total_episodes) override;

    ModelPayload export_model() const override;
    void import_model(const ModelPayload& model) override;
    void reset_optimizers() override;

    nn::CheckpointFile checkpoint() const override;
    void load_checkpoint(const nn::CheckpointFile& file) override;

    DqnVariant variant() const { return variant_; }
    int num_actions() const { return q_.output_dim(); }
    double epsilon() const { return epsilon_; }
    void set_epsilon(double e) { epsilon_ = e; }
    int greedy_index(const Observation& obs) const;

    const nn::MlpNetwork& q_network() const { return q_; }
    const nn::MlpNetwork& target_network() const { return q_target_; }
    nn::MlpNetwork& q_network() { return q_; }

private:
    DqnVariant variant_;
    int num_rus_;
    AgentConfig cfg_;
    nn::MlpNetwork q_;
    nn::MlpNetwork q_target_;
    nn::AdamState opt_;
    double epsilon_;
};

}  // namespace oran::rl
