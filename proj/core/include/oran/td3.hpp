#pragma once

#include <span>
#include <vector>

#include "oran/agent.hpp"

namespace oran::rl {

/// Elementwise a > 0.5.
ModeVector threshold_action(std::span<const double> continuous);

/// Quantities of the clipped double-Q target for one mini-batch.
struct TargetBreakdown {
    nn::Matrix target_actions;  // what the target critics were fed
    nn::Vector q1_next;
    nn::Vector q2_next;
    nn::Vector y;
};

class Td3Agent final : public Agent {
public:
    Td3Agent(int num_rus, int obs_dim, const AgentConfig& cfg, Rng& init_rng);

    AgentKind kind() const override { return AgentKind::td3; }
    ActionDecision select_action(const Observation& obs, std::span<const int> current_modes,
                                 bool explore, Rng& rng) override;
    void remember(const Observation& s, const ActionDecision& a, double reward,
                  const Observation& next, bool done) override;
    LearnStats learn(Rng& rng) override;

    ModelPayload export_model() const override;
    void import_model(const ModelPayload& model) override;
    void reset_optimizers() override;

    nn::CheckpointFile checkpoint() const override;
    void load_checkpoint(const nn::CheckpointFile& file) override;

    /// y = r + gamma (1 - done) min(Q1', Q2') with smoothed, clipped target actions.
    TargetBreakdown compute_targets(std::span<const Transition* const> batch, Rng& rng) const;

    /// Deterministic actor output mu(s) in eval mode.
    std::vector<double> policy(const Observation& obs) const;

    long learn_calls() const { return learn_calls_; }
    long actor_updates() const { return actor_updates_; }

    const nn::MlpNetwork& actor() const { return actor_; }
    const nn::MlpNetwork& critic1() const { return critic1_; }
    const nn::MlpNetwork& critic2() const { return critic2_; }
    const nn::MlpNetwork& actor_target() const { return actor_target_; }
    const nn::MlpNetwork& critic1_target() const { return critic1_target_; }
    const nn::MlpNetwork& critic2_target() const { return critic2_target_; }

private:
    int num_rus_;
    AgentConfig cfg_;
    nn::MlpNetwork actor_, critic1_, critic2_;
    nn::MlpNetwork actor_target_, critic1_target_, critic2_target_;
    nn::AdamState actor_opt_, critic1_opt_, critic2_opt_;
    long learn_calls_ = 0;
    long actor_updates_ = 0;
};

}  // namespace oran::rl
