#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oran/checkpoint.hpp"
#include "oran/config.hpp"
#include "oran/nn.hpp"
#include "oran/radio_env.hpp"
#include "oran/replay_buffer.hpp"
#include "oran/rng.hpp"

namespace oran::rl {

struct ActionDecision {
    ModeVector modes;                 // what the environment executes
    int index = -1;                   // DQN action index
    std::vector<double> continuous;   // TD3 pre-threshold action (mu + noise)
};

struct LearnStats {
    double critic_loss = 0.0;
    std::optional<double> actor_loss;
};

/// Trainable parameters plus BN statistics of one network; the only payload
/// that crosses a federated aggregation boundary.
struct NetworkParams {
    nn::ParamVector params;
    nn::ParamVector stats;
    friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

/// Named networks ("actor", "critic1", "critic2" or "q_net").
using ModelPayload = std::map<std::string, NetworkParams>;

class Agent {
public:
    virtual ~Agent() = default;

    virtual AgentKind kind() const = 0;
    virtual ActionDecision select_action(const Observation& obs, std::span<const int> current_modes,
                                         bool explore, Rng& rng) = 0;
    virtual void remember(const Observation& s, const ActionDecision& a, double reward,
                          const Observation& next, bool done) = 0;
    /// One gradient step on a sampled mini-batch. Requires ready().
    virtual LearnStats learn(Rng& rng) = 0;
    virtual void begin_episode(int /*episode*/, int /*total_episodes*/) {}

    /// Online networks shared with the aggregator.
    virtual ModelPayload export_model() const = 0;
    /// Overwrites online AND target networks with the payload.
    virtual void import_model(const ModelPayload& model) = 0;
    virtual void reset_optimizers() = 0;

    virtual nn::CheckpointFile checkpoint() const = 0;
    virtual void load_checkpoint(const nn::CheckpointFile& file) = 0;

    const ReplayBuffer& buffer() const { return buffer_; }
    bool ready() const { return buffer_.size() >= static_cast<std::size_t>(batch_size_); }
    int batch_size() const { return batch_size_; }

protected:
    Agent(std::size_t capacity, int batch_size) : buffer_(capacity), batch_size_(batch_size) {}
    ReplayBuffer buffer_;
    int batch_size_;
};

/// Builds the agent the scenario asks for, sized for `num_rus` RUs and
/// `num_ues` UEs (one region's worth in federated runs).
std::unique_ptr<Agent> make_agent(const AgentConfig& cfg, int num_rus, int num_ues, Rng& init_rng);

NetworkParams network_params(const nn::MlpNetwork& net);
void load_network_params(nn::MlpNetwork& net, const NetworkParams& p);

}  // namespace oran::rl
