#include "oran/agent.hpp"

#include <stdexcept>

#include "oran/dqn.hpp"
#include "oran/td3.hpp"

namespace oran::rl {

NetworkParams network_params(const nn::MlpNetwork& net) {
    return {net.extract_params(), net.extract_stats()};
}

void load_network_params(nn::MlpNetwork& net, const NetworkParams& p) {
    net.inject_params(p.params);
    net.inject_stats(p.stats);
}

std::unique_ptr<Agent> make_agent(const AgentConfig& cfg, int num_rus, int num_ues, Rng& init_rng) {
    const int obs = observation_size(num_rus, num_ues);
    switch (cfg.kind) {
        case AgentKind::td3: return std::make_unique<Td3Agent>(num_rus, obs, cfg, init_rng);
        case AgentKind::dqn_single:
            return std::make_unique<DqnAgent>(DqnVariant::single, num_rus, obs, cfg, init_rng);
        case AgentKind::dqn_multi:
            return std::make_unique<DqnAgent>(DqnVariant::multi, num_rus, obs, cfg, init_rng);
    }
    throw std::invalid_argument("unknown agent kind");
}

}  // namespace oran::rl
