#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "oran/nn.hpp"
#include "oran/replay_buffer.hpp"

namespace oran::rl::detail {

struct BatchMatrices {
    nn::Matrix states;
    nn::Matrix next_states;
    nn::Matrix actions;  // empty for DQN batches
    nn::Vector rewards;
    nn::Vector not_done;
};

inline BatchMatrices to_matrices(std::span<const Transition* const> batch, bool with_actions) {
    const auto b = static_cast<Eigen::Index>(batch.size());
    const auto sdim = static_cast<Eigen::Index>(batch.front()->state.size());
    BatchMatrices m;
    m.states.resize(b, sdim);
    m.next_states.resize(b, sdim);
    m.rewards.resize(b);
    m.not_done.resize(b);
    if (with_actions) m.actions.resize(b, static_cast<Eigen::Index>(batch.front()->action.size()));
    for (Eigen::Index i = 0; i < b; ++i) {
        const Transition& t = *batch[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(t.state.size()) != sdim ||
            static_cast<Eigen::Index>(t.next_state.size()) != sdim) {
            throw std::invalid_argument("transition state width mismatch");
        }
        for (Eigen::Index j = 0; j < sdim; ++j) {
            m.states(i, j) = t.state[static_cast<std::size_t>(j)];
            m.next_states(i, j) = t.next_state[static_cast<std::size_t>(j)];
        }
        if (with_actions) {
            if (static_cast<Eigen::Index>(t.action.size()) != m.actions.cols()) {
                throw std::invalid_argument("transition action width mismatch");
            }
            for (Eigen::Index j = 0; j < m.actions.cols(); ++j) m.actions(i, j) = t.action[static_cast<std::size_t>(j)];
        }
        m.rewards(i) = t.reward;
        m.not_done(i) = t.done ? 0.0 : 1.0;
    }
    return m;
}

inline nn::Matrix hcat(const nn::Matrix& a, const nn::Matrix& b) {
    nn::Matrix out(a.rows(), a.cols() + b.cols());
    out << a, b;
    return out;
}

inline const nn::NetworkCheckpoint& require_network(const nn::CheckpointFile& f, const std::string& name,
                                                    const nn::MlpNetwork& like) {
    auto it = f.networks.find(name);
    if (it == f.networks.end()) throw std::runtime_error("checkpoint lacks network '" + name + "'");
    if (it->second.specs != like.specs()) {
        throw std::runtime_error("checkpoint network '" + name + "' has a different topology");
    }
    return it->second;
}

}  // namespace oran::rl::detail
