#include "oran/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "batch_util.hpp"

namespace oran::rl {

int dqn_action_count(DqnVariant v, int num_rus) {
    if (num_rus < 1) throw std::invalid_argument("num_rus must be >= 1");
    if (v == DqnVariant::single) return 2 * num_rus;
    if (num_rus > 16) throw std::invalid_argument("joint-action DQN supports at most 16 RUs");
    return 1 << num_rus;
}

ModeVector decode_multi_action(int index, int num_rus) {
    if (num_rus < 1 || num_rus > 30 || index < 0 || index >= (1 << num_rus)) {
        throw std::out_of_range("joint action index " + std::to_string(index) + " out of range");
    }
    ModeVector modes(static_cast<std::size_t>(num_rus));
    for (int m = 0; m < num_rus; ++m) modes[static_cast<std::size_t>(m)] = (index >> (num_rus - 1 - m)) & 1;
    return modes;
}

int encode_multi_action(std::span<const int> modes) {
    int index = 0;
    for (int a : modes) index = (index << 1) | (a != 0 ? 1 : 0);
    return index;
}

ModeVector apply_single_action(std::span<const int> current, int index) {
    const int m = static_cast<int>(current.size());
    if (index < 0 || index >= 2 * m) throw std::out_of_range("single-RU action index out of range");
    ModeVector modes(current.begin(), current.end());
    if (index < m) {
        modes[static_cast<std::size_t>(index)] = 1;
    } else {
        modes[static_cast<std::size_t>(index - m)] = 0;
    }
    return modes;
}

int argmax_lowest(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("argmax of an empty vector");
    return static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
}

DqnAgent::DqnAgent(DqnVariant variant, int num_rus, int obs_dim, const AgentConfig& cfg, Rng& init_rng)
    : Agent(static_cast<std::size_t>(cfg.replay_capacity), cfg.batch_size),
      variant_(variant),
      num_rus_(num_rus),
      cfg_(cfg),
      epsilon_(cfg.dqn.epsilon_start) {
    const int outputs = dqn_action_count(variant, num_rus);
    q_ = nn::MlpNetwork(nn::make_mlp(obs_dim, cfg.dqn.hidden, outputs, nn::Activation::relu,
                                     nn::Activation::linear),
                        init_rng);
    q_target_ = q_;
    opt_ = nn::AdamState::for_params(q_.param_count(), cfg.dqn.lr);
}

AgentKind DqnAgent::kind() const {
    return variant_ == DqnVariant::single ? AgentKind::dqn_single : AgentKind::dqn_multi;
}

int DqnAgent::greedy_index(const Observation& obs) const {
    const nn::Vector q = q_.predict_one(obs.span());
    return argmax_lowest(std::span<const double>(q.data(), static_cast<std::size_t>(q.size())));
}

ActionDecision DqnAgent::select_action(const Observation& obs, std::span<const int> current_modes,
                                       bool explore, Rng& rng) {
    if (static_cast<int>(current_modes.size()) != num_rus_) {
        throw std::invalid_argument("current mode vector has the wrong length");
    }
    ActionDecision d;
    bool random = false;
    if (explore) random = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon_;
    if (random) {
        d.index = std::uniform_int_distribution<int>(0, num_actions() - 1)(rng);
    } else {
        d.index = greedy_index(obs);
    }
    d.modes = variant_ == DqnVariant::single ? apply_single_action(current_modes, d.index)
                                             : decode_multi_action(d.index, num_rus_);
    return d;
}

void DqnAgent::remember(const Observation& s, const ActionDecision& a, double reward,
                        const Observation& next, bool done) {
    if (a.index < 0 || a.index >= num_actions()) throw std::invalid_argument("DQN transition without a valid index");
    Transition t;
    t.state = s.values;
    t.action_index = a.index;
    t.reward = reward;
    t.next_state = next.values;
    t.done = done;
    buffer_.push(std::move(t));
}

LearnStats DqnAgent::learn(Rng& rng) {
    const nn::DenormalFlushGuard flush;
    const auto batch = buffer_.sample(static_cast<std::size_t>(batch_size_), rng);
    const auto bm = detail::to_matrices(batch, false);
    const nn::Matrix q_next = q_target_.predict(bm.next_states);
    const nn::Vector y = bm.rewards + cfg_.gamma * bm.not_done.cwiseProduct(q_next.rowwise().maxCoeff());

    q_.set_training(true);
    const nn::Matrix q = q_.forward(bm.states);
    const auto b = static_cast<double>(batch.size());
    nn::Matrix upstream = nn::Matrix::Zero(q.rows(), q.cols());
    double loss = 0.0;
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
        const int a = batch[static_cast<std::size_t>(i)]->action_index;
        const double err = q(i, a) - y(i);
        loss += err * err;
        upstream(i, a) = 2.0 * err / b;
    }
    const nn::Gradients g = q_.backward(upstream);
    q_.set_training(false);
    nn::adam_step(q_, g.params, opt_);
    nn::soft_update(q_target_, q_, cfg_.tau);
    return {loss / b, std::nullopt};
}

void DqnAgent::begin_episode(int episode, int total_episodes) {
    const double horizon = cfg_.dqn.epsilon_decay_fraction * std::max(total_episodes, 1);
    const double frac = std::clamp(episode / horizon, 0.0, 1.0);
    epsilon_ = cfg_.dqn.epsilon_start + (cfg_.dqn.epsilon_end - cfg_.dqn.epsilon_start) * frac;
}

ModelPayload DqnAgent::export_model() const { return {{"q_net", network_params(q_)}}; }

void DqnAgent::import_model(const ModelPayload& model) {
    auto it = model.find("q_net");
    if (it == model.end()) throw std::invalid_argument("payload lacks 'q_net'");
    load_network_params(q_, it->second);
    load_network_params(q_target_, it->second);
}

void DqnAgent::reset_optimizers() { opt_.reset(); }

nn::CheckpointFile DqnAgent::checkpoint() const {
    nn::CheckpointFile f;
    f.kind = to_string(kind());
    f.networks["q_net"] = nn::snapshot(q_, &opt_);
    f.networks["q_target"] = nn::snapshot(q_target_);
    f.meta["num_rus"] = std::to_string(num_rus_);
    f.meta["epsilon"] = std::to_string(epsilon_);
    return f;
}

void DqnAgent::load_checkpoint(const nn::CheckpointFile& file) {
    if (file.kind != to_string(kind())) throw std::runtime_error("checkpoint kind '" + file.kind + "' does not match");
    const auto& q = detail::require_network(file, "q_net", q_);
    const auto& qt = detail::require_network(file, "q_target", q_target_);
    q_ = nn::restore(q);
    q_target_ = nn::restore(qt);
    if (q.adam) opt_ = *q.adam;
}

}  // namespace oran::rl
