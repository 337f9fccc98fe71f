#include "oran/td3.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "batch_util.hpp"

namespace oran::rl {

ModeVector threshold_action(std::span<const double> continuous) {
    ModeVector modes(continuous.size());
    for (std::size_t i = 0; i < continuous.size(); ++i) modes[i] = continuous[i] > 0.5 ? 1 : 0;
    return modes;
}

Td3Agent::Td3Agent(int num_rus, int obs_dim, const AgentConfig& cfg, Rng& init_rng)
    : Agent(static_cast<std::size_t>(cfg.replay_capacity), cfg.batch_size), num_rus_(num_rus), cfg_(cfg) {
    if (num_rus < 1) throw std::invalid_argument("num_rus must be >= 1");
    actor_ = nn::MlpNetwork(nn::make_mlp(obs_dim, cfg.td3.actor_hidden, num_rus, nn::Activation::relu,
                                         nn::Activation::sigmoid, cfg.td3.actor_batch_norm),
                            init_rng);
    const auto critic_specs = nn::make_mlp(obs_dim + num_rus, cfg.td3.critic_hidden, 1, nn::Activation::relu,
                                           nn::Activation::linear);
    critic1_ = nn::MlpNetwork(critic_specs, init_rng);
    critic2_ = nn::MlpNetwork(critic_specs, init_rng);
    actor_target_ = actor_;
    critic1_target_ = critic1_;
    critic2_target_ = critic2_;
    actor_opt_ = nn::AdamState::for_params(actor_.param_count(), cfg.td3.actor_lr);
    critic1_opt_ = nn::AdamState::for_params(critic1_.param_count(), cfg.td3.critic_lr);
    critic2_opt_ = nn::AdamState::for_params(critic2_.param_count(), cfg.td3.critic_lr);
}

std::vector<double> Td3Agent::policy(const Observation& obs) const {
    const nn::Vector mu = actor_.predict_one(obs.span());
    return {mu.data(), mu.data() + mu.size()};
}

ActionDecision Td3Agent::select_action(const Observation& obs, std::span<const int> /*current_modes*/,
                                       bool explore, Rng& rng) {
    ActionDecision d;
    d.continuous = policy(obs);
    if (explore && cfg_.td3.sigma_explore > 0.0) {
        std::normal_distribution<double> noise(0.0, cfg_.td3.sigma_explore);
        for (double& a : d.continuous) a += noise(rng);
    }
    d.modes = threshold_action(d.continuous);
    return d;
}

void Td3Agent::remember(const Observation& s, const ActionDecision& a, double reward,
                        const Observation& next, bool done) {
    if (static_cast<int>(a.modes.size()) != num_rus_) throw std::invalid_argument("TD3 transition has the wrong action width");
    Transition t;
    t.state = s.values;
    if (cfg_.td3.store_continuous) {
        // Clamping keeps (a > 0.5) == executed mode.
        t.action.reserve(a.continuous.size());
        for (double v : a.continuous) t.action.push_back(std::clamp(v, 0.0, 1.0));
    } else {
        t.action.assign(a.modes.begin(), a.modes.end());
    }
    t.reward = reward;
    t.next_state = next.values;
    t.done = done;
    buffer_.push(std::move(t));
}

TargetBreakdown Td3Agent::compute_targets(std::span<const Transition* const> batch, Rng& rng) const {
    const auto bm = detail::to_matrices(batch, false);
    TargetBreakdown out;
    out.target_actions = actor_target_.predict(bm.next_states);
    std::normal_distribution<double> noise(0.0, cfg_.td3.sigma_target);
    const double c = cfg_.td3.noise_clip;
    for (Eigen::Index i = 0; i < out.target_actions.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.target_actions.cols(); ++j) {
            const double eps = cfg_.td3.sigma_target > 0.0 ? std::clamp(noise(rng), -c, c) : 0.0;
            const double a = out.target_actions(i, j) + eps;
            out.target_actions(i, j) = cfg_.td3.store_continuous ? std::clamp(a, 0.0, 1.0) : (a > 0.5 ? 1.0 : 0.0);
        }
    }
    const nn::Matrix x = detail::hcat(bm.next_states, out.target_actions);
    out.q1_next = critic1_target_.predict(x).col(0);
    out.q2_next = critic2_target_.predict(x).col(0);
    out.y = bm.rewards + cfg_.gamma * bm.not_done.cwiseProduct(out.q1_next.cwiseMin(out.q2_next));
    return out;
}

namespace {

double critic_step(nn::MlpNetwork& critic, nn::AdamState& opt, const nn::Matrix& x, const nn::Vector& y) {
    critic.set_training(true);
    const nn::Matrix q = critic.forward(x);
    const nn::Vector err = q.col(0) - y;
    const auto b = static_cast<double>(y.size());
    const nn::Gradients g = critic.backward(nn::Matrix(2.0 * err / b));
    critic.set_training(false);
    nn::adam_step(critic, g.params, opt);
    return err.squaredNorm() / b;
}

}  // namespace

LearnStats Td3Agent::learn(Rng& rng) {
    const nn::DenormalFlushGuard flush;
    const auto batch = buffer_.sample(static_cast<std::size_t>(batch_size_), rng);
    ++learn_calls_;
    const TargetBreakdown t = compute_targets(batch, rng);
    const auto bm = detail::to_matrices(batch, true);
    const nn::Matrix sa = detail::hcat(bm.states, bm.actions);

    LearnStats stats;
    stats.critic_loss = 0.5 * (critic_step(critic1_, critic1_opt_, sa, t.y) +
                               critic_step(critic2_, critic2_opt_, sa, t.y));

    if (learn_calls_ % cfg_.td3.policy_delay != 0) return stats;

    const auto b = static_cast<double>(batch.size());
    actor_.set_training(true);
    const nn::Matrix mu = actor_.forward(bm.states);
    critic1_.set_training(true);
    const nn::Matrix q = critic1_.forward(detail::hcat(bm.states, mu));
    const nn::Gradients gc = critic1_.backward(nn::Matrix::Constant(q.rows(), 1, -1.0 / b));
    critic1_.set_training(false);
    const nn::Gradients ga = actor_.backward(gc.input.rightCols(num_rus_));
    actor_.set_training(false);
    nn::adam_step(actor_, ga.params, actor_opt_);
    stats.actor_loss = -q.mean();
    ++actor_updates_;

    nn::soft_update(actor_target_, actor_, cfg_.tau);
    nn::soft_update(critic1_target_, critic1_, cfg_.tau);
    nn::soft_update(critic2_target_, critic2_, cfg_.tau);
    return stats;
}

ModelPayload Td3Agent::export_model() const {
    return {{"actor", network_params(actor_)},
            {"critic1", network_params(critic1_)},
            {"critic2", network_params(critic2_)}};
}

void Td3Agent::import_model(const ModelPayload& model) {
    const auto get = [&](const char* name) -> const NetworkParams& {
        auto it = model.find(name);
        if (it == model.end()) throw std::invalid_argument(std::string("payload lacks '") + name + "'");
        return it->second;
    };
    const NetworkParams& a = get("actor");
    const NetworkParams& c1 = get("critic1");
    const NetworkParams& c2 = get("critic2");
    load_network_params(actor_, a);
    load_network_params(actor_target_, a);
    load_network_params(critic1_, c1);
    load_network_params(critic1_target_, c1);
    load_network_params(critic2_, c2);
    load_network_params(critic2_target_, c2);
}

void Td3Agent::reset_optimizers() {
    actor_opt_.reset();
    critic1_opt_.reset();
    critic2_opt_.reset();
}

nn::CheckpointFile Td3Agent::checkpoint() const {
    nn::CheckpointFile f;
    f.kind = "td3";
    f.networks["actor"] = nn::snapshot(actor_, &actor_opt_);
    f.networks["critic1"] = nn::snapshot(critic1_, &critic1_opt_);
    f.networks["critic2"] = nn::snapshot(critic2_, &critic2_opt_);
    f.networks["actor_target"] = nn::snapshot(actor_target_);
    f.networks["critic1_target"] = nn::snapshot(critic1_target_);
    f.networks["critic2_target"] = nn::snapshot(critic2_target_);
    f.meta["num_rus"] = std::to_string(num_rus_);
    f.meta["learn_calls"] = std::to_string(learn_calls_);
    return f;
}

void Td3Agent::load_checkpoint(const nn::CheckpointFile& file) {
    if (file.kind != "td3") throw std::runtime_error("checkpoint kind '" + file.kind + "' is not td3");
    const auto load = [&](const char* name, nn::MlpNetwork& net, nn::AdamState* opt) {
        const auto& ck = detail::require_network(file, name, net);
        net = nn::restore(ck);
        if (opt != nullptr && ck.adam) *opt = *ck.adam;
    };
    load("actor", actor_, &actor_opt_);
    load("critic1", critic1_, &critic1_opt_);
    load("critic2", critic2_, &critic2_opt_);
    load("actor_target", actor_target_, nullptr);
    load("critic1_target", critic1_target_, nullptr);
    load("critic2_target", critic2_target_, nullptr);
    if (auto it = file.meta.find("learn_calls"); it != file.meta.end()) learn_calls_ = std::stol(it->second);
}

}  // namespace oran::rl
