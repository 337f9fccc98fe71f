#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "oran/baselines.hpp"
#include "oran/agent.hpp"
#include "oran/federated.hpp"
#include "oran/nn.hpp"
#include "oran/radio_env.hpp"

using namespace oran;

namespace {

ScenarioConfig single500() {
    ScenarioConfig c;
    c.layout = Layout::single_500;
    c.num_rus = 6;
    c.num_ues = 20;
    c.area_side_m = 500.0;
    return c;
}

nn::MlpNetwork actor_like(Rng& rng) {
    const std::vector<int> hidden{128, 64};
    return nn::MlpNetwork(nn::make_mlp(72, hidden, 6, nn::Activation::relu, nn::Activation::sigmoid, true), rng);
}

void BM_MlpForward(benchmark::State& state) {
    Rng rng(1);
    nn::MlpNetwork net = actor_like(rng);
    net.set_training(true);
    const nn::Matrix x = nn::Matrix::Random(state.range(0), 72);
    for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpForward)->Arg(2)->Arg(64)->Arg(256);

void BM_MlpForwardBackward(benchmark::State& state) {
    Rng rng(1);
    nn::MlpNetwork net = actor_like(rng);
    net.set_training(true);
    const nn::Matrix x = nn::Matrix::Random(state.range(0), 72);
    const nn::Matrix up = nn::Matrix::Ones(state.range(0), 6);
    for (auto _ : state) {
        net.forward(x);
        benchmark::DoNotOptimize(net.backward(up));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpForwardBackward)->Arg(64)->Arg(256);

void BM_EnvStep(benchmark::State& state) {
    ScenarioConfig c = single500();
    c.num_ues = static_cast<int>(state.range(0));
    RadioEnv env(c);
    Rng rng(3);
    env.reset(rng);
    const ModeVector on(6, 1);
    for (auto _ : state) {
        if (env.done()) env.reset(rng);
        benchmark::DoNotOptimize(env.step(on, rng));
    }
}
BENCHMARK(BM_EnvStep)->Arg(20)->Arg(80);

void BM_OracleAction(benchmark::State& state) {
    ScenarioConfig c = single500();
    RadioEnv env(c);
    Rng rng(4);
    env.reset(rng);
    env.advance(rng);
    for (auto _ : state) benchmark::DoNotOptimize(myopic_oracle_action(env.state(), env.slot_channel(), c));
}
BENCHMARK(BM_OracleAction);

void fill_and_learn(benchmark::State& state, const AgentConfig& cfg) {
    const ScenarioConfig c = single500();
    Rng init(5);
    const auto owned = rl::make_agent(cfg, 6, 20, init);
    rl::Agent& agent = *owned;
    RadioEnv env(c);
    Rng rng(6);
    Observation obs = env.reset(rng);
    while (!agent.ready() || agent.buffer().size() < 1000) {
        const auto d = agent.select_action(obs, env.modes(), true, rng);
        const auto out = env.step(d.modes, rng);
        agent.remember(obs, d, out.reward, out.observation, out.done);
        obs = out.done ? env.reset(rng) : out.observation;
    }
    const nn::DenormalFlushGuard flush;
    for (auto _ : state) benchmark::DoNotOptimize(agent.learn(rng));
}

void BM_Td3Learn(benchmark::State& state) {
    AgentConfig cfg;
    cfg.kind = AgentKind::td3;
    fill_and_learn(state, cfg);
}
BENCHMARK(BM_Td3Learn);

// Network sizes of the *_desk presets.
void BM_Td3LearnDesk(benchmark::State& state) {
    AgentConfig cfg;
    cfg.kind = AgentKind::td3;
    cfg.batch_size = 64;
    cfg.td3.actor_hidden = {128, 64};
    cfg.td3.critic_hidden = {128, 64};
    fill_and_learn(state, cfg);
}
BENCHMARK(BM_Td3LearnDesk);

void BM_DqnMultiLearn(benchmark::State& state) {
    AgentConfig cfg;
    cfg.kind = AgentKind::dqn_multi;
    fill_and_learn(state, cfg);
}
BENCHMARK(BM_DqnMultiLearn);

void BM_FedAvg(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    Rng rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<nn::ParamVector> models(4);
    for (auto& m : models) {
        m.values.resize(n);
        for (double& v : m.values) v = u(rng);
    }
    const std::vector<double> w{1.0, 1.0, 1.0, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(fed::fedavg(models, w));
    state.SetBytesProcessed(state.iterations() * static_cast<long>(n * sizeof(double) * 4));
}
BENCHMARK(BM_FedAvg)->Arg(20000);

}  // namespace

BENCHMARK_MAIN();
