// Acceptance gate. Runs every criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion; exits non-zero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "oran/baselines.hpp"
#include "oran/channel.hpp"
#include "oran/dqn.hpp"
#include "oran/experiment.hpp"
#include "oran/federated.hpp"
#include "oran/nn.hpp"
#include "oran/radio_env.hpp"
#include "oran/scenario_io.hpp"
#include "oran/stats.hpp"
#include "oran/td3.hpp"

using namespace oran;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string id;
    std::string title;
    std::function<Outcome()> run;
};

fs::path g_configs = ORAN_CONFIG_DIR;
fs::path g_out = "acceptance_out";
fs::path g_cli = ORAN_SIM_PATH;

void progress(const std::string& line) { std::cerr << "  .. " << line << std::endl; }

ScenarioConfig preset(const std::string& name) { return load_scenario(g_configs / (name + ".json")); }

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double mean_power(const std::vector<EpisodeMetrics>& rows) {
    std::vector<double> p;
    for (const auto& r : rows) p.push_back(r.mean_power_w);
    return mean_of(p);
}

double mean_reward(const std::vector<EpisodeMetrics>& rows) {
    std::vector<double> p;
    for (const auto& r : rows) p.push_back(r.mean_reward);
    return mean_of(p);
}

double plateau(const std::vector<EpisodeMetrics>& training) {
    const std::size_t w = std::min<std::size_t>(kConvergenceWindow, training.size());
    double s = 0.0;
    for (std::size_t i = training.size() - w; i < training.size(); ++i) s += training[i].mean_reward;
    return s / static_cast<double>(w);
}

// Centralized runs are shared between criteria.
std::map<std::string, RunArtifacts> g_runs;

RunArtifacts& centralized(const ScenarioConfig& cfg, std::uint64_t seed) {
    const std::string key = fmt::format("{}/{}/{}", cfg.name, to_string(cfg.agent.kind), seed);
    auto it = g_runs.find(key);
    if (it != g_runs.end()) return it->second;
    progress(fmt::format("train {} seed {}", key, seed));
    ExperimentOptions o;
    o.out_dir = g_out / "runs";
    return g_runs.emplace(key, run_training(cfg, RunMode::centralized, seed, o)).first->second;
}

// ---- C1 ----------------------------------------------------------------------

struct Tally {
    int checked = 0;
    std::vector<std::string> failures;
    void rel(const std::string& what, double got, double want, double tol) {
        ++checked;
        if (!(std::abs(got - want) <= tol * std::abs(want))) failures.push_back(fmt::format("{}: {} vs {}", what, got, want));
    }
    void truth(const std::string& what, bool ok) {
        ++checked;
        if (!ok) failures.push_back(what);
    }
    Outcome outcome(const std::string& prefix) const {
        if (failures.empty()) return {true, fmt::format("{} checks", checked)};
        return {false, fmt::format("{}: {} of {} failed, first: {}", prefix, failures.size(), checked, failures.front())};
    }
};

RadioUnit ru_in(int mode, int prev, int used) {
    RadioUnit r;
    r.mode = mode;
    r.prev_mode = prev;
    r.prbs_used = used;
    return r;
}

void physics_oracles(Tally& t) {
    using namespace oran::channel;
    constexpr double tol = 1e-9;
    const ChannelParams p;
    t.rel("breakpoint", breakpoint_distance(p), 680.0, tol);
    t.rel("PL_LOS(100 m)", path_loss_los(100.0, p), 80.42059991327963, tol);
    t.rel("PL_LOS(1000 m)", path_loss_los(1000.0, p), 148.92059991327963, tol);
    t.rel("PL_NLOS(100 m)", path_loss_nlos(100.0, p), 86.4519389076428, tol);
    ChannelParams one_ghz;
    one_ghz.carrier_freq_ghz = 1.0;
    t.rel("PL_LOS(1 m, 1 GHz)", path_loss_los(1.0, one_ghz), 32.4, tol);
    one_ghz.ue_height_m = 1.5;
    t.rel("PL_NLOS(1 m, 1 GHz)", path_loss_nlos(1.0, one_ghz), 35.3, tol);
    t.rel("P_LOS(10 m)", los_probability(10.0), 1.0, tol);
    t.rel("P_LOS(36 m)", los_probability(36.0), 0.6839397205857212, tol);
    t.rel("P_LOS(100 m)", los_probability(100.0), 0.23098474969813537, tol);
    t.rel("noise per PRB", noise_per_prb_w(p), 7.165929069962975e-16, tol);
    const double snr = snr_per_prb(make_link(80.42059991327963, true), 1.0, 100, p);
    t.rel("SNR", snr, 126668.17213276439, tol);
    t.rel("rate", achievable_rate(1, snr, p), 3051127.0671283957, tol);
    t.rel("rate x4", achievable_rate(4, snr, p), 4.0 * 3051127.0671283957, tol);

    const PowerParams pw;
    const auto power_of = [&](const RadioUnit& r, const PowerParams& params) {
        NetworkState s;
        s.rus.push_back(r);
        return power_total(s, params).total_w;
    };
    t.rel("P(active, full load)", power_of(ru_in(1, 1, 100), pw), 22.0, tol);
    t.rel("P(sleep)", power_of(ru_in(0, 1, 0), pw), 5.0, tol);
    t.rel("P(waking, idle)", power_of(ru_in(1, 0, 0), pw), 23.0, tol);
    t.rel("P(active, half load)", power_of(ru_in(1, 1, 50), pw), 21.0, tol);
    PowerParams charged = pw;
    charged.charge_deactivation = true;
    t.rel("P(deactivating, charged)", power_of(ru_in(0, 1, 0), charged), 8.0, tol);

    ScenarioConfig c = preset("single_500");
    t.rel("P_max", c.p_max_w(), 126.0, tol);
    t.rel("reward(126 W, 0)", compute_reward(126.0, 0, 20, c), -1.0, tol);
    t.rel("reward(63 W, 20)", compute_reward(63.0, 20, 20, c), -5.5, tol);
}

double probe(nn::MlpNetwork& net, const nn::Matrix& x, const nn::Matrix& c) {
    return (net.forward(x).array() * c.array()).sum();
}

void gradient_checks(Tally& t) {
    struct Case {
        int in;
        std::vector<int> hidden;
        int out;
        nn::Activation hidden_act;
        nn::Activation out_act;
        bool bn;
        int batch;
    };
    const std::vector<Case> cases{
        {72, {32, 16}, 6, nn::Activation::relu, nn::Activation::sigmoid, true, 8},
        {78, {32, 16}, 1, nn::Activation::relu, nn::Activation::linear, false, 8},
        {72, {24, 16, 12}, 64, nn::Activation::relu, nn::Activation::linear, false, 4},
        {6, {10, 7}, 2, nn::Activation::sigmoid, nn::Activation::sigmoid, true, 5},
    };
    constexpr double h = 1e-6;
    std::uint64_t seed = 500;
    for (const auto& gc : cases) {
        Rng rng(seed++);
        nn::MlpNetwork net(nn::make_mlp(gc.in, gc.hidden, gc.out, gc.hidden_act, gc.out_act, gc.bn), rng);
        std::normal_distribution<double> n01(0.0, 1.0);
        for (double& v : net.raw_params()) v += 0.01 * n01(rng);
        nn::Matrix x(gc.batch, gc.in);
        for (auto& v : x.reshaped()) v = n01(rng);
        nn::Matrix c(gc.batch, gc.out);
        for (auto& v : c.reshaped()) v = n01(rng);
        net.set_training(true);
        const std::vector<double> stats0(net.raw_stats().begin(), net.raw_stats().end());
        const auto restore = [&] { std::copy(stats0.begin(), stats0.end(), net.raw_stats().begin()); };
        probe(net, x, c);
        restore();
        const nn::Gradients g = net.backward(c);
        auto params = net.raw_params();
        std::uniform_int_distribution<std::size_t> pick(0, params.size() - 1);
        for (int k = 0; k < 60; ++k) {
            const std::size_t i = pick(rng);
            const double keep = params[i];
            params[i] = keep + h;
            const double lp = probe(net, x, c);
            restore();
            params[i] = keep - h;
            const double lm = probe(net, x, c);
            restore();
            params[i] = keep;
            const double fd = (lp - lm) / (2.0 * h);
            const double an = g.params.values[i];
            if (std::abs(fd) < 1e-7 && std::abs(an) < 1e-7) continue;
            ++t.checked;
            if (std::abs(fd - an) > 1e-4 * std::max({1e-6, std::abs(fd), std::abs(an)})) {
                t.failures.push_back(fmt::format("grad param {} fd {} analytic {}", i, fd, an));
            }
        }
    }
}

Outcome c1_physics() {
    Tally t;
    physics_oracles(t);
    gradient_checks(t);
    return t.outcome("physics");
}

// ---- C2 ----------------------------------------------------------------------

const std::vector<std::uint64_t> kSeeds3{1, 2, 3};
const std::vector<std::uint64_t> kSeeds5{1, 2, 3, 4, 5};

Outcome c2_energy() {
    const ScenarioConfig cfg = preset("single_500_desk");
    const double bar = 0.5 * cfg.p_max_w();
    int met = 0;
    bool band = true;
    std::string detail;
    for (std::uint64_t s : kSeeds3) {
        const double p = mean_power(centralized(cfg, s).evaluation);
        const double on = mean_power(baseline_all_on(cfg, s, cfg.eval_episodes));
        if (p <= bar) ++met;
        if (on < 120.0 || on > 132.0) band = false;
        detail += fmt::format("seed {}: {:.1f} W (all-on {:.1f} W); ", s, p, on);
    }
    detail += fmt::format("{}/3 seeds <= {:.0f} W", met, bar);
    return {met >= 2 && band, detail};
}

// ---- C3 ----------------------------------------------------------------------

Outcome c3_ordering() {
    const ScenarioConfig base = preset("single_500_desk");
    std::map<AgentKind, double> plateaus;
    for (AgentKind kind : {AgentKind::td3, AgentKind::dqn_single, AgentKind::dqn_multi}) {
        ScenarioConfig cfg = base;
        cfg.agent.kind = kind;
        std::vector<double> v;
        for (std::uint64_t s : kSeeds3) v.push_back(plateau(centralized(cfg, s).training));
        plateaus[kind] = mean_of(v);
    }
    // Per-step reward spans [-(w1 + w2), 0] when power stays under P_max.
    const double tie = 0.02 * (base.reward.w1 + base.reward.w2);
    const double td3 = plateaus[AgentKind::td3];
    const double sa = plateaus[AgentKind::dqn_single];
    const double ma = plateaus[AgentKind::dqn_multi];
    const bool ok = td3 >= sa - tie && sa >= ma - tie;
    return {ok, fmt::format("plateau TD3 {:.4f}, DQNSA {:.4f}, DQNMA {:.4f}; tie tolerance {:.3f}", td3, sa, ma, tie)};
}

// ---- C4 + round checks reused by C6 ----------------------------------------------

bool round_matches(const fed::GlobalModel& g, std::span<const fed::RegionHandle> regions) {
    for (const auto& r : regions) {
        if (r.agent->export_model() != g.networks) return false;
        if (const auto* td3 = dynamic_cast<const rl::Td3Agent*>(r.agent.get())) {
            if (rl::network_params(td3->actor_target()) != g.networks.at("actor")) return false;
            if (rl::network_params(td3->critic1_target()) != g.networks.at("critic1")) return false;
            if (rl::network_params(td3->critic2_target()) != g.networks.at("critic2")) return false;
        } else if (const auto* dqn = dynamic_cast<const rl::DqnAgent*>(r.agent.get())) {
            if (rl::network_params(dqn->target_network()) != g.networks.at("q_net")) return false;
        }
    }
    return true;
}

struct RoundAudit {
    int rounds = 0;
    int mismatched = 0;
    fed::FederatedOptions options() {
        fed::FederatedOptions o;
        o.on_round = [this](const fed::GlobalModel& g, std::span<const fed::RegionHandle> regions) {
            ++rounds;
            if (!round_matches(g, regions)) ++mismatched;
        };
        return o;
    }
};

Outcome c4_federated_speedup() {
    // Both arms see the same composite area: four regional agents against one
    // agent steering all RUs.
    const ScenarioConfig fed_cfg = preset("composite_1000_desk");
    const ScenarioConfig central_cfg = fed_cfg;
    std::vector<double> fed_eps;
    std::vector<double> central_eps;
    std::string notes;
    int fed_failed = 0;
    RoundAudit audit;
    for (std::uint64_t s : kSeeds5) {
        progress(fmt::format("federated {} seed {}", fed_cfg.name, s));
        ScenarioConfig c = fed_cfg;
        c.seed = s;
        const fed::FederatedResult r = fed::run_federated(c, s, audit.options());
        const auto conv = training_convergence(r.global);
        progress(fmt::format("federated seed {}: convergence {}, plateau {:.4f}", s,
                             conv.episode ? std::to_string(*conv.episode) : "none", conv.plateau_mean));
        if (conv.episode) {
            fed_eps.push_back(*conv.episode);
        } else {
            ++fed_failed;
            notes += fmt::format(" federated seed {} did not converge;", s);
        }
    }
    for (std::uint64_t s : kSeeds5) {
        const RunArtifacts& a = centralized(central_cfg, s);
        progress(fmt::format("centralized seed {}: convergence {}, plateau {:.4f}", s,
                             a.convergence.episode ? std::to_string(*a.convergence.episode) : "none",
                             a.convergence.plateau_mean));
        if (a.convergence.episode) {
            central_eps.push_back(*a.convergence.episode);
        } else {
            // Censored at the run length; this can only shrink the gap.
            central_eps.push_back(static_cast<double>(a.training.size()));
            notes += fmt::format(" centralized seed {} censored at {};", s, a.training.size());
        }
    }
    if (audit.mismatched > 0) return {false, fmt::format("{} of {} rounds left regions off the global model", audit.mismatched, audit.rounds)};
    if (fed_eps.size() < 2) return {false, fmt::format("too few converged federated runs;{}", notes)};
    const stats::Summary f = stats::summarize(fed_eps);
    const stats::Summary c = stats::summarize(central_eps);
    const stats::WelchResult w = stats::welch_t_test(fed_eps, central_eps);
    const bool ok = fed_failed == 0 && f.mean < c.mean && w.p_two_sided < 0.1;
    return {ok, fmt::format("fed {:.1f} +- {:.1f} vs centralized {:.1f} +- {:.1f} episodes; t = {:.3f}, p = {:.4f};{}",
                            f.mean, f.stddev, c.mean, c.stddev, w.t, w.p_two_sided, notes)};
}

// ---- C5 ----------------------------------------------------------------------

// Replays greedy evaluation while scoring the oracle on every frozen snapshot.
struct DominanceAudit {
    long steps = 0;
    long violations = 0;
    double worst = -1e300;
};

DominanceAudit audit_against_oracle(const ScenarioConfig& cfg, rl::Agent& agent, std::uint64_t seed, int episodes) {
    DominanceAudit out;
    const rl::PolicyFn greedy = rl::greedy_policy(agent);
    const rl::PolicyFn wrapped = [&](const RadioEnv& env, const Observation& obs) {
        const ModeVector a = greedy(env, obs);
        const ModeVector best = myopic_oracle_action(env.state(), env.slot_channel(), cfg);
        const double gap = env.evaluate(a).reward - env.evaluate(best).reward;
        ++out.steps;
        if (gap > 0.0) ++out.violations;
        out.worst = std::max(out.worst, gap);
        return a;
    };
    rl::evaluate_policy(cfg, wrapped, seed, episodes);
    return out;
}

Outcome c5_oracle() {
    std::string detail;
    bool ok = true;
    long steps = 0;
    long violations = 0;
    for (const char* name : {"tiny_m2k4", "single_500_desk"}) {
        const ScenarioConfig cfg = preset(name);
        RunArtifacts& run = centralized(cfg, cfg.name == "tiny_m2k4" ? cfg.seed : 1);
        const DominanceAudit d = audit_against_oracle(cfg, *run.agent, 1000, cfg.eval_episodes);
        steps += d.steps;
        violations += d.violations;
    }
    ok = violations == 0;
    detail += fmt::format("{} snapshots, {} where the policy beat the oracle; ", steps, violations);

    const ScenarioConfig tiny = preset("tiny_m2k4");
    const RunArtifacts& run = centralized(tiny, tiny.seed);
    const double agent_r = mean_reward(run.evaluation);
    const double oracle_r = mean_reward(baseline_myopic_oracle(tiny, tiny.seed, tiny.eval_episodes));
    const double gap = (oracle_r - agent_r) / std::abs(oracle_r);
    detail += fmt::format("tiny TD3 {:.4f} vs oracle {:.4f} ({:.2f}% below)", agent_r, oracle_r, 100.0 * gap);
    return {ok && gap <= 0.05, detail};
}

// ---- C6 ----------------------------------------------------------------------

Outcome c6_federated_mechanics() {
    Rng rng(606);
    std::uniform_int_distribution<int> regions_d(1, 8);
    std::uniform_int_distribution<int> len_d(1, 64);
    std::uniform_real_distribution<double> val(-10.0, 10.0);
    std::uniform_real_distribution<double> wd(0.1, 5.0);
    std::uniform_real_distribution<double> scale_d(0.01, 100.0);
    int bad = 0;
    std::string first;
    const auto fail = [&](const std::string& why) {
        if (bad++ == 0) first = why;
    };
    for (int trial = 0; trial < 1000; ++trial) {
        const int r = regions_d(rng);
        const int n = len_d(rng);
        std::vector<nn::ParamVector> params(static_cast<std::size_t>(r));
        std::vector<double> w(static_cast<std::size_t>(r));
        for (int j = 0; j < r; ++j) {
            params[j].values.resize(static_cast<std::size_t>(n));
            for (double& v : params[j].values) v = val(rng);
            w[j] = wd(rng);
        }
        const nn::ParamVector avg = fed::fedavg(params, w);
        const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            double ref = 0.0;
            double lo = 1e300;
            double hi = -1e300;
            for (int j = 0; j < r; ++j) {
                ref += w[j] * params[j].values[i] / wsum;
                lo = std::min(lo, params[j].values[i]);
                hi = std::max(hi, params[j].values[i]);
            }
            if (std::abs(avg.values[i] - ref) > 1e-12 * (1.0 + std::abs(ref))) fail("weighted mean");
            if (avg.values[i] < lo - 1e-12 || avg.values[i] > hi + 1e-12) fail("outside the input hull");
        }
        std::vector<int> order(static_cast<std::size_t>(r));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<nn::ParamVector> pp;
        std::vector<double> pw;
        for (int j : order) {
            pp.push_back(params[j]);
            pw.push_back(w[j]);
        }
        const nn::ParamVector perm = fed::fedavg(pp, pw);
        const double k = scale_d(rng);
        std::vector<double> sw = w;
        for (double& x : sw) x *= k;
        const nn::ParamVector scaled = fed::fedavg(params, sw);
        for (int i = 0; i < n; ++i) {
            const double tol = 1e-12 * (1.0 + std::abs(avg.values[i]));
            if (std::abs(perm.values[i] - avg.values[i]) > tol) fail("permutation");
            if (std::abs(scaled.values[i] - avg.values[i]) > tol) fail("weight scale");
        }
        const std::vector<nn::ParamVector> same(static_cast<std::size_t>(r), params[0]);
        if (fed::fedavg(same, w) != params[0]) fail("fixed point");
    }

    // Every aggregation round of short federated runs, for every agent kind.
    RoundAudit audit;
    for (AgentKind kind : {AgentKind::td3, AgentKind::dqn_single, AgentKind::dqn_multi}) {
        ScenarioConfig c = preset("composite_1000_desk");
        c.agent.kind = kind;
        c.episode_length = 50;
        c.episodes = 12;
        c.federated.frequency = 3;
        fed::run_federated(c, 6, audit.options());
        c.federated.granularity = AggregationGranularity::steps;
        c.federated.frequency = 70;
        c.episodes = 3;
        fed::run_federated(c, 7, audit.options());
    }
    if (audit.mismatched > 0) fail(fmt::format("{} rounds not bit-identical", audit.mismatched));
    if (bad > 0) return {false, fmt::format("{} violations, first: {}", bad, first)};
    return {true, fmt::format("1000 fedavg cases; {} aggregation rounds bit-identical", audit.rounds)};
}

// ---- C7 ----------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> csv_tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file() && e.path().extension() == ".csv") {
            out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
        }
    }
    return out;
}

int run_cli(const std::string& args) {
    const std::string cmd = "\"" + g_cli.string() + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

Outcome c7_determinism() {
    const fs::path root = g_out / "determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    ScenarioConfig dqn = preset("single_500_desk");
    dqn.name = "single_500_desk_dqnma";
    dqn.agent.kind = AgentKind::dqn_multi;
    std::ofstream(root / "dqnma.json") << serialize_scenario(dqn);

    const std::vector<std::string> jobs{
        fmt::format("train -s {} -e 6 --seeds 11 -q", (g_configs / "single_500_desk.json").string()),
        fmt::format("train -s {} -e 6 --seeds 12 -q", (root / "dqnma.json").string()),
        fmt::format("fed-train -s {} -e 4 --seeds 13 -q", (g_configs / "composite_1000_desk.json").string()),
        fmt::format("baseline -s {} --kind oracle --seeds 14 -q", (g_configs / "tiny_m2k4.json").string()),
    };
    std::string detail;
    for (const char* tag : {"a", "b"}) {
        for (const auto& job : jobs) {
            const int rc = run_cli(job + " -o " + (root / tag).string());
            if (rc != 0) return {false, fmt::format("'{}' exited with {}", job, rc)};
        }
    }
    const auto a = csv_tree(root / "a");
    const auto b = csv_tree(root / "b");
    if (a.size() < 8) return {false, fmt::format("only {} CSV files produced", a.size())};
    if (a != b) {
        for (const auto& [k, v] : a) {
            auto it = b.find(k);
            if (it == b.end() || it->second != v) return {false, k + " differs between repeated runs"};
        }
        return {false, "file sets differ"};
    }
    return {true, fmt::format("{} CSV files byte-identical across repeated CLI runs", a.size())};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance gate"};
    std::vector<std::string> only;
    std::string out = g_out.string();
    std::string configs = g_configs.string();
    std::string cli = g_cli.string();
    app.add_option("--only", only, "criteria to run (e.g. C1,C6)")->delimiter(',');
    app.add_option("--out", out, "scratch directory for runs");
    app.add_option("--configs", configs, "preset directory");
    app.add_option("--cli", cli, "oran-sim executable");
    CLI11_PARSE(app, argc, argv);
    g_out = out;
    g_configs = configs;
    g_cli = cli;
    fs::create_directories(g_out);

    const std::vector<Criterion> all{
        {"C1", "unit physics oracles and nn gradient checks", c1_physics},
        {"C2", "TD3 energy saving >= 50% on single_500 (2 of 3 seeds), all-on in [120, 132] W", c2_energy},
        {"C3", "plateau ordering TD3 >= DQNSA >= DQNMA", c3_ordering},
        {"C4", "Fed-TD3 converges earlier than centralized TD3, Welch p < 0.1", c4_federated_speedup},
        {"C5", "policy never beats the myopic oracle; tiny TD3 within 5% of it", c5_oracle},
        {"C6", "fedavg properties and bit-identical regions after every round", c6_federated_mechanics},
        {"C7", "repeated CLI runs give byte-identical CSVs", c7_determinism},
    };
    const std::set<std::string> wanted(only.begin(), only.end());

    std::vector<std::string> lines;
    bool all_pass = true;
    for (const auto& c : all) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        std::cerr << "running " << c.id << ": " << c.title << std::endl;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::string line =
            fmt::format("{} {}: {} | {} ({:.0f} s)", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail, secs);
        std::cout << line << std::endl;
        lines.push_back(line);
        all_pass = all_pass && o.pass;
    }
    if (wanted.empty() || wanted.count("C8")) {
        const std::string line =
            "EXCLUDED C8: absolute training-energy figures and full-scale convergence means (hardware and run-length dependent)";
        std::cout << line << std::endl;
        lines.push_back(line);
    }
    std::cout << "\n---- acceptance summary ----\n";
    for (const auto& l : lines) std::cout << l << "\n";
    std::cout << (all_pass ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << std::endl;
    return all_pass ? 0 : 1;
}
