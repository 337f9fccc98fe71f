#include "oran/experiment.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "oran/baselines.hpp"
#include "oran/checkpoint.hpp"
#include "oran/federated.hpp"
#include "oran/scenario_io.hpp"
#include "oran/trainer.hpp"

namespace oran {

using json = nlohmann::json;

std::string to_string(RunMode m) { return m == RunMode::centralized ? "centralized" : "federated"; }

std::string to_string(BaselineKind b) { return b == BaselineKind::all_on ? "all_on" : "myopic_oracle"; }

RunMode run_mode_from_string(const std::string& s) {
    if (s == "centralized") return RunMode::centralized;
    if (s == "federated") return RunMode::federated;
    throw std::invalid_argument("unknown run mode '" + s + "'");
}

BaselineKind baseline_from_string(const std::string& s) {
    if (s == "all_on" || s == "all-on") return BaselineKind::all_on;
    if (s == "myopic_oracle" || s == "oracle") return BaselineKind::myopic_oracle;
    throw std::invalid_argument("unknown baseline '" + s + "' (expected all_on or oracle)");
}

std::string run_label(RunMode mode, AgentKind kind) { return to_string(mode) + "_" + to_string(kind); }

std::filesystem::path run_directory(const std::filesystem::path& out_dir, const ScenarioConfig& cfg, RunMode mode,
                                    std::uint64_t seed) {
    return out_dir / cfg.name / run_label(mode, cfg.agent.kind) / ("seed_" + std::to_string(seed));
}

namespace {

constexpr std::uint64_t kRegionEvalStride = 1'000'000;

std::vector<EpisodeMetrics> evaluate_with(const ScenarioConfig& cfg, const rl::PolicyFn& policy, std::uint64_t seed,
                                          int episodes, bool split_regions) {
    if (!split_regions || !cfg.is_multi_region()) return rl::evaluate_policy(cfg, policy, seed, episodes);
    std::vector<std::vector<EpisodeMetrics>> per_region;
    for (int j = 0; j < cfg.subregion_count; ++j) {
        per_region.push_back(rl::evaluate_policy(cfg.region_config(j), policy, seed, episodes,
                                                 kRegionEvalStride * static_cast<std::uint64_t>(j + 1)));
    }
    std::vector<EpisodeMetrics> out;
    for (int ep = 0; ep < episodes; ++ep) {
        std::vector<EpisodeMetrics> row;
        for (const auto& r : per_region) row.push_back(r[static_cast<std::size_t>(ep)]);
        out.push_back(combine_regions(row));
    }
    return out;
}

json eval_summary(std::span<const EpisodeMetrics> eval) {
    double r = 0, p = 0, e = 0, u = 0, on = 0;
    for (const auto& m : eval) {
        r += m.mean_reward;
        p += m.mean_power_w;
        e += m.energy_j;
        u += m.unsat_fraction;
        on += m.on_fraction;
    }
    const double n = eval.empty() ? 1.0 : static_cast<double>(eval.size());
    return json{{"mean_reward", r / n},     {"mean_power_w", p / n}, {"mean_energy_j", e / n},
                {"unsat_fraction", u / n}, {"on_fraction", on / n}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void log_line(const ExperimentOptions& opts, const std::string& s) {
    if (opts.log) opts.log(s);
}

}  // namespace

std::vector<EpisodeMetrics> evaluate_agent(const ScenarioConfig& cfg, rl::Agent& agent, RunMode mode,
                                           std::uint64_t seed, int episodes) {
    return evaluate_with(cfg, rl::greedy_policy(agent), seed, episodes, mode == RunMode::federated);
}

stats::ConvergenceReport training_convergence(std::span<const EpisodeMetrics> training) {
    if (training.size() < static_cast<std::size_t>(kConvergenceWindow)) return {};
    const std::vector<double> rewards = column_rewards(training);
    return stats::detect_convergence(rewards, kConvergenceWindow, kConvergenceBand);
}

RunArtifacts run_training(const ScenarioConfig& base, RunMode mode, std::uint64_t seed,
                          const ExperimentOptions& opts) {
    ScenarioConfig cfg = base;
    if (opts.episodes_override) cfg.episodes = *opts.episodes_override;
    cfg.seed = seed;
    cfg.validate();
    if (mode == RunMode::federated && !cfg.is_multi_region()) {
        throw ConfigError("layout", "federated mode requires a composite_1000 or multi_region scenario; '" + cfg.name +
                                        "' is " + to_string(cfg.layout));
    }

    RunArtifacts art;
    art.seed = seed;
    art.dir = run_directory(opts.out_dir, cfg, mode, seed);
    std::filesystem::create_directories(art.dir);
    const std::string label = cfg.name + "/" + run_label(mode, cfg.agent.kind) + "/seed_" + std::to_string(seed);

    json fed_info;
    std::vector<StepRecord> steps;
    if (mode == RunMode::centralized) {
        rl::TrainingOptions topts;
        topts.record_steps = opts.record_steps;
        topts.on_episode = [&](const EpisodeMetrics& m) {
            if ((m.episode + 1) % 50 == 0) {
                log_line(opts, label + " episode " + std::to_string(m.episode + 1) + " reward " +
                                   std::to_string(m.mean_reward));
            }
        };
        rl::TrainingResult tr = rl::train_centralized(cfg, seed, topts);
        art.training = std::move(tr.episodes);
        art.agent = std::move(tr.agent);
        steps = std::move(tr.steps);
    } else {
        fed::FederatedOptions fopts;
        fopts.on_episode = [&](const EpisodeMetrics& m) {
            if ((m.episode + 1) % 50 == 0) {
                log_line(opts, label + " episode " + std::to_string(m.episode + 1) + " reward " +
                                   std::to_string(m.mean_reward));
            }
        };
        fed::FederatedResult fr = fed::run_federated(cfg, seed, fopts);
        art.training = std::move(fr.global);
        art.agent = std::move(fr.global_agent);
        std::filesystem::create_directories(art.dir / "regions");
        for (std::size_t j = 0; j < fr.regions.size(); ++j) {
            write_metrics_csv(art.dir / "regions" / ("region_" + std::to_string(j) + ".csv"), fr.regions[j]);
        }
        fed_info = json{{"regions", cfg.subregion_count},
                        {"frequency", cfg.federated.frequency},
                        {"granularity", to_string(cfg.federated.granularity)},
                        {"rounds", fr.rounds},
                        {"final_average", fr.final_average},
                        {"global_version", fr.final_model.version}};
    }

    art.evaluation = evaluate_agent(cfg, *art.agent, mode, seed, cfg.eval_episodes);
    art.convergence = training_convergence(art.training);

    write_metrics_csv(art.dir / "metrics.csv", art.training);
    write_metrics_csv(art.dir / "eval.csv", art.evaluation);
    if (opts.record_steps) write_steps_csv(art.dir / "steps.csv", steps);
    save_scenario(art.dir / "config.json", cfg);
    nn::CheckpointFile ck = art.agent->checkpoint();
    ck.meta["scenario"] = cfg.name;
    ck.meta["mode"] = to_string(mode);
    nn::write_checkpoint(art.dir / "checkpoint.json", ck);

    const std::vector<double> rewards = column_rewards(art.training);
    json summary{
        {"schema_version", kMetricsSchemaVersion},
        {"scenario", cfg.name},
        {"mode", to_string(mode)},
        {"agent", to_string(cfg.agent.kind)},
        {"label", run_label(mode, cfg.agent.kind)},
        {"seed", seed},
        {"episodes", cfg.episodes},
        {"eval_episodes", cfg.eval_episodes},
        {"eval", eval_summary(art.evaluation)},
        {"training",
         {{"convergence_window", kConvergenceWindow},
          {"convergence_band", kConvergenceBand},
          {"convergence_episode", art.convergence.episode ? json(*art.convergence.episode) : json(nullptr)},
          {"final_plateau_mean_reward",
           rewards.size() >= static_cast<std::size_t>(kConvergenceWindow) ? json(art.convergence.plateau_mean)
                                                                           : json(nullptr)}}},
    };
    if (!fed_info.is_null()) summary["federated"] = fed_info;
    write_text(art.dir / "summary.json", summary.dump(2) + "\n");
    log_line(opts, label + " done: eval power " + std::to_string(summary["eval"]["mean_power_w"].get<double>()) + " W");
    return art;
}

std::vector<RunArtifacts> run_experiment(const ScenarioConfig& cfg, RunMode mode, std::span<const std::uint64_t> seeds,
                                         const ExperimentOptions& opts) {
    if (seeds.empty()) throw std::invalid_argument("no seeds given");
    std::vector<RunArtifacts> out;
    for (std::uint64_t s : seeds) out.push_back(run_training(cfg, mode, s, opts));
    return out;
}

std::vector<EpisodeMetrics> evaluate_run(const std::filesystem::path& run_dir, std::optional<int> episodes) {
    const ScenarioConfig cfg = load_scenario(run_dir / "config.json");
    const nn::CheckpointFile ck = nn::read_checkpoint(run_dir / "checkpoint.json");
    const bool multi = cfg.is_multi_region() && ck.meta.count("mode") && ck.meta.at("mode") == "federated";
    const int m = multi ? cfg.rus_per_subregion() : cfg.num_rus;
    const int k = multi ? cfg.ues_per_subregion() : cfg.num_ues;
    Rng init(0);
    std::unique_ptr<rl::Agent> agent = rl::make_agent(cfg.agent, m, k, init);
    agent->load_checkpoint(ck);
    const auto eval = evaluate_agent(cfg, *agent, multi ? RunMode::federated : RunMode::centralized, cfg.seed,
                                     episodes.value_or(cfg.eval_episodes));
    write_metrics_csv(run_dir / "eval.csv", eval);
    return eval;
}

RunArtifacts run_baseline(const ScenarioConfig& base, BaselineKind kind, std::uint64_t seed,
                          const ExperimentOptions& opts) {
    ScenarioConfig cfg = base;
    cfg.seed = seed;
    cfg.validate();
    RunArtifacts art;
    art.seed = seed;
    art.dir = opts.out_dir / cfg.name / ("baseline_" + to_string(kind)) / ("seed_" + std::to_string(seed));
    std::filesystem::create_directories(art.dir);
    if (kind == BaselineKind::myopic_oracle && cfg.num_rus > kOracleMaxRus && !cfg.is_multi_region()) {
        throw std::invalid_argument("myopic oracle is limited to M <= " + std::to_string(kOracleMaxRus));
    }
    const rl::PolicyFn policy = kind == BaselineKind::all_on ? all_on_policy() : myopic_oracle_policy();
    art.evaluation = evaluate_with(cfg, policy, seed, cfg.eval_episodes, true);
    write_metrics_csv(art.dir / "eval.csv", art.evaluation);
    save_scenario(art.dir / "config.json", cfg);
    json summary{{"schema_version", kMetricsSchemaVersion},
                 {"scenario", cfg.name},
                 {"mode", "baseline"},
                 {"agent", to_string(kind)},
                 {"label", "baseline_" + to_string(kind)},
                 {"seed", seed},
                 {"eval_episodes", cfg.eval_episodes},
                 {"eval", eval_summary(art.evaluation)}};
    write_text(art.dir / "summary.json", summary.dump(2) + "\n");
    log_line(opts, cfg.name + "/baseline_" + to_string(kind) + "/seed_" + std::to_string(seed) + " done");
    return art;
}

}  // namespace oran
