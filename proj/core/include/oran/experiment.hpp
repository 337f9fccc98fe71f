#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oran/agent.hpp"
#include "oran/metrics.hpp"
#include "oran/stats.hpp"

namespace oran {

enum class RunMode { centralized, federated };
enum class BaselineKind { all_on, myopic_oracle };

std::string to_string(RunMode m);
std::string to_string(BaselineKind b);
RunMode run_mode_from_string(const std::string& s);
BaselineKind baseline_from_string(const std::string& s);

inline constexpr int kConvergenceWindow = 100;
inline constexpr double kConvergenceBand = 0.05;

struct ExperimentOptions {
    std::filesystem::path out_dir = "out";
    std::optional<int> episodes_override;
    bool record_steps = false;
    std::function<void(const std::string&)> log;  // progress lines; never written to artifacts
};

struct RunArtifacts {
    std::filesystem::path dir;
    std::uint64_t seed = 0;
    std::vector<EpisodeMetrics> training;    // global series for federated runs
    std::vector<EpisodeMetrics> evaluation;
    stats::ConvergenceReport convergence;
    std::unique_ptr<rl::Agent> agent;
};

/// Label of the run family: "<mode>_<agent>", e.g. "federated_td3".
std::string run_label(RunMode mode, AgentKind kind);

/// out_dir / scenario / label / seed_<seed>
std::filesystem::path run_directory(const std::filesystem::path& out_dir, const ScenarioConfig& cfg, RunMode mode,
                                    std::uint64_t seed);

/// Greedy evaluation of a trained agent. Federated agents on multi-region
/// scenarios are sized for one region and are evaluated region by region on
/// disjoint evaluation streams, combined per episode; centralized agents see
/// the whole area.
std::vector<EpisodeMetrics> evaluate_agent(const ScenarioConfig& cfg, rl::Agent& agent, RunMode mode,
                                           std::uint64_t seed, int episodes);

/// Convergence of a training reward series, or an empty report when the run
/// is shorter than the detection window.
stats::ConvergenceReport training_convergence(std::span<const EpisodeMetrics> training);

/// Trains, evaluates and writes metrics.csv, eval.csv, summary.json,
/// checkpoint.json and config.json into run_directory(...).
RunArtifacts run_training(const ScenarioConfig& cfg, RunMode mode, std::uint64_t seed, const ExperimentOptions& opts);

std::vector<RunArtifacts> run_experiment(const ScenarioConfig& cfg, RunMode mode, std::span<const std::uint64_t> seeds,
                                         const ExperimentOptions& opts);

/// Re-evaluates the checkpoint stored in a run directory; rewrites eval.csv.
std::vector<EpisodeMetrics> evaluate_run(const std::filesystem::path& run_dir, std::optional<int> episodes = {});

/// Baseline evaluation written to out_dir / scenario / baseline_<kind> / seed_<seed>.
RunArtifacts run_baseline(const ScenarioConfig& cfg, BaselineKind kind, std::uint64_t seed,
                          const ExperimentOptions& opts);

}  // namespace oran
