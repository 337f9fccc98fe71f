#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oran/metrics.hpp"

namespace oran {

/// One completed run directory as read back from disk.
struct RunRecord {
    std::filesystem::path dir;
    std::string scenario;
    std::string label;  // e.g. "centralized_td3", "baseline_all_on"
    std::uint64_t seed = 0;
    std::vector<EpisodeMetrics> training;  // empty for baselines
    std::vector<EpisodeMetrics> evaluation;
    std::optional<int> convergence_episode;

    std::string group() const { return scenario + "/" + label; }
};

RunRecord load_run(const std::filesystem::path& run_dir);

/// Every directory below the roots holding a summary.json, sorted by path.
/// Throws std::runtime_error when nothing is found.
std::vector<RunRecord> discover_runs(std::span<const std::filesystem::path> roots);

/// Writes reward_curves.{csv,svg}, energy.{csv,svg}, convergence.csv and
/// comparison.csv into out_dir. Every plotted number is first written to a
/// CSV and the SVGs are drawn from those rows. Returns the files written.
std::vector<std::filesystem::path> emit_reports(std::span<const std::filesystem::path> roots,
                                                const std::filesystem::path& out_dir);

}  // namespace oran
