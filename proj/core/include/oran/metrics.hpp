#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "oran/radio_env.hpp"

namespace oran {

inline constexpr int kMetricsSchemaVersion = 1;

/// Per-episode record written to metrics.csv (schema version 1).
struct EpisodeMetrics {
    int episode = 0;
    double mean_reward = 0.0;
    double energy_j = 0.0;       // sum of P_total * dt over the episode
    double mean_power_w = 0.0;
    double unsat_fraction = 0.0; // unsatisfied UE-slots / (K T)
    double on_fraction = 0.0;    // active RU-slots / (M T)
    int switch_count = 0;
    int activations = 0;

    friend bool operator==(const EpisodeMetrics&, const EpisodeMetrics&) = default;
};

struct StepRecord {
    int episode = 0;
    int step = 0;
    double reward = 0.0;
    double power_w = 0.0;
    int unsatisfied = 0;
    int active_rus = 0;
    int switches = 0;
};

class EpisodeAccumulator {
public:
    EpisodeAccumulator(int num_rus, int num_ues, double dt_s);

    void add(const StepOutcome& outcome, std::span<const int> modes);
    EpisodeMetrics finish(int episode) const;
    int steps() const { return steps_; }

private:
    int num_rus_;
    int num_ues_;
    double dt_s_;
    int steps_ = 0;
    double reward_sum_ = 0.0;
    double power_sum_ = 0.0;
    long unsat_sum_ = 0;
    long active_sum_ = 0;
    int switches_ = 0;
    int activations_ = 0;
};

/// Combines simultaneous regional episodes into one global record: rewards,
/// unsatisfied and on fractions are averaged, energy, power and counts summed.
EpisodeMetrics combine_regions(std::span<const EpisodeMetrics> regions);

std::string metrics_csv_header();
std::string to_csv_row(const EpisodeMetrics& m);
void write_metrics_csv(const std::filesystem::path& path, std::span<const EpisodeMetrics> rows);
/// Throws std::runtime_error on a header or field mismatch.
std::vector<EpisodeMetrics> read_metrics_csv(const std::filesystem::path& path);
void write_steps_csv(const std::filesystem::path& path, std::span<const StepRecord> rows);

std::vector<double> column_rewards(std::span<const EpisodeMetrics> rows);

}  // namespace oran
