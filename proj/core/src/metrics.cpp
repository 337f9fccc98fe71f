#include "oran/metrics.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace oran {

EpisodeAccumulator::EpisodeAccumulator(int num_rus, int num_ues, double dt_s)
    : num_rus_(num_rus), num_ues_(num_ues), dt_s_(dt_s) {}

void EpisodeAccumulator::add(const StepOutcome& outcome, std::span<const int> modes) {
    ++steps_;
    reward_sum_ += outcome.reward;
    power_sum_ += outcome.power_total_w;
    unsat_sum_ += outcome.unsatisfied_count;
    for (int a : modes) active_sum_ += a;
    switches_ += outcome.switches;
    activations_ += outcome.activations;
}

EpisodeMetrics EpisodeAccumulator::finish(int episode) const {
    EpisodeMetrics m;
    m.episode = episode;
    if (steps_ == 0) return m;
    const double t = steps_;
    m.mean_reward = reward_sum_ / t;
    m.energy_j = power_sum_ * dt_s_;
    m.mean_power_w = power_sum_ / t;
    m.unsat_fraction = num_ues_ > 0 ? static_cast<double>(unsat_sum_) / (t * num_ues_) : 0.0;
    m.on_fraction = static_cast<double>(active_sum_) / (t * num_rus_);
    m.switch_count = switches_;
    m.activations = activations_;
    return m;
}

EpisodeMetrics combine_regions(std::span<const EpisodeMetrics> regions) {
    if (regions.empty()) throw std::invalid_argument("no regional metrics to combine");
    EpisodeMetrics g;
    g.episode = regions.front().episode;
    for (const auto& r : regions) {
        g.mean_reward += r.mean_reward;
        g.energy_j += r.energy_j;
        g.mean_power_w += r.mean_power_w;
        g.unsat_fraction += r.unsat_fraction;
        g.on_fraction += r.on_fraction;
        g.switch_count += r.switch_count;
        g.activations += r.activations;
    }
    const auto n = static_cast<double>(regions.size());
    g.mean_reward /= n;
    g.unsat_fraction /= n;
    g.on_fraction /= n;
    return g;
}

std::string metrics_csv_header() {
    return "episode,mean_reward,energy_j,mean_power_w,unsat_fraction,on_fraction,switch_count,activations";
}

std::string to_csv_row(const EpisodeMetrics& m) {
    return fmt::format("{},{},{},{},{},{},{},{}", m.episode, m.mean_reward, m.energy_j, m.mean_power_w,
                       m.unsat_fraction, m.on_fraction, m.switch_count, m.activations);
}

void write_metrics_csv(const std::filesystem::path& path, std::span<const EpisodeMetrics> rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "# schema_version=" << kMetricsSchemaVersion << '\n' << metrics_csv_header() << '\n';
    for (const auto& m : rows) out << to_csv_row(m) << '\n';
}

std::vector<EpisodeMetrics> read_metrics_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != "# schema_version=" + std::to_string(kMetricsSchemaVersion)) {
        throw std::runtime_error(path.string() + ": unsupported metrics schema '" + line + "'");
    }
    std::getline(in, line);
    if (line != metrics_csv_header()) throw std::runtime_error(path.string() + ": unexpected header");
    std::vector<EpisodeMetrics> rows;
    int lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::vector<std::string> f;
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 8) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 8 fields");
        }
        try {
            EpisodeMetrics m;
            m.episode = std::stoi(f[0]);
            m.mean_reward = std::stod(f[1]);
            m.energy_j = std::stod(f[2]);
            m.mean_power_w = std::stod(f[3]);
            m.unsat_fraction = std::stod(f[4]);
            m.on_fraction = std::stod(f[5]);
            m.switch_count = std::stoi(f[6]);
            m.activations = std::stoi(f[7]);
            rows.push_back(m);
        } catch (const std::logic_error&) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": malformed number");
        }
    }
    return rows;
}

void write_steps_csv(const std::filesystem::path& path, std::span<const StepRecord> rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "episode,step,reward,power_w,unsatisfied,active_rus,switches\n";
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{},{},{}\n", r.episode, r.step, r.reward, r.power_w, r.unsatisfied,
                           r.active_rus, r.switches);
    }
}

std::vector<double> column_rewards(std::span<const EpisodeMetrics> rows) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.mean_reward);
    return out;
}

}  // namespace oran
