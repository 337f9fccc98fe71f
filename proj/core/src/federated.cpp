#include "oran/federated.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

#include "oran/checkpoint.hpp"

namespace oran::fed {

nn::ParamVector fedavg(std::span<const nn::ParamVector> params, std::span<const double> weights) {
    if (params.empty()) throw std::invalid_argument("fedavg needs at least one parameter vector");
    if (weights.size() != params.size()) throw std::invalid_argument("fedavg needs one weight per parameter vector");
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("fedavg weights must be positive and finite");
        total += w;
    }
    const std::size_t n = params.front().size();
    for (const auto& p : params) {
        if (p.size() != n) throw std::invalid_argument("fedavg parameter vectors differ in length");
    }
    nn::ParamVector out = params.front();
    for (std::size_t i = 0; i < n; ++i) {
        const double base = params.front().values[i];
        double delta = 0.0;
        for (std::size_t j = 1; j < params.size(); ++j) delta += (weights[j] / total) * (params[j].values[i] - base);
        out.values[i] = base + delta;
    }
    return out;
}

GlobalModel average_reports(std::span<const std::optional<rl::ModelPayload>> reports,
                            std::span<const double> weights, bool include_bn_stats, long version) {
    if (reports.empty()) throw std::invalid_argument("no regions to aggregate");
    for (std::size_t j = 0; j < reports.size(); ++j) {
        if (!reports[j]) throw std::runtime_error("region " + std::to_string(j) + " did not report; round aborted");
    }
    GlobalModel g;
    g.version = version;
    for (const auto& [name, first] : *reports.front()) {
        std::vector<nn::ParamVector> params;
        std::vector<nn::ParamVector> stats;
        for (const auto& r : reports) {
            auto it = r->find(name);
            if (it == r->end()) throw std::runtime_error("region report lacks network '" + name + "'");
            params.push_back(it->second.params);
            stats.push_back(it->second.stats);
        }
        rl::NetworkParams avg;
        avg.params = fedavg(params, weights);
        if (include_bn_stats && first.stats.size() > 0) avg.stats = fedavg(stats, weights);
        g.networks.emplace(name, std::move(avg));
    }
    for (const auto& r : reports) {
        if (r->size() != g.networks.size()) throw std::runtime_error("regions report different network sets");
    }
    return g;
}

void distribute(const GlobalModel& global, std::span<RegionHandle> regions, bool reset_optimizer) {
    for (auto& r : regions) {
        rl::ModelPayload payload = global.networks;
        const rl::ModelPayload own = r.agent->export_model();
        for (auto& [name, net] : payload) {
            if (net.stats.size() == 0) net.stats = own.at(name).stats;
        }
        r.agent->import_model(payload);
        if (reset_optimizer) r.agent->reset_optimizers();
    }
}

namespace {

GlobalModel aggregate_round(std::span<RegionHandle> regions, const AggregationConfig& cfg,
                            const GlobalModel& previous) {
    std::vector<std::optional<rl::ModelPayload>> reports;
    reports.reserve(regions.size());
    for (const auto& r : regions) reports.emplace_back(r.agent->export_model());
    std::vector<double> w = cfg.weights;
    if (w.empty()) w.assign(regions.size(), 1.0);
    GlobalModel g = average_reports(reports, w, cfg.include_bn_stats, previous.version + 1);
    distribute(g, regions, cfg.reset_optimizer);
    return g;
}

void require_kind(std::span<RegionHandle> regions, bool td3) {
    for (const auto& r : regions) {
        if ((r.agent->kind() == AgentKind::td3) != td3) {
            throw std::invalid_argument(std::string("region agent is not a ") + (td3 ? "TD3" : "DQN") + " agent");
        }
    }
}

}  // namespace

GlobalModel aggregate_round_td3(std::span<RegionHandle> regions, const AggregationConfig& cfg,
                                const GlobalModel& previous) {
    require_kind(regions, true);
    return aggregate_round(regions, cfg, previous);
}

GlobalModel aggregate_round_dqn(std::span<RegionHandle> regions, const AggregationConfig& cfg,
                                const GlobalModel& previous) {
    require_kind(regions, false);
    return aggregate_round(regions, cfg, previous);
}

std::vector<double> region_weights(const ScenarioConfig& cfg) {
    const auto r = static_cast<std::size_t>(cfg.subregion_count);
    switch (cfg.federated.weighting) {
        case AggregationWeighting::uniform: return std::vector<double>(r, 1.0);
        case AggregationWeighting::ue_count:
            return std::vector<double>(r, static_cast<double>(cfg.ues_per_subregion()));
        case AggregationWeighting::explicit_weights: return cfg.federated.weights;
    }
    return std::vector<double>(r, 1.0);
}

// ---- file exchange ------------------------------------------------------------

std::filesystem::path region_params_path(const std::filesystem::path& dir, long round, int region) {
    return dir / ("round_" + std::to_string(round)) / ("region_" + std::to_string(region) + ".params");
}

std::filesystem::path global_params_path(const std::filesystem::path& dir, long round) {
    return dir / ("round_" + std::to_string(round)) / "global.params";
}

void write_payload(const std::filesystem::path& path, const rl::ModelPayload& payload, const rl::Agent& like) {
    const nn::CheckpointFile shape = like.checkpoint();
    nn::CheckpointFile f;
    f.kind = "payload";
    for (const auto& [name, net] : payload) {
        nn::NetworkCheckpoint ck;
        ck.specs = shape.networks.at(name).specs;
        ck.params = net.params;
        ck.stats = net.stats;
        f.networks.emplace(name, std::move(ck));
    }
    std::filesystem::create_directories(path.parent_path());
    nn::write_checkpoint(path, f);
}

rl::ModelPayload read_payload(const std::filesystem::path& path) {
    const nn::CheckpointFile f = nn::read_checkpoint(path);
    rl::ModelPayload p;
    for (const auto& [name, ck] : f.networks) p.emplace(name, rl::NetworkParams{ck.params, ck.stats});
    return p;
}

// ---- orchestration ------------------------------------------------------------

namespace {

/// Runs `count` units (episodes or steps) on one region, continuing an
/// episode that a previous interval left open.
void run_interval(RegionHandle& r, AggregationGranularity g, long count, int total_episodes) {
    auto start_episode = [&] {
        r.runner->begin(r.episode, total_episodes);
        r.in_episode = true;
    };
    auto step_once = [&] {
        if (!r.in_episode) start_episode();
        ++r.steps;
        if (r.runner->step()) {
            r.history.push_back(r.runner->finish());
            ++r.episode;
            r.in_episode = false;
        }
    };
    if (g == AggregationGranularity::steps) {
        for (long i = 0; i < count; ++i) step_once();
        return;
    }
    const int target = r.episode + static_cast<int>(count);
    while (r.episode < target) step_once();
}

void run_all(std::span<RegionHandle> regions, AggregationGranularity g, long count, int total_episodes,
             bool parallel) {
    if (!parallel || regions.size() < 2) {
        for (auto& r : regions) run_interval(r, g, count, total_episodes);
        return;
    }
    std::vector<std::exception_ptr> errors(regions.size());
    std::vector<std::thread> threads;
    threads.reserve(regions.size());
    for (std::size_t j = 0; j < regions.size(); ++j) {
        threads.emplace_back([&, j] {
            try {
                run_interval(regions[j], g, count, total_episodes);
            } catch (...) {
                errors[j] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

FederatedResult run_federated(const ScenarioConfig& cfg, std::uint64_t seed, const FederatedOptions& opts) {
    cfg.validate();
    if (cfg.layout != Layout::composite_1000 && cfg.layout != Layout::multi_region) {
        throw ConfigError("layout", "federated training requires a composite_1000 or multi_region scenario, got '" +
                                        to_string(cfg.layout) + "'");
    }
    const int num_regions = cfg.subregion_count;
    const FederatedConfig& fc = cfg.federated;
    AggregationConfig agg{fc.frequency, fc.granularity, region_weights(cfg), fc.include_bn_stats, fc.reset_optimizer};
    const std::filesystem::path exchange = fc.exchange_dir;

    std::vector<RegionHandle> regions(static_cast<std::size_t>(num_regions));
    for (int j = 0; j < num_regions; ++j) {
        RegionHandle& r = regions[static_cast<std::size_t>(j)];
        r.region_id = j;
        r.scenario = cfg.region_config(j);
        r.env = std::make_unique<RadioEnv>(r.scenario);
        const std::uint64_t stream_index = fc.shared_region_seed ? 1 : static_cast<std::uint64_t>(j) + 1;
        Rng init = make_rng(seed, Stream::init, stream_index);
        r.agent = rl::make_agent(r.scenario.agent, r.scenario.num_rus, r.scenario.num_ues, init);
        r.streams = rl::RunStreams::make(seed, stream_index);
        r.runner = std::make_unique<rl::EpisodeRunner>(*r.env, *r.agent, r.streams, true);
    }

    FederatedResult result;
    {
        const ScenarioConfig& r0 = regions.front().scenario;
        Rng init = make_rng(seed, Stream::init, 0);
        result.global_agent = rl::make_agent(r0.agent, r0.num_rus, r0.num_ues, init);
    }
    GlobalModel global{result.global_agent->export_model(), 0};
    distribute(global, regions, false);

    const long units = fc.granularity == AggregationGranularity::episodes
                           ? static_cast<long>(cfg.episodes)
                           : static_cast<long>(cfg.episodes) * cfg.episode_length;
    const long interval = fc.frequency;
    long done_units = 0;
    std::size_t reported = 0;
    while (done_units < units) {
        const long count = std::min(interval, units - done_units);
        run_all(regions, fc.granularity, count, cfg.episodes, fc.parallel);
        done_units += count;

        // Global series grows as soon as every region has finished an episode.
        std::size_t common = regions.front().history.size();
        for (const auto& r : regions) common = std::min(common, r.history.size());
        for (; reported < common; ++reported) {
            std::vector<EpisodeMetrics> row;
            for (const auto& r : regions) row.push_back(r.history[reported]);
            result.global.push_back(combine_regions(row));
            if (opts.on_episode) opts.on_episode(result.global.back());
        }

        std::vector<std::optional<rl::ModelPayload>> reports;
        const long round = global.version + 1;
        for (const auto& r : regions) {
            if (exchange.empty()) {
                reports.emplace_back(r.agent->export_model());
            } else {
                const auto path = region_params_path(exchange, round, r.region_id);
                write_payload(path, r.agent->export_model(), *r.agent);
                reports.emplace_back(read_payload(path));
            }
        }
        GlobalModel next = average_reports(reports, agg.weights, agg.include_bn_stats, round);
        if (!exchange.empty()) {
            write_payload(global_params_path(exchange, round), next.networks, *result.global_agent);
            next.networks = read_payload(global_params_path(exchange, round));
        }
        global = std::move(next);
        if (count == interval) {
            distribute(global, regions, agg.reset_optimizer);
            ++result.rounds;
            if (opts.on_round) opts.on_round(global, regions);
        } else {
            result.final_average = true;
        }
    }

    rl::ModelPayload final_payload = global.networks;
    // Without averaged BN statistics the first region's stand in.
    const rl::ModelPayload own = regions.front().agent->export_model();
    for (auto& [name, net] : final_payload) {
        if (net.stats.size() == 0) net.stats = own.at(name).stats;
    }
    result.global_agent->import_model(final_payload);
    result.final_model = std::move(global);
    for (auto& r : regions) result.regions.push_back(std::move(r.history));
    return result;
}

}  // namespace oran::fed
