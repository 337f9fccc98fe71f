#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "oran/experiment.hpp"
#include "oran/report.hpp"
#include "oran/scenario_io.hpp"
#include "oran/stats.hpp"

namespace fs = std::filesystem;

namespace {

struct RunFlags {
    std::string scenario;
    std::vector<std::uint64_t> seeds;
    int episodes = 0;
    std::string out = "out";
    bool steps = false;
    bool quiet = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("-s,--scenario", f.scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seeds", f.seeds, "comma-separated seed list (default: the scenario seed)")->delimiter(',');
    cmd->add_option("-e,--episodes", f.episodes, "override the number of training episodes")->check(CLI::PositiveNumber);
    cmd->add_option("-o,--out", f.out, "output root directory");
    cmd->add_flag("-q,--quiet", f.quiet, "no progress output");
}

oran::ExperimentOptions options(const RunFlags& f) {
    oran::ExperimentOptions o;
    o.out_dir = f.out;
    if (f.episodes > 0) o.episodes_override = f.episodes;
    o.record_steps = f.steps;
    if (!f.quiet) o.log = [](const std::string& s) { std::cerr << s << '\n'; };
    return o;
}

std::vector<std::uint64_t> seeds_or_default(const RunFlags& f, const oran::ScenarioConfig& cfg) {
    return f.seeds.empty() ? std::vector<std::uint64_t>{cfg.seed} : f.seeds;
}

int cmd_train(const RunFlags& f, oran::RunMode mode) {
    const oran::ScenarioConfig cfg = oran::load_scenario(f.scenario);
    const auto seeds = seeds_or_default(f, cfg);
    for (const auto& art : oran::run_experiment(cfg, mode, seeds, options(f))) std::cout << art.dir.string() << '\n';
    return 0;
}

std::vector<double> convergence_episodes(const std::string& dir) {
    std::vector<double> out;
    const std::vector<fs::path> roots{dir};
    for (const auto& r : oran::discover_runs(roots)) {
        if (r.training.empty()) continue;
        if (!r.convergence_episode) {
            throw std::runtime_error(r.dir.string() + " did not converge; no convergence episode to compare");
        }
        out.push_back(*r.convergence_episode);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radio-unit sleep control: simulation, training and reporting"};
    app.require_subcommand(1);

    RunFlags train_flags;
    auto* train = app.add_subcommand("train", "centralized training with evaluation");
    add_run_flags(train, train_flags);
    train->add_flag("--steps", train_flags.steps, "also write per-step logs (steps.csv)");

    RunFlags fed_flags;
    auto* fed = app.add_subcommand("fed-train", "federated training over the scenario's subregions");
    add_run_flags(fed, fed_flags);

    std::string eval_dir;
    int eval_episodes = 0;
    auto* eval = app.add_subcommand("eval", "re-evaluate the checkpoint of a run directory");
    eval->add_option("-r,--run", eval_dir, "run directory")->required()->check(CLI::ExistingDirectory);
    eval->add_option("-e,--episodes", eval_episodes, "evaluation episodes (default: from config)")
        ->check(CLI::PositiveNumber);

    RunFlags base_flags;
    std::string base_kind = "all_on";
    auto* baseline = app.add_subcommand("baseline", "evaluate the all-on or myopic-oracle baseline");
    add_run_flags(baseline, base_flags);
    baseline->add_option("-k,--kind", base_kind, "all_on or oracle")->check(CLI::IsMember({"all_on", "oracle"}));

    std::vector<std::string> report_runs;
    std::string report_out = "reports";
    auto* report = app.add_subcommand("report", "CSV tables and SVG plots from completed runs");
    report->add_option("-r,--runs", report_runs, "run directories or roots to scan")->required();
    report->add_option("-o,--out", report_out, "report directory");

    std::string ta, tb;
    std::vector<double> summary;
    auto* ttest = app.add_subcommand("ttest", "Welch t-test on convergence episodes of two run groups");
    auto* opt_a = ttest->add_option("--a", ta, "first run group directory");
    auto* opt_b = ttest->add_option("--b", tb, "second run group directory");
    auto* opt_s = ttest->add_option("--summary", summary, "mean_a sd_a n_a mean_b sd_b n_b")->expected(6);
    opt_a->needs(opt_b);
    opt_b->needs(opt_a);
    opt_s->excludes(opt_a)->excludes(opt_b);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) return cmd_train(train_flags, oran::RunMode::centralized);
        if (*fed) return cmd_train(fed_flags, oran::RunMode::federated);
        if (*eval) {
            const auto rows = oran::evaluate_run(eval_dir, eval_episodes > 0 ? std::optional<int>(eval_episodes)
                                                                            : std::nullopt);
            double p = 0;
            for (const auto& m : rows) p += m.mean_power_w;
            std::cout << fmt::format("{} episodes, mean power {:.3f} W\n", rows.size(), p / rows.size());
            return 0;
        }
        if (*baseline) {
            const oran::ScenarioConfig cfg = oran::load_scenario(base_flags.scenario);
            const auto kind = oran::baseline_from_string(base_kind);
            for (std::uint64_t s : seeds_or_default(base_flags, cfg)) {
                std::cout << oran::run_baseline(cfg, kind, s, options(base_flags)).dir.string() << '\n';
            }
            return 0;
        }
        if (*report) {
            std::vector<fs::path> roots(report_runs.begin(), report_runs.end());
            for (const auto& p : oran::emit_reports(roots, report_out)) std::cout << p.string() << '\n';
            return 0;
        }
        if (*ttest) {
            oran::stats::WelchResult w;
            if (!summary.empty()) {
                w = oran::stats::welch_from_summary({summary[0], summary[1], static_cast<int>(summary[2])},
                                                    {summary[3], summary[4], static_cast<int>(summary[5])});
            } else if (!ta.empty()) {
                const auto a = convergence_episodes(ta);
                const auto b = convergence_episodes(tb);
                const auto sa = oran::stats::summarize(a);
                const auto sb = oran::stats::summarize(b);
                std::cout << fmt::format("a: {:.1f} +- {:.1f} (n={})\nb: {:.1f} +- {:.1f} (n={})\n", sa.mean,
                                         sa.stddev, sa.n, sb.mean, sb.stddev, sb.n);
                w = oran::stats::welch_t_test(a, b);
            } else {
                std::cerr << "ttest: give --a/--b run groups or --summary\n";
                return 2;
            }
            std::cout << fmt::format("t = {:.4f}, df = {:.3f}, p = {:.4g}\n", w.t, w.df, w.p_two_sided);
            return 0;
        }
    } catch (const oran::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
