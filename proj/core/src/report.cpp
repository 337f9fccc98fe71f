#include "oran/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "oran/stats.hpp"

namespace oran {

using json = nlohmann::json;
namespace fs = std::filesystem;

RunRecord load_run(const fs::path& run_dir) {
    std::ifstream in(run_dir / "summary.json");
    if (!in) throw std::runtime_error("missing summary.json in " + run_dir.string());
    const json s = json::parse(in);
    RunRecord r;
    r.dir = run_dir;
    r.scenario = s.at("scenario").get<std::string>();
    r.label = s.at("label").get<std::string>();
    r.seed = s.at("seed").get<std::uint64_t>();
    if (s.contains("training")) {
        const auto& c = s["training"]["convergence_episode"];
        if (!c.is_null()) r.convergence_episode = c.get<int>();
    }
    if (fs::exists(run_dir / "metrics.csv")) r.training = read_metrics_csv(run_dir / "metrics.csv");
    if (!fs::exists(run_dir / "eval.csv")) throw std::runtime_error("missing eval.csv in " + run_dir.string());
    r.evaluation = read_metrics_csv(run_dir / "eval.csv");
    if (r.evaluation.empty()) throw std::runtime_error("empty eval.csv in " + run_dir.string());
    return r;
}

std::vector<RunRecord> discover_runs(std::span<const fs::path> roots) {
    std::vector<fs::path> dirs;
    for (const auto& root : roots) {
        if (!fs::exists(root)) throw std::runtime_error("run directory " + root.string() + " does not exist");
        if (fs::exists(root / "summary.json")) dirs.push_back(root);
        if (!fs::is_directory(root)) continue;
        for (const auto& e : fs::recursive_directory_iterator(root)) {
            if (e.is_directory() && fs::exists(e.path() / "summary.json")) dirs.push_back(e.path());
        }
    }
    std::sort(dirs.begin(), dirs.end());
    dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
    if (dirs.empty()) throw std::runtime_error("no completed runs (summary.json) found; nothing to report");
    std::vector<RunRecord> runs;
    for (const auto& d : dirs) runs.push_back(load_run(d));
    return runs;
}

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct CurveRow {
    std::string group;
    int episode;
    double mean_reward;
    int seeds;
};

struct EnergyRow {
    std::string group;
    int runs;
    double mean_energy_j;
    double std_energy_j;
    double mean_power_w;
    double std_power_w;
};

double eval_mean(const RunRecord& r, double EpisodeMetrics::*field) {
    double s = 0.0;
    for (const auto& m : r.evaluation) s += m.*field;
    return s / static_cast<double>(r.evaluation.size());
}

void write_file(const fs::path& p, const std::string& text, std::vector<fs::path>& written) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
    written.push_back(p);
}

std::string esc(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '&': o += "&amp;"; break;
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            default: o += c;
        }
    }
    return o;
}

struct Frame {
    double width = 820, height = 480, left = 80, right = 220, top = 40, bottom = 60;
    double x0, x1, y0, y1;
    double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

void pad_range(double& lo, double& hi) {
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
}

std::string svg_axes(const Frame& f, const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     bool x_ticks) {
    std::string s = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" viewBox=\"0 0 {0:.0f} {1:.0f}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        f.width, f.height);
    s += fmt::format("<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                     (f.left + f.width - f.right) / 2, esc(title));
    const double xa = f.left, xb = f.width - f.right, ya = f.height - f.bottom, yb = f.top;
    s += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\"/>\n", xa, ya, xb, ya);
    s += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\"/>\n", xa, ya, xa, yb);
    for (int i = 0; i <= 5; ++i) {
        const double v = f.y0 + (f.y1 - f.y0) * i / 5.0;
        const double y = f.py(v);
        s += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n", xa, y, xb, y);
        s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.4g}</text>\n", xa - 6, y + 4, v);
        if (x_ticks) {
            const double xv = f.x0 + (f.x1 - f.x0) * i / 5.0;
            s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.0f}</text>\n", f.px(xv), ya + 18,
                             xv);
        }
    }
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", (xa + xb) / 2,
                     f.height - 15, esc(xlabel));
    s += fmt::format(
        "<text x=\"18\" y=\"{0:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0:.1f})\">{1}</text>\n",
        (ya + yb) / 2, esc(ylabel));
    return s;
}

std::string legend(const Frame& f, const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const double y = f.top + 10 + 18.0 * static_cast<double>(i);
        const double x = f.width - f.right + 15;
        s += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n", x, y - 10,
                         kPalette[i % 10]);
        s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", x + 18, y, esc(names[i]));
    }
    return s;
}

std::string curves_svg(const std::vector<CurveRow>& rows) {
    std::vector<std::string> groups;
    for (const auto& r : rows) {
        if (std::find(groups.begin(), groups.end(), r.group) == groups.end()) groups.push_back(r.group);
    }
    Frame f;
    f.x0 = 0;
    f.x1 = 1;
    f.y0 = rows.front().mean_reward;
    f.y1 = rows.front().mean_reward;
    for (const auto& r : rows) {
        f.x1 = std::max(f.x1, static_cast<double>(r.episode));
        f.y0 = std::min(f.y0, r.mean_reward);
        f.y1 = std::max(f.y1, r.mean_reward);
    }
    pad_range(f.y0, f.y1);
    std::string s = svg_axes(f, "Mean episode reward during training", "episode", "mean reward", true);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        std::string pts;
        for (const auto& r : rows) {
            if (r.group == groups[g]) pts += fmt::format("{:.2f},{:.2f} ", f.px(r.episode), f.py(r.mean_reward));
        }
        s += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"{}\"/>\n",
                         kPalette[g % 10], pts);
    }
    s += legend(f, groups);
    return s + "</svg>\n";
}

std::string energy_svg(const std::vector<EnergyRow>& rows) {
    Frame f;
    f.bottom = 60;
    f.x0 = 0;
    f.x1 = static_cast<double>(rows.size());
    f.y0 = 0;
    f.y1 = 0;
    for (const auto& r : rows) f.y1 = std::max(f.y1, r.mean_energy_j + r.std_energy_j);
    if (f.y1 <= 0) f.y1 = 1;
    f.y1 *= 1.1;
    std::string s = svg_axes(f, "Evaluation energy per episode (mean +- std over runs)", "method", "energy [J]", false);
    std::vector<std::string> names;
    const double slot = (f.width - f.left - f.right) / std::max<double>(1, static_cast<double>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        names.push_back(r.group);
        const double x = f.left + slot * static_cast<double>(i) + slot * 0.15;
        const double w = slot * 0.7;
        const double top = f.py(r.mean_energy_j);
        s += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n", x, top, w,
                         f.py(0) - top, kPalette[i % 10]);
        const double cx = x + w / 2;
        const double lo = f.py(std::max(0.0, r.mean_energy_j - r.std_energy_j));
        const double hi = f.py(r.mean_energy_j + r.std_energy_j);
        s += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", cx, lo,
                         hi);
        s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", cx - 6, hi,
                         cx + 6, hi);
        s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", cx - 6, lo,
                         cx + 6, lo);
        s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", cx, f.py(0) + 18, i + 1);
    }
    s += legend(f, names);
    return s + "</svg>\n";
}

std::string opt_int(const std::optional<int>& v) { return v ? std::to_string(*v) : "not_converged"; }

}  // namespace

std::vector<fs::path> emit_reports(std::span<const fs::path> roots, const fs::path& out_dir) {
    const std::vector<RunRecord> runs = discover_runs(roots);
    fs::create_directories(out_dir);
    std::vector<fs::path> written;

    std::map<std::string, std::vector<const RunRecord*>> groups;
    for (const auto& r : runs) groups[r.group()].push_back(&r);

    // Reward curves: per-episode mean over the seeds of a group.
    std::vector<CurveRow> curves;
    for (const auto& [g, rs] : groups) {
        std::size_t len = 0;
        for (const auto* r : rs) len = std::max(len, r->training.size());
        for (std::size_t e = 0; e < len; ++e) {
            double s = 0.0;
            int n = 0;
            for (const auto* r : rs) {
                if (e < r->training.size()) {
                    s += r->training[e].mean_reward;
                    ++n;
                }
            }
            curves.push_back({g, static_cast<int>(e), s / n, n});
        }
    }
    std::string csv = "group,episode,mean_reward,seeds\n";
    for (const auto& c : curves) csv += fmt::format("{},{},{},{}\n", c.group, c.episode, c.mean_reward, c.seeds);
    write_file(out_dir / "reward_curves.csv", csv, written);
    if (!curves.empty()) write_file(out_dir / "reward_curves.svg", curves_svg(curves), written);

    // Energy bars: per-run evaluation means, then mean and sample std over runs.
    std::vector<EnergyRow> energy;
    for (const auto& [g, rs] : groups) {
        std::vector<double> e;
        std::vector<double> p;
        for (const auto* r : rs) {
            e.push_back(eval_mean(*r, &EpisodeMetrics::energy_j));
            p.push_back(eval_mean(*r, &EpisodeMetrics::mean_power_w));
        }
        const auto se = stats::summarize(e);
        const auto sp = stats::summarize(p);
        energy.push_back({g, se.n, se.mean, se.stddev, sp.mean, sp.stddev});
    }
    csv = "group,runs,mean_energy_j,std_energy_j,mean_power_w,std_power_w\n";
    for (const auto& r : energy) {
        csv += fmt::format("{},{},{},{},{},{}\n", r.group, r.runs, r.mean_energy_j, r.std_energy_j, r.mean_power_w,
                           r.std_power_w);
    }
    write_file(out_dir / "energy.csv", csv, written);
    write_file(out_dir / "energy.svg", energy_svg(energy), written);

    csv = "group,seed,convergence_episode\n";
    for (const auto& r : runs) {
        if (!r.training.empty()) csv += fmt::format("{},{},{}\n", r.group(), r.seed, opt_int(r.convergence_episode));
    }
    write_file(out_dir / "convergence.csv", csv, written);

    // Federated vs centralized runs of the same agent kind.
    csv = "federated_group,centralized_group,fed_mean_convergence,fed_std,fed_converged,central_mean_convergence,"
          "central_std,central_converged,welch_t,welch_df,welch_p,fed_eval_power_w,central_eval_power_w\n";
    for (const auto& [fg, frs] : groups) {
        const auto fpos = fg.find("/federated_");
        if (fpos == std::string::npos) continue;
        const std::string agent = fg.substr(fpos + 11);
        for (const auto& [cg, crs] : groups) {
            const auto cpos = cg.find("/centralized_");
            if (cpos == std::string::npos || cg.substr(cpos + 13) != agent) continue;
            std::vector<double> fc, cc;
            for (const auto* r : frs) {
                if (r->convergence_episode) fc.push_back(*r->convergence_episode);
            }
            for (const auto* r : crs) {
                if (r->convergence_episode) cc.push_back(*r->convergence_episode);
            }
            const auto fs_ = stats::summarize(fc);
            const auto cs = stats::summarize(cc);
            std::string t = "NA", df = "NA", p = "NA";
            if (fs_.n >= 2 && cs.n >= 2 && (fs_.stddev > 0 || cs.stddev > 0 || fs_.mean == cs.mean)) {
                const auto w = stats::welch_from_summary(fs_, cs);
                t = fmt::format("{}", w.t);
                df = fmt::format("{}", w.df);
                p = fmt::format("{}", w.p_two_sided);
            }
            const double fp = std::find_if(energy.begin(), energy.end(), [&](auto& e) { return e.group == fg; })->mean_power_w;
            const double cp = std::find_if(energy.begin(), energy.end(), [&](auto& e) { return e.group == cg; })->mean_power_w;
            csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", fg, cg, fs_.mean, fs_.stddev, fs_.n, cs.mean,
                               cs.stddev, cs.n, t, df, p, fp, cp);
        }
    }
    write_file(out_dir / "comparison.csv", csv, written);
    return written;
}

}  // namespace oran
