#include "oran/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace oran {

using json = nlohmann::json;

namespace {

/// Tracks which keys of one object were consumed so leftovers can be rejected.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) const { return j_.contains(key); }

    template <class T>
    void get(const std::string& key, T& out) {
        auto it = j_.find(key);
        if (it == j_.end()) return;
        seen_.insert(key);
        convert(*it, field(key), out);
    }

    template <class T>
    void require(const std::string& key, T& out) {
        if (!has(key)) throw ConfigError(field(key), "required field is missing");
        get(key, out);
    }

    const json* child(const std::string& key) {
        auto it = j_.find(key);
        if (it == j_.end()) return nullptr;
        seen_.insert(key);
        return &*it;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown key");
        }
    }

private:
    static void convert(const json& v, const std::string& f, double& out) {
        if (!v.is_number()) throw ConfigError(f, "expected a number");
        out = v.get<double>();
    }
    static void convert(const json& v, const std::string& f, int& out) {
        if (!v.is_number_integer()) throw ConfigError(f, "expected an integer");
        out = v.get<int>();
    }
    static void convert(const json& v, const std::string& f, std::uint64_t& out) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            throw ConfigError(f, "expected a non-negative integer");
        }
        out = v.get<std::uint64_t>();
    }
    static void convert(const json& v, const std::string& f, bool& out) {
        if (!v.is_boolean()) throw ConfigError(f, "expected true or false");
        out = v.get<bool>();
    }
    static void convert(const json& v, const std::string& f, std::string& out) {
        if (!v.is_string()) throw ConfigError(f, "expected a string");
        out = v.get<std::string>();
    }
    static void convert(const json& v, const std::string& f, std::vector<int>& out) {
        if (!v.is_array()) throw ConfigError(f, "expected an array of integers");
        out.clear();
        for (const auto& e : v) {
            if (!e.is_number_integer()) throw ConfigError(f, "expected an array of integers");
            out.push_back(e.get<int>());
        }
    }
    static void convert(const json& v, const std::string& f, std::vector<double>& out) {
        if (!v.is_array()) throw ConfigError(f, "expected an array of numbers");
        out.clear();
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError(f, "expected an array of numbers");
            out.push_back(e.get<double>());
        }
    }
    static void convert(const json& v, const std::string& f, std::vector<Point>& out) {
        if (!v.is_array()) throw ConfigError(f, "expected an array of [x, y] pairs");
        out.clear();
        for (const auto& e : v) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                throw ConfigError(f, "expected an array of [x, y] pairs");
            }
            out.push_back({e[0].get<double>(), e[1].get<double>()});
        }
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class Fn>
void with_child(ObjectReader& parent, const std::string& key, Fn&& fn) {
    if (const json* c = parent.child(key)) {
        ObjectReader r(*c, parent.field(key));
        fn(r);
        r.finish();
    }
}

void apply_layout_defaults(ScenarioConfig& c) {
    switch (c.layout) {
        case Layout::single_500: c.area_side_m = 500.0; break;
        case Layout::single_1000: c.area_side_m = 1000.0; break;
        case Layout::composite_1000:
            c.area_side_m = 1000.0;
            c.subregion_count = 4;
            c.subregion_side_m = 500.0;
            break;
        case Layout::multi_region:
        case Layout::custom: break;
    }
}

ScenarioConfig from_json(const json& root) {
    ScenarioConfig c;
    ObjectReader r(root, "");
    std::string layout;
    r.require("layout", layout);
    c.layout = layout_from_string(layout);
    apply_layout_defaults(c);

    r.get("name", c.name);
    r.require("num_rus", c.num_rus);
    r.require("num_ues", c.num_ues);
    r.get("area_side_m", c.area_side_m);
    r.get("ru_positions", c.ru_positions);
    with_child(r, "subregions", [&](ObjectReader& s) {
        s.get("count", c.subregion_count);
        s.get("side_m", c.subregion_side_m);
    });
    r.get("episode_length", c.episode_length);
    r.get("episodes", c.episodes);
    r.get("eval_episodes", c.eval_episodes);
    r.get("seed", c.seed);

    with_child(r, "channel", [&](ObjectReader& s) {
        auto& ch = c.channel;
        s.get("carrier_freq_ghz", ch.carrier_freq_ghz);
        s.get("ru_height_m", ch.ru_height_m);
        s.get("ue_height_m", ch.ue_height_m);
        s.get("noise_psd_dbm_hz", ch.noise_psd_dbm_hz);
        s.get("prb_bandwidth_hz", ch.prb_bandwidth_hz);
        s.get("shadowing_sigma_los_db", ch.shadowing_sigma_los_db);
        s.get("shadowing_sigma_nlos_db", ch.shadowing_sigma_nlos_db);
    });
    with_child(r, "power", [&](ObjectReader& s) {
        auto& p = c.power;
        s.get("p_active_w", p.p_active_w);
        s.get("p_sleep_w", p.p_sleep_w);
        s.get("p_tx_w", p.p_tx_w);
        s.get("pa_efficiency", p.pa_efficiency);
        s.get("v_trans_w", p.v_trans_w);
        s.get("prbs_per_ru", p.prbs_per_ru);
        s.get("charge_deactivation", p.charge_deactivation);
    });
    with_child(r, "traffic", [&](ObjectReader& s) {
        s.get("rate_min_bps", c.traffic.rate_min_bps);
        s.get("rate_norm_factor", c.traffic.rate_norm_factor);
    });
    with_child(r, "mobility", [&](ObjectReader& s) {
        s.get("speed_mean_mps", c.mobility.speed_mean_mps);
        s.get("speed_std_mps", c.mobility.speed_std_mps);
        s.get("dt_s", c.mobility.dt_s);
        s.get("heading_jitter_rad", c.mobility.heading_jitter_rad);
    });
    with_child(r, "reward", [&](ObjectReader& s) {
        s.get("w1", c.reward.w1);
        s.get("w2", c.reward.w2);
    });
    with_child(r, "agent", [&](ObjectReader& s) {
        auto& a = c.agent;
        std::string kind = to_string(a.kind);
        s.get("kind", kind);
        a.kind = agent_kind_from_string(kind);
        s.get("gamma", a.gamma);
        s.get("tau", a.tau);
        s.get("batch_size", a.batch_size);
        s.get("replay_capacity", a.replay_capacity);
        with_child(s, "td3", [&](ObjectReader& t) {
            t.get("actor_lr", a.td3.actor_lr);
            t.get("critic_lr", a.td3.critic_lr);
            t.get("sigma_explore", a.td3.sigma_explore);
            t.get("sigma_target", a.td3.sigma_target);
            t.get("noise_clip", a.td3.noise_clip);
            t.get("policy_delay", a.td3.policy_delay);
            t.get("store_continuous", a.td3.store_continuous);
            t.get("actor_batch_norm", a.td3.actor_batch_norm);
            t.get("actor_hidden", a.td3.actor_hidden);
            t.get("critic_hidden", a.td3.critic_hidden);
        });
        with_child(s, "dqn", [&](ObjectReader& d) {
            d.get("lr", a.dqn.lr);
            d.get("epsilon_start", a.dqn.epsilon_start);
            d.get("epsilon_end", a.dqn.epsilon_end);
            d.get("epsilon_decay_fraction", a.dqn.epsilon_decay_fraction);
            d.get("hidden", a.dqn.hidden);
        });
    });
    with_child(r, "federated", [&](ObjectReader& s) {
        auto& f = c.federated;
        s.get("frequency", f.frequency);
        std::string g = to_string(f.granularity);
        s.get("granularity", g);
        f.granularity = granularity_from_string(g);
        std::string w = to_string(f.weighting);
        s.get("weighting", w);
        f.weighting = weighting_from_string(w);
        s.get("weights", f.weights);
        s.get("include_bn_stats", f.include_bn_stats);
        s.get("reset_optimizer", f.reset_optimizer);
        s.get("parallel", f.parallel);
        s.get("shared_region_seed", f.shared_region_seed);
        s.get("exchange_dir", f.exchange_dir);
    });
    r.finish();
    c.validate();
    return c;
}

json to_json(const ScenarioConfig& c) {
    json pos = json::array();
    for (const Point& p : c.ru_positions) pos.push_back({p.x, p.y});
    const auto& a = c.agent;
    return json{
        {"name", c.name},
        {"layout", to_string(c.layout)},
        {"num_rus", c.num_rus},
        {"num_ues", c.num_ues},
        {"area_side_m", c.area_side_m},
        {"ru_positions", pos},
        {"subregions", {{"count", c.subregion_count}, {"side_m", c.subregion_side_m}}},
        {"episode_length", c.episode_length},
        {"episodes", c.episodes},
        {"eval_episodes", c.eval_episodes},
        {"seed", c.seed},
        {"channel",
         {{"carrier_freq_ghz", c.channel.carrier_freq_ghz},
          {"ru_height_m", c.channel.ru_height_m},
          {"ue_height_m", c.channel.ue_height_m},
          {"noise_psd_dbm_hz", c.channel.noise_psd_dbm_hz},
          {"prb_bandwidth_hz", c.channel.prb_bandwidth_hz},
          {"shadowing_sigma_los_db", c.channel.shadowing_sigma_los_db},
          {"shadowing_sigma_nlos_db", c.channel.shadowing_sigma_nlos_db}}},
        {"power",
         {{"p_active_w", c.power.p_active_w},
          {"p_sleep_w", c.power.p_sleep_w},
          {"p_tx_w", c.power.p_tx_w},
          {"pa_efficiency", c.power.pa_efficiency},
          {"v_trans_w", c.power.v_trans_w},
          {"prbs_per_ru", c.power.prbs_per_ru},
          {"charge_deactivation", c.power.charge_deactivation}}},
        {"traffic", {{"rate_min_bps", c.traffic.rate_min_bps}, {"rate_norm_factor", c.traffic.rate_norm_factor}}},
        {"mobility",
         {{"speed_mean_mps", c.mobility.speed_mean_mps},
          {"speed_std_mps", c.mobility.speed_std_mps},
          {"dt_s", c.mobility.dt_s},
          {"heading_jitter_rad", c.mobility.heading_jitter_rad}}},
        {"reward", {{"w1", c.reward.w1}, {"w2", c.reward.w2}}},
        {"agent",
         {{"kind", to_string(a.kind)},
          {"gamma", a.gamma},
          {"tau", a.tau},
          {"batch_size", a.batch_size},
          {"replay_capacity", a.replay_capacity},
          {"td3",
           {{"actor_lr", a.td3.actor_lr},
            {"critic_lr", a.td3.critic_lr},
            {"sigma_explore", a.td3.sigma_explore},
            {"sigma_target", a.td3.sigma_target},
            {"noise_clip", a.td3.noise_clip},
            {"policy_delay", a.td3.policy_delay},
            {"store_continuous", a.td3.store_continuous},
            {"actor_batch_norm", a.td3.actor_batch_norm},
            {"actor_hidden", a.td3.actor_hidden},
            {"critic_hidden", a.td3.critic_hidden}}},
          {"dqn",
           {{"lr", a.dqn.lr},
            {"epsilon_start", a.dqn.epsilon_start},
            {"epsilon_end", a.dqn.epsilon_end},
            {"epsilon_decay_fraction", a.dqn.epsilon_decay_fraction},
            {"hidden", a.dqn.hidden}}}}},
        {"federated",
         {{"frequency", c.federated.frequency},
          {"granularity", to_string(c.federated.granularity)},
          {"weighting", to_string(c.federated.weighting)},
          {"weights", c.federated.weights},
          {"include_bn_stats", c.federated.include_bn_stats},
          {"reset_optimizer", c.federated.reset_optimizer},
          {"parallel", c.federated.parallel},
          {"shared_region_seed", c.federated.shared_region_seed},
          {"exchange_dir", c.federated.exchange_dir}}},
    };
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("JSON parse error: ") + e.what());
    }
    return from_json(root);
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string serialize_scenario(const ScenarioConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

void save_scenario(const std::filesystem::path& path, const ScenarioConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << serialize_scenario(cfg);
}

}  // namespace oran
