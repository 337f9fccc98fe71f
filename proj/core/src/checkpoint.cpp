#include "oran/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace oran::nn {

using nlohmann::json;

namespace {

json network_to_json(const NetworkCheckpoint& n) {
    json layers = json::array();
    for (const auto& s : n.specs) {
        layers.push_back({{"input_dim", s.input_dim},
                          {"output_dim", s.output_dim},
                          {"activation", to_string(s.activation)},
                          {"batch_norm", s.batch_norm}});
    }
    json j = {{"layers", layers}, {"params", n.params.values}, {"stats", n.stats.values}};
    if (n.adam) {
        j["adam"] = {{"step", n.adam->step}, {"lr", n.adam->lr},       {"beta1", n.adam->beta1},
                     {"beta2", n.adam->beta2}, {"eps", n.adam->eps},    {"m", n.adam->m},
                     {"v", n.adam->v}};
    }
    return j;
}

NetworkCheckpoint network_from_json(const json& j) {
    NetworkCheckpoint n;
    for (const auto& l : j.at("layers")) {
        n.specs.push_back({l.at("input_dim").get<int>(), l.at("output_dim").get<int>(),
                           activation_from_string(l.at("activation").get<std::string>()),
                           l.at("batch_norm").get<bool>()});
    }
    n.params.values = j.at("params").get<std::vector<double>>();
    n.stats.values = j.at("stats").get<std::vector<double>>();
    if (n.params.size() != param_count(n.specs) || n.stats.size() != stats_count(n.specs)) {
        throw std::runtime_error("checkpoint parameter count does not match its layer specs");
    }
    if (j.contains("adam")) {
        const auto& a = j.at("adam");
        AdamState s;
        s.step = a.at("step").get<long>();
        s.lr = a.at("lr").get<double>();
        s.beta1 = a.at("beta1").get<double>();
        s.beta2 = a.at("beta2").get<double>();
        s.eps = a.at("eps").get<double>();
        s.m = a.at("m").get<std::vector<double>>();
        s.v = a.at("v").get<std::vector<double>>();
        n.adam = std::move(s);
    }
    return n;
}

}  // namespace

NetworkCheckpoint snapshot(const MlpNetwork& net, const AdamState* adam) {
    NetworkCheckpoint c;
    c.specs = net.specs();
    c.params = net.extract_params();
    c.stats = net.extract_stats();
    if (adam) c.adam = *adam;
    return c;
}

MlpNetwork restore(const NetworkCheckpoint& ckpt) {
    MlpNetwork net(ckpt.specs);
    net.inject_params(ckpt.params);
    net.inject_stats(ckpt.stats);
    return net;
}

std::string serialize_checkpoint(const CheckpointFile& file) {
    json nets = json::object();
    for (const auto& [name, n] : file.networks) nets[name] = network_to_json(n);
    json j = {{"format", kCheckpointFormat},
              {"version", kCheckpointVersion},
              {"kind", file.kind},
              {"meta", file.meta},
              {"networks", nets}};
    return j.dump() + "\n";
}

CheckpointFile parse_checkpoint(const std::string& text) {
    const json j = json::parse(text);
    if (j.value("format", std::string{}) != kCheckpointFormat) {
        throw std::runtime_error("not an oran checkpoint");
    }
    if (j.at("version").get<int>() != kCheckpointVersion) {
        throw std::runtime_error("unsupported checkpoint version " + std::to_string(j.at("version").get<int>()));
    }
    CheckpointFile f;
    f.kind = j.at("kind").get<std::string>();
    f.meta = j.value("meta", std::map<std::string, std::string>{});
    for (const auto& [name, n] : j.at("networks").items()) f.networks.emplace(name, network_from_json(n));
    return f;
}

void write_checkpoint(const std::filesystem::path& path, const CheckpointFile& file) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << serialize_checkpoint(file);
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

CheckpointFile read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_checkpoint(ss.str());
}

}  // namespace oran::nn
