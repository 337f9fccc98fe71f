#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oran/nn.hpp"

namespace oran::nn {

inline constexpr const char* kCheckpointFormat = "oran-mlp-checkpoint";
inline constexpr int kCheckpointVersion = 1;

/// One network: topology, trainable parameters, BN running statistics and
/// (optionally) its optimizer state.
struct NetworkCheckpoint {
    std::vector<LayerSpec> specs;
    ParamVector params;
    ParamVector stats;
    std::optional<AdamState> adam;

    friend bool operator==(const NetworkCheckpoint& a, const NetworkCheckpoint& b) {
        return a.specs == b.specs && a.params == b.params && a.stats == b.stats &&
               a.adam.has_value() == b.adam.has_value();
    }
};

/// Versioned JSON container of named networks. Doubles are written in
/// shortest round-trip form, so read(write(x)) reproduces every bit.
struct CheckpointFile {
    std::string kind;  // "td3", "dqn_single", "dqn_multi", or free-form
    std::map<std::string, NetworkCheckpoint> networks;
    std::map<std::string, std::string> meta;
};

NetworkCheckpoint snapshot(const MlpNetwork& net, const AdamState* adam = nullptr);
MlpNetwork restore(const NetworkCheckpoint& ckpt);

std::string serialize_checkpoint(const CheckpointFile& file);
CheckpointFile parse_checkpoint(const std::string& text);

void write_checkpoint(const std::filesystem::path& path, const CheckpointFile& file);
CheckpointFile read_checkpoint(const std::filesystem::path& path);

}  // namespace oran::nn
