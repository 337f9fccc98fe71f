#pragma once

#include <cstdint>
#include <vector>

#include "oran/metrics.hpp"
#include "oran/radio_env.hpp"
#include "oran/trainer.hpp"

namespace oran {

inline constexpr int kOracleMaxRus = 12;

/// Best one-step action on the frozen snapshot by exhaustive enumeration of
/// all 2^M vectors. Ties go to fewer active RUs, then the lowest encoding
/// (RU 0 as most significant bit). Throws std::invalid_argument for M > 12.
ModeVector myopic_oracle_action(const NetworkState& state, const SlotChannel& links, const ScenarioConfig& cfg);

rl::PolicyFn all_on_policy();
rl::PolicyFn myopic_oracle_policy();

std::vector<EpisodeMetrics> baseline_all_on(const ScenarioConfig& cfg, std::uint64_t seed, int episodes);
std::vector<EpisodeMetrics> baseline_myopic_oracle(const ScenarioConfig& cfg, std::uint64_t seed, int episodes);

}  // namespace oran
