#pragma once

#include <optional>
#include <span>
#include <vector>

#include "oran/channel.hpp"
#include "oran/config.hpp"
#include "oran/rng.hpp"

namespace oran {

/// Binary RU activation vector; entry m is 1 when RU m is active.
using ModeVector = std::vector<int>;

struct RadioUnit {
    int id = 0;
    Point position;
    int q_total = 100;
    double p_active_w = 20.0;
    double p_sleep_w = 5.0;
    double p_tx_w = 1.0;
    double v_trans_w = 3.0;
    int mode = 1;
    int prev_mode = 1;
    int prbs_used = 0;

    double load() const { return static_cast<double>(prbs_used) / q_total; }
};

struct UserEquipment {
    int id = 0;
    Point position;
    double speed_mps = 0.0;
    double heading_rad = 0.0;
    double heading_offset_rad = 0.0;
    int phase_offset = 0;
    Rect home;
    double rate_req_bps = 3e6;
    double rate_actual_bps = 0.0;
    std::optional<int> serving_ru;
    int prbs_alloc = 0;

    bool satisfied() const { return rate_actual_bps >= rate_req_bps; }
};

struct NetworkState {
    std::vector<RadioUnit> rus;
    std::vector<UserEquipment> ues;
    double area_side_m = 0.0;
    int time_step = 0;

    ModeVector modes() const;
};

/// Flat, normalized MDP state: [rates (K), previous modes (M), loads (M), positions (2K)].
struct Observation {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    std::span<const double> span() const { return values; }
    friend bool operator==(const Observation&, const Observation&) = default;
};

/// Link realizations for one slot, drawn for every (RU, UE) pair regardless of
/// RU modes so that a snapshot can be replayed under any action.
struct SlotChannel {
    int num_rus = 0;
    int num_ues = 0;
    std::vector<channel::LinkGain> links;  // index k * num_rus + m

    const channel::LinkGain& at(int m, int k) const {
        return links[static_cast<std::size_t>(k) * num_rus + m];
    }
};

struct RuPower {
    double fixed_w = 0.0;
    double data_w = 0.0;
    double transition_w = 0.0;
    double total_w = 0.0;
};

struct PowerReport {
    double total_w = 0.0;
    std::vector<RuPower> per_ru;
};

struct StepOutcome {
    Observation observation;
    double reward = 0.0;
    double power_total_w = 0.0;
    int unsatisfied_count = 0;
    bool done = false;
    int activations = 0;  // 0 -> 1 flips this slot
    int switches = 0;     // flips in either direction
    double transition_w = 0.0;
};

/// Result of scoring a candidate action on the current frozen snapshot.
struct SlotEvaluation {
    double reward = 0.0;
    double power_total_w = 0.0;
    int unsatisfied_count = 0;
    int active_rus = 0;
};

// ---- building blocks --------------------------------------------------------

/// Grid placement of n points filling rect row by row (cell centers).
std::vector<Point> grid_positions(int n, const Rect& rect);

/// RUs placed per layout, UEs uniformly in their home subregion; all modes 1.
NetworkState make_initial_state(const ScenarioConfig& cfg, Rng& rng);

/// Periodic edge-to-center-and-back motion: inbound during the first half of
/// each UE's (phase-shifted) cycle, outbound in the second; reflected at the
/// home-subregion walls.
void move_ues(NetworkState& state, const MobilityParams& mob, int cycle_length);

SlotChannel sample_channel(const NetworkState& state, const channel::ChannelParams& ch, Rng& rng);

/// Attach every UE to the active RU with the strongest received signal and
/// grant PRBs per RU in ascending UE id until capacity runs out.
void associate_and_allocate(NetworkState& state, const SlotChannel& links, const ScenarioConfig& cfg);

/// sample_channel followed by the deterministic allocation.
SlotChannel associate_and_allocate(NetworkState& state, const ScenarioConfig& cfg, Rng& rng);

PowerReport power_total(const NetworkState& state, const PowerParams& power);

double compute_reward(double power_w, int unsat, int k_total, const ScenarioConfig& cfg);

int count_unsatisfied(const NetworkState& state);

Observation encode_observation(const NetworkState& state, const ScenarioConfig& cfg);

inline int observation_size(int num_rus, int num_ues) { return 3 * num_ues + 2 * num_rus; }

/// Checks length and {0,1} entries; throws std::invalid_argument.
void validate_action(std::span<const int> action, int num_rus);

/// Scores `action` on a frozen snapshot without touching the caller's state.
/// Works for K = 0 (the QoS term then vanishes).
SlotEvaluation evaluate_action(NetworkState state, const SlotChannel& links, const ScenarioConfig& cfg,
                               std::span<const int> action);

// ---- environment ------------------------------------------------------------

/// Single-owner MDP environment. A step is split into advance (mobility and
/// channel draw, independent of the action) and apply (commit the action), so
/// that evaluate() can score any action on the identical snapshot.
class RadioEnv {
public:
    explicit RadioEnv(ScenarioConfig cfg);

    Observation reset(Rng& rng);
    void advance(Rng& rng);
    SlotEvaluation evaluate(std::span<const int> action) const;
    StepOutcome apply(std::span<const int> action);
    StepOutcome step(std::span<const int> action, Rng& rng);

    const ScenarioConfig& config() const { return cfg_; }
    const NetworkState& state() const { return state_; }
    NetworkState& mutable_state() { return state_; }
    const SlotChannel& slot_channel() const { return links_; }
    ModeVector modes() const { return state_.modes(); }
    Observation observe() const { return encode_observation(state_, cfg_); }

    int num_rus() const { return cfg_.num_rus; }
    int num_ues() const { return cfg_.num_ues; }
    int observation_size() const { return oran::observation_size(cfg_.num_rus, cfg_.num_ues); }
    int episode_length() const { return cfg_.episode_length; }
    bool done() const { return state_.time_step >= cfg_.episode_length; }

private:
    ScenarioConfig cfg_;
    NetworkState state_;
    SlotChannel links_;
};

}  // namespace oran
