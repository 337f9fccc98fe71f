#include "oran/radio_env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace oran {

namespace {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double reflect(double v, double lo, double hi) {
    if (v < lo) v = 2.0 * lo - v;
    if (v > hi) v = 2.0 * hi - v;
    return std::clamp(v, lo, hi);
}

// Smallest n with n * per_prb >= demand, or max_n + 1 when even max_n PRBs fall short.
int prbs_needed(double demand_bps, double snr, int max_n, const channel::ChannelParams& ch) {
    const double per_prb = channel::achievable_rate(1, snr, ch);
    if (!(per_prb > 0.0)) return max_n + 1;
    const double ratio = demand_bps / per_prb;
    if (ratio > static_cast<double>(max_n)) return max_n + 1;
    int n = std::max(1, static_cast<int>(std::ceil(ratio)));
    while (n > 1 && channel::achievable_rate(n - 1, snr, ch) >= demand_bps) --n;
    while (n <= max_n && channel::achievable_rate(n, snr, ch) < demand_bps) ++n;
    return n;
}

double reward_terms(double power_w, int unsat, int k_total, const ScenarioConfig& cfg) {
    const double energy = cfg.reward.w1 * power_w / cfg.p_max_w();
    if (k_total == 0) return -energy;
    return -energy - cfg.reward.w2 * static_cast<double>(unsat) / static_cast<double>(k_total);
}

}  // namespace

ModeVector NetworkState::modes() const {
    ModeVector m;
    m.reserve(rus.size());
    for (const auto& ru : rus) m.push_back(ru.mode);
    return m;
}

std::vector<Point> grid_positions(int n, const Rect& rect) {
    std::vector<Point> out;
    if (n <= 0) return out;
    int cols = 1;
    while (cols * cols < n) ++cols;
    const int rows = (n + cols - 1) / cols;
    const double dx = rect.side / cols;
    const double dy = rect.side / rows;
    for (int i = 0; i < n; ++i) {
        const int r = i / cols;
        const int c = i % cols;
        out.push_back({rect.x0 + (c + 0.5) * dx, rect.y0 + (r + 0.5) * dy});
    }
    return out;
}

NetworkState make_initial_state(const ScenarioConfig& cfg, Rng& rng) {
    NetworkState s;
    s.area_side_m = cfg.area_side_m;
    s.time_step = 0;

    std::vector<Point> ru_pos = cfg.ru_positions;
    if (ru_pos.empty()) {
        for (int j = 0; j < cfg.subregion_count; ++j) {
            auto g = grid_positions(cfg.rus_per_subregion(), cfg.subregion_rect(j));
            ru_pos.insert(ru_pos.end(), g.begin(), g.end());
        }
    }
    for (int m = 0; m < cfg.num_rus; ++m) {
        RadioUnit ru;
        ru.id = m;
        ru.position = ru_pos[static_cast<std::size_t>(m)];
        ru.q_total = cfg.power.prbs_per_ru;
        ru.p_active_w = cfg.power.p_active_w;
        ru.p_sleep_w = cfg.power.p_sleep_w;
        ru.p_tx_w = cfg.power.p_tx_w;
        ru.v_trans_w = cfg.power.v_trans_w;
        ru.mode = 1;
        ru.prev_mode = 1;
        s.rus.push_back(ru);
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> speed(cfg.mobility.speed_mean_mps, cfg.mobility.speed_std_mps);
    std::uniform_int_distribution<int> phase(0, cfg.episode_length - 1);
    const int per_region = cfg.ues_per_subregion();
    for (int k = 0; k < cfg.num_ues; ++k) {
        UserEquipment ue;
        ue.id = k;
        ue.home = cfg.subregion_rect(std::min(k / per_region, cfg.subregion_count - 1));
        ue.position = {ue.home.x0 + unit(rng) * ue.home.side, ue.home.y0 + unit(rng) * ue.home.side};
        const double v = cfg.mobility.speed_std_mps > 0.0 ? speed(rng) : cfg.mobility.speed_mean_mps;
        ue.speed_mps = std::max(v, 0.1 * cfg.mobility.speed_mean_mps);
        ue.heading_rad = unit(rng) * 2.0 * std::numbers::pi;
        ue.heading_offset_rad = (2.0 * unit(rng) - 1.0) * cfg.mobility.heading_jitter_rad;
        ue.phase_offset = phase(rng);
        ue.rate_req_bps = cfg.traffic.rate_min_bps;
        s.ues.push_back(ue);
    }
    return s;
}

void move_ues(NetworkState& state, const MobilityParams& mob, int cycle_length) {
    const int cycle = std::max(cycle_length, 1);
    for (auto& ue : state.ues) {
        const double step = ue.speed_mps * mob.dt_s;
        if (step <= 0.0) continue;
        const Point c = ue.home.center();
        const double dx = c.x - ue.position.x;
        const double dy = c.y - ue.position.y;
        const double dist = std::hypot(dx, dy);
        const bool inbound = ((state.time_step + ue.phase_offset) % cycle) < cycle / 2;

        if (inbound) {
            if (dist <= step) {
                ue.position = c;
                continue;
            }
            ue.heading_rad = std::atan2(dy, dx) + ue.heading_offset_rad;
        } else if (dist > 1e-9) {
            ue.heading_rad = std::atan2(-dy, -dx) + ue.heading_offset_rad;
        }
        const double x = ue.position.x + step * std::cos(ue.heading_rad);
        const double y = ue.position.y + step * std::sin(ue.heading_rad);
        ue.position.x = reflect(x, ue.home.x0, ue.home.x0 + ue.home.side);
        ue.position.y = reflect(y, ue.home.y0, ue.home.y0 + ue.home.side);
    }
}

SlotChannel sample_channel(const NetworkState& state, const channel::ChannelParams& ch, Rng& rng) {
    SlotChannel out;
    out.num_rus = static_cast<int>(state.rus.size());
    out.num_ues = static_cast<int>(state.ues.size());
    out.links.reserve(static_cast<std::size_t>(out.num_rus) * out.num_ues);
    for (const auto& ue : state.ues) {
        for (const auto& ru : state.rus) {
            const double d = std::max(distance(ue.position, ru.position), 1.0);
            out.links.push_back(channel::sample_link(d, ch, rng));
        }
    }
    return out;
}

void associate_and_allocate(NetworkState& state, const SlotChannel& links, const ScenarioConfig& cfg) {
    for (auto& ru : state.rus) ru.prbs_used = 0;
    for (auto& ue : state.ues) {
        ue.serving_ru.reset();
        ue.prbs_alloc = 0;
        ue.rate_actual_bps = 0.0;
    }

    const int M = static_cast<int>(state.rus.size());
    const int K = static_cast<int>(state.ues.size());
    for (int k = 0; k < K; ++k) {
        int best = -1;
        double best_gain = 0.0;
        for (int m = 0; m < M; ++m) {
            if (state.rus[m].mode != 1) continue;
            const double g = links.at(m, k).gain_linear;
            if (best < 0 || g > best_gain) {
                best = m;
                best_gain = g;
            }
        }
        if (best >= 0) state.ues[k].serving_ru = best;
    }

    // UEs are stored in ascending id, so a single pass per RU honors the grant order.
    for (int m = 0; m < M; ++m) {
        auto& ru = state.rus[m];
        if (ru.mode != 1) continue;
        for (int k = 0; k < K; ++k) {
            auto& ue = state.ues[k];
            if (ue.serving_ru != m) continue;
            const double snr = channel::snr_per_prb(links.at(m, k), ru.p_tx_w, ru.q_total, cfg.channel);
            const int remaining = ru.q_total - ru.prbs_used;
            const int need = prbs_needed(ue.rate_req_bps, snr, ru.q_total, cfg.channel);
            const int grant = channel::achievable_rate(1, snr, cfg.channel) > 0.0 ? std::min(need, remaining) : 0;
            ue.prbs_alloc = grant;
            ue.rate_actual_bps = channel::achievable_rate(grant, snr, cfg.channel);
            ru.prbs_used += grant;
        }
    }
}

SlotChannel associate_and_allocate(NetworkState& state, const ScenarioConfig& cfg, Rng& rng) {
    SlotChannel links = sample_channel(state, cfg.channel, rng);
    associate_and_allocate(state, links, cfg);
    return links;
}

PowerReport power_total(const NetworkState& state, const PowerParams& power) {
    PowerReport rep;
    rep.per_ru.reserve(state.rus.size());
    for (const auto& ru : state.rus) {
        RuPower p;
        const double a = ru.mode;
        p.fixed_w = a * ru.p_active_w + (1.0 - a) * ru.p_sleep_w;
        p.data_w = a * (ru.p_tx_w / power.pa_efficiency) * ru.load();
        const int flip = power.charge_deactivation ? std::abs(ru.mode - ru.prev_mode)
                                                   : std::max(ru.mode - ru.prev_mode, 0);
        p.transition_w = flip * ru.v_trans_w;
        p.total_w = p.fixed_w + p.data_w + p.transition_w;
        rep.total_w += p.total_w;
        rep.per_ru.push_back(p);
    }
    return rep;
}

double compute_reward(double power_w, int unsat, int k_total, const ScenarioConfig& cfg) {
    if (k_total <= 0) throw std::invalid_argument("compute_reward: k_total must be >= 1");
    return reward_terms(power_w, unsat, k_total, cfg);
}

int count_unsatisfied(const NetworkState& state) {
    return static_cast<int>(std::count_if(state.ues.begin(), state.ues.end(),
                                          [](const UserEquipment& u) { return !u.satisfied(); }));
}

Observation encode_observation(const NetworkState& state, const ScenarioConfig& cfg) {
    const auto K = state.ues.size();
    const auto M = state.rus.size();
    Observation obs;
    obs.values.reserve(3 * K + 2 * M);
    for (const auto& ue : state.ues) {
        const double norm = cfg.traffic.rate_norm_factor * ue.rate_req_bps;
        obs.values.push_back(std::min(ue.rate_actual_bps / norm, 1.0));
    }
    for (const auto& ru : state.rus) obs.values.push_back(static_cast<double>(ru.mode));
    for (const auto& ru : state.rus) obs.values.push_back(std::clamp(ru.load(), 0.0, 1.0));
    const double L = state.area_side_m;
    for (const auto& ue : state.ues) {
        obs.values.push_back(std::clamp(ue.position.x / L, 0.0, 1.0));
        obs.values.push_back(std::clamp(ue.position.y / L, 0.0, 1.0));
    }
    return obs;
}

void validate_action(std::span<const int> action, int num_rus) {
    if (static_cast<int>(action.size()) != num_rus) {
        throw std::invalid_argument("action length " + std::to_string(action.size()) +
                                    " does not match M = " + std::to_string(num_rus));
    }
    for (int a : action) {
        if (a != 0 && a != 1) throw std::invalid_argument("action entries must be 0 or 1");
    }
}

SlotEvaluation evaluate_action(NetworkState state, const SlotChannel& links, const ScenarioConfig& cfg,
                               std::span<const int> action) {
    for (std::size_t m = 0; m < state.rus.size(); ++m) {
        state.rus[m].prev_mode = state.rus[m].mode;
        state.rus[m].mode = action[m];
    }
    associate_and_allocate(state, links, cfg);
    SlotEvaluation ev;
    ev.power_total_w = power_total(state, cfg.power).total_w;
    ev.unsatisfied_count = count_unsatisfied(state);
    ev.reward = reward_terms(ev.power_total_w, ev.unsatisfied_count,
                             static_cast<int>(state.ues.size()), cfg);
    ev.active_rus = static_cast<int>(std::count(action.begin(), action.end(), 1));
    return ev;
}

// ---- RadioEnv ---------------------------------------------------------------

RadioEnv::RadioEnv(ScenarioConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

Observation RadioEnv::reset(Rng& rng) {
    state_ = make_initial_state(cfg_, rng);
    links_ = associate_and_allocate(state_, cfg_, rng);
    return observe();
}

void RadioEnv::advance(Rng& rng) {
    if (done()) throw std::logic_error("episode finished; call reset()");
    move_ues(state_, cfg_.mobility, cfg_.episode_length);
    links_ = sample_channel(state_, cfg_.channel, rng);
}

SlotEvaluation RadioEnv::evaluate(std::span<const int> action) const {
    validate_action(action, cfg_.num_rus);
    return evaluate_action(state_, links_, cfg_, action);
}

StepOutcome RadioEnv::apply(std::span<const int> action) {
    validate_action(action, cfg_.num_rus);
    if (done()) throw std::logic_error("episode finished; call reset()");
    StepOutcome out;
    for (std::size_t m = 0; m < state_.rus.size(); ++m) {
        auto& ru = state_.rus[m];
        ru.prev_mode = ru.mode;
        ru.mode = action[m];
        if (ru.mode != ru.prev_mode) ++out.switches;
        if (ru.mode > ru.prev_mode) ++out.activations;
    }
    associate_and_allocate(state_, links_, cfg_);
    const PowerReport power = power_total(state_, cfg_.power);
    out.power_total_w = power.total_w;
    for (const auto& p : power.per_ru) out.transition_w += p.transition_w;
    out.unsatisfied_count = count_unsatisfied(state_);
    out.reward = compute_reward(out.power_total_w, out.unsatisfied_count, cfg_.num_ues, cfg_);
    ++state_.time_step;
    out.done = done();
    out.observation = observe();
    return out;
}

StepOutcome RadioEnv::step(std::span<const int> action, Rng& rng) {
    validate_action(action, cfg_.num_rus);
    advance(rng);
    return apply(action);
}

}  // namespace oran
