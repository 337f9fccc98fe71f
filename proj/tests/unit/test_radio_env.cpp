#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oran/radio_env.hpp"

using namespace oran;

namespace {

ScenarioConfig default_500() {
    ScenarioConfig c;
    c.layout = Layout::single_500;
    c.num_rus = 6;
    c.num_ues = 20;
    c.area_side_m = 500.0;
    c.seed = 42;
    return c;
}

ScenarioConfig quiet(ScenarioConfig c) {
    c.channel.shadowing_sigma_los_db = 0.0;
    c.channel.shadowing_sigma_nlos_db = 0.0;
    return c;
}

RadioUnit make_ru(int mode, int prev_mode, int used) {
    RadioUnit ru;
    ru.mode = mode;
    ru.prev_mode = prev_mode;
    ru.prbs_used = used;
    return ru;
}

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

TEST(Power, ActiveFullLoad) {
    NetworkState s;
    s.rus.push_back(make_ru(1, 1, 100));
    EXPECT_DOUBLE_EQ(power_total(s, PowerParams{}).total_w, 22.0);
}

TEST(Power, Sleeping) {
    NetworkState s;
    s.rus.push_back(make_ru(0, 1, 0));
    EXPECT_DOUBLE_EQ(power_total(s, PowerParams{}).total_w, 5.0);
}

TEST(Power, WakingIdle) {
    NetworkState s;
    s.rus.push_back(make_ru(1, 0, 0));
    const PowerReport r = power_total(s, PowerParams{});
    EXPECT_DOUBLE_EQ(r.total_w, 23.0);
    EXPECT_DOUBLE_EQ(r.per_ru[0].transition_w, 3.0);
}

TEST(Power, DeactivationChargedOnlyWithToggle) {
    NetworkState s;
    s.rus.push_back(make_ru(0, 1, 0));
    PowerParams p;
    EXPECT_DOUBLE_EQ(power_total(s, p).total_w, 5.0);
    p.charge_deactivation = true;
    EXPECT_DOUBLE_EQ(power_total(s, p).total_w, 8.0);
}

TEST(Power, DecompositionSumsToTotal) {
    Rng rng(11);
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_int_distribution<int> prbs(0, 100);
    for (int trial = 0; trial < 500; ++trial) {
        NetworkState s;
        for (int m = 0; m < 8; ++m) {
            const int mode = bit(rng);
            s.rus.push_back(make_ru(mode, bit(rng), mode ? prbs(rng) : 0));
        }
        const PowerReport r = power_total(s, PowerParams{});
        double sum = 0.0;
        for (const auto& p : r.per_ru) {
            ASSERT_NEAR(p.total_w, p.fixed_w + p.data_w + p.transition_w, 1e-12);
            sum += p.total_w;
        }
        ASSERT_NEAR(sum, r.total_w, 1e-9);
    }
}

TEST(Reward, Examples) {
    const ScenarioConfig c = default_500();
    EXPECT_DOUBLE_EQ(c.p_max_w(), 126.0);
    EXPECT_DOUBLE_EQ(compute_reward(126.0, 0, 20, c), -1.0);
    EXPECT_DOUBLE_EQ(compute_reward(63.0, 20, 20, c), -5.5);
    EXPECT_THROW(compute_reward(10.0, 0, 0, c), std::invalid_argument);
    ScenarioConfig twelve = c;
    twelve.num_rus = 12;
    EXPECT_DOUBLE_EQ(twelve.p_max_w(), 252.0);
}

TEST(Reward, MonotoneInUnsatisfied) {
    const ScenarioConfig c = default_500();
    for (double p : {0.0, 30.0, 126.0}) {
        for (int u = 0; u < 20; ++u) ASSERT_LT(compute_reward(p, u + 1, 20, c), compute_reward(p, u, 20, c));
    }
}

TEST(RadioEnvReset, DeterministicAllOnCorrectLength) {
    RadioEnv env(default_500());
    Rng a(42);
    Rng b(42);
    const Observation o1 = env.reset(a);
    const ModeVector m1 = env.modes();
    RadioEnv env2(default_500());
    const Observation o2 = env2.reset(b);
    EXPECT_EQ(o1, o2);
    EXPECT_EQ(o1.size(), 72u);
    EXPECT_EQ(env.observation_size(), 72);
    EXPECT_EQ(m1, ModeVector(6, 1));
}

TEST(RadioEnvReset, PositionsInsideArea) {
    RadioEnv env(default_500());
    Rng rng(1);
    env.reset(rng);
    for (const auto& ue : env.state().ues) {
        EXPECT_TRUE((Rect{0, 0, 500}.contains(ue.position)));
        EXPECT_GT(ue.speed_mps, 0.0);
    }
    for (const auto& ru : env.state().rus) EXPECT_TRUE((Rect{0, 0, 500}.contains(ru.position)));
}

TEST(RadioEnvReset, GridPlacement) {
    const auto g = grid_positions(6, Rect{0, 0, 300});
    ASSERT_EQ(g.size(), 6u);
    EXPECT_EQ(g[0], (Point{50, 75}));
    EXPECT_EQ(g[5], (Point{250, 225}));
}

TEST(Mobility, ZeroSpeedStaysPut) {
    NetworkState s;
    UserEquipment ue;
    ue.position = {10, 20};
    ue.speed_mps = 0.0;
    ue.home = {0, 0, 100};
    s.ues.push_back(ue);
    for (int t = 0; t < 50; ++t) {
        s.time_step = t;
        move_ues(s, MobilityParams{}, 200);
    }
    EXPECT_EQ(s.ues[0].position, (Point{10, 20}));
}

TEST(Mobility, OutwardAtBoundaryStaysInside) {
    NetworkState s;
    UserEquipment ue;
    ue.position = {100, 100};
    ue.speed_mps = 7.0;
    ue.home = {0, 0, 100};
    ue.phase_offset = 100;  // outbound from the first slot
    s.ues.push_back(ue);
    for (int t = 0; t < 100; ++t) {
        s.time_step = t;
        move_ues(s, MobilityParams{}, 200);
        ASSERT_TRUE(ue.home.contains(s.ues[0].position));
    }
}

TEST(Mobility, InboundApproachesCenter) {
    NetworkState s;
    UserEquipment ue;
    ue.position = {0, 250};
    ue.speed_mps = 1.5;
    ue.heading_offset_rad = 0.4;
    ue.home = {0, 0, 500};
    ue.phase_offset = 0;
    s.ues.push_back(ue);
    double prev = dist(s.ues[0].position, ue.home.center());
    for (int t = 0; t < 100; ++t) {
        s.time_step = t;
        move_ues(s, MobilityParams{}, 200);
        const double d = dist(s.ues[0].position, ue.home.center());
        ASSERT_LT(d, prev) << "slot " << t;
        prev = d;
    }
}

TEST(Allocation, AllOffLeavesEveryoneUnserved) {
    RadioEnv env(default_500());
    Rng rng(4);
    env.reset(rng);
    env.advance(rng);
    const StepOutcome out = env.apply(ModeVector(6, 0));
    for (const auto& ue : env.state().ues) {
        EXPECT_FALSE(ue.serving_ru.has_value());
        EXPECT_EQ(ue.rate_actual_bps, 0.0);
        EXPECT_EQ(ue.prbs_alloc, 0);
    }
    for (const auto& ru : env.state().rus) EXPECT_EQ(ru.prbs_used, 0);
    EXPECT_EQ(out.unsatisfied_count, 20);
    EXPECT_DOUBLE_EQ(out.reward, -(6 * 5.0) / 126.0 - 5.0);
}

TEST(Allocation, SingleRuServesAllAtHighSnr) {
    ScenarioConfig c = quiet(default_500());
    c.layout = Layout::custom;
    c.num_rus = 2;
    c.num_ues = 8;
    c.area_side_m = 500.0;
    c.ru_positions = {{100, 100}, {400, 400}};
    RadioEnv env(c);
    Rng rng(9);
    env.reset(rng);
    auto& st = env.mutable_state();
    st.rus[1].mode = 0;
    for (int k = 0; k < c.num_ues; ++k) st.ues[k].position = {100.0 + 3.0 * k, 110.0};
    associate_and_allocate(st, c, rng);
    int total = 0;
    for (const auto& ue : st.ues) {
        ASSERT_TRUE(ue.serving_ru.has_value());
        EXPECT_EQ(*ue.serving_ru, 0);
        EXPECT_TRUE(ue.satisfied());
        EXPECT_EQ(ue.prbs_alloc, 1);
        total += ue.prbs_alloc;
    }
    EXPECT_EQ(st.rus[0].prbs_used, total);
    EXPECT_EQ(st.rus[1].prbs_used, 0);
}

TEST(Allocation, OverloadFillsCapacityAndLeavesUnsatisfied) {
    ScenarioConfig c = quiet(default_500());
    c.layout = Layout::custom;
    c.num_rus = 1;
    c.num_ues = 12;
    c.power.prbs_per_ru = 10;
    c.ru_positions = {{250, 250}};
    RadioEnv env(c);
    Rng rng(2);
    env.reset(rng);
    auto& st = env.mutable_state();
    // Twelve UEs needing at least one PRB each cannot fit into Q = 10.
    for (int k = 0; k < c.num_ues; ++k) st.ues[k].position = {450.0, 250.0};
    associate_and_allocate(st, c, rng);
    EXPECT_EQ(st.rus[0].prbs_used, 10);
    EXPECT_GE(count_unsatisfied(st), 1);
    // Grants go in ascending UE id: once a UE is short, all later UEs get nothing.
    bool short_seen = false;
    for (const auto& ue : st.ues) {
        if (short_seen) EXPECT_EQ(ue.prbs_alloc, 0);
        if (!ue.satisfied()) short_seen = true;
    }
}

TEST(Observation, Normalization) {
    ScenarioConfig c = default_500();
    NetworkState s;
    s.area_side_m = 500.0;
    RadioUnit on = make_ru(1, 1, 50);
    RadioUnit off = make_ru(0, 0, 0);
    s.rus = {on, off, on, on, on, on};
    for (int k = 0; k < 20; ++k) {
        UserEquipment ue;
        ue.rate_actual_bps = 3e6;
        ue.position = {500, 500};
        s.ues.push_back(ue);
    }
    s.ues[1].rate_actual_bps = 9e6;
    const Observation o = encode_observation(s, c);
    ASSERT_EQ(o.size(), 72u);
    EXPECT_DOUBLE_EQ(o.values[0], 0.5);
    EXPECT_DOUBLE_EQ(o.values[1], 1.0);
    EXPECT_EQ(o.values[20 + 1], 0.0);  // mode of sleeping RU
    EXPECT_EQ(o.values[26 + 1], 0.0);  // its load
    EXPECT_DOUBLE_EQ(o.values[26], 0.5);
    EXPECT_EQ(o.values[32], 1.0);
    EXPECT_EQ(o.values[33], 1.0);
}

TEST(RadioEnvStep, EpisodeLengthAndDone) {
    RadioEnv env(default_500());
    Rng rng(8);
    env.reset(rng);
    const ModeVector on(6, 1);
    for (int t = 0; t < 199; ++t) ASSERT_FALSE(env.step(on, rng).done);
    EXPECT_TRUE(env.step(on, rng).done);
    EXPECT_THROW(env.step(on, rng), std::logic_error);
}

TEST(RadioEnvStep, RejectsBadActions) {
    RadioEnv env(default_500());
    Rng rng(8);
    env.reset(rng);
    EXPECT_THROW(env.step(ModeVector(5, 1), rng), std::invalid_argument);
    EXPECT_THROW(env.step(ModeVector{1, 1, 2, 1, 1, 1}, rng), std::invalid_argument);
}

TEST(RadioEnvStep, EvaluateMatchesApply) {
    RadioEnv env(default_500());
    Rng rng(13);
    env.reset(rng);
    std::uniform_int_distribution<int> bit(0, 1);
    for (int t = 0; t < 50; ++t) {
        env.advance(rng);
        ModeVector a(6);
        for (int& x : a) x = bit(rng);
        const SlotEvaluation ev = env.evaluate(a);
        const StepOutcome out = env.apply(a);
        ASSERT_EQ(ev.reward, out.reward);
        ASSERT_EQ(ev.power_total_w, out.power_total_w);
        ASSERT_EQ(ev.unsatisfied_count, out.unsatisfied_count);
    }
}

// Random trajectories: capacity, single serving RU, observation bounds,
// reward identity and switching accounting.
TEST(RadioEnvProperties, RandomTrajectories) {
    ScenarioConfig c = default_500();
    RadioEnv env(c);
    Rng rng(77);
    std::uniform_int_distribution<int> bit(0, 1);
    int steps = 0;
    while (steps < 10000) {
        env.reset(rng);
        double transition_w = 0.0;
        int activations = 0;
        bool done = false;
        while (!done) {
            ModeVector a(6);
            for (int& x : a) x = bit(rng);
            const StepOutcome out = env.step(a, rng);
            done = out.done;
            ++steps;
            transition_w += out.transition_w;
            activations += out.activations;
            for (const auto& ru : env.state().rus) {
                ASSERT_LE(ru.prbs_used, ru.q_total);
                ASSERT_GE(ru.prbs_used, 0);
                if (ru.mode == 0) ASSERT_EQ(ru.prbs_used, 0);
            }
            int served_prbs = 0;
            for (const auto& ue : env.state().ues) {
                if (ue.serving_ru) {
                    ASSERT_EQ(env.state().rus[*ue.serving_ru].mode, 1);
                    served_prbs += ue.prbs_alloc;
                } else {
                    ASSERT_EQ(ue.prbs_alloc, 0);
                }
                ASSERT_GE(ue.rate_actual_bps, 0.0);
                ASSERT_TRUE((Rect{0, 0, 500}.contains(ue.position)));
            }
            int used = 0;
            for (const auto& ru : env.state().rus) used += ru.prbs_used;
            ASSERT_EQ(served_prbs, used);
            ASSERT_EQ(out.observation.size(), 72u);
            for (double v : out.observation.values) {
                ASSERT_GE(v, 0.0);
                ASSERT_LE(v, 1.0);
            }
            ASSERT_GE(out.unsatisfied_count, 0);
            ASSERT_LE(out.unsatisfied_count, 20);
            ASSERT_EQ(out.reward, -out.power_total_w / 126.0 - 5.0 * out.unsatisfied_count / 20.0);
            ASSERT_LE(out.reward, 0.0);
        }
        ASSERT_NEAR(transition_w, 3.0 * activations, 1e-9);
    }
}

TEST(RadioEnvProperties, TrajectoriesBitIdentical) {
    auto run = [] {
        RadioEnv env(default_500());
        Rng rng(5);
        Rng actions(6);
        std::uniform_int_distribution<int> bit(0, 1);
        std::vector<double> trace;
        env.reset(rng);
        for (int t = 0; t < 200; ++t) {
            ModeVector a(6);
            for (int& x : a) x = bit(actions);
            const StepOutcome out = env.step(a, rng);
            trace.push_back(out.reward);
            trace.push_back(out.power_total_w);
            trace.insert(trace.end(), out.observation.values.begin(), out.observation.values.end());
        }
        return trace;
    };
    EXPECT_EQ(run(), run());
}

TEST(RadioEnvProperties, CompositeUesStayInHomeSubregion) {
    ScenarioConfig c;
    c.layout = Layout::composite_1000;
    c.num_rus = 24;
    c.num_ues = 80;
    c.area_side_m = 1000.0;
    c.subregion_count = 4;
    c.subregion_side_m = 500.0;
    RadioEnv env(c);
    Rng rng(3);
    env.reset(rng);
    const ModeVector on(24, 1);
    for (int t = 0; t < 200; ++t) {
        env.step(on, rng);
        for (const auto& ue : env.state().ues) {
            const Rect home = c.subregion_rect(ue.id / 20);
            ASSERT_EQ(ue.home, home);
            ASSERT_TRUE(home.contains(ue.position));
        }
    }
    for (int j = 0; j < 4; ++j) {
        for (int m = 6 * j; m < 6 * j + 6; ++m) {
            EXPECT_TRUE(c.subregion_rect(j).contains(env.state().rus[m].position));
        }
    }
}
