#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "oran/scenario_io.hpp"

using namespace oran;

namespace {

const std::filesystem::path kConfigs = ORAN_CONFIG_DIR;

std::string error_field(const std::string& json) {
    try {
        parse_scenario(json);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<no error>";
}

}  // namespace

TEST(ScenarioIo, BundledSingle500) {
    const ScenarioConfig c = load_scenario(kConfigs / "single_500.json");
    EXPECT_EQ(c.layout, Layout::single_500);
    EXPECT_EQ(c.num_rus, 6);
    EXPECT_EQ(c.num_ues, 20);
    EXPECT_EQ(c.area_side_m, 500.0);
    EXPECT_EQ(c.episodes, 2000);
    EXPECT_EQ(c.episode_length, 200);
    EXPECT_EQ(c.agent.gamma, 0.99);
    EXPECT_EQ(c.agent.tau, 0.01);
    EXPECT_EQ(c.agent.replay_capacity, 50000);
    EXPECT_EQ(c.power.p_active_w, 20.0);
    EXPECT_EQ(c.power.p_sleep_w, 5.0);
    EXPECT_EQ(c.power.v_trans_w, 3.0);
    EXPECT_EQ(c.reward.w1, 1.0);
    EXPECT_EQ(c.reward.w2, 5.0);
    EXPECT_EQ(c.p_max_w(), 126.0);
}

TEST(ScenarioIo, EveryBundledConfigLoads) {
    int n = 0;
    for (const auto& entry : std::filesystem::directory_iterator(kConfigs)) {
        if (entry.path().extension() != ".json") continue;
        EXPECT_NO_THROW(load_scenario(entry.path())) << entry.path();
        ++n;
    }
    EXPECT_GE(n, 5);
}

TEST(ScenarioIo, CompositeLayout) {
    const ScenarioConfig c = load_scenario(kConfigs / "composite_1000.json");
    EXPECT_EQ(c.subregion_count, 4);
    EXPECT_EQ(c.subregion_side(), 500.0);
    EXPECT_EQ(c.rus_per_subregion(), 6);
    EXPECT_EQ(c.area_side_m, 1000.0);
}

TEST(ScenarioIo, RoundTripIsIdentity) {
    for (const auto& entry : std::filesystem::directory_iterator(kConfigs)) {
        if (entry.path().extension() != ".json") continue;
        const ScenarioConfig a = load_scenario(entry.path());
        const std::string once = serialize_scenario(a);
        const ScenarioConfig b = parse_scenario(once);
        EXPECT_EQ(serialize_scenario(b), once) << entry.path();
    }
}

TEST(ScenarioIo, RoundTripKeepsNonDefaults) {
    ScenarioConfig c;
    c.name = "rt";
    c.layout = Layout::custom;
    c.num_rus = 3;
    c.num_ues = 5;
    c.area_side_m = 123.5;
    c.ru_positions = {{1, 2}, {3, 4}, {100, 100}};
    c.power.charge_deactivation = true;
    c.agent.kind = AgentKind::dqn_multi;
    c.agent.dqn.hidden = {7, 3};
    c.agent.td3.store_continuous = true;
    c.federated.weights = {1.0};
    c.seed = 0xffffffffffULL;
    const ScenarioConfig back = parse_scenario(serialize_scenario(c));
    EXPECT_EQ(back.ru_positions, c.ru_positions);
    EXPECT_EQ(back.area_side_m, 123.5);
    EXPECT_TRUE(back.power.charge_deactivation);
    EXPECT_EQ(back.agent.kind, AgentKind::dqn_multi);
    EXPECT_EQ(back.agent.dqn.hidden, (std::vector<int>{7, 3}));
    EXPECT_TRUE(back.agent.td3.store_continuous);
    EXPECT_EQ(back.seed, c.seed);
    EXPECT_EQ(serialize_scenario(back), serialize_scenario(c));
}

TEST(ScenarioIo, MissingRuCountNamesField) {
    EXPECT_EQ(error_field(R"({"layout": "single_500", "num_ues": 20})"), "num_rus");
}

TEST(ScenarioIo, CompositeWithThreeSubregionsRejected) {
    EXPECT_EQ(error_field(R"({"layout": "composite_1000", "num_rus": 24, "num_ues": 80,
                              "subregions": {"count": 3, "side_m": 500}})"),
              "subregions.count");
}

TEST(ScenarioIo, UnknownKeysRejectedWithPath) {
    EXPECT_EQ(error_field(R"({"layout": "single_500", "num_rus": 6, "num_ues": 20, "colour": 1})"), "colour");
    EXPECT_EQ(error_field(R"({"layout": "single_500", "num_rus": 6, "num_ues": 20,
                              "agent": {"td3": {"actor_lrr": 0.1}}})"),
              "agent.td3.actor_lrr");
}

TEST(ScenarioIo, TypeAndRangeErrors) {
    EXPECT_EQ(error_field(R"({"layout": "single_500", "num_rus": "six", "num_ues": 20})"), "num_rus");
    EXPECT_EQ(error_field(R"({"layout": "single_500", "num_rus": 0, "num_ues": 20})"), "num_rus");
    EXPECT_EQ(error_field(R"({"layout": "single_500", "num_rus": 6, "num_ues": 20,
                              "agent": {"gamma": 1.5}})"),
              "agent.gamma");
    EXPECT_EQ(error_field(R"({"layout": "hexagon", "num_rus": 6, "num_ues": 20})"), "layout");
    EXPECT_EQ(error_field(R"({"layout": "single_500", "num_rus": 20, "num_ues": 20,
                              "agent": {"kind": "dqn_multi"}})"),
              "agent.kind");
    EXPECT_EQ(error_field(R"({"layout": "single_500", "num_rus": 6, "num_ues": 20, "area_side_m": 400})"),
              "area_side_m");
}

TEST(ScenarioIo, ParseErrorIsConfigError) {
    EXPECT_THROW(parse_scenario("{not json"), ConfigError);
    EXPECT_THROW(load_scenario(kConfigs / "does_not_exist.json"), ConfigError);
}

TEST(ScenarioIo, SingleLayoutDefaultsArea) {
    const ScenarioConfig c = parse_scenario(R"({"layout": "single_1000", "num_rus": 12, "num_ues": 40})");
    EXPECT_EQ(c.area_side_m, 1000.0);
    EXPECT_EQ(c.p_max_w(), 252.0);
}
