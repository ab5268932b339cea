#include "coin/config_io.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

using namespace coin;

TEST_CASE("flat key = value parsing with comments") {
    const auto c = parse_config_text(R"(
# comment line
scenario.users = 7       # trailing comment
scenario.channels = 3
scenario.queue_model = waiting_only
scenario.data_unit = megabits
agent.learning_rate = 1e-3
sim.episodes = 42
)");
    CHECK(c.scenario.user_count == 7);
    CHECK(c.scenario.channel_count == 3);
    CHECK(c.scenario.queue_model == QueueModel::WaitingOnly);
    CHECK(c.scenario.learning_rate == doctest::Approx(1e-3));
    CHECK(c.episodes == 42);
    CHECK(c.seed_count == 5);  // default untouched
}

TEST_CASE("unknown keys suggest the nearest valid key") {
    try {
        parse_config_text("scenario.userz = 3\n");
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("scenario.userz") != std::string::npos);
        CHECK(msg.find("scenario.users") != std::string::npos);
    }
}

TEST_CASE("malformed values are rejected with the key named") {
    CHECK_THROWS_AS(parse_config_text("scenario.users = many\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("scenario.users = 2.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("scenario.data_unit = bytes\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("scenario.users 3\n"), std::invalid_argument);
    try {
        parse_config_text("agent.discount = soon\n");
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("agent.discount") != std::string::npos);
    }
}

TEST_CASE("per-user overrides") {
    const auto c = parse_config_text(R"(
scenario.users = 3
user.1.delay_weight = 0.9
user.1.energy_weight = 0.1
user.2.transmit_power = 1.25
)");
    REQUIRE(c.user_overrides.size() == 2);

    ScenarioConfig sc = c.scenario;
    auto scenario = generate_scenario(sc, 1);
    c.apply_user_overrides(scenario);
    CHECK(scenario.users[1].delay_weight == doctest::Approx(0.9));
    CHECK(scenario.users[1].energy_weight == doctest::Approx(0.1));
    CHECK(scenario.users[2].transmit_power == doctest::Approx(1.25));
    CHECK(scenario.users[0].delay_weight == doctest::Approx(sc.delay_weight));

    SUBCASE("overrides for missing users are rejected at apply time") {
        const auto bad = parse_config_text("scenario.users = 2\nuser.5.local_cpu = 2e9\n");
        auto s2 = generate_scenario(bad.scenario, 1);
        CHECK_THROWS_AS(bad.apply_user_overrides(s2), std::invalid_argument);
    }
    SUBCASE("unknown per-user fields are rejected at parse time") {
        CHECK_THROWS_AS(parse_config_text("user.0.badge = 1\n"), std::invalid_argument);
    }
}

TEST_CASE("config json echo round-trips through a parser") {
    AppConfig c;
    c.scenario.user_count = 12;
    c.scenario.ein_cache = 77.5;
    c.episodes = 9;
    const auto j = nlohmann::json::parse(config_to_json(c));
    CHECK(j["scenario"]["users"] == 12);
    CHECK(j["scenario"]["ein_cache"] == doctest::Approx(77.5));
    CHECK(j["scenario"]["data_unit"] == "megabits");
    CHECK(j["agent"]["discount"] == doctest::Approx(0.9));
    CHECK(j["sim"]["episodes"] == 9);
    CHECK(j["sim"]["seeds"] == 5);
}

TEST_CASE("csv headers and rows are stable") {
    CHECK(slot_csv_header() ==
          "episode,slot,policy,system_cost,reward,n_local,n_fin,n_ein,game_iters,epsilon,"
          "deadline_violations");
    CHECK(episode_csv_header() == "episode,policy,mean_cost,median_cost,mean_reward,median_reward");

    SlotRecord rec;
    rec.episode = 2;
    rec.slot = 14;
    rec.system_cost = 123.5;
    rec.reward = -1.25;
    rec.n_local = 3;
    rec.n_fin = 4;
    rec.n_ein = 5;
    rec.game_iterations = 7;
    rec.epsilon = 0.5;
    rec.deadline_violations = 1;
    CHECK(slot_csv_row(rec, Policy::Mec) == "2,14,mec,123.5,-1.25,3,4,5,7,0.5,1");

    ExperimentResult res;
    res.policy = Policy::Random;
    res.episode_mean_cost = {10.5};
    res.episode_median_cost = {9.25};
    res.episode_mean_reward = {0.5};
    res.episode_median_reward = {0.0};
    CHECK(episode_csv_row(res, 0) == "0,random,10.5,9.25,0.5,0");
}

TEST_CASE("every advertised key is accepted") {
    for (const auto& key : known_config_keys()) {
        std::string value = "1";
        if (key == "scenario.data_unit") value = "megabits";
        if (key == "scenario.queue_model") value = "service_inclusive";
        CHECK_NOTHROW(parse_config_text(key + " = " + value + "\n"));
    }
}

TEST_CASE("missing config file raises a readable error") {
    CHECK_THROWS_AS(load_config_file("/nonexistent/coin.cfg"), std::runtime_error);
}
