#include "coin/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace coin;

TEST_CASE("epsilon schedule decays linearly then stays flat") {
    EpsilonSchedule s;  // 1.0 -> 0.05 over the first 60%
    CHECK(s.at(0, 100) == doctest::Approx(1.0));
    CHECK(s.at(30, 100) == doctest::Approx(1.0 + (0.05 - 1.0) * 30.0 / 60.0));
    CHECK(s.at(60, 100) == doctest::Approx(0.05));
    CHECK(s.at(99, 100) == doctest::Approx(0.05));

    double prev = 2.0;
    for (int e = 0; e < 100; ++e) {
        const double eps = s.at(e, 100);
        CHECK(eps <= prev);
        prev = eps;
    }
}

TEST_CASE("config validation names the offending field") {
    ScenarioConfig c;
    CHECK_NOTHROW(c.validate());
    c.user_count = 0;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("user_count"), std::invalid_argument);
    c.user_count = 10;
    c.discount = 1.0;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("discount"), std::invalid_argument);
    c.discount = 0.9;
    c.delay_weight = 0.7;  // weights must sum to one
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("scenario generation is deterministic and in-bounds") {
    ScenarioConfig c;
    c.user_count = 30;
    const auto a = generate_scenario(c, 7);
    const auto b = generate_scenario(c, 7);
    REQUIRE(a.users.size() == 30);
    for (std::size_t k = 0; k < a.users.size(); ++k) {
        CHECK(a.users[k].x == b.users[k].x);
        CHECK(a.users[k].y == b.users[k].y);
        CHECK(a.users[k].channel_gain_fin == b.users[k].channel_gain_fin);
        CHECK(a.users[k].x >= 0.0);
        CHECK(a.users[k].x <= 200.0);
        CHECK(a.users[k].y >= 0.0);
        CHECK(a.users[k].y <= 200.0);
        CHECK(a.users[k].channel_gain_fin > 0.0);
        CHECK(a.users[k].channel_gain_ein > 0.0);
    }
    const auto other = generate_scenario(c, 8);
    CHECK(other.users[0].x != a.users[0].x);
}

TEST_CASE("channel gain follows the distance model") {
    ScenarioConfig c;
    c.user_count = 5;
    const auto s = generate_scenario(c, 3);
    for (const auto& u : s.users) {
        const double d_fin = std::max(1.0, std::hypot(u.x - 100.0, u.y - 100.0));
        const double d_ein = std::max(1.0, std::hypot(u.x - 200.0, u.y - 100.0));
        CHECK(u.channel_gain_fin == doctest::Approx(std::pow(d_fin, -4.0)));
        CHECK(u.channel_gain_ein == doctest::Approx(std::pow(d_ein, -4.0)));
    }
}

TEST_CASE("mean user position approaches the cell center") {
    ScenarioConfig c;
    c.user_count = 100;
    double sx = 0.0, sy = 0.0;
    long long n = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto s = generate_scenario(c, seed);
        for (const auto& u : s.users) {
            sx += u.x;
            sy += u.y;
            ++n;
        }
    }
    CHECK(std::abs(sx / n - 100.0) < 5.0);
    CHECK(std::abs(sy / n - 100.0) < 5.0);
}

TEST_CASE("tasks carry the right indices and bounds") {
    ScenarioConfig c;
    c.user_count = 3;
    c.subtask_count = 4;
    const auto s = generate_scenario(c, 1);
    const auto tasks = generate_tasks(c, s.users, 2);
    REQUIRE(tasks.size() == 3);
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        REQUIRE(tasks[k].size() == 4);
        for (int v = 0; v < 4; ++v) {
            CHECK(tasks[k][v].task_id == static_cast<int>(k));
            CHECK(tasks[k][v].subtask_index == v);
            CHECK(tasks[k][v].input_bits >= 1e6);
            CHECK(tasks[k][v].input_bits <= 10e6);
            CHECK(tasks[k][v].software_bits >= 1e6);
            CHECK(tasks[k][v].load_cycles >= 1e9);
        }
    }
    const auto again = generate_tasks(c, s.users, 2);
    CHECK(again[1][2].input_bits == tasks[1][2].input_bits);
}

TEST_CASE("degenerate sampling bounds pin every subtask to the unit tuple") {
    ScenarioConfig c;
    c.user_count = 2;
    c.input_max = 1.0;
    c.volume_max = 1.0;
    c.load_max_gigacycles = 1.0;
    const auto s = generate_scenario(c, 1);
    const auto tasks = generate_tasks(c, s.users, 5);
    for (const auto& row : tasks) {
        for (const auto& st : row) {
            CHECK(st.input_bits == doctest::Approx(1e6));
            CHECK(st.software_bits == doctest::Approx(1e6));
            CHECK(st.load_cycles == doctest::Approx(1e9));
        }
    }
}

TEST_CASE("uniform sampler mean matches the law of large numbers") {
    ScenarioConfig c;
    c.user_count = 50;
    c.subtask_count = 10;  // 500 samples per task set
    c.input_max = 10.0;
    double sum = 0.0;
    long long n = 0;
    const auto s = generate_scenario(c, 1);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto tasks = generate_tasks(c, s.users, seed);
        for (const auto& row : tasks)
            for (const auto& st : row) {
                sum += st.input_bits / 1e6;
                ++n;
            }
    }
    REQUIRE(n == 100000);
    CHECK(std::abs(sum / n - 5.5) / 5.5 < 0.02);
}

TEST_CASE("node queue drains in fifo order with partial work") {
    NodeState node;
    node.queue = {0.5, 2.0, 1.0};
    CHECK(node.backlog() == doctest::Approx(3.5));
    node.drain(1.0);  // removes 0.5 fully and half of the 2.0 job
    REQUIRE(node.queue.size() == 2);
    CHECK(node.queue[0] == doctest::Approx(1.5));
    CHECK(node.queue[1] == doctest::Approx(1.0));
    node.drain(10.0);
    CHECK(node.queue.empty());
}

TEST_CASE("data unit scaling drives bits per unit") {
    ScenarioConfig c;
    CHECK(c.bits_per_unit() == doctest::Approx(1e6));
    c.data_unit = DataUnit::Gigabytes;
    CHECK(c.bits_per_unit() == doctest::Approx(8e9));
    CHECK(to_string(DataUnit::Megabits) == "megabits");
    CHECK(to_string(QueueModel::WaitingOnly) == "waiting_only");
}
