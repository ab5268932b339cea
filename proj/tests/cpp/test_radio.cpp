#include "coin/cost.hpp"
#include "coin/radio.hpp"
#include "coin/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace coin;

namespace {

UserSpec make_user(int id, double power, double gain_fin, double gain_ein) {
    UserSpec u;
    u.id = id;
    u.transmit_power = power;
    u.channel_gain_fin = gain_fin;
    u.channel_gain_ein = gain_ein;
    return u;
}

} // namespace

TEST_CASE("single offloading user at unit snr transmits one bit per symbol") {
    ScenarioConfig c;
    // received power equal to the noise floor: SINR = 1, rate = B/M
    const auto u = make_user(0, 1.0, c.noise_variance, c.noise_variance);
    StrategyProfile p = StrategyProfile::all_local(1, 1);
    p.decisions[0][0] = UnitDecision{1, Destination::Fin};
    const double rate = uplink_rate(0, p.decisions[0][0], p, {u}, c);
    CHECK(rate == doctest::Approx(c.bandwidth_hz / c.channel_count));
}

TEST_CASE("co-channel co-destination users interfere symmetrically") {
    ScenarioConfig c;
    const double rho_eta = 1e-9;
    const auto u0 = make_user(0, 1.0, rho_eta, rho_eta);
    const auto u1 = make_user(1, 1.0, rho_eta, rho_eta);
    StrategyProfile p = StrategyProfile::all_local(2, 1);
    p.decisions[0][0] = UnitDecision{3, Destination::Fin};
    p.decisions[1][0] = UnitDecision{3, Destination::Fin};

    const double expected = c.bandwidth_hz / c.channel_count *
                            std::log2(1.0 + rho_eta / (rho_eta + c.noise_variance));
    CHECK(uplink_rate(0, p.decisions[0][0], p, {u0, u1}, c) == doctest::Approx(expected));
    CHECK(uplink_rate(1, p.decisions[1][0], p, {u0, u1}, c) == doctest::Approx(expected));
}

TEST_CASE("different destinations do not interfere") {
    ScenarioConfig c;
    const double rho_eta = 1e-9;
    const auto u0 = make_user(0, 1.0, rho_eta, rho_eta);
    const auto u1 = make_user(1, 1.0, rho_eta, rho_eta);
    StrategyProfile p = StrategyProfile::all_local(2, 1);
    p.decisions[0][0] = UnitDecision{3, Destination::Fin};
    p.decisions[1][0] = UnitDecision{3, Destination::Ein};

    const double single = c.bandwidth_hz / c.channel_count *
                          std::log2(1.0 + rho_eta / c.noise_variance);
    CHECK(uplink_rate(0, p.decisions[0][0], p, {u0, u1}, c) == doctest::Approx(single));
    CHECK(uplink_rate(1, p.decisions[1][0], p, {u0, u1}, c) == doctest::Approx(single));
}

TEST_CASE("uplink rate rejects local decisions") {
    ScenarioConfig c;
    const auto u = make_user(0, 1.0, 1e-9, 1e-9);
    StrategyProfile p = StrategyProfile::all_local(1, 1);
    CHECK_THROWS_AS(uplink_rate(0, p.decisions[0][0], p, {u}, c), std::invalid_argument);
}

TEST_CASE("interference ratio matches its printed shape") {
    ScenarioConfig c;
    const double rho_eta = 1e-9;
    const auto u0 = make_user(0, 1.0, rho_eta, rho_eta);
    const auto u1 = make_user(1, 1.0, rho_eta, rho_eta);

    StrategyProfile alone = StrategyProfile::all_local(2, 1);
    alone.decisions[0][0] = UnitDecision{1, Destination::Fin};
    CHECK(interference(0, 1, Destination::Fin, alone, {u0, u1}, c) ==
          doctest::Approx(-c.noise_variance));

    StrategyProfile both = alone;
    both.decisions[1][0] = UnitDecision{1, Destination::Fin};
    CHECK(interference(0, 1, Destination::Fin, both, {u0, u1}, c) ==
          doctest::Approx(1.0 - c.noise_variance));
}

TEST_CASE("interference sum agrees with an independent recomputation") {
    ScenarioConfig c;
    c.user_count = 5;
    c.subtask_count = 3;
    c.channel_count = 3;
    const auto s = generate_scenario(c, 11);
    auto rng = make_rng(5);
    std::uniform_int_distribution<int> chan(0, 3);
    std::uniform_int_distribution<int> dst(1, 2);
    for (int trial = 0; trial < 50; ++trial) {
        StrategyProfile p = StrategyProfile::all_local(5, 3);
        for (auto& row : p.decisions)
            for (auto& d : row) {
                const int m = chan(rng);
                d = m == 0 ? UnitDecision{}
                           : UnitDecision{m, static_cast<Destination>(dst(rng))};
            }
        for (int k = 0; k < 5; ++k) {
            for (int m = 1; m <= 3; ++m) {
                for (Destination dest : {Destination::Fin, Destination::Ein}) {
                    double expect = 0.0;
                    for (int n = 0; n < 5; ++n) {
                        if (n == k) continue;
                        for (const auto& d : p.decisions[n])
                            if (d.channel == m && d.dest == dest)
                                expect += s.users[n].transmit_power *
                                          (dest == Destination::Fin
                                               ? s.users[n].channel_gain_fin
                                               : s.users[n].channel_gain_ein);
                    }
                    CHECK(interference_sum(k, m, dest, p, s.users) ==
                          doctest::Approx(expect));
                }
            }
        }
    }
}

TEST_CASE("rate decreases strictly with interference") {
    ScenarioConfig c;
    const auto u = make_user(0, 0.5, 1e-9, 1e-9);
    double prev = rate_from_interference(u, Destination::Fin, 0.0, c);
    for (double isum = 1e-12; isum < 1e-8; isum *= 10.0) {
        const double r = rate_from_interference(u, Destination::Fin, isum, c);
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("no transmission budget forces the never-offload sentinel") {
    ScenarioConfig c;
    c.delay_weight = 1.0;
    c.energy_weight = 0.0;
    c.fin_cpu = 1e9;  // same speed as the local cpu: zero slack
    auto u = make_user(0, 0.5, 1e-9, 1e-9);
    u.local_cpu = 1e9;
    u.delay_weight = 1.0;
    u.energy_weight = 0.0;
    SubtaskSpec st;
    st.input_bits = 1e6;
    st.software_bits = 1e6;
    st.load_cycles = 1e9;
    const auto t = offload_threshold(u, st, Destination::Fin, c);
    CHECK(t.never);
    CHECK(t.power_threshold == -std::numeric_limits<double>::infinity());
}

TEST_CASE("threshold decision equals the direct cost comparison") {
    ScenarioConfig c;
    auto rng = make_rng(17);
    std::uniform_real_distribution<double> gain(1e-10, 1e-8);
    std::uniform_real_distribution<double> bits(1e6, 1e7);
    std::uniform_real_distribution<double> cycles(1e9, 1e10);
    std::uniform_real_distribution<double> isum_u(0.0, 5e-9);

    int disagreements = 0;
    for (int i = 0; i < 2000; ++i) {
        auto u = make_user(0, 0.5, gain(rng), gain(rng));
        u.local_cpu = 1e9;
        SubtaskSpec st;
        st.input_bits = bits(rng);
        st.software_bits = bits(rng);
        st.load_cycles = cycles(rng);
        const Destination dest = i % 2 == 0 ? Destination::Fin : Destination::Ein;
        const double isum = isum_u(rng);

        const auto t = offload_threshold(u, st, dest, c);
        const bool via_threshold = !t.never && isum <= t.power_threshold;

        const double rate = rate_from_interference(u, dest, isum, c);
        const double off = offload_cost(u, st, dest, rate, nullptr, c).weighted_cost;
        const double loc = local_cost(u, st, c).weighted_cost;
        const bool via_costs = off <= loc;
        if (via_threshold != via_costs) ++disagreements;
    }
    CHECK(disagreements == 0);
}

TEST_CASE("threshold is non-decreasing in the compute load") {
    ScenarioConfig c;
    auto rng = make_rng(23);
    std::uniform_real_distribution<double> gain(1e-10, 1e-8);
    std::uniform_real_distribution<double> bits(1e6, 1e7);
    for (int i = 0; i < 100; ++i) {
        auto u = make_user(0, 0.5, gain(rng), gain(rng));
        u.local_cpu = 1e9;
        SubtaskSpec st;
        st.input_bits = bits(rng);
        st.software_bits = bits(rng);
        double prev = -std::numeric_limits<double>::infinity();
        for (double p = 1e9; p <= 1e10; p += 1e9) {
            st.load_cycles = p;
            const auto t = offload_threshold(u, st, Destination::Fin, c);
            const double value =
                t.never ? -std::numeric_limits<double>::infinity() : t.power_threshold;
            CHECK(value >= prev);
            prev = value;
        }
    }
}

TEST_CASE("profile validation flags malformed decisions") {
    StrategyProfile p = StrategyProfile::all_local(1, 2);
    CHECK_NOTHROW(p.validate(3));
    p.decisions[0][0] = UnitDecision{4, Destination::Fin};
    CHECK_THROWS_AS(p.validate(3), std::invalid_argument);
    p.decisions[0][0] = UnitDecision{2, Destination::Local};
    CHECK_THROWS_AS(p.validate(3), std::invalid_argument);
    p.decisions[0][0] = UnitDecision{0, Destination::Ein};
    CHECK_THROWS_AS(p.validate(3), std::invalid_argument);
}
