#pragma once

#include "coin/rng.hpp"
#include "coin/scenario.hpp"

#include <random>
#include <vector>

namespace coin::testutil {

struct Instance {
    std::vector<UserSpec> users;
    std::vector<std::vector<SubtaskSpec>> tasks;
    ScenarioConfig config;
};

// Hand-built instance with O(1) received powers so potential differences sit
// far above floating-point noise. Payloads stay at megabit scale, which keeps
// offload thresholds within a few orders of magnitude of the powers.
inline Instance synthetic_instance(int users, int channels, int subtasks, std::uint64_t seed) {
    Instance inst;
    inst.config.user_count = users;
    inst.config.channel_count = channels;
    inst.config.subtask_count = subtasks;
    inst.config.noise_variance = 1e-3;

    auto rng = make_rng(derive_seed(seed, {tag("synthetic")}));
    std::uniform_real_distribution<double> gain(0.2, 2.0);
    std::uniform_real_distribution<double> power(0.2, 1.5);
    std::uniform_real_distribution<double> bits(1e6, 1e7);
    std::uniform_real_distribution<double> cycles(5e8, 8e9);

    for (int k = 0; k < users; ++k) {
        UserSpec u;
        u.id = k;
        u.transmit_power = power(rng);
        u.channel_gain_fin = gain(rng);
        u.channel_gain_ein = gain(rng);
        u.local_cpu = 1e9;
        inst.users.push_back(u);

        std::vector<SubtaskSpec> row;
        for (int v = 0; v < subtasks; ++v) {
            SubtaskSpec st;
            st.task_id = k;
            st.subtask_index = v;
            st.input_bits = bits(rng);
            st.software_bits = bits(rng);
            st.load_cycles = cycles(rng);
            row.push_back(st);
        }
        inst.tasks.push_back(std::move(row));
    }
    return inst;
}

} // namespace coin::testutil
