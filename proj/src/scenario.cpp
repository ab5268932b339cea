#include "coin/scenario.hpp"

#include "coin/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coin {

double EpsilonSchedule::at(int episode, int total_episodes) const {
    const double span = decay_fraction * total_episodes;
    if (span <= 0.0 || episode >= span) return final_value;
    const double frac = episode / span;
    return initial + (final_value - initial) * frac;
}

namespace {
void require(bool ok, const char* field) {
    if (!ok) throw std::invalid_argument(std::string("invalid config field: ") + field);
}
} // namespace

void ScenarioConfig::validate() const {
    require(user_count >= 1, "user_count");
    require(channel_count >= 1, "channel_count");
    require(subtask_count >= 1, "subtask_count");
    require(slot_count >= 1, "slot_count");
    require(bandwidth_hz > 0, "bandwidth_hz");
    require(noise_variance > 0, "noise_variance");
    require(energy_coefficient > 0, "energy_coefficient");
    require(deadline_s > 0, "deadline_s");
    require(fin_cpu > 0, "fin_cpu");
    require(ein_cpu > 0, "ein_cpu");
    require(fin_cache >= 0, "fin_cache");
    require(ein_cache >= 0, "ein_cache");
    require(input_max >= 1, "input_max");
    require(volume_max >= 1, "volume_max");
    require(load_max_gigacycles >= 1, "load_max_gigacycles");
    require(transmit_power_w > 0, "transmit_power_w");
    require(local_cpu > 0, "local_cpu");
    require(delay_weight >= 0 && delay_weight <= 1, "delay_weight");
    require(energy_weight >= 0 && energy_weight <= 1, "energy_weight");
    require(std::abs(delay_weight + energy_weight - 1.0) < 1e-12, "delay_weight+energy_weight");
    require(path_loss_exponent > 0, "path_loss_exponent");
    require(cell_side_m > 0, "cell_side_m");
    require(discount > 0 && discount < 1, "discount");
    require(learning_rate > 0, "learning_rate");
    require(batch_size >= 1, "batch_size");
    require(replay_capacity >= 1, "replay_capacity");
    require(target_sync_period >= 1, "target_sync_period");
    require(hidden_width >= 1, "hidden_width");
    require(hidden_layers >= 1, "hidden_layers");
    require(input_dropout >= 0 && input_dropout < 1, "input_dropout");
    require(knapsack_bins >= 1, "knapsack_bins");
    require(reward_scale > 0, "reward_scale");
    require(epsilon_schedule.initial >= epsilon_schedule.final_value, "epsilon_schedule");
    require(epsilon_schedule.decay_fraction >= 0 && epsilon_schedule.decay_fraction <= 1,
            "epsilon_schedule.decay_fraction");
}

double NodeState::backlog() const {
    double total = 0.0;
    for (double q : queue) total += q;
    return total;
}

void NodeState::drain(double dt) {
    std::size_t keep = 0;
    for (double& q : queue) {
        if (dt <= 0.0) {
            queue[keep++] = q;
            continue;
        }
        if (q > dt) {
            queue[keep++] = q - dt;
            dt = 0.0;
        } else {
            dt -= q;
        }
    }
    queue.resize(keep);
}

Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed) {
    config.validate();
    auto rng = make_rng(derive_seed(seed, {tag("scenario")}));
    std::uniform_real_distribution<double> pos(0.0, config.cell_side_m);

    const double cx = config.cell_side_m / 2.0;
    const double fin_x = cx, fin_y = cx;                    // cell center
    const double ein_x = config.cell_side_m, ein_y = cx;    // edge midpoint
    const double alpha = config.path_loss_exponent;

    auto gain = [&](double ux, double uy, double nx, double ny) {
        const double d = std::max(1.0, std::hypot(ux - nx, uy - ny));
        return std::pow(d, -alpha);
    };

    Scenario s;
    s.users.reserve(config.user_count);
    for (int k = 0; k < config.user_count; ++k) {
        UserSpec u;
        u.id = k;
        u.x = pos(rng);
        u.y = pos(rng);
        u.transmit_power = config.transmit_power_w;
        u.local_cpu = config.local_cpu;
        u.delay_weight = config.delay_weight;
        u.energy_weight = config.energy_weight;
        u.channel_gain_fin = gain(u.x, u.y, fin_x, fin_y);
        u.channel_gain_ein = gain(u.x, u.y, ein_x, ein_y);
        s.users.push_back(u);
    }
    s.fin = NodeState{NodeKind::Fin, config.fin_cpu, config.fin_cache_bits(), {}};
    s.ein = NodeState{NodeKind::Ein, config.ein_cpu, config.ein_cache_bits(), {}};
    return s;
}

std::vector<std::vector<SubtaskSpec>> generate_tasks(const ScenarioConfig& config,
                                                     const std::vector<UserSpec>& users,
                                                     std::uint64_t seed) {
    config.validate();
    auto rng = make_rng(derive_seed(seed, {tag("tasks")}));
    std::uniform_real_distribution<double> input_u(1.0, config.input_max);
    std::uniform_real_distribution<double> volume_u(1.0, config.volume_max);
    std::uniform_real_distribution<double> load_u(1.0, config.load_max_gigacycles);
    const double unit = config.bits_per_unit();

    std::vector<std::vector<SubtaskSpec>> tasks(users.size());
    for (std::size_t k = 0; k < users.size(); ++k) {
        tasks[k].reserve(config.subtask_count);
        for (int v = 0; v < config.subtask_count; ++v) {
            SubtaskSpec st;
            st.task_id = static_cast<int>(k);
            st.subtask_index = v;
            st.input_bits = input_u(rng) * unit;
            st.software_bits = volume_u(rng) * unit;
            st.load_cycles = load_u(rng) * 1e9;
            tasks[k].push_back(st);
        }
    }
    return tasks;
}

std::string to_string(DataUnit u) {
    return u == DataUnit::Megabits ? "megabits" : "gigabytes";
}

std::string to_string(QueueModel m) {
    return m == QueueModel::ServiceInclusive ? "service_inclusive" : "waiting_only";
}

} // namespace coin
