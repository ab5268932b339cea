#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coin {

enum class DataUnit { Megabits, Gigabytes };
enum class QueueModel { ServiceInclusive, WaitingOnly };

// Linear decay from `initial` to `final_value` over the first
// `decay_fraction` of the episodes, then flat.
struct EpsilonSchedule {
    double initial = 1.0;
    double final_value = 0.05;
    double decay_fraction = 0.6;

    double at(int episode, int total_episodes) const;
};

// Every global constant of a simulation run. Data sizes (sampling bounds and
// caches) are expressed in `data_unit` and converted to bits internally;
// compute loads are in gigacycles.
struct ScenarioConfig {
    int user_count = 10;
    int channel_count = 10;
    double bandwidth_hz = 50e6;
    double noise_variance = 2e-13;      // W
    double energy_coefficient = 5e-27;  // J*s^2/cycle^3
    double deadline_s = 1.0;
    double fin_cpu = 60e9;              // cycles/s
    double ein_cpu = 100e9;
    double fin_cache = 30.0;            // data units
    double ein_cache = 50.0;
    int subtask_count = 4;
    int slot_count = 200;
    double input_max = 10.0;            // data units
    double volume_max = 10.0;           // data units
    double load_max_gigacycles = 10.0;
    DataUnit data_unit = DataUnit::Megabits;
    QueueModel queue_model = QueueModel::ServiceInclusive;

    double transmit_power_w = 0.5;
    double delay_weight = 0.5;
    double energy_weight = 0.5;
    double local_cpu = 1e9;
    double path_loss_exponent = 4.0;
    double cell_side_m = 200.0;

    // RL hyperparameters
    double discount = 0.9;
    double learning_rate = 8e-4;
    int batch_size = 32;
    int replay_capacity = 10000;
    int target_sync_period = 10;
    EpsilonSchedule epsilon_schedule;
    int hidden_width = 128;
    int hidden_layers = 2;
    double input_dropout = 0.1;
    int knapsack_bins = 16;             // DP resolution per cache axis
    // divisor applied to rewards entering the replay memory; keeps Huber
    // residuals near the quadratic region when system costs are large
    double reward_scale = 1.0;
    // initial bias of the output head. Negative values start every unit
    // pessimistic about offloading (the argmax defaults to local), so
    // offloading has to earn positive scores through observed rewards
    double output_bias_init = 0.0;

    std::uint64_t rng_seed = 1;

    double bits_per_unit() const { return data_unit == DataUnit::Megabits ? 1e6 : 8e9; }
    double fin_cache_bits() const { return fin_cache * bits_per_unit(); }
    double ein_cache_bits() const { return ein_cache * bits_per_unit(); }

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct UserSpec {
    int id = 0;
    double transmit_power = 0.5;   // W, used for both destinations
    double channel_gain_fin = 0.0;
    double channel_gain_ein = 0.0;
    double local_cpu = 1e9;        // cycles/s
    double delay_weight = 0.5;
    double energy_weight = 0.5;
    double x = 0.0, y = 0.0;       // m
};

struct SubtaskSpec {
    int task_id = 0;
    int subtask_index = 0;
    double input_bits = 0.0;
    double software_bits = 0.0;
    double load_cycles = 0.0;
};

enum class NodeKind { Fin, Ein };

struct NodeState {
    NodeKind kind = NodeKind::Fin;
    double cpu = 0.0;         // cycles/s
    double cache_bits = 0.0;
    std::vector<double> queue;  // remaining service times, seconds

    double backlog() const;
    void enqueue(double service_time) { queue.push_back(service_time); }
    // Removes `dt` seconds of work from the head of the queue.
    void drain(double dt);
};

struct Scenario {
    std::vector<UserSpec> users;
    NodeState fin;
    NodeState ein;
};

// K users uniform in the cell, FIN at the center, EIN at the edge midpoint.
// Channel gains are d^(-alpha) with distance floored at 1 m.
Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed);

// V subtasks per user; I ~ U[1, I_max], V ~ U[1, V_max] data units,
// P ~ U[1, P_max] gigacycles.
std::vector<std::vector<SubtaskSpec>> generate_tasks(const ScenarioConfig& config,
                                                     const std::vector<UserSpec>& users,
                                                     std::uint64_t seed);

std::string to_string(DataUnit u);
std::string to_string(QueueModel m);

} // namespace coin
