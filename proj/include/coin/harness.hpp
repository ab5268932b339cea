#pragma once

#include "coin/agent.hpp"
#include "coin/cost.hpp"
#include "coin/game.hpp"
#include "coin/scenario.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace coin {

enum class Policy { Proposed, Mec, Random, OpgOnly };

std::string to_string(Policy p);
Policy policy_from_string(const std::string& name);

struct SlotRecord {
    int episode = 0;
    int slot = 0;
    double system_cost = 0.0;
    double reward = 0.0;  // cost[t] - cost[t+1]; 0 on the last slot of an episode
    int n_local = 0;
    int n_fin = 0;
    int n_ein = 0;
    int game_iterations = 0;
    double epsilon = 0.0;
    int deadline_violations = 0;
    bool cache_violation = false;
};

struct ExperimentResult {
    Policy policy = Policy::OpgOnly;
    std::uint64_t seed = 0;
    std::vector<SlotRecord> slots;
    std::vector<double> episode_mean_cost;
    std::vector<double> episode_median_cost;
    std::vector<double> episode_mean_reward;
    std::vector<double> episode_median_reward;
    long long total_local = 0, total_fin = 0, total_ein = 0;  // final-episode split
    double wall_time_s = 0.0;
};

// Mutable per-run state: queues persist within an episode, the agent's
// networks and replay persist across episodes.
struct SimState {
    Scenario scenario;
    ScenarioConfig config;
    std::uint64_t run_seed = 0;

    // agent state (Proposed policy only)
    std::unique_ptr<MlpNetwork> main_net;
    std::unique_ptr<MlpNetwork> target_net;
    std::unique_ptr<ReplayMemory> replay;
    std::mt19937_64 agent_rng;
    std::mt19937_64 policy_rng;
    long long global_slot = 0;

    // pending transition from the previous slot (reward not yet known)
    bool has_pending = false;
    Transition pending;
    double previous_cost = 0.0;
    int previous_record_index = -1;

    // `scenario_patch`, when set, is applied to the generated scenario before
    // the run starts (per-user overrides from the config file arrive here).
    static SimState make(const ScenarioConfig& config, Policy policy, std::uint64_t run_seed,
                         const std::function<void(Scenario&)>& scenario_patch = {});
    void reset_episode();
};

// Greedy MEC baseline: each unit goes to the EIN when its software fits the
// remaining EIN cache and offloading beats local cost; the FIN is never used.
StrategyProfile mec_policy(const std::vector<std::vector<SubtaskSpec>>& tasks,
                           const Scenario& scenario, const ScenarioConfig& config);

// Uniform over the cache-feasible subset of {local, FIN, EIN} per unit,
// uniform channel for offloads.
StrategyProfile random_policy(const std::vector<std::vector<SubtaskSpec>>& tasks,
                              const Scenario& scenario, const ScenarioConfig& config,
                              std::mt19937_64& rng);

SlotRecord run_slot(SimState& state, Policy policy, int episode, int slot,
                    int total_episodes, std::vector<SlotRecord>& records);

ExperimentResult run_experiment(const ScenarioConfig& config, Policy policy,
                                int episodes, std::uint64_t master_seed,
                                std::uint64_t seed_index = 0,
                                const std::function<void(Scenario&)>& scenario_patch = {});

} // namespace coin
