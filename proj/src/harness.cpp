#include "coin/harness.hpp"

#include "coin/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace coin {

std::string to_string(Policy p) {
    switch (p) {
        case Policy::Proposed: return "proposed";
        case Policy::Mec: return "mec";
        case Policy::Random: return "random";
        case Policy::OpgOnly: return "opg_only";
    }
    return "?";
}

Policy policy_from_string(const std::string& name) {
    if (name == "proposed") return Policy::Proposed;
    if (name == "mec") return Policy::Mec;
    if (name == "random") return Policy::Random;
    if (name == "opg_only") return Policy::OpgOnly;
    throw std::invalid_argument("unknown policy: " + name +
                                " (expected proposed|mec|random|opg_only)");
}

SimState SimState::make(const ScenarioConfig& config, Policy policy, std::uint64_t run_seed,
                        const std::function<void(Scenario&)>& scenario_patch) {
    SimState s;
    s.config = config;
    s.run_seed = run_seed;
    s.scenario = generate_scenario(config, derive_seed(run_seed, {tag("scenario-gen")}));
    if (scenario_patch) scenario_patch(s.scenario);
    s.policy_rng = make_rng(derive_seed(run_seed, {tag("policy")}));
    s.agent_rng = make_rng(derive_seed(run_seed, {tag("agent")}));
    if (policy == Policy::Proposed) {
        const int width = StateEncoder::width(config);
        const int units = config.user_count * config.subtask_count;
        std::vector<int> hidden(config.hidden_layers, config.hidden_width);
        s.main_net = std::make_unique<MlpNetwork>(width, hidden, units, config.input_dropout,
                                                  derive_seed(run_seed, {tag("net")}));
        for (double& b : s.main_net->layers().back().bias) b = config.output_bias_init;
        s.target_net = std::make_unique<MlpNetwork>(*s.main_net);
        s.replay = std::make_unique<ReplayMemory>(config.replay_capacity);
    }
    return s;
}

void SimState::reset_episode() {
    scenario.fin.queue.clear();
    scenario.ein.queue.clear();
    has_pending = false;
    previous_record_index = -1;
}

StrategyProfile mec_policy(const std::vector<std::vector<SubtaskSpec>>& tasks,
                           const Scenario& scenario, const ScenarioConfig& config) {
    auto profile = StrategyProfile::all_local(static_cast<int>(tasks.size()),
                                              config.subtask_count);
    double remaining = scenario.ein.cache_bits;
    int ordinal = 0;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        for (std::size_t v = 0; v < tasks[k].size(); ++v, ++ordinal) {
            const auto& st = tasks[k][v];
            if (st.software_bits > remaining) continue;
            const int channel = ordinal % config.channel_count + 1;
            const UnitDecision cand{channel, Destination::Ein};
            // cost under the profile built so far (greedy, user overhead view)
            StrategyProfile trial = profile;
            trial.decisions[k][v] = cand;
            const double rate = uplink_rate(static_cast<int>(k), cand, trial,
                                            scenario.users, config);
            const double off = offload_cost(scenario.users[k], st, Destination::Ein, rate,
                                            nullptr, config)
                                   .weighted_cost;
            const double loc = local_cost(scenario.users[k], st, config).weighted_cost;
            if (off < loc) {
                profile.decisions[k][v] = cand;
                remaining -= st.software_bits;
            }
        }
    }
    return profile;
}

StrategyProfile random_policy(const std::vector<std::vector<SubtaskSpec>>& tasks,
                              const Scenario& scenario, const ScenarioConfig& config,
                              std::mt19937_64& rng) {
    auto profile = StrategyProfile::all_local(static_cast<int>(tasks.size()),
                                              config.subtask_count);
    double fin_remaining = scenario.fin.cache_bits;
    double ein_remaining = scenario.ein.cache_bits;
    std::uniform_int_distribution<int> channel(1, config.channel_count);
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        for (std::size_t v = 0; v < tasks[k].size(); ++v) {
            const auto& st = tasks[k][v];
            std::vector<Destination> options{Destination::Local};
            if (st.software_bits <= fin_remaining) options.push_back(Destination::Fin);
            if (st.software_bits <= ein_remaining) options.push_back(Destination::Ein);
            std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
            const Destination dest = options[pick(rng)];
            if (dest == Destination::Local) continue;
            profile.decisions[k][v] = UnitDecision{channel(rng), dest};
            (dest == Destination::Fin ? fin_remaining : ein_remaining) -= st.software_bits;
        }
    }
    return profile;
}

namespace {

struct UnitView {
    std::vector<double> volumes;
    std::vector<std::uint8_t> active;
    std::vector<int> ne_action;
};

UnitView flatten_units(const std::vector<std::vector<SubtaskSpec>>& tasks,
                       const StrategyProfile& profile) {
    UnitView view;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        for (std::size_t v = 0; v < tasks[k].size(); ++v) {
            view.volumes.push_back(tasks[k][v].software_bits);
            const auto& d = profile.decisions[k][v];
            view.active.push_back(d.offloaded() ? 1 : 0);
            view.ne_action.push_back(!d.offloaded() ? 0
                                     : d.dest == Destination::Fin ? 1
                                                                  : 2);
        }
    }
    return view;
}

// The agent's action fixes WHERE each game-offloaded unit runs; it may also
// pull a unit back to local. Locally kept units stay local.
void apply_action(StrategyProfile& profile, const std::vector<int>& action,
                  const ScenarioConfig& config) {
    int u = 0;
    for (auto& row : profile.decisions) {
        for (auto& d : row) {
            const int b = action[u++];
            if (!d.offloaded()) continue;
            if (b == 0)
                d = UnitDecision{};
            else
                d.dest = b == 1 ? Destination::Fin : Destination::Ein;
        }
    }
}

void count_destinations(const StrategyProfile& profile, SlotRecord& rec) {
    for (const auto& row : profile.decisions) {
        for (const auto& d : row) {
            if (!d.offloaded())
                ++rec.n_local;
            else if (d.dest == Destination::Fin)
                ++rec.n_fin;
            else
                ++rec.n_ein;
        }
    }
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        const double lower = *std::max_element(v.begin(), v.begin() + mid);
        m = (m + lower) / 2.0;
    }
    return m;
}

} // namespace

SlotRecord run_slot(SimState& state, Policy policy, int episode, int slot,
                    int total_episodes, std::vector<SlotRecord>& records) {
    const auto& config = state.config;
    SlotRecord rec;
    rec.episode = episode;
    rec.slot = slot;

    const auto tasks = generate_tasks(
        config, state.scenario.users,
        derive_seed(state.run_seed, {tag("tasks"), static_cast<std::uint64_t>(episode),
                                     static_cast<std::uint64_t>(slot)}));

    const auto ctx = GameContext::build(state.scenario.users, tasks, config);
    StrategyProfile profile;

    switch (policy) {
        case Policy::Mec:
            profile = mec_policy(tasks, state.scenario, config);
            break;
        case Policy::Random:
            profile = random_policy(tasks, state.scenario, config, state.policy_rng);
            break;
        case Policy::OpgOnly:
        case Policy::Proposed: {
            const auto outcome = run_splitting_game(
                ctx,
                derive_seed(state.run_seed, {tag("game"), static_cast<std::uint64_t>(episode),
                                             static_cast<std::uint64_t>(slot)}),
                100000);
            if (!outcome.converged)
                throw std::runtime_error("splitting game failed to converge");
            rec.game_iterations = outcome.iterations;
            profile = outcome.profile;
            break;
        }
    }

    std::vector<double> state_features;
    std::vector<int> action;
    UnitView view;
    bool solver_action = false;
    if (policy == Policy::Proposed) {
        view = flatten_units(tasks, profile);
        state_features = StateEncoder::encode(state.scenario, tasks, profile, ctx);
        rec.epsilon = config.epsilon_schedule.at(episode, total_episodes);
        // NE exploration with probability epsilon, knapsack argmax otherwise.
        // NE actions inherit the game's possible cache violations (they are
        // counted, like opg_only); solver actions are feasible by construction.
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        if (coin(state.agent_rng) < rec.epsilon) {
            action = view.ne_action;
        } else {
            const auto theta = state.main_net->forward(state_features);
            action = solve_feasible_argmax(theta, view.volumes, view.active, config);
            solver_action = true;
        }
        apply_action(profile, action, config);
    }

    const auto report = evaluate_system(profile, tasks, state.scenario, config, true);
    rec.system_cost = report.cost;
    rec.deadline_violations = report.deadline_violations;
    rec.cache_violation = !report.cache_feasible();
    if ((policy == Policy::Mec || policy == Policy::Random || solver_action) &&
        rec.cache_violation)
        throw std::runtime_error("cache-infeasible action from a cache-aware policy");
    count_destinations(profile, rec);

    // finish the previous slot's transition now that its successor cost is known
    if (state.previous_record_index >= 0) {
        records[state.previous_record_index].reward =
            reward(state.previous_cost, rec.system_cost);
    }
    if (policy == Policy::Proposed) {
        if (state.has_pending) {
            state.pending.next_state = state_features;
            state.pending.next_volumes = view.volumes;
            state.pending.next_active = view.active;
            state.replay->push(std::move(state.pending));
            state.has_pending = false;

            if (state.replay->size() >= static_cast<std::size_t>(config.batch_size)) {
                const auto batch = state.replay->sample(config.batch_size, state.agent_rng);
                train_step(*state.main_net, *state.target_net, batch, config.learning_rate,
                           config.discount, config, state.agent_rng);
            }
            ++state.global_slot;
            sync_target(*state.main_net, *state.target_net, state.global_slot,
                        config.target_sync_period);
        }
        // The slot-over-slot cost drop is credited to the action that
        // produced the lower cost. Crediting it to the earlier action would
        // teach the agent to inflate its own slot's cost, since the current
        // cost enters the difference with a positive sign. Slot 0 of an
        // episode has no predecessor and stores no transition.
        if (slot > 0) {
            state.pending.state = std::move(state_features);
            state.pending.action = action;
            state.pending.reward =
                reward(state.previous_cost, rec.system_cost) / config.reward_scale;
            state.has_pending = true;
        }
    }
    state.previous_cost = rec.system_cost;

    // queue evolution: enqueue this slot's offloaded service times, then
    // drain one slot duration of work from each node
    const auto rates = compute_rates(profile, state.scenario.users, config);
    for (std::size_t k = 0; k < profile.decisions.size(); ++k) {
        for (std::size_t v = 0; v < profile.decisions[k].size(); ++v) {
            const auto& d = profile.decisions[k][v];
            if (!d.offloaded()) continue;
            const double service =
                offload_delay_no_queue(tasks[k][v], d.dest, config, rates[k][v]);
            (d.dest == Destination::Fin ? state.scenario.fin : state.scenario.ein)
                .enqueue(service);
        }
    }
    state.scenario.fin.drain(config.deadline_s);
    state.scenario.ein.drain(config.deadline_s);

    return rec;
}

ExperimentResult run_experiment(const ScenarioConfig& config, Policy policy, int episodes,
                                std::uint64_t master_seed, std::uint64_t seed_index,
                                const std::function<void(Scenario&)>& scenario_patch) {
    if (episodes < 1) throw std::invalid_argument("run_experiment: episodes must be >= 1");
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    // policies share the run seed so they face the same scenario and task
    // sequence; each draws from its own derived streams
    const std::uint64_t run_seed = derive_seed(master_seed, {tag("run"), seed_index});
    SimState state = SimState::make(config, policy, run_seed, scenario_patch);

    ExperimentResult result;
    result.policy = policy;
    result.seed = run_seed;
    result.slots.reserve(static_cast<std::size_t>(episodes) * config.slot_count);

    for (int episode = 0; episode < episodes; ++episode) {
        state.reset_episode();
        std::vector<double> costs, rewards;
        for (int slot = 0; slot < config.slot_count; ++slot) {
            SlotRecord rec = run_slot(state, policy, episode, slot, episodes, result.slots);
            result.slots.push_back(rec);
            state.previous_record_index = static_cast<int>(result.slots.size()) - 1;
        }
        const std::size_t base = result.slots.size() - config.slot_count;
        for (int slot = 0; slot < config.slot_count; ++slot) {
            costs.push_back(result.slots[base + slot].system_cost);
            rewards.push_back(result.slots[base + slot].reward);
        }
        result.episode_mean_cost.push_back(
            std::accumulate(costs.begin(), costs.end(), 0.0) / costs.size());
        result.episode_median_cost.push_back(median(costs));
        result.episode_mean_reward.push_back(
            std::accumulate(rewards.begin(), rewards.end(), 0.0) / rewards.size());
        result.episode_median_reward.push_back(median(rewards));
    }
    for (std::size_t i = result.slots.size() - config.slot_count; i < result.slots.size(); ++i) {
        result.total_local += result.slots[i].n_local;
        result.total_fin += result.slots[i].n_fin;
        result.total_ein += result.slots[i].n_ein;
    }
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace coin
