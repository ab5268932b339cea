#include "coin/config_io.hpp"
#include "coin/game.hpp"
#include "coin/harness.hpp"
#include "coin/rng.hpp"
#include "coin/solver.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

namespace py = pybind11;
using namespace coin;

namespace {

// Owns the inputs the game context points into, so Python lifetimes are safe.
struct SplittingGame {
    std::vector<UserSpec> users;
    std::vector<std::vector<SubtaskSpec>> tasks;
    ScenarioConfig config;
    GameContext ctx;

    SplittingGame(std::vector<UserSpec> u, std::vector<std::vector<SubtaskSpec>> t,
                  ScenarioConfig c)
        : users(std::move(u)), tasks(std::move(t)), config(std::move(c)) {
        config.validate();
        ctx = GameContext::build(users, tasks, config);
    }
};

} // namespace

PYBIND11_MODULE(_coinsim, m) {
    m.doc() = "COIN partial-offloading simulator core";

    py::enum_<DataUnit>(m, "DataUnit")
        .value("megabits", DataUnit::Megabits)
        .value("gigabytes", DataUnit::Gigabytes);

    py::enum_<QueueModel>(m, "QueueModel")
        .value("service_inclusive", QueueModel::ServiceInclusive)
        .value("waiting_only", QueueModel::WaitingOnly);

    py::enum_<Destination>(m, "Destination")
        .value("local", Destination::Local)
        .value("fin", Destination::Fin)
        .value("ein", Destination::Ein);

    py::class_<EpsilonSchedule>(m, "EpsilonSchedule")
        .def(py::init<>())
        .def_readwrite("initial", &EpsilonSchedule::initial)
        .def_readwrite("final_value", &EpsilonSchedule::final_value)
        .def_readwrite("decay_fraction", &EpsilonSchedule::decay_fraction)
        .def("at", &EpsilonSchedule::at);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("user_count", &ScenarioConfig::user_count)
        .def_readwrite("channel_count", &ScenarioConfig::channel_count)
        .def_readwrite("bandwidth_hz", &ScenarioConfig::bandwidth_hz)
        .def_readwrite("noise_variance", &ScenarioConfig::noise_variance)
        .def_readwrite("energy_coefficient", &ScenarioConfig::energy_coefficient)
        .def_readwrite("deadline_s", &ScenarioConfig::deadline_s)
        .def_readwrite("fin_cpu", &ScenarioConfig::fin_cpu)
        .def_readwrite("ein_cpu", &ScenarioConfig::ein_cpu)
        .def_readwrite("fin_cache", &ScenarioConfig::fin_cache)
        .def_readwrite("ein_cache", &ScenarioConfig::ein_cache)
        .def_readwrite("subtask_count", &ScenarioConfig::subtask_count)
        .def_readwrite("slot_count", &ScenarioConfig::slot_count)
        .def_readwrite("input_max", &ScenarioConfig::input_max)
        .def_readwrite("volume_max", &ScenarioConfig::volume_max)
        .def_readwrite("load_max_gigacycles", &ScenarioConfig::load_max_gigacycles)
        .def_readwrite("data_unit", &ScenarioConfig::data_unit)
        .def_readwrite("queue_model", &ScenarioConfig::queue_model)
        .def_readwrite("transmit_power_w", &ScenarioConfig::transmit_power_w)
        .def_readwrite("delay_weight", &ScenarioConfig::delay_weight)
        .def_readwrite("energy_weight", &ScenarioConfig::energy_weight)
        .def_readwrite("local_cpu", &ScenarioConfig::local_cpu)
        .def_readwrite("path_loss_exponent", &ScenarioConfig::path_loss_exponent)
        .def_readwrite("cell_side_m", &ScenarioConfig::cell_side_m)
        .def_readwrite("discount", &ScenarioConfig::discount)
        .def_readwrite("learning_rate", &ScenarioConfig::learning_rate)
        .def_readwrite("batch_size", &ScenarioConfig::batch_size)
        .def_readwrite("replay_capacity", &ScenarioConfig::replay_capacity)
        .def_readwrite("target_sync_period", &ScenarioConfig::target_sync_period)
        .def_readwrite("epsilon_schedule", &ScenarioConfig::epsilon_schedule)
        .def_readwrite("hidden_width", &ScenarioConfig::hidden_width)
        .def_readwrite("hidden_layers", &ScenarioConfig::hidden_layers)
        .def_readwrite("input_dropout", &ScenarioConfig::input_dropout)
        .def_readwrite("knapsack_bins", &ScenarioConfig::knapsack_bins)
        .def_readwrite("reward_scale", &ScenarioConfig::reward_scale)
        .def_readwrite("output_bias_init", &ScenarioConfig::output_bias_init)
        .def("validate", &ScenarioConfig::validate);

    py::class_<UserSpec>(m, "UserSpec")
        .def(py::init<>())
        .def_readwrite("id", &UserSpec::id)
        .def_readwrite("transmit_power", &UserSpec::transmit_power)
        .def_readwrite("channel_gain_fin", &UserSpec::channel_gain_fin)
        .def_readwrite("channel_gain_ein", &UserSpec::channel_gain_ein)
        .def_readwrite("local_cpu", &UserSpec::local_cpu)
        .def_readwrite("delay_weight", &UserSpec::delay_weight)
        .def_readwrite("energy_weight", &UserSpec::energy_weight)
        .def_readwrite("x", &UserSpec::x)
        .def_readwrite("y", &UserSpec::y);

    py::class_<SubtaskSpec>(m, "SubtaskSpec")
        .def(py::init<>())
        .def_readwrite("task_id", &SubtaskSpec::task_id)
        .def_readwrite("subtask_index", &SubtaskSpec::subtask_index)
        .def_readwrite("input_bits", &SubtaskSpec::input_bits)
        .def_readwrite("software_bits", &SubtaskSpec::software_bits)
        .def_readwrite("load_cycles", &SubtaskSpec::load_cycles);

    py::class_<NodeState>(m, "NodeState")
        .def_readwrite("cpu", &NodeState::cpu)
        .def_readwrite("cache_bits", &NodeState::cache_bits)
        .def_readwrite("queue", &NodeState::queue)
        .def("backlog", &NodeState::backlog);

    py::class_<Scenario>(m, "Scenario")
        .def_readwrite("users", &Scenario::users)
        .def_readwrite("fin", &Scenario::fin)
        .def_readwrite("ein", &Scenario::ein);

    py::class_<UnitDecision>(m, "UnitDecision")
        .def(py::init<>())
        .def(py::init<int, Destination>())
        .def_readwrite("channel", &UnitDecision::channel)
        .def_readwrite("dest", &UnitDecision::dest)
        .def("offloaded", &UnitDecision::offloaded)
        .def("__eq__", [](const UnitDecision& a, const UnitDecision& b) { return a == b; });

    py::class_<StrategyProfile>(m, "StrategyProfile")
        .def(py::init<>())
        .def_static("all_local", &StrategyProfile::all_local)
        .def_readwrite("decisions", &StrategyProfile::decisions)
        .def("validate", &StrategyProfile::validate);

    py::class_<GameOutcome>(m, "GameOutcome")
        .def_readonly("profile", &GameOutcome::profile)
        .def_readonly("iterations", &GameOutcome::iterations)
        .def_readonly("potential_trace", &GameOutcome::potential_trace)
        .def_readonly("converged", &GameOutcome::converged);

    py::class_<SplittingGame>(m, "SplittingGame")
        .def(py::init<std::vector<UserSpec>, std::vector<std::vector<SubtaskSpec>>,
                      ScenarioConfig>(),
             py::arg("users"), py::arg("tasks"), py::arg("config"))
        .def("run",
             [](const SplittingGame& g, std::uint64_t seed, int max_iter) {
                 return run_splitting_game(g.ctx, seed, max_iter);
             },
             py::arg("seed"), py::arg("max_iter") = 100000)
        .def("potential",
             [](const SplittingGame& g, const StrategyProfile& p) { return potential(p, g.ctx); })
        .def("is_nash",
             [](const SplittingGame& g, const StrategyProfile& p) { return is_nash(p, g.ctx); })
        .def("best_response",
             [](const SplittingGame& g, int k, const StrategyProfile& p) {
                 return best_response(k, p, g.ctx);
             })
        .def("iteration_bound", [](const SplittingGame& g, double granularity) {
            return iteration_bound(g.ctx, granularity).bound;
        });

    py::class_<KnapsackInstance>(m, "KnapsackInstance")
        .def(py::init<>())
        .def_readwrite("values", &KnapsackInstance::values)
        .def_readwrite("volumes", &KnapsackInstance::volumes)
        .def_readwrite("fin_cache", &KnapsackInstance::fin_cache)
        .def_readwrite("ein_cache", &KnapsackInstance::ein_cache)
        .def_readwrite("step", &KnapsackInstance::step);

    py::class_<SlotRecord>(m, "SlotRecord")
        .def_readonly("episode", &SlotRecord::episode)
        .def_readonly("slot", &SlotRecord::slot)
        .def_readonly("system_cost", &SlotRecord::system_cost)
        .def_readonly("reward", &SlotRecord::reward)
        .def_readonly("n_local", &SlotRecord::n_local)
        .def_readonly("n_fin", &SlotRecord::n_fin)
        .def_readonly("n_ein", &SlotRecord::n_ein)
        .def_readonly("game_iterations", &SlotRecord::game_iterations)
        .def_readonly("epsilon", &SlotRecord::epsilon)
        .def_readonly("deadline_violations", &SlotRecord::deadline_violations)
        .def_readonly("cache_violation", &SlotRecord::cache_violation);

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_property_readonly("policy",
                               [](const ExperimentResult& r) { return to_string(r.policy); })
        .def_readonly("seed", &ExperimentResult::seed)
        .def_readonly("slots", &ExperimentResult::slots)
        .def_readonly("episode_mean_cost", &ExperimentResult::episode_mean_cost)
        .def_readonly("episode_median_cost", &ExperimentResult::episode_median_cost)
        .def_readonly("episode_mean_reward", &ExperimentResult::episode_mean_reward)
        .def_readonly("episode_median_reward", &ExperimentResult::episode_median_reward)
        .def_readonly("total_local", &ExperimentResult::total_local)
        .def_readonly("total_fin", &ExperimentResult::total_fin)
        .def_readonly("total_ein", &ExperimentResult::total_ein)
        .def_readonly("wall_time_s", &ExperimentResult::wall_time_s);

    m.def("generate_scenario", &generate_scenario, py::arg("config"), py::arg("seed"));
    m.def("generate_tasks", &generate_tasks, py::arg("config"), py::arg("users"),
          py::arg("seed"));

    m.def("local_cost_value", [](const UserSpec& u, const SubtaskSpec& st,
                                 const ScenarioConfig& c) {
        return local_cost(u, st, c).weighted_cost;
    });
    m.def("offload_threshold",
          [](const UserSpec& u, const SubtaskSpec& st, Destination d, const ScenarioConfig& c) {
              const auto t = offload_threshold(u, st, d, c);
              return py::make_tuple(t.ratio_threshold, t.power_threshold, t.never);
          });
    m.def("system_cost", &system_cost, py::arg("profile"), py::arg("tasks"),
          py::arg("scenario"), py::arg("config"), py::arg("include_queue") = true);

    m.def("solve_optimal_action", &solve_optimal_action);
    m.def("brute_force_action", &brute_force_action);
    m.def("action_objective", &action_objective);

    m.def("run_experiment",
          [](const ScenarioConfig& config, const std::string& policy, int episodes,
             std::uint64_t master_seed, std::uint64_t seed_index) {
              py::gil_scoped_release release;
              return run_experiment(config, policy_from_string(policy), episodes, master_seed,
                                    seed_index);
          },
          py::arg("config"), py::arg("policy"), py::arg("episodes"), py::arg("master_seed"),
          py::arg("seed_index") = 0);

    m.def("parse_config_text",
          [](const std::string& text) { return parse_config_text(text).scenario; });
}
