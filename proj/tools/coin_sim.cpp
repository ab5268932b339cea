#include "coin/config_io.hpp"
#include "coin/game.hpp"
#include "coin/harness.hpp"
#include "coin/rng.hpp"
#include "coin/solver.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

namespace {

using coin::AppConfig;
using coin::ExperimentResult;
using coin::Policy;

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

struct Tuple {
    Policy policy;
    std::string axis;   // empty outside sweeps
    double value = 0.0;
    std::uint64_t seed_index = 0;
    std::string stem;   // output file stem, e.g. "proposed_seed0"
};

AppConfig with_axis(const AppConfig& base, const std::string& axis, double value) {
    AppConfig c = base;
    if (axis.empty()) return c;
    if (axis == "users")
        c.scenario.user_count = static_cast<int>(value);
    else if (axis == "vmax")
        c.scenario.volume_max = value;
    else if (axis == "pmax")
        c.scenario.load_max_gigacycles = value;
    else if (axis == "subtasks")
        c.scenario.subtask_count = static_cast<int>(value);
    else
        throw std::invalid_argument("unknown sweep axis: " + axis +
                                    " (expected users|vmax|pmax|subtasks)");
    return c;
}

void write_result_csvs(const std::filesystem::path& dir, const std::string& stem,
                       const ExperimentResult& r) {
    {
        std::ofstream out(dir / (stem + "_slots.csv"), std::ios::binary);
        out << coin::slot_csv_header() << '\n';
        for (const auto& rec : r.slots) out << coin::slot_csv_row(rec, r.policy) << '\n';
    }
    {
        std::ofstream out(dir / (stem + "_episodes.csv"), std::ios::binary);
        out << coin::episode_csv_header() << '\n';
        for (std::size_t e = 0; e < r.episode_mean_cost.size(); ++e)
            out << coin::episode_csv_row(r, static_cast<int>(e)) << '\n';
    }
}

int run_tuples(const AppConfig& base_config, const std::vector<Tuple>& tuples,
               std::uint64_t master_seed, const std::filesystem::path& out_dir,
               const std::string& command) {
    std::filesystem::create_directories(out_dir);

    std::vector<std::string> paths;
    for (const auto& t : tuples) {
        paths.push_back((out_dir / (t.stem + "_slots.csv")).string());
        paths.push_back((out_dir / (t.stem + "_episodes.csv")).string());
    }
    paths.push_back((out_dir / "summary.json").string());

    // manifest goes out before any result file
    nlohmann::ordered_json manifest;
    manifest["command"] = command;
    manifest["version"] = "coin-sim 1.0";
    manifest["master_seed"] = master_seed;
    manifest["started"] = timestamp_utc();
    manifest["finished"] = nullptr;
    manifest["config"] = nlohmann::ordered_json::parse(coin::config_to_json(base_config));
    manifest["outputs"] = paths;
    const auto manifest_path = out_dir / "manifest.json";
    {
        std::ofstream out(manifest_path, std::ios::binary);
        out << manifest.dump(2) << '\n';
    }

    // tuples run in parallel; every tuple derives its own streams from the
    // master seed, so scheduling cannot affect the results
    std::vector<std::future<ExperimentResult>> futures;
    for (const auto& t : tuples) {
        futures.push_back(std::async(std::launch::async, [&base_config, t, master_seed] {
            const AppConfig cfg = with_axis(base_config, t.axis, t.value);
            cfg.scenario.validate();
            auto patch = [&cfg](coin::Scenario& s) { cfg.apply_user_overrides(s); };
            return coin::run_experiment(cfg.scenario, t.policy, cfg.episodes, master_seed,
                                        t.seed_index, patch);
        }));
    }

    nlohmann::ordered_json summary;
    summary["runs"] = nlohmann::ordered_json::array();
    bool sweep_mode = false;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        const ExperimentResult r = futures[i].get();
        write_result_csvs(out_dir, tuples[i].stem, r);
        nlohmann::ordered_json run;
        run["stem"] = tuples[i].stem;
        run["policy"] = coin::to_string(r.policy);
        if (!tuples[i].axis.empty()) {
            run["axis"] = tuples[i].axis;
            run["value"] = tuples[i].value;
            sweep_mode = true;
        }
        run["seed_index"] = tuples[i].seed_index;
        run["final_episode_mean_cost"] = r.episode_mean_cost.back();
        run["mean_cost"] = [&r] {
            double s = 0.0;
            for (double c : r.episode_mean_cost) s += c;
            return s / r.episode_mean_cost.size();
        }();
        run["final_split"] = {{"local", r.total_local}, {"fin", r.total_fin}, {"ein", r.total_ein}};
        run["wall_time_s"] = r.wall_time_s;
        summary["runs"].push_back(std::move(run));
        std::cout << tuples[i].stem << ": final-episode mean cost "
                  << r.episode_mean_cost.back() << " (" << r.wall_time_s << " s)\n";
    }

    if (sweep_mode) {
        std::ofstream out(out_dir / "sweep.csv", std::ios::binary);
        out << "axis,value,policy,seed_index,final_episode_mean_cost\n";
        for (const auto& run : summary["runs"])
            out << run["axis"].get<std::string>() << ',' << run["value"].get<double>() << ','
                << run["policy"].get<std::string>() << ',' << run["seed_index"].get<int>()
                << ',' << run["final_episode_mean_cost"].get<double>() << '\n';
    }

    {
        std::ofstream out(out_dir / "summary.json", std::ios::binary);
        out << summary.dump(2) << '\n';
    }
    manifest["finished"] = timestamp_utc();
    {
        std::ofstream out(manifest_path, std::ios::binary);
        out << manifest.dump(2) << '\n';
    }
    return 0;
}

// Quick self-checks runnable without a build tree; the full suites live in
// the test binaries.
int run_verify() {
    int failures = 0;
    auto check = [&failures](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
        if (!ok) ++failures;
    };

    coin::ScenarioConfig cfg;
    cfg.user_count = 4;
    cfg.channel_count = 3;
    cfg.subtask_count = 2;

    // potential decrease along the best-response trajectory
    {
        bool ok = true;
        for (std::uint64_t seed = 0; seed < 20 && ok; ++seed) {
            const auto scenario = coin::generate_scenario(cfg, seed);
            const auto tasks = coin::generate_tasks(cfg, scenario.users, seed + 100);
            const auto ctx = coin::GameContext::build(scenario.users, tasks, cfg);
            const auto outcome = coin::run_splitting_game(ctx, seed, 10000);
            ok = outcome.converged;
            for (std::size_t i = 1; i < outcome.potential_trace.size() && ok; ++i)
                ok = outcome.potential_trace[i] < outcome.potential_trace[i - 1];
            if (ok) ok = coin::is_nash(outcome.profile, ctx);
        }
        check("splitting game converges to a verified equilibrium", ok);
    }

    // knapsack DP against enumeration
    {
        bool ok = true;
        auto rng = coin::make_rng(7);
        std::uniform_int_distribution<int> theta_grid(-8000, 8000);
        std::uniform_int_distribution<int> vol(1, 10);  // step 1 divides the volumes
        for (int i = 0; i < 50 && ok; ++i) {
            coin::KnapsackInstance inst;
            for (int u = 0; u < 6; ++u) {
                inst.values.push_back(theta_grid(rng) / 1024.0);
                inst.volumes.push_back(static_cast<double>(vol(rng)));
            }
            inst.fin_cache = 12.0;
            inst.ein_cache = 20.0;
            inst.step = 1.0;
            const auto dp = coin::solve_optimal_action(inst);
            const auto bf = coin::brute_force_action(inst);
            ok = coin::action_objective(inst, dp) == coin::action_objective(inst, bf);
        }
        check("action solver matches enumeration", ok);
    }

    // determinism of a short run
    {
        coin::ScenarioConfig small = cfg;
        small.slot_count = 5;
        const auto a = coin::run_experiment(small, Policy::OpgOnly, 2, 42);
        const auto b = coin::run_experiment(small, Policy::OpgOnly, 2, 42);
        bool ok = a.slots.size() == b.slots.size();
        for (std::size_t i = 0; i < a.slots.size() && ok; ++i)
            ok = a.slots[i].system_cost == b.slots[i].system_cost &&
                 a.slots[i].reward == b.slots[i].reward;
        check("repeated runs are identical", ok);
    }

    std::cout << (failures == 0 ? "verify: all checks passed\n"
                                : "verify: " + std::to_string(failures) + " check(s) failed\n");
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"COIN partial-offloading simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t master_seed = 1;
    std::string out_dir_flag;
    std::string policy_name = "proposed";
    std::string axis;
    std::vector<double> values;
    int episodes_flag = -1;
    int slots_flag = -1;
    int seeds_flag = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Config file (key = value lines)")
            ->check(CLI::ExistingFile);
        cmd->add_option("--seed", master_seed, "Master seed (default 1)");
        cmd->add_option("--out", out_dir_flag,
                        "Output directory (or set COIN_SIM_OUT; default ./results)");
        cmd->add_option("--episodes", episodes_flag, "Episode count override");
        cmd->add_option("--slots", slots_flag, "Slots per episode override");
        cmd->add_option("--seeds", seeds_flag, "Number of seed replicates override");
    };

    auto* simulate = app.add_subcommand("simulate", "Run one policy");
    add_common(simulate);
    simulate->add_option("--policy", policy_name, "proposed|mec|random|opg_only");

    auto* compare = app.add_subcommand("compare", "Run all four policies on the same workload");
    add_common(compare);

    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter axis across all policies");
    add_common(sweep);
    sweep->add_option("--axis", axis, "users|vmax|pmax|subtasks")->required();
    sweep->add_option("--values", values, "Comma-separated axis values")
        ->required()
        ->delimiter(',');

    auto* verify = app.add_subcommand("verify", "Run quick built-in self-checks");
    (void)verify;

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("verify")) return run_verify();

        AppConfig config = config_path.empty() ? AppConfig{} : coin::load_config_file(config_path);
        if (episodes_flag > 0) config.episodes = episodes_flag;
        if (slots_flag > 0) config.scenario.slot_count = slots_flag;
        if (seeds_flag > 0) config.seed_count = seeds_flag;
        config.scenario.validate();

        std::filesystem::path out_dir = "results";
        if (const char* env = std::getenv("COIN_SIM_OUT")) out_dir = env;
        if (!out_dir_flag.empty()) out_dir = out_dir_flag;

        std::vector<Tuple> tuples;
        auto add_policy_tuples = [&](Policy p, const std::string& axis_name, double value,
                                     const std::string& prefix) {
            for (int s = 0; s < config.seed_count; ++s)
                tuples.push_back(Tuple{p, axis_name, value, static_cast<std::uint64_t>(s),
                                       prefix + coin::to_string(p) + "_seed" + std::to_string(s)});
        };

        std::string command;
        if (app.got_subcommand("simulate")) {
            command = "simulate";
            add_policy_tuples(coin::policy_from_string(policy_name), "", 0.0, "");
        } else if (app.got_subcommand("compare")) {
            command = "compare";
            for (Policy p : {Policy::Proposed, Policy::Mec, Policy::Random, Policy::OpgOnly})
                add_policy_tuples(p, "", 0.0, "");
        } else {
            command = "sweep";
            for (double v : values) {
                std::string vs = std::to_string(v);
                vs.erase(vs.find_last_not_of('0') + 1);
                if (!vs.empty() && vs.back() == '.') vs.pop_back();
                for (Policy p : {Policy::Proposed, Policy::Mec, Policy::Random, Policy::OpgOnly})
                    add_policy_tuples(p, axis, v, axis + vs + "_");
            }
        }
        return run_tuples(config, tuples, master_seed, out_dir, command);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
