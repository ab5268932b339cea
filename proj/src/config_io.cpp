#include "coin/config_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace coin {

namespace {

using Setter = std::function<void(AppConfig&, const std::string&)>;

double parse_double(const std::string& v) {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) ++pos;
    if (pos != v.size()) throw std::invalid_argument("not a number: " + v);
    return x;
}

int parse_int(const std::string& v) {
    const double x = parse_double(v);
    const int i = static_cast<int>(x);
    if (i != x) throw std::invalid_argument("not an integer: " + v);
    return i;
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"scenario.users", [](AppConfig& c, const std::string& v) { c.scenario.user_count = parse_int(v); }},
        {"scenario.channels", [](AppConfig& c, const std::string& v) { c.scenario.channel_count = parse_int(v); }},
        {"scenario.bandwidth_hz", [](AppConfig& c, const std::string& v) { c.scenario.bandwidth_hz = parse_double(v); }},
        {"scenario.noise_variance", [](AppConfig& c, const std::string& v) { c.scenario.noise_variance = parse_double(v); }},
        {"scenario.energy_coefficient", [](AppConfig& c, const std::string& v) { c.scenario.energy_coefficient = parse_double(v); }},
        {"scenario.deadline_s", [](AppConfig& c, const std::string& v) { c.scenario.deadline_s = parse_double(v); }},
        {"scenario.fin_cpu_hz", [](AppConfig& c, const std::string& v) { c.scenario.fin_cpu = parse_double(v); }},
        {"scenario.ein_cpu_hz", [](AppConfig& c, const std::string& v) { c.scenario.ein_cpu = parse_double(v); }},
        {"scenario.fin_cache", [](AppConfig& c, const std::string& v) { c.scenario.fin_cache = parse_double(v); }},
        {"scenario.ein_cache", [](AppConfig& c, const std::string& v) { c.scenario.ein_cache = parse_double(v); }},
        {"scenario.subtasks", [](AppConfig& c, const std::string& v) { c.scenario.subtask_count = parse_int(v); }},
        {"scenario.slots", [](AppConfig& c, const std::string& v) { c.scenario.slot_count = parse_int(v); }},
        {"scenario.input_max", [](AppConfig& c, const std::string& v) { c.scenario.input_max = parse_double(v); }},
        {"scenario.volume_max", [](AppConfig& c, const std::string& v) { c.scenario.volume_max = parse_double(v); }},
        {"scenario.load_max_gigacycles", [](AppConfig& c, const std::string& v) { c.scenario.load_max_gigacycles = parse_double(v); }},
        {"scenario.data_unit",
         [](AppConfig& c, const std::string& v) {
             if (v == "megabits") c.scenario.data_unit = DataUnit::Megabits;
             else if (v == "gigabytes") c.scenario.data_unit = DataUnit::Gigabytes;
             else throw std::invalid_argument("data_unit must be megabits or gigabytes");
         }},
        {"scenario.queue_model",
         [](AppConfig& c, const std::string& v) {
             if (v == "service_inclusive") c.scenario.queue_model = QueueModel::ServiceInclusive;
             else if (v == "waiting_only") c.scenario.queue_model = QueueModel::WaitingOnly;
             else throw std::invalid_argument("queue_model must be service_inclusive or waiting_only");
         }},
        {"scenario.transmit_power_w", [](AppConfig& c, const std::string& v) { c.scenario.transmit_power_w = parse_double(v); }},
        {"scenario.delay_weight", [](AppConfig& c, const std::string& v) { c.scenario.delay_weight = parse_double(v); }},
        {"scenario.energy_weight", [](AppConfig& c, const std::string& v) { c.scenario.energy_weight = parse_double(v); }},
        {"scenario.local_cpu_hz", [](AppConfig& c, const std::string& v) { c.scenario.local_cpu = parse_double(v); }},
        {"scenario.path_loss_exponent", [](AppConfig& c, const std::string& v) { c.scenario.path_loss_exponent = parse_double(v); }},
        {"scenario.cell_side_m", [](AppConfig& c, const std::string& v) { c.scenario.cell_side_m = parse_double(v); }},
        {"agent.discount", [](AppConfig& c, const std::string& v) { c.scenario.discount = parse_double(v); }},
        {"agent.learning_rate", [](AppConfig& c, const std::string& v) { c.scenario.learning_rate = parse_double(v); }},
        {"agent.batch_size", [](AppConfig& c, const std::string& v) { c.scenario.batch_size = parse_int(v); }},
        {"agent.replay_capacity", [](AppConfig& c, const std::string& v) { c.scenario.replay_capacity = parse_int(v); }},
        {"agent.target_sync_period", [](AppConfig& c, const std::string& v) { c.scenario.target_sync_period = parse_int(v); }},
        {"agent.hidden_width", [](AppConfig& c, const std::string& v) { c.scenario.hidden_width = parse_int(v); }},
        {"agent.hidden_layers", [](AppConfig& c, const std::string& v) { c.scenario.hidden_layers = parse_int(v); }},
        {"agent.input_dropout", [](AppConfig& c, const std::string& v) { c.scenario.input_dropout = parse_double(v); }},
        {"agent.knapsack_bins", [](AppConfig& c, const std::string& v) { c.scenario.knapsack_bins = parse_int(v); }},
        {"agent.reward_scale", [](AppConfig& c, const std::string& v) { c.scenario.reward_scale = parse_double(v); }},
        {"agent.output_bias_init", [](AppConfig& c, const std::string& v) { c.scenario.output_bias_init = parse_double(v); }},
        {"agent.epsilon_initial", [](AppConfig& c, const std::string& v) { c.scenario.epsilon_schedule.initial = parse_double(v); }},
        {"agent.epsilon_final", [](AppConfig& c, const std::string& v) { c.scenario.epsilon_schedule.final_value = parse_double(v); }},
        {"agent.epsilon_decay_fraction", [](AppConfig& c, const std::string& v) { c.scenario.epsilon_schedule.decay_fraction = parse_double(v); }},
        {"sim.episodes", [](AppConfig& c, const std::string& v) { c.episodes = parse_int(v); }},
        {"sim.seeds", [](AppConfig& c, const std::string& v) { c.seed_count = parse_int(v); }},
    };
    return table;
}

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        prev.swap(cur);
    }
    return prev[b.size()];
}

std::string nearest_key(const std::string& key) {
    std::string best;
    int best_d = 1 << 30;
    for (const auto& [k, _] : setters()) {
        const int d = edit_distance(key, k);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_user_override(AppConfig& config, const std::string& key, const std::string& value) {
    // user.<k>.<field>
    if (key.rfind("user.", 0) != 0) return false;
    const auto second = key.find('.', 5);
    if (second == std::string::npos) return false;
    const int id = parse_int(key.substr(5, second - 5));
    const std::string field = key.substr(second + 1);
    if (field != "delay_weight" && field != "energy_weight" && field != "transmit_power" &&
        field != "local_cpu")
        throw std::invalid_argument("unknown per-user field: " + field);
    config.user_overrides[id].fields[field] = parse_double(value);
    return true;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

void AppConfig::apply_user_overrides(Scenario& s) const {
    for (const auto& [id, ov] : user_overrides) {
        if (id < 0 || id >= static_cast<int>(s.users.size()))
            throw std::invalid_argument("user override for nonexistent user " +
                                        std::to_string(id));
        auto& u = s.users[id];
        for (const auto& [field, value] : ov.fields) {
            if (field == "delay_weight") u.delay_weight = value;
            else if (field == "energy_weight") u.energy_weight = value;
            else if (field == "transmit_power") u.transmit_power = value;
            else if (field == "local_cpu") u.local_cpu = value;
        }
    }
}

std::vector<std::string> known_config_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, _] : setters()) keys.push_back(k);
    return keys;
}

AppConfig parse_config_text(const std::string& text) {
    AppConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (parse_user_override(config, key, value)) continue;
        const auto it = setters().find(key);
        if (it == setters().end())
            throw std::invalid_argument("unknown config key '" + key + "' (did you mean '" +
                                        nearest_key(key) + "'?)");
        try {
            it->second(config, value);
        } catch (const std::exception& e) {
            throw std::invalid_argument("key '" + key + "': " + e.what());
        }
    }
    return config;
}

AppConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_to_json(const AppConfig& c) {
    nlohmann::ordered_json j;
    const auto& s = c.scenario;
    j["scenario"] = {{"users", s.user_count},
                     {"channels", s.channel_count},
                     {"bandwidth_hz", s.bandwidth_hz},
                     {"noise_variance", s.noise_variance},
                     {"energy_coefficient", s.energy_coefficient},
                     {"deadline_s", s.deadline_s},
                     {"fin_cpu_hz", s.fin_cpu},
                     {"ein_cpu_hz", s.ein_cpu},
                     {"fin_cache", s.fin_cache},
                     {"ein_cache", s.ein_cache},
                     {"subtasks", s.subtask_count},
                     {"slots", s.slot_count},
                     {"input_max", s.input_max},
                     {"volume_max", s.volume_max},
                     {"load_max_gigacycles", s.load_max_gigacycles},
                     {"data_unit", to_string(s.data_unit)},
                     {"queue_model", to_string(s.queue_model)},
                     {"transmit_power_w", s.transmit_power_w},
                     {"delay_weight", s.delay_weight},
                     {"energy_weight", s.energy_weight},
                     {"local_cpu_hz", s.local_cpu},
                     {"path_loss_exponent", s.path_loss_exponent},
                     {"cell_side_m", s.cell_side_m}};
    j["agent"] = {{"discount", s.discount},
                  {"learning_rate", s.learning_rate},
                  {"batch_size", s.batch_size},
                  {"replay_capacity", s.replay_capacity},
                  {"target_sync_period", s.target_sync_period},
                  {"hidden_width", s.hidden_width},
                  {"hidden_layers", s.hidden_layers},
                  {"input_dropout", s.input_dropout},
                  {"knapsack_bins", s.knapsack_bins},
                  {"reward_scale", s.reward_scale},
                  {"output_bias_init", s.output_bias_init},
                  {"epsilon_initial", s.epsilon_schedule.initial},
                  {"epsilon_final", s.epsilon_schedule.final_value},
                  {"epsilon_decay_fraction", s.epsilon_schedule.decay_fraction}};
    j["sim"] = {{"episodes", c.episodes}, {"seeds", c.seed_count}};
    return j.dump(2);
}

std::string slot_csv_header() {
    return "episode,slot,policy,system_cost,reward,n_local,n_fin,n_ein,game_iters,epsilon,"
           "deadline_violations";
}

std::string slot_csv_row(const SlotRecord& r, Policy policy) {
    std::string row;
    row += std::to_string(r.episode) + ',' + std::to_string(r.slot) + ',' + to_string(policy);
    row += ',' + fmt(r.system_cost) + ',' + fmt(r.reward);
    row += ',' + std::to_string(r.n_local) + ',' + std::to_string(r.n_fin) + ',' +
           std::to_string(r.n_ein);
    row += ',' + std::to_string(r.game_iterations) + ',' + fmt(r.epsilon) + ',' +
           std::to_string(r.deadline_violations);
    return row;
}

std::string episode_csv_header() {
    return "episode,policy,mean_cost,median_cost,mean_reward,median_reward";
}

std::string episode_csv_row(const ExperimentResult& result, int episode) {
    std::string row = std::to_string(episode) + ',' + to_string(result.policy);
    row += ',' + fmt(result.episode_mean_cost[episode]);
    row += ',' + fmt(result.episode_median_cost[episode]);
    row += ',' + fmt(result.episode_mean_reward[episode]);
    row += ',' + fmt(result.episode_median_reward[episode]);
    return row;
}

} // namespace coin
