#pragma once

#include "coin/harness.hpp"
#include "coin/scenario.hpp"

#include <map>
#include <string>
#include <vector>

namespace coin {

// Per-user overrides parsed from `user.<k>.<field>` keys.
struct UserOverride {
    std::map<std::string, double> fields;
};

struct AppConfig {
    ScenarioConfig scenario;
    int episodes = 300;
    int seed_count = 5;
    std::map<int, UserOverride> user_overrides;

    void apply_user_overrides(Scenario& s) const;
};

// Flat `key = value` text format, '#' comments. Unknown keys raise an error
// naming the key and its nearest valid neighbour.
AppConfig parse_config_text(const std::string& text);
AppConfig load_config_file(const std::string& path);

std::vector<std::string> known_config_keys();

// Resolved-config echo used by the manifest and summary.
std::string config_to_json(const AppConfig& config);

// CSV writers; fixed column order, LF line endings, '.' decimal separator.
std::string slot_csv_header();
std::string slot_csv_row(const SlotRecord& rec, Policy policy);
std::string episode_csv_header();
std::string episode_csv_row(const ExperimentResult& result, int episode);

} // namespace coin
