#pragma once

#include "coin/scenario.hpp"

#include <vector>

namespace coin {

enum class Destination : int { Local = 0, Fin = 1, Ein = 2 };

// One (user, subtask) decision: channel 0 means local execution, channel
// m >= 1 means offloading via channel m to `dest`.
struct UnitDecision {
    int channel = 0;
    Destination dest = Destination::Local;

    bool offloaded() const { return channel > 0; }
    bool operator==(const UnitDecision&) const = default;
};

struct StrategyProfile {
    // decisions[k][v] for user k, subtask v
    std::vector<std::vector<UnitDecision>> decisions;

    static StrategyProfile all_local(int users, int subtasks);
    // Throws std::invalid_argument if any decision is out of [0, M] or a
    // destination bit is inconsistent with its channel.
    void validate(int channel_count) const;
};

double channel_gain(const UserSpec& user, Destination dest);

// Sum of rho_n * eta_n over other users' units sharing both channel and
// destination with (user k, channel, dest). Units of the same user never
// interfere with each other.
double interference_sum(int k, int channel, Destination dest,
                        const StrategyProfile& profile,
                        const std::vector<UserSpec>& users);

// Shannon rate (B/M) * log2(1 + SINR) in bits/s. The decision must be an
// offloading one.
double uplink_rate(int k, const UnitDecision& decision, const StrategyProfile& profile,
                   const std::vector<UserSpec>& users, const ScenarioConfig& config);

double rate_from_interference(const UserSpec& user, Destination dest, double interference,
                              const ScenarioConfig& config);

// Received-interference ratio of Eq-21 shape: sum(rho*eta)/(rho_k*eta_k) - sigma^2.
double interference(int k, int channel, Destination dest, const StrategyProfile& profile,
                    const std::vector<UserSpec>& users, const ScenarioConfig& config);

// Break-even point of the local-vs-offload cost inequality, derived
// algebraically from the cost chain (not the printed closed form).
//
// Offloading to `dest` is cost-beneficial exactly when the received
// interference power sum is <= power_threshold, equivalently when the
// normalized ratio above is <= ratio_threshold. `never` marks subtasks for
// which local execution wins at any rate (both thresholds are -inf).
struct OffloadThreshold {
    double ratio_threshold = 0.0;   // same scale as interference()
    double power_threshold = 0.0;   // same scale as interference_sum()
    bool never = false;
};

OffloadThreshold offload_threshold(const UserSpec& user, const SubtaskSpec& subtask,
                                   Destination dest, const ScenarioConfig& config);

} // namespace coin
