#pragma once

#include "coin/cost.hpp"
#include "coin/radio.hpp"
#include "coin/scenario.hpp"

#include <cstdint>
#include <vector>

namespace coin {

// Precomputed per-unit quantities for the splitting game. Each decision unit
// (user, subtask) carries a fixed offloading destination, chosen up front as
// the cheaper of FIN/EIN at zero interference; the game itself only picks
// local-vs-channel. The network-side agent reassigns destinations later, so
// the game's destination is a provisional preference. Keeping it fixed within
// the game is what makes the potential function below exact.
struct GameContext {
    const std::vector<UserSpec>* users = nullptr;
    const std::vector<std::vector<SubtaskSpec>>* tasks = nullptr;
    const ScenarioConfig* config = nullptr;

    std::vector<std::vector<Destination>> preferred_dest;   // per unit
    std::vector<std::vector<double>> omega;                  // rho_k * eta_k at preferred dest
    std::vector<std::vector<OffloadThreshold>> threshold;    // at preferred dest

    static GameContext build(const std::vector<UserSpec>& users,
                             const std::vector<std::vector<SubtaskSpec>>& tasks,
                             const ScenarioConfig& config);

    int user_count() const { return static_cast<int>(preferred_dest.size()); }
    int unit_count() const;
};

struct GameOutcome {
    StrategyProfile profile;
    int iterations = 0;
    std::vector<double> potential_trace;  // value after every accepted update
    bool converged = false;
};

struct IterationBound {
    double omega_max = 0.0;
    double omega_min = 0.0;
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    double granularity = 0.0;
    long long bound = 0;
};

// Pairwise-interference potential with a threshold term for local units.
// The threshold enters in received-power scale (the dimensionally consistent
// reading of the printed form); units that can never offload contribute a
// constant and are dropped from the sum.
double potential(const StrategyProfile& profile, const GameContext& ctx);

// Per-unit game cost (Eq 5/12/17, no queue term) of the user's current
// decisions.
double game_user_cost(int k, const StrategyProfile& profile, const GameContext& ctx);

// Cost-minimizing decision vector for user k with everyone else frozen.
// Options per unit: local, or each channel at the unit's preferred
// destination. Ties go to local first, then the lowest channel.
std::vector<UnitDecision> best_response(int k, const StrategyProfile& profile,
                                        const GameContext& ctx);

// Algorithm-1 dynamics: all-local start; each round every user computes a
// best response, one strict improver (uniform under the seed) is granted.
GameOutcome run_splitting_game(const GameContext& ctx, std::uint64_t seed, int max_iter);

// Enumeration oracle for the NE definition. Throws std::length_error with a
// size report when (M+1)^V exceeds `max_options_per_user`.
bool is_nash(const StrategyProfile& profile, const GameContext& ctx,
             long long max_options_per_user = 1 << 20);

// Throws std::domain_error when granularity <= 0.
IterationBound iteration_bound(const GameContext& ctx, double granularity);

} // namespace coin
