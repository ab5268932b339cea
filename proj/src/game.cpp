#include "coin/game.hpp"

#include "coin/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coin {

namespace {

// Strict-improvement margin: guards the accept decision against
// floating-point noise so every accepted move maps to a real potential
// decrease.
constexpr double kImprovementMargin = 1e-12;

bool improves(double candidate, double incumbent) {
    return candidate < incumbent - kImprovementMargin * std::max(1.0, std::abs(incumbent));
}

} // namespace

int GameContext::unit_count() const {
    int n = 0;
    for (const auto& row : preferred_dest) n += static_cast<int>(row.size());
    return n;
}

GameContext GameContext::build(const std::vector<UserSpec>& users,
                               const std::vector<std::vector<SubtaskSpec>>& tasks,
                               const ScenarioConfig& config) {
    GameContext ctx;
    ctx.users = &users;
    ctx.tasks = &tasks;
    ctx.config = &config;
    ctx.preferred_dest.resize(users.size());
    ctx.omega.resize(users.size());
    ctx.threshold.resize(users.size());

    for (std::size_t k = 0; k < users.size(); ++k) {
        for (const auto& st : tasks[k]) {
            // destination preference at zero interference: cheaper full
            // offload cost wins, FIN on ties
            const double rate_fin =
                rate_from_interference(users[k], Destination::Fin, 0.0, config);
            const double rate_ein =
                rate_from_interference(users[k], Destination::Ein, 0.0, config);
            const double cost_fin =
                offload_cost(users[k], st, Destination::Fin, rate_fin, nullptr, config)
                    .weighted_cost;
            const double cost_ein =
                offload_cost(users[k], st, Destination::Ein, rate_ein, nullptr, config)
                    .weighted_cost;
            const Destination dest =
                cost_ein < cost_fin ? Destination::Ein : Destination::Fin;
            ctx.preferred_dest[k].push_back(dest);
            ctx.omega[k].push_back(users[k].transmit_power * channel_gain(users[k], dest));
            ctx.threshold[k].push_back(offload_threshold(users[k], st, dest, config));
        }
    }
    return ctx;
}

double potential(const StrategyProfile& profile, const GameContext& ctx) {
    const auto& users = *ctx.users;
    double pairwise = 0.0;
    double local_term = 0.0;
    for (std::size_t k = 0; k < profile.decisions.size(); ++k) {
        for (std::size_t v = 0; v < profile.decisions[k].size(); ++v) {
            const auto& d = profile.decisions[k][v];
            if (!d.offloaded()) {
                const auto& t = ctx.threshold[k][v];
                if (!t.never) local_term += ctx.omega[k][v] * t.power_threshold;
                continue;
            }
            const double own = users[k].transmit_power * channel_gain(users[k], d.dest);
            pairwise += own * interference_sum(static_cast<int>(k), d.channel, d.dest,
                                               profile, users);
        }
    }
    return 0.5 * pairwise + local_term;
}

double game_user_cost(int k, const StrategyProfile& profile, const GameContext& ctx) {
    const auto& users = *ctx.users;
    const auto& tasks = *ctx.tasks;
    const auto& config = *ctx.config;
    double total = 0.0;
    for (std::size_t v = 0; v < profile.decisions[k].size(); ++v) {
        const auto& d = profile.decisions[k][v];
        const auto& st = tasks[k][v];
        if (!d.offloaded()) {
            total += local_cost(users[k], st, config).weighted_cost;
        } else {
            const double rate = uplink_rate(k, d, profile, users, config);
            total += offload_cost(users[k], st, d.dest, rate, nullptr, config).weighted_cost;
        }
    }
    return total;
}

std::vector<UnitDecision> best_response(int k, const StrategyProfile& profile,
                                        const GameContext& ctx) {
    const auto& users = *ctx.users;
    const auto& tasks = *ctx.tasks;
    const auto& config = *ctx.config;

    // The user's own units do not interfere with each other, so each unit's
    // argmin is independent of its siblings.
    std::vector<UnitDecision> response(profile.decisions[k].size());
    for (std::size_t v = 0; v < response.size(); ++v) {
        const auto& st = tasks[k][v];
        const Destination dest = ctx.preferred_dest[k][v];

        UnitDecision best{};  // local
        double best_cost = local_cost(users[k], st, config).weighted_cost;
        for (int m = 1; m <= config.channel_count; ++m) {
            const double isum = interference_sum(k, m, dest, profile, users);
            const double rate = rate_from_interference(users[k], dest, isum, config);
            const double cost =
                offload_cost(users[k], st, dest, rate, nullptr, config).weighted_cost;
            if (cost < best_cost) {
                best_cost = cost;
                best = UnitDecision{m, dest};
            }
        }
        response[v] = best;
    }
    return response;
}

GameOutcome run_splitting_game(const GameContext& ctx, std::uint64_t seed, int max_iter) {
    const auto& config = *ctx.config;
    const int users = ctx.user_count();
    const int subtasks = users > 0 ? static_cast<int>(ctx.preferred_dest[0].size()) : 0;

    GameOutcome out;
    out.profile = StrategyProfile::all_local(users, subtasks);
    out.potential_trace.push_back(potential(out.profile, ctx));

    auto rng = make_rng(derive_seed(seed, {tag("splitting-game")}));

    for (int iter = 0; iter < max_iter; ++iter) {
        // every user computes its best response against the frozen profile
        std::vector<int> requesters;
        std::vector<std::vector<UnitDecision>> proposals(users);
        for (int k = 0; k < users; ++k) {
            auto proposal = best_response(k, out.profile, ctx);
            if (proposal == out.profile.decisions[k]) continue;
            const double current = game_user_cost(k, out.profile, ctx);
            StrategyProfile trial = out.profile;
            trial.decisions[k] = proposal;
            if (improves(game_user_cost(k, trial, ctx), current)) {
                requesters.push_back(k);
                proposals[k] = std::move(proposal);
            }
        }
        if (requesters.empty()) {  // END message: no update requests
            out.converged = true;
            return out;
        }
        std::uniform_int_distribution<std::size_t> pick(0, requesters.size() - 1);
        const int granted = requesters[pick(rng)];
        out.profile.decisions[granted] = proposals[granted];
        out.potential_trace.push_back(potential(out.profile, ctx));
        ++out.iterations;
    }
    out.converged = false;  // max_iter exceeded; trace is partial
    return out;
}

bool is_nash(const StrategyProfile& profile, const GameContext& ctx,
             long long max_options_per_user) {
    const auto& config = *ctx.config;
    const int users = ctx.user_count();

    for (int k = 0; k < users; ++k) {
        const int subtasks = static_cast<int>(profile.decisions[k].size());
        long long options = 1;
        for (int v = 0; v < subtasks; ++v) {
            options *= config.channel_count + 1;
            if (options > max_options_per_user)
                throw std::length_error(
                    "is_nash: (M+1)^V = " + std::to_string(config.channel_count + 1) + "^" +
                    std::to_string(subtasks) + " exceeds the enumeration limit of " +
                    std::to_string(max_options_per_user));
        }

        const double current = game_user_cost(k, profile, ctx);
        StrategyProfile trial = profile;
        for (long long code = 0; code < options; ++code) {
            long long rest = code;
            for (int v = 0; v < subtasks; ++v) {
                const int choice = static_cast<int>(rest % (config.channel_count + 1));
                rest /= config.channel_count + 1;
                trial.decisions[k][v] =
                    choice == 0 ? UnitDecision{}
                                : UnitDecision{choice, ctx.preferred_dest[k][v]};
            }
            if (improves(game_user_cost(k, trial, ctx), current)) return false;
        }
        trial.decisions[k] = profile.decisions[k];
    }
    return true;
}

IterationBound iteration_bound(const GameContext& ctx, double granularity) {
    if (granularity <= 0.0) throw std::domain_error("iteration_bound: granularity must be positive");

    IterationBound b;
    b.granularity = granularity;
    bool first_omega = true, first_lambda = true;
    int units = 0;
    for (std::size_t k = 0; k < ctx.omega.size(); ++k) {
        for (std::size_t v = 0; v < ctx.omega[k].size(); ++v) {
            ++units;
            const double w = ctx.omega[k][v];
            if (first_omega || w > b.omega_max) b.omega_max = w;
            if (first_omega || w < b.omega_min) b.omega_min = w;
            first_omega = false;
            const auto& t = ctx.threshold[k][v];
            if (t.never) continue;  // permanently local, never moves
            if (first_lambda || t.power_threshold > b.lambda_max)
                b.lambda_max = t.power_threshold;
            if (first_lambda || t.power_threshold < b.lambda_min)
                b.lambda_min = t.power_threshold;
            first_lambda = false;
        }
    }
    // the player count in the bound is the number of movable decision units
    // (the game is played per unit)
    const double n = static_cast<double>(units);
    const double numerator = 0.5 * n * n * b.omega_max * b.omega_max +
                             n * (b.omega_max * b.lambda_max - b.omega_min * b.lambda_min);
    b.bound = std::max<long long>(1, static_cast<long long>(std::ceil(numerator / granularity)));
    return b;
}

} // namespace coin
