#pragma once

#include <vector>

namespace coin {

// Cache-constrained optimal-action problem: pick b_v in {0,1,2} per unit to
// maximize sum weight(b_v) * values[v] with weight(0)=0, weight(1)=1,
// weight(2)=2, subject to the summed volumes of b=1 units fitting fin_cache
// and of b=2 units fitting ein_cache.
struct KnapsackInstance {
    std::vector<double> values;    // Theta, one per decision unit
    std::vector<double> volumes;   // software volume, bits
    double fin_cache = 0.0;        // bits
    double ein_cache = 0.0;
    // DP resolution; 0 selects the gcd of the rounded volumes (floored at 1).
    double step = 0.0;
};

// Exact 2D-capacity DP with backtracking. Ties resolve to the
// lexicographically smallest action vector. Throws std::domain_error on a
// negative step.
std::vector<int> solve_optimal_action(const KnapsackInstance& instance);

// 3^F enumeration oracle, same feasibility and tie rule. Throws
// std::length_error when F > 12.
std::vector<int> brute_force_action(const KnapsackInstance& instance);

double action_objective(const KnapsackInstance& instance, const std::vector<int>& action);
bool action_feasible(const KnapsackInstance& instance, const std::vector<int>& action);

} // namespace coin
